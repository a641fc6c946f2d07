#include <doctest.h>

#include "oracles.hpp"
#include "orbvol/lie.hpp"
#include "orbvol/textio.hpp"

#include <random>
#include <set>

using namespace orbvol;

namespace {

const ExtField& F(std::uint32_t q) { return ExtField::get(q, 1); }
LaurentNumber L(std::string_view s, std::uint32_t q = 5) { return parse_laurent(s, q); }
LPoly P(std::string_view s, std::uint32_t q = 5) { return parse_lpoly(s, q); }
FqPoly R(std::string_view s, std::uint32_t q = 5) { return parse_fqpoly(s, q); }

Matrix<LaurentNumber> mat(std::uint32_t q, std::initializer_list<std::initializer_list<const char*>> rows) {
    const std::size_t n = rows.size();
    Matrix<LaurentNumber> m(n, n, LaurentNumber::zero(F(q)));
    std::size_t i = 0;
    for (const auto& row : rows) {
        std::size_t j = 0;
        for (const char* s : row) m(i, j++) = parse_laurent(s, q);
        ++i;
    }
    return m;
}

LieElement sl2(std::uint32_t q, const char* a, const char* b, const char* c) {
    return LieElement(AlgebraType::sp(2), [&] {
        auto m = mat(q, {{a, b}, {c, "0"}});
        m(1, 1) = -m(0, 0);
        return m;
    }());
}

} // namespace

TEST_CASE("algebra types, dimensions and bases") {
    CHECK(AlgebraType::parse("sp:6") == AlgebraType::sp(6));
    CHECK(AlgebraType::parse("sl:2") == AlgebraType::sp(2));
    CHECK(AlgebraType::parse("so:5").family == Family::SOodd);
    CHECK(AlgebraType::parse("so:4").family == Family::SOeven);
    CHECK_THROWS_AS(AlgebraType::parse("sp:3"), PreconditionError);
    CHECK_THROWS_AS(AlgebraType::parse("gl:2"), PreconditionError);
    CHECK(AlgebraType::sp(2).dim() == 3);
    CHECK(AlgebraType::sp(4).dim() == 10);
    CHECK(AlgebraType::so(3).dim() == 3);
    CHECK(AlgebraType::so(4).dim() == 6);
    CHECK(AlgebraType::so(5).delta() == 8);
    for (const char* s : {"sp:2", "sp:4", "so:3", "so:4", "so:5", "so:6"}) {
        const auto t = AlgebraType::parse(s);
        const auto basis = algebra_basis(t);
        CHECK(basis.size() == static_cast<std::size_t>(t.dim()));
        for (const auto& b : basis) CHECK(membership(b, form_matrix(t)));
    }
}

TEST_CASE("form determinants") {
    CHECK(form_determinant(AlgebraType::sp(2)) == 1);
    CHECK(form_determinant(AlgebraType::sp(4)) == 1);
    CHECK(form_determinant(AlgebraType::so(2)) == -1);
    CHECK(form_determinant(AlgebraType::so(3)) == -1);
    // All-ones antidiagonal: det = (-1)^c.
    CHECK(form_determinant(AlgebraType::so(4)) == 1);
    CHECK(form_determinant(AlgebraType::so(6)) == -1);
    const auto j = form_matrix(AlgebraType::sp(2));
    CHECK(j(0, 1) == 1);
    CHECK(j(1, 0) == -1);
}

TEST_CASE("membership") {
    const auto J = form_matrix(AlgebraType::sp(2));
    CHECK(membership(mat(5, {{"0", "0"}, {"0", "0"}}), J));
    CHECK(membership(mat(5, {{"1+t", "2"}, {"t", "-1-t"}}), J));
    CHECK_FALSE(membership(mat(5, {{"1", "0"}, {"0", "1"}}), J));
    CHECK_THROWS_AS(LieElement(AlgebraType::sp(2), mat(5, {{"1", "0"}, {"0", "1"}})), PreconditionError);
    CHECK_THROWS_AS(membership(mat(5, {{"1", "0"}, {"0", "1"}}), form_matrix(AlgebraType::sp(4))), PreconditionError);
    // Truncated entries: agreement up to the stored precision is enough.
    CHECK(membership(mat(5, {{"1 + O(t^2)", "0"}, {"0", "-1 + t^3"}}), J));
}

TEST_CASE("pfaffian") {
    const std::uint32_t q = 7;
    Matrix<Fq> a(2, 2, Fq(q, 0));
    a(0, 1) = Fq(q, 3);
    a(1, 0) = Fq(q, -3);
    CHECK(pfaffian(a) == Fq(q, 3));
    Matrix<Fq> b(4, 4, Fq(q, 0));
    b(0, 1) = Fq(q, 2), b(1, 0) = Fq(q, -2);
    b(2, 3) = Fq(q, 5), b(3, 2) = Fq(q, -5);
    CHECK(pfaffian(b) == Fq(q, 10));
    std::mt19937 rng(7);
    for (int trial = 0; trial < 50; ++trial) {
        Matrix<Fq> m(4, 4, Fq(q, 0));
        for (std::size_t i = 0; i < 4; ++i)
            for (std::size_t j = i + 1; j < 4; ++j) {
                m(i, j) = Fq(q, rng() % q);
                m(j, i) = -m(i, j);
            }
        const Fq pf = pfaffian(m);
        CHECK(pf * pf == oracle::det_cofactor(m));
    }
    Matrix<Fq> odd(3, 3, Fq(q, 0));
    CHECK_THROWS_AS(pfaffian(odd), PreconditionError);
    Matrix<Fq> sym(2, 2, Fq(q, 1));
    CHECK_THROWS_AS(pfaffian(sym), PreconditionError);
}

TEST_CASE("nonzero part of the characteristic polynomial") {
    const auto so3 = split_torus_element(AlgebraType::so(3), {L("2")});
    auto np = nonzero_part_charpoly(so3);
    CHECK(np.m == 1);
    CHECK(np.P == P("λ^2 - 4"));

    np = nonzero_part_charpoly(sl2(5, "0", "2", "2t"));
    CHECK(np.m == 0);
    CHECK(np.P == P("λ^2 - 4t"));

    np = nonzero_part_charpoly(sl2(5, "0", "0", "0"));
    CHECK(np.m == 2);
    CHECK(np.P == P("1"));

    // A root that vanishes only to the stored precision is undecidable.
    CHECK_THROWS_AS(nonzero_part_charpoly(sl2(5, "O(t^2)", "1", "0")), PrecisionExhausted);
}

TEST_CASE("restricted elements of sl(2)") {
    // depth 0: [[0, a], [eps a, 0]] with eps a nonsquare
    auto c = is_restricted(sl2(5, "0", "1", "2"), 0);
    REQUIRE(c.accepted());
    CHECK(c.witness->R == R("λ^2 - 2"));
    CHECK(c.witness->m == 0);

    c = is_restricted(sl2(5, "0", "3", "6"), 0); // a = 3, eps = 2: R = λ^2 - 18
    REQUIRE(c.accepted());
    CHECK(c.witness->R == R("λ^2 - 3"));

    // depth 1/2: [[0, b], [t b, 0]]
    c = is_restricted(sl2(5, "0", "1", "t"), Rational(1, 2));
    REQUIRE(c.accepted());
    CHECK(c.witness->consts.n == 2);
    CHECK(c.witness->R == R("λ - 1"));
    CHECK_FALSE(is_restricted(sl2(5, "0", "1", "t"), 0).accepted());

    // nilpotent
    c = is_restricted(sl2(5, "0", "1", "0"), 0);
    CHECK_FALSE(c.accepted());
    CHECK_FALSE(c.reason.empty());
    CHECK_FALSE(is_restricted(sl2(5, "0", "1", "0"), Rational(1, 2)).accepted());

    // split with a repeated reduction: eigenvalues +-(1 + t) reduce to +-1, fine;
    // eigenvalues +-t at r = 0 give R = λ^2, R(0) = 0.
    CHECK(is_restricted(split_torus_element(AlgebraType::sp(2), {L("1+t")}), 0).accepted());
    CHECK_FALSE(is_restricted(split_torus_element(AlgebraType::sp(2), {L("t")}), 0).accepted());

    // too little precision to see the constant term at r = 1/2
    CHECK_THROWS_AS(is_restricted(sl2(5, "0", "1", "O(t)"), Rational(1, 2)), PrecisionExhausted);
}

TEST_CASE("restricted elements of so(4) carry the pfaffian") {
    const auto x = split_torus_element(AlgebraType::so(4), {L("1"), L("2")});
    const auto c = is_restricted(x, 0);
    REQUIRE(c.accepted());
    REQUIRE(c.witness->pf_ac.has_value());
    // JX reverses the rows of diag(1, 2, -2, -1).
    Matrix<Fq> jx(4, 4, Fq(5, 0));
    for (std::size_t i = 0; i < 4; ++i)
        for (std::size_t j = 0; j < 4; ++j)
            if (!x(3 - i, j).is_zero()) jx(i, j) = x(3 - i, j).ac().to_fq();
    CHECK(*c.witness->pf_ac == pfaffian(jx));
    CHECK(*c.witness->pf_ac == Fq(5, 2)); // only the matching (0,3)(1,2) survives: (-1)(-2)
    CHECK((*c.witness->pf_ac) * (*c.witness->pf_ac) == oracle::det_cofactor(jx));
}

TEST_CASE("construct_element postconditions") {
    struct Case {
        const char* type;
        const char* poly;
        std::uint32_t q;
    };
    for (const Case& cs : {Case{"sp:2", "λ^2 - 2", 5}, Case{"sp:2", "λ^2 - t", 5}, Case{"sp:4", "λ^4 - t^2", 5},
                           Case{"sp:4", "λ^4 - 3λ^2 + 1", 7}, Case{"so:3", "λ^2 - 2", 5}, Case{"so:3", "λ^2 - t", 5},
                           Case{"so:4", "λ^4 - 5λ^2 + 4", 7}, Case{"so:5", "λ^4 - t^2", 5}, Case{"sp:6", "λ^6 - 2t^2", 5}}) {
        const std::string label = std::string(cs.type) + " " + cs.poly;
        CAPTURE(label);
        const auto type = AlgebraType::parse(cs.type);
        const LPoly p = P(cs.poly, cs.q);
        const auto con = construct_element(type, p, 12);
        REQUIRE(con.standard_form);
        REQUIRE(con.element.has_value());
        const auto np = nonzero_part_charpoly(*con.element);
        CHECK(np.m == type.base_zero_multiplicity());
        CHECK(oracle::congruent(np.P, p));
        const auto full = oracle::charpoly_leibniz(con.element->matrix(), int_like(p.prototype(), 1));
        CHECK(oracle::congruent(full, np.m ? p * LPoly::x(p.prototype()) : p));
    }
    // so(2) holds diag(a, -a) only, so P(0) must be minus a square.
    const auto ns = construct_element(AlgebraType::so(2), P("λ^2 - 2"), 8);
    CHECK_FALSE(ns.standard_form);
    CHECK_FALSE(ns.element.has_value());
    CHECK(ns.form.rows() == 2);
    CHECK(construct_element(AlgebraType::so(2), P("λ^2 - 4"), 8).standard_form);
    CHECK_THROWS_AS(construct_element(AlgebraType::sp(2), P("λ^2 + λ - 1"), 8), PreconditionError);
    CHECK_THROWS_AS(construct_element(AlgebraType::sp(4), P("λ^2 - 1"), 8), PreconditionError);
    CHECK_THROWS_AS(construct_element(AlgebraType::sp(2), P("λ^2"), 8), PreconditionError);
}

TEST_CASE("construct_element for so(2c) hits both pfaffian classes") {
    const auto type = AlgebraType::so(4);
    const LPoly p = P("λ^4 - 5λ^2 + 4", 7);
    const auto base = construct_element(type, p, 10);
    REQUIRE(base.element.has_value());
    const auto c0 = is_restricted(*base.element, 0);
    REQUIRE(c0.accepted());
    const Fq pf = *c0.witness->pf_ac;
    CHECK(pf * pf == c0.witness->R.coeff(0) * Fq(7, form_determinant(type)));
    const auto flipped = construct_element(type, p, 10, -pf);
    const auto c1 = is_restricted(*flipped.element, 0);
    REQUIRE(c1.accepted());
    CHECK(*c1.witness->pf_ac == -pf);
    CHECK(c1.witness->R == c0.witness->R);
    CHECK_THROWS_AS(construct_element(type, p, 10, pf + Fq(7, 1)), PreconditionError);
}

TEST_CASE("split torus shortcut") {
    const auto x = split_torus_element(AlgebraType::sp(2), {L("3")});
    CHECK(x(0, 0) == L("3"));
    CHECK(x(1, 1) == L("-3"));
    CHECK(x(0, 1).is_zero());
    CHECK(nonzero_part_charpoly(x).P == P("λ^2 - 9"));
}

TEST_CASE("finite group orders") {
    CHECK(enumerate_group(AlgebraType::sp(2), 3).size() == 24);
    CHECK(enumerate_group(AlgebraType::sp(2), 5).size() == 120);
    CHECK(enumerate_group(AlgebraType::so(3), 3).size() == 24);
    CHECK(enumerate_group(AlgebraType::so(2), 5).size() == 4);
    CHECK(enumerate_group(AlgebraType::so(4), 3).size() == 576);
    for (const auto& g : enumerate_group(AlgebraType::so(3), 3)) CHECK(oracle::det_cofactor(g) == Fq(3, 1));
}

TEST_CASE("truncated group and conjugation invariance") {
    const auto type = AlgebraType::sp(2);
    const auto G = enumerate_group_truncated(type, 3, 2);
    CHECK(G.size() == 648);
    const auto J = form_matrix(type);
    std::set<std::string> seen;
    for (const auto& g : G) {
        // tg J g = J mod t^2
        const auto lhs = g.transpose() * lift_int_matrix(J, F(3)) * g;
        for (std::size_t i = 0; i < 2; ++i)
            for (std::size_t j = 0; j < 2; ++j) CHECK(lhs(i, j).congruent(LaurentNumber::from_int(F(3), J(i, j))));
        seen.insert(g(0, 0).str() + g(0, 1).str() + g(1, 0).str() + g(1, 1).str());
    }
    CHECK(seen.size() == 648);

    const auto x = sl2(3, "0", "1", "2");
    const auto base = is_restricted(x, 0);
    REQUIRE(base.accepted());
    for (std::size_t k = 0; k < G.size(); k += 7) {
        const LieElement y(type, adjoint(G[k], x.matrix(), J));
        const auto c = is_restricted(y, 0);
        REQUIRE(c.accepted());
        CHECK(c.witness->R == base.witness->R);
    }
    CHECK_THROWS_AS(enumerate_group_truncated(type, 5, 4, 1000), BudgetExceeded);
}
