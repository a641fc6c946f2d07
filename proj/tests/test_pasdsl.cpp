#include <doctest.h>

#include "orbvol/pasdsl.hpp"
#include "orbvol/textio.hpp"

#include <random>

using namespace orbvol;

namespace {

const AlgebraType SL2 = AlgebraType::sp(2);

LieElement sl2(std::uint32_t q, const char* a, const char* b, const char* c) {
    Matrix<LaurentNumber> m(2, 2, parse_laurent("0", q));
    m(0, 0) = parse_laurent(a, q);
    m(0, 1) = parse_laurent(b, q);
    m(1, 0) = parse_laurent(c, q);
    m(1, 1) = -m(0, 0);
    return LieElement(SL2, m);
}

Truth ev(const char* src, const LieElement& x) { return eval(parse_formula(src), x); }

FormulaError::Kind error_kind(const char* src) {
    try {
        parse_formula(src);
    } catch (const FormulaError& e) {
        return e.kind();
    }
    FAIL("no error for " << src);
    return FormulaError::Kind::Syntax;
}

} // namespace

TEST_CASE("Kleene connectives") {
    const Truth T = Truth::True, F = Truth::False, U = Truth::Unknown;
    CHECK((F && U) == F);
    CHECK((T && U) == U);
    CHECK((T || U) == T);
    CHECK((F || U) == U);
    CHECK(!U == U);
    CHECK(!T == F);
}

TEST_CASE("parsing") {
    auto f = parse_formula("ord(alpha[2](X)) >= 1 && ac(alpha[2](X)) == 2");
    CHECK(f.atom_count() == 2);
    auto g = parse_formula("restricted(1/2) && mu_eq({R:[1, 0, 1]})");
    CHECK(g.atom_count() == 2);
    CHECK(g.str() == "(restricted(1/2) && mu_eq({R: [1, 0, 1], r: 1/2}))");
    CHECK(parse_formula("!(true || false) && member").atom_count() == 3);

    CHECK(error_kind("ord(X) && 3") == FormulaError::Kind::Sort);
    CHECK(error_kind("x11 + 1") == FormulaError::Kind::Sort);
    CHECK(error_kind("ac(X) == 1") == FormulaError::Kind::Sort);
    CHECK(error_kind("ac(x11) < 1") == FormulaError::Kind::Sort);
    CHECK(error_kind("ac(x11) == t") == FormulaError::Kind::Sort);
    CHECK(error_kind("X + 1 == 0") == FormulaError::Kind::Sort);
    CHECK(error_kind("ord(x11) >= ") == FormulaError::Kind::Syntax);
    CHECK(error_kind("ord(x11) >= 1 &&") == FormulaError::Kind::Syntax);
    CHECK(error_kind("mu_eq({R:[1,0,1]})") == FormulaError::Kind::Sort);
    CHECK(error_kind("foo") == FormulaError::Kind::Syntax);
    CHECK(error_kind("ord(x11) >= 1 $") == FormulaError::Kind::Syntax);

    try {
        parse_formula("true &&\n  ord(x11) >= 1 ||\n  ord(x12) 3");
        FAIL("expected an error");
    } catch (const FormulaError& e) {
        CHECK(e.line() == 3);
        CHECK(e.col() == 12);
        CHECK(std::string(e.what()).rfind("3:12:", 0) == 0);
    }
}

TEST_CASE("print then parse is the identity") {
    const char* corpus[] = {
        "ord(x11) = 0",
        "ord(X) >= 1",
        "ord(alpha[2](X)) >= 1 && ac(alpha[2](X)) == 2",
        "!(ord(x12 - t*x21) < -1/2) || res[1](x11^2 + 3) != 4",
        "restricted(1/2) && mu_eq({R: [1, 0, -1], pf: 2, v: 1})",
        "member && (true || false) && pfaff_ac_eq(-1)",
        "ord(-(x11 + -x22) * (t - 1)) > 2/3 # trailing comment",
    };
    for (const char* src : corpus) {
        CAPTURE(std::string(src));
        const auto f = parse_formula(src);
        const auto g = parse_formula(f.str());
        CHECK(g.str() == f.str());
        CHECK(g.atom_count() == f.atom_count());
    }
}

TEST_CASE("evaluation examples") {
    auto x = sl2(3, "1 + t", "t", "0");
    CHECK(ev("ord(x11) = 0", x) == Truth::True);
    CHECK(ev("ord(x12) = 1 && ac(x12) == 1 && res[1](x12) == 1 && res[1](x11) == 0", x) == Truth::True);
    CHECK(ev("ord(x21) >= 100", x) == Truth::True); // exact zero
    CHECK(ev("ord(X) >= 0 && !(ord(X) >= 1)", x) == Truth::True);
    CHECK(ev("ord(x11 - 1 - t) > 5", x) == Truth::True);

    auto z = sl2(3, "t^2", "0", "0").truncated(3); // x11 == 0 mod t^3
    CHECK(ev("ord(x12) >= 5", z) == Truth::Unknown);
    CHECK(ev("ord(x12) >= 2", z) == Truth::True);
    CHECK(ev("ord(x12) < 3", z) == Truth::False);
    CHECK(ev("ord(x12) = 1", z) == Truth::False);
    CHECK(ev("ac(x12) == 0", z) == Truth::Unknown);
    CHECK(ev("ord(x12) >= 5 || ord(x11) = 2", z) == Truth::True);
    CHECK(ev("ord(x12) >= 5 && ord(x11) = 0", z) == Truth::False);

    // alpha[2] = det for sl(2)
    auto y = sl2(5, "0", "1", "2"); // charpoly lambda^2 - 2
    CHECK(ev("ac(alpha[2](X)) == 3 && ord(alpha[1](X)) > 0", y) == Truth::True);
    CHECK(ev("member", y) == Truth::True);
    CHECK(ev("restricted(0)", y) == Truth::True);
    CHECK(ev("restricted(0) && mu_eq({R: [1, 0, -2]})", y) == Truth::True);
    CHECK(ev("restricted(0) && mu_eq({R: [1, 0, -3]})", y) == Truth::False);
    CHECK(ev("pfaff_ac_eq(0)", y) == Truth::False); // not orthogonal
    CHECK(ev("restricted(0)", sl2(5, "0", "1", "0")) == Truth::False); // nilpotent

    // the depth-zero fixture at K = 2
    auto d0 = sl2(3, "0", "1", "1");
    CHECK(eval(parse_formula("restricted(0)"), d0, 2) == Truth::True);
    CHECK(eval(parse_formula("restricted(1/2)"), sl2(3, "0", "1", "t"), 2) == Truth::True);
    CHECK(eval(parse_formula("restricted(1/2)"), sl2(3, "0", "1", "t"), 1) == Truth::Unknown);

    CHECK_THROWS_AS(ev("ord(x33) = 0", x), PreconditionError);
}

TEST_CASE("orthogonal builtins") {
    const AlgebraType so4 = AlgebraType::so(4);
    Matrix<LaurentNumber> m(4, 4, parse_laurent("0", 5));
    const std::int64_t d[] = {1, 2, -2, -1};
    for (std::size_t i = 0; i < 4; ++i) m(i, i) = LaurentNumber::from_int(ExtField::get(5, 1), d[i]);
    LieElement x(so4, m);
    const auto pf = pfaffian(lift_int_matrix(form_matrix(so4), ExtField::get(5, 1)) * m).ac();
    CHECK(eval(parse_formula("pfaff_ac_eq(" + std::to_string(pf.coeff(0)) + ")"), x) == Truth::True);
    CHECK(eval(parse_formula("pfaff_ac_eq(" + std::to_string(pf.coeff(0) + 1) + ")"), x) == Truth::False);
    const SPoint y = mu(x, 0);
    REQUIRE(y.pf); // n = 1 is odd
    std::string coeffs;
    for (int k = y.R.degree(); k >= 0; --k) coeffs += std::to_string(y.R.coeff(k).value()) + (k ? ", " : "");
    const std::string src = "restricted(0) && mu_eq({R: [" + coeffs + "], pf: " + std::to_string(y.pf->value()) + "})";
    CHECK(eval(parse_formula(src), x) == Truth::True);
}

TEST_CASE("restricted agrees with is_restricted") {
    std::mt19937_64 rng(9);
    const LatticeEnumerator lat(SL2, 3, 3);
    std::uniform_int_distribution<std::uint64_t> d(0, lat.size() - 1);
    const auto f0 = parse_formula("restricted(0)");
    const auto f1 = parse_formula("restricted(1/2)");
    for (int trial = 0; trial < 300; ++trial) {
        const LieElement x(SL2, lat.element(d(rng)));
        for (const auto& [f, r] : {std::pair{&f0, Rational(0)}, std::pair{&f1, Rational(1, 2)}}) {
            Truth expected;
            try {
                expected = is_restricted(x, r).accepted() ? Truth::True : Truth::False;
            } catch (const PrecisionExhausted&) {
                expected = Truth::Unknown;
            }
            CHECK(eval(*f, x) == expected);
        }
    }
}

TEST_CASE("Kleene monotonicity in K") {
    std::mt19937_64 rng(2);
    const LatticeEnumerator lat(SL2, 3, 4);
    std::uniform_int_distribution<std::uint64_t> d(0, lat.size() - 1);
    const auto f = parse_formula("restricted(1/2) || (ord(x12) >= 2 && !(ac(x21) == 1))");
    for (int trial = 0; trial < 200; ++trial) {
        const LieElement x(SL2, lat.element(d(rng)));
        Truth prev = Truth::Unknown;
        for (int K = 1; K <= 4; ++K) {
            const Truth now = eval(f, x, K);
            if (prev != Truth::Unknown) CHECK(now == prev);
            prev = now;
        }
    }
}

TEST_CASE("lattice enumeration") {
    const LatticeEnumerator lat(SL2, 3, 2);
    CHECK(lat.size() == 729);
    for (std::uint64_t i : {0ull, 1ull, 100ull, 728ull}) {
        CHECK(lat.index_of(lat.digits(i)) == i);
        CHECK(membership(lat.element(i), form_matrix(SL2)));
        CHECK(lat.element(i)(0, 0).precision() == 2);
    }
}

TEST_CASE("level probe") {
    CHECK(level_probe(parse_formula("ord(x11) = 0"), SL2, 3, 2).level == 1);
    CHECK(level_probe(parse_formula("true"), SL2, 3, 2).level == 0);
    CHECK(level_probe(parse_formula("restricted(0)"), SL2, 3, 2).level == 1);
    const auto p = level_probe(parse_formula("restricted(1/2)"), SL2, 3, 3);
    CHECK(p.level == 2);
    CHECK(p.exhaustive);
    for (std::uint64_t seed : {1u, 2u, 3u}) {
        const auto s = level_probe(parse_formula("restricted(1/2)"), SL2, 3, 3, 3000, seed);
        CHECK(s.level == 2);
        CHECK(s.seed == seed);
    }
    CHECK_THROWS_AS(level_probe(parse_formula("restricted(1/2)"), SL2, 3, 2), BudgetExceeded);
    CHECK(splitmix64(7, 0) == splitmix64(7, 0));
    CHECK(splitmix64(7, 0) != splitmix64(7, 1));
}
