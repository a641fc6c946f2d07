#include <doctest.h>

#include "orbvol/quotfourier.hpp"
#include "orbvol/textio.hpp"

#include <map>
#include <random>

using namespace orbvol;

namespace {

const AlgebraType SL2 = AlgebraType::sp(2);

FiniteFunction random_function(const QuotientSpace& s, std::mt19937_64& rng) {
    std::uniform_int_distribution<std::int64_t> d(-3, 3);
    FiniteFunction f = FiniteFunction::zero(s);
    for (auto& v : f.values) v = CycInt(s.q(), d(rng));
    return f;
}

// Elements of sl(2) given by their entries as strings in t.
LieElement sl2(std::uint32_t q, const char* a, const char* b, const char* c) {
    Matrix<LaurentNumber> m(2, 2, parse_laurent("0", q));
    m(0, 0) = parse_laurent(a, q);
    m(0, 1) = parse_laurent(b, q);
    m(1, 0) = parse_laurent(c, q);
    m(1, 1) = -m(0, 0);
    return LieElement(SL2, m);
}

bool all_ord_at_least(const std::vector<LaurentNumber>& c, int k) {
    for (const auto& v : c)
        if (!v.is_zero() && *v.ord_s() < k) return false;
    return true;
}

} // namespace

TEST_CASE("Moy-Prasad lattices") {
    using BP = BuildingPoint;
    CHECK(moy_prasad_lattice(SL2, BP::Hyperspecial, 0).val == std::vector<int>{0, 0, 0});
    CHECK(moy_prasad_lattice(SL2, BP::Hyperspecial, 0, true).val == std::vector<int>{1, 1, 1});
    CHECK(moy_prasad_lattice(AlgebraType::sp(4), BP::Hyperspecial, Rational(1, 2)).val == std::vector<int>(10, 1));
    CHECK(moy_prasad_lattice(SL2, BP::Sl2Barycenter, Rational(1, 2)).val == std::vector<int>{1, 1, 0});
    CHECK(moy_prasad_lattice(SL2, BP::Sl2Barycenter, Rational(1, 2), true).val == std::vector<int>{2, 1, 1});
    CHECK(moy_prasad_lattice(SL2, BP::Sl2Barycenter, Rational(-1, 2)).val == std::vector<int>{0, 0, -1});
    CHECK(moy_prasad_lattice(SL2, BP::Sl2Barycenter, 0).val == std::vector<int>{1, 0, 0});
    CHECK_THROWS_AS(moy_prasad_lattice(AlgebraType::sp(4), BP::Sl2Barycenter, 0), PreconditionError);
    CHECK(CoordLattice{{1, 1, 1}}.volume_exponent() == 3);
}

TEST_CASE("quotient spaces and duals") {
    auto s = QuotientSpace::moy_prasad(SL2, 3, BuildingPoint::Hyperspecial, 0);
    CHECK(s.size() == 27);
    CHECK(s.dual() == s);
    auto w = QuotientSpace::window(SL2, 3, -1, 1);
    CHECK(w.size() == 729);
    CHECK(w.dual() == QuotientSpace::window(SL2, 3, 0, 2));
    auto b = QuotientSpace::moy_prasad(SL2, 5, BuildingPoint::Sl2Barycenter, Rational(1, 2));
    CHECK(b.size() == 25);
    CHECK(b.dual().lo().val == std::vector<int>{0, 0, -1});
    CHECK(b.dual().hi().val == std::vector<int>{1, 0, 0});
    CHECK(b.dual().dual() == b);
    CHECK_THROWS_AS(QuotientSpace(SL2, 3, CoordLattice{{1, 1, 1}}, CoordLattice{{0, 0, 0}}), PreconditionError);
}

TEST_CASE("digits, reduce and representatives") {
    auto w = QuotientSpace::window(SL2, 5, -1, 1);
    std::mt19937_64 rng(11);
    std::uniform_int_distribution<std::size_t> d(0, w.size() - 1);
    for (int trial = 0; trial < 200; ++trial) {
        const std::size_t i = d(rng), j = d(rng);
        CHECK(w.reduce(w.representative(i)) == i);
        CHECK(w.add(i, w.negate(i)) == 0);
        CHECK(w.reduce(w.representative(i) + w.representative(j)) == w.add(i, j));
    }
    // entries beyond the window are dropped
    auto x = sl2(5, "t^-1 + 2 + t^3", "1", "t");
    auto y = sl2(5, "t^-1 + 2", "1", "0");
    CHECK(w.reduce(x.matrix()) == w.reduce(y.matrix()));
    CHECK_THROWS_AS(w.reduce(sl2(5, "t^-2", "0", "0").matrix()), PreconditionError);
}

TEST_CASE("digit pairing agrees with the trace of representatives") {
    for (const auto& s : {QuotientSpace::window(SL2, 3, -1, 1),
                          QuotientSpace::moy_prasad(SL2, 5, BuildingPoint::Sl2Barycenter, Rational(1, 2)),
                          QuotientSpace::moy_prasad(SL2, 3, BuildingPoint::Sl2Barycenter, 0)}) {
        const auto d = s.dual();
        for (std::size_t x = 0; x < s.size(); x += 7)
            for (std::size_t y = 0; y < d.size(); y += 5)
                CHECK(s.pairing(x, y) == trace_pairing(s.representative(x), d.representative(y)).value());
    }
}

TEST_CASE("Fourier inversion on sl(2, F_3)") {
    auto s = QuotientSpace::moy_prasad(SL2, 3, BuildingPoint::Hyperspecial, 0);
    std::mt19937_64 rng(1);
    for (int trial = 0; trial < 20; ++trial) {
        const auto phi = random_function(s, rng);
        const auto back = finite_ft(finite_ft(phi));
        for (std::size_t x = 0; x < s.size(); ++x) CHECK(back.values[x] == phi.values[s.negate(x)] * 27);
    }
    auto b = QuotientSpace::moy_prasad(SL2, 5, BuildingPoint::Sl2Barycenter, Rational(1, 2));
    const auto phi = random_function(b, rng);
    const auto back = finite_ft(finite_ft(phi));
    REQUIRE(back.space == b);
    for (std::size_t x = 0; x < b.size(); ++x) CHECK(back.values[x] == phi.values[b.negate(x)] * 25);
}

TEST_CASE("transform of a coset indicator") {
    // f = 1_{Z + g(O)} with Z in t^{-1} g(O); F f = Lambda(., Z) 1_{t g(O)}.
    const std::uint32_t q = 3;
    auto w = QuotientSpace::window(SL2, q, -1, 1);
    auto dual = w.dual();
    const CoordLattice gO{{0, 0, 0}};
    for (const char* z : {"t^-1", "2t^-1"}) {
        auto Z = sl2(q, z, "t^-1", "0").matrix();
        auto f = coset_indicator(w, Z, gO);
        f.scale = Rational(1, 27); // vol of t g(O)
        const auto F = finite_ft(f);
        auto expected = FiniteFunction::zero(dual);
        for (std::size_t x = 0; x < dual.size(); ++x) {
            const auto X = dual.representative(x);
            if (all_ord_at_least(dual.coordinates(X), 1))
                expected.values[x] = CycInt::zeta_pow(q, trace_pairing(X, Z).value());
        }
        CHECK(F == expected);
    }
}

TEST_CASE("inflation commutes with the transform") {
    const std::uint32_t q = 3;
    auto mp = QuotientSpace::moy_prasad(SL2, q, BuildingPoint::Sl2Barycenter, Rational(1, 2));
    auto w = QuotientSpace::window(SL2, q, 0, 2);
    std::mt19937_64 rng(4);
    const auto phi = random_function(mp, rng);
    auto lhs = finite_ft(inflate(phi, w));
    lhs.scale *= Rational(1, 729); // vol(t^2 g(O))
    auto rhs = inflate(finite_ft(phi), w.dual());
    rhs.scale *= Rational(1, 81); // vol(g_{x,1/2+})
    CHECK(lhs == rhs);
    CHECK_THROWS_AS(inflate(phi, QuotientSpace::window(SL2, q, 0, 1)), PreconditionError);
    CHECK(inflate(phi, 2).space == w);
}

TEST_CASE("orbits on sl(2, F_q)") {
    for (std::uint32_t q : {3u, 5u}) {
        auto s = QuotientSpace::moy_prasad(SL2, q, BuildingPoint::Hyperspecial, 0);
        std::map<std::size_t, int> sizes;
        std::vector<bool> seen(s.size());
        for (std::size_t i = 0; i < s.size(); ++i) {
            if (seen[i]) continue;
            const auto orb = s.orbit(i);
            for (std::size_t j : orb) seen[j] = true;
            ++sizes[orb.size()];
        }
        const int Q = static_cast<int>(q);
        // zero, two nilpotent orbits, (q-1)/2 split and (q-1)/2 nonsplit classes per value of det
        CHECK(sizes[1] == 1);
        CHECK(sizes[(Q * Q - 1) / 2] == 2);
        CHECK(sizes[Q * Q + Q] == (Q - 1) / 2);
        CHECK(sizes[Q * Q - Q] == (Q - 1) / 2);
    }
    auto s = QuotientSpace::moy_prasad(SL2, 3, BuildingPoint::Hyperspecial, 0);
    const auto f = orbit_indicator(s, s.reduce(sl2(3, "0", "1", "1").matrix()));
    CHECK(f.scale == Rational(1, 12));
    // torus action at the barycenter: (u, v) -> (s^2 u, s^-2 v)
    auto b = QuotientSpace::moy_prasad(SL2, 5, BuildingPoint::Sl2Barycenter, Rational(1, 2));
    CHECK(b.acting_group().size() == 4);
    CHECK(b.orbit(0).size() == 1);
    CHECK(b.orbit(1).size() == 2);
}

TEST_CASE("Gauss integrals on SL(2, O/t^2)") {
    const std::uint32_t q = 3;
    auto x = sl2(q, "0", "1", "1");
    auto g0 = gauss_integral(x, sl2(q, "0", "0", "0"), 2);
    CHECK(g0.group_order == 648);
    CHECK(g0.rational() == Rational(1));
    // Y in g(O): the average of psi over the orbit of X bar
    auto s = QuotientSpace::moy_prasad(SL2, q, BuildingPoint::Hyperspecial, 0);
    const auto ft = finite_ft(orbit_indicator(s, s.reduce(x.matrix())));
    for (const auto* y : {"1", "t + 1", "2"}) {
        auto Y = sl2(q, y, "1", "0");
        auto g = gauss_integral(x, Y, 2);
        CHECK(g.sum == ft.values[s.reduce(Y.matrix())] * 54); // |G| / |O| = 648 / 12
    }
    // leading term nilpotent: vanishes
    CHECK(gauss_integral(x, sl2(q, "0", "t^-1", "1"), 2).sum.is_zero());
    CHECK(gauss_integral(x, sl2(q, "t^-1 + 1", "t^-1", "2t^-1 + 2"), 2).sum.is_zero());
    CHECK_THROWS_AS(gauss_integral(x, sl2(q, "0", "t^-1", "0"), 1), PreconditionError);
}
