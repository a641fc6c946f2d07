#include <doctest.h>

#include "orbvol/volumes.hpp"

using namespace orbvol;

namespace {

const AlgebraType SL2 = AlgebraType::sp(2);

Rational qpow_inv(std::uint32_t q, int e) { return Rational(1) / pow(Rational(q), e); }

// |{(x, y, z) in F_q^3 : z^2 + xy = c}|
int count_quadric(int q, int c) {
    int n = 0;
    for (int x = 0; x < q; ++x)
        for (int y = 0; y < q; ++y)
            for (int z = 0; z < q; ++z)
                if (((z * z + x * y - c) % q + q) % q == 0) ++n;
    return n;
}

SPoint sl2_point(std::uint32_t q, std::int64_t c) { // lambda^2 - c
    return {SL2, 0, fq_monic(q, {0, -c}), std::nullopt, std::nullopt};
}

} // namespace

TEST_CASE("volume examples") {
    CHECK(volume(parse_formula("true"), SL2, 3, 2).lower == 1);
    CHECK(volume(parse_formula("false"), SL2, 3, 1).upper == 0);
    for (std::uint32_t q : {3u, 5u}) {
        const auto rep = volume(parse_formula("ord(X) >= 1"), SL2, q, 2);
        CHECK(rep.lower == qpow_inv(q, 3));
        CHECK(rep.upper == rep.lower);
    }
    CHECK(volume(parse_formula("ord(X) >= 1"), AlgebraType::so(3), 3, 2).lower == qpow_inv(3, 3));
    // depth-zero restricted locus of sl(2, F_3): 12 split + 6 nonsplit points
    CHECK(volume(parse_formula("restricted(0)"), SL2, 3, 1).lower == Rational(2, 3));
    // undecidable everywhere at K = 1
    CHECK_THROWS_AS(volume(parse_formula("ord(x12 - x12) >= 5"), SL2, 3, 1), PrecisionExhausted);
    CHECK(volume(parse_formula("ord(x12) >= 3"), SL2, 3, 1).upper == Rational(1, 3));
    CHECK_THROWS_AS(volume(parse_formula("true"), AlgebraType::sp(4), 3, 2), BudgetExceeded);
}

TEST_CASE("partition of the restricted locus") {
    const auto all = volume(parse_formula("restricted(0)"), SL2, 3, 1);
    Rational sum = 0;
    for (const SPoint& y : enumerate_S(SL2, 0, 3)) {
        std::string R = "[1";
        for (int k = y.R.degree() - 1; k >= 0; --k) R += ", " + std::to_string(y.R.coeff(k).value());
        sum += volume(parse_formula("restricted(0) && mu_eq({R: " + R + "]})"), SL2, 3, 1).lower;
    }
    CHECK(sum == all.lower);

    for (const auto& r : {Rational(0), Rational(1, 2)}) {
        const auto t = fiber_table(SL2, r, 3, 2);
        std::uint64_t s = 0;
        for (auto c : t.counts) s += c;
        CHECK(s == t.restricted);
        CHECK(t.unknown == 0);
        CHECK(Rational(t.restricted) / Rational(t.total) ==
              volume(parse_formula("restricted(" + to_string(r) + ")"), SL2, 3, 2).lower);
    }
}

TEST_CASE("K stability beyond the level") {
    for (const char* src : {"restricted(0)", "restricted(1/2)", "ord(x11) >= 1 && res[0](x12) == 2"}) {
        CAPTURE(std::string(src));
        const auto f = parse_formula(src);
        const auto a = volume(f, SL2, 3, 2), b = volume(f, SL2, 3, 3);
        CHECK(a.lower == b.lower);
        CHECK(a.upper == b.upper);
    }
}

TEST_CASE("orbit counts of the quadric") {
    for (int q : {3, 5, 7}) {
        for (int c = 1; c < q; ++c) {
            const bool square = Fq(static_cast<std::uint32_t>(q), c).sqrt().has_value();
            CHECK(count_quadric(q, c) == (square ? q * q + q : q * q - q));
        }
    }
}

TEST_CASE("group orders") {
    CHECK(group_order(SL2, 3) == 24);
    CHECK(group_order(SL2, 5) == 120);
    CHECK(group_order(AlgebraType::so(3), 3) == 24);
    CHECK(group_order(AlgebraType::so(4), 3) == 576);
    CHECK(group_order(AlgebraType::sp(4), 3) == 51840);
    CHECK(group_order(AlgebraType::so(5), 3) == 51840);
    CHECK(order_polynomial(AlgebraType::sp(6), 3) == BigInt("9170703360"));
    Matrix<Fq> x(2, 2, Fq(3, 0));
    x(0, 0) = Fq(3, 1);
    x(1, 1) = Fq(3, 2);
    CHECK(centralizer_order(SL2, x) == 2);
    Matrix<Fq> e(2, 2, Fq(3, 0));
    e(0, 1) = Fq(3, 1);
    e(1, 0) = Fq(3, 1); // charpoly lambda^2 - 1, split
    CHECK(centralizer_order(SL2, e) == 2);
    e(1, 0) = Fq(3, 2); // lambda^2 - 2, nonsplit
    CHECK(centralizer_order(SL2, e) == 4);
    const auto nd = normalization(SL2, 3);
    CHECK(nd.delta == 2);
    CHECK(nd.group_factor == Rational(24, 27));
}

TEST_CASE("stable orbital integrals at r = 0") {
    for (std::uint32_t q : {3u, 5u}) {
        const auto t = fiber_table(SL2, 0, q, 1);
        for (std::int64_t c = 1; c < q; ++c) {
            const bool square = Fq(q, c).sqrt().has_value();
            const auto v = stable_orbital(t, sl2_point(q, c));
            CHECK(v.is_rational());
            CHECK(v.coefficient() == Rational(1, square ? q - 1 : q + 1));
        }
    }
    CHECK(stable_orbital(sl2_point(3, 1), 3, 2).coefficient() == Rational(1, 2)); // K = 2 agrees
    // q^{r delta / 2} enters at r = 1/2
    const auto t = fiber_table(SL2, Rational(1, 2), 3, 2);
    for (const auto& y : t.points) CHECK(stable_orbital(t, y).exponent() == Rational(1, 2));
}

TEST_CASE("fundamental lemma, stable face") {
    const auto sl = fl_r0_check(SL2, {SL2}, 3);
    REQUIRE(sl.rows.size() == 2);
    CHECK(sl.all_pass());
    for (const auto& row : sl.rows) {
        REQUIRE(row.torus_order);
        CHECK(row.lhs.coefficient() == Rational(1, static_cast<long long>(*row.torus_order)));
    }
    CHECK(fl_r0_check(AlgebraType::so(3), {AlgebraType::so(3)}, 3).all_pass());
    CHECK(fl_r0_check(SL2, {SL2}, 5, 2).all_pass());

    // negative controls
    CHECK(!fl_r0_check(SL2, {SL2}, 3, 1, Corruption::DropGroupFactor).all_pass());
    CHECK(!fl_check(SL2, {SL2}, Rational(1, 2), 3, 2, 1, Corruption::DropDeltaFactor).all_pass());
    CHECK(fl_check(SL2, {SL2}, Rational(1, 2), 3, 2).all_pass());

    CHECK_THROWS_AS(fl_r0_check(SL2, {AlgebraType::so(3)}, 3), PreconditionError);
}

TEST_CASE("endoscopic product so(5) from so(3) x so(3)") {
    const auto chk = fl_r0_check(AlgebraType::so(5), {AlgebraType::so(3), AlgebraType::so(3)}, 3, 4);
    CHECK(!chk.rows.empty());
    for (const auto& row : chk.rows) {
        CAPTURE(row.y);
        CHECK(row.pass);
        if (row.torus_order) CHECK(row.lhs.coefficient() == Rational(1, static_cast<long long>(*row.torus_order)));
    }
}

TEST_CASE("Monte Carlo") {
    const auto f = parse_formula("restricted(0)");
    const Rational exact = volume(f, SL2, 3, 1).lower;
    int inside = 0;
    const int seeds = 60;
    for (int s = 0; s < seeds; ++s) {
        VolumeOptions opt;
        opt.mode = VolumeMode::MonteCarlo;
        opt.samples = 2000;
        opt.seed = static_cast<std::uint64_t>(s);
        const auto rep = volume(f, SL2, 3, 1, opt);
        CHECK(rep.seed == opt.seed);
        if (std::abs(rep.estimate - static_cast<double>(exact)) <= rep.radius) ++inside;
    }
    CHECK(inside >= seeds - 3);

    VolumeOptions a;
    a.mode = VolumeMode::MonteCarlo;
    a.samples = 3000;
    a.seed = 42;
    VolumeOptions b = a;
    b.jobs = 4;
    CHECK(volume(f, SL2, 3, 2, a).lower == volume(f, SL2, 3, 2, b).lower);
}

TEST_CASE("reports do not depend on threads or the uniformizer") {
    const auto f = parse_formula("restricted(1/2) && ac(x12) == 1");
    VolumeOptions one, many, relabeled;
    many.jobs = 4;
    relabeled.u = Uniformizer{2};
    const auto a = volume(f, SL2, 3, 2, one);
    CHECK(a.lower == volume(f, SL2, 3, 2, many).lower);
    CHECK(a.lower == volume(f, SL2, 3, 2, relabeled).lower);
    const auto t1 = fiber_table(SL2, Rational(1, 2), 3, 2, 1);
    const auto t4 = fiber_table(SL2, Rational(1, 2), 3, 2, 4);
    CHECK(t1.counts == t4.counts);
    CHECK(t1.first_index == t4.first_index);
    const auto tu = fiber_table(SL2, Rational(1, 2), 3, 2, 1, Uniformizer{2});
    std::vector<std::uint64_t> a1 = t1.counts, a2 = tu.counts;
    std::sort(a1.begin(), a1.end());
    std::sort(a2.begin(), a2.end());
    CHECK(a1 == a2);
    CHECK(tu.restricted == t1.restricted);
}
