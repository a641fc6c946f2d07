#include <doctest.h>

#include "orbvol/laurent.hpp"
#include "orbvol/textio.hpp"

#include <random>

using namespace orbvol;

namespace {

LaurentNumber T(std::uint32_t q, std::vector<std::int64_t> c, std::int64_t start = 0,
                std::int64_t prec = LaurentNumber::kExact) {
    return LaurentNumber::from_ints(q, start, c, prec);
}

LaurentNumber random_number(std::mt19937_64& rng, std::uint32_t q, std::int64_t prec) {
    std::uniform_int_distribution<std::int64_t> d(0, q - 1);
    std::uniform_int_distribution<std::int64_t> s(-1, 2);
    std::int64_t start = s(rng);
    std::vector<std::int64_t> c;
    for (std::int64_t k = start; k < prec; ++k) c.push_back(d(rng));
    return T(q, c, start, prec);
}

} // namespace

TEST_CASE("valuation examples") {
    CHECK(*T(5, {0, 1}).ord() == 1);
    CHECK(*T(5, {1, 1}).ord() == 0);
    const ExtField& F = ExtField::get(5, 1);
    auto s3 = LaurentNumber::monomial(F.one(), 3, 2);
    CHECK(*s3.ord() == Rational(3, 2));
    CHECK(!LaurentNumber::zero(F).ord());
}

TEST_CASE("angular component") {
    CHECK(T(5, {0, 0, 3, 1}).ac().coeff(0) == 3);
    CHECK(LaurentNumber::zero(ExtField::get(5, 1)).ac().is_zero());
    CHECK_THROWS_AS(T(5, {0, 0}, 0, 2).ac(), PrecisionExhausted);
    // multiplicativity: x = u*y with ac(u) = 1 has ac(x) = ac(y)
    auto u = T(7, {1, 3, 5});
    auto y = T(7, {0, 4, 2});
    CHECK((u * y).ac() == y.ac());
    // relabeled uniformizer 2t: ac(3t^2) = 3 * 2^{-2}
    CHECK(T(5, {0, 0, 3}).ac(Uniformizer{2}).coeff(0) == (Fq(5, 3) / Fq(5, 4)).value());
}

TEST_CASE("res_i") {
    CHECK(T(5, {0, 2}).res(1).coeff(0) == 2);
    CHECK(T(5, {0, 2}).res(0).is_zero());
    CHECK(T(5, {0, 0, 1, 1}).res(3).is_zero());
    // indistinguishable mod t^3: res_i known only below the window
    auto z = T(5, {0, 0, 0}, 0, 3);
    CHECK(z.zero_state() == ZeroState::Indistinguishable);
    CHECK(z.res(2).is_zero());
    CHECK_THROWS_AS(z.res(3), PrecisionExhausted);
}

TEST_CASE("arithmetic examples") {
    CHECK(T(7, {1, 1}) * T(7, {1, -1}) == T(7, {1, 0, -1}));
    auto g = T(7, {1, -1}).inverse(3);
    CHECK(g == T(7, {1, 1, 1}, 0, 3));
    const ExtField& F = ExtField::get(5, 1);
    auto s = LaurentNumber::monomial(F.one(), 1, 2);
    CHECK(s * s == T(5, {0, 1}).base_change(2));
    CHECK_THROWS_AS(T(5, {1, 1}).inverse(), PrecisionExhausted);
    CHECK_THROWS_AS(LaurentNumber::zero(F).inverse(), PreconditionError);
    CHECK_THROWS_AS(T(5, {0}, 0, 2).inverse(), PrecisionExhausted);
    CHECK_THROWS_AS(LaurentNumber::zero(F, 5), PreconditionError);
}

TEST_CASE("precision tracking") {
    auto x = T(5, {1, 2, 3}, 0, 3);
    auto y = T(5, {0, 1}, 0, 4); // t + O(t^4)
    CHECK((x + y).precision() == 3);
    CHECK((x * y).precision() == 4); // min(3 + 1, 4 + 0)
    auto q = x / y;                   // valuation -1, relative precision 3 -> absolute 2
    CHECK(*q.ord() == -1);
    CHECK(q.precision() == 2);
    CHECK((q * y).congruent(x));
}

TEST_CASE("valuation and ac properties on random inputs") {
    std::mt19937_64 rng(3);
    for (std::uint32_t q : {3u, 5u, 7u}) {
        for (int trial = 0; trial < 300; ++trial) {
            auto x = random_number(rng, q, 6), y = random_number(rng, q, 6);
            if (!x.is_distinguishable() || !y.is_distinguishable()) continue;
            auto xy = x * y;
            REQUIRE(xy.is_distinguishable());
            CHECK(*xy.ord() == *x.ord() + *y.ord());
            CHECK(xy.ac() == x.ac() * y.ac());
            auto sum = x + y;
            if (sum.is_distinguishable()) {
                CHECK(*sum.ord() >= std::min(*x.ord(), *y.ord()));
                if (*x.ord() != *y.ord()) CHECK(*sum.ord() == std::min(*x.ord(), *y.ord()));
            }
        }
    }
}

TEST_CASE("truncation coherence") {
    std::mt19937_64 rng(5);
    for (int trial = 0; trial < 300; ++trial) {
        auto x = random_number(rng, 5, 8), y = random_number(rng, 5, 8);
        auto xs = x.truncated(4), ys = y.truncated(4);
        CHECK((x + y).truncated(4).congruent(xs + ys));
        CHECK((x * y).congruent(xs * ys));
        if (y.is_distinguishable() && ys.is_distinguishable()) CHECK((x / y).congruent(xs / ys));
    }
}

TEST_CASE("square roots") {
    auto x = T(5, {4, 1, 3}, 0, 6);
    auto r = x.sqrt();
    REQUIRE(r);
    CHECK((*r * *r).congruent(x));
    CHECK(!T(5, {2, 1}, 0, 6).sqrt()); // 2 is a nonsquare mod 5
    CHECK(!T(5, {0, 1}, 0, 6).sqrt()); // odd valuation
    const ExtField& F = ExtField::get(5, 2);
    auto x2 = T(5, {2, 1}, 0, 6).extend_field(F);
    auto r2 = x2.sqrt();
    REQUIRE(r2);
    CHECK((*r2 * *r2).congruent(x2));
}

TEST_CASE("text form") {
    CHECK(T(5, {0, 0, 3, 1}, 0, 4).str() == "t^2 * [3, 1] @4 (e=1, f=1)");
    CHECK(T(5, {1, -1}).pretty() == "1 - t");
    for (const auto& x : {T(5, {1, -1}, 0, 3), T(5, {2, 0, 1}, -1, 6), LaurentNumber::zero(ExtField::get(5, 1)).truncated(4)})
        CHECK(parse_laurent(x.pretty(), 5).str() == x.str());
}
