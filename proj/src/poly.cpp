#include "orbvol/poly.hpp"

#include <algorithm>
#include <numeric>

namespace orbvol {

// ---- F_q[lambda] ----

FqPoly fq_poly(std::uint32_t q, const std::vector<std::int64_t>& constant_first) {
    std::vector<Fq> c;
    c.reserve(constant_first.size());
    for (auto v : constant_first) c.emplace_back(q, v);
    return FqPoly(Fq(q, 0), std::move(c));
}

FqPoly fq_monic(std::uint32_t q, const std::vector<std::int64_t>& alphas) {
    std::vector<std::int64_t> c(alphas.rbegin(), alphas.rend());
    c.push_back(1);
    return fq_poly(q, c);
}

std::pair<FqPoly, FqPoly> divmod(const FqPoly& a, const FqPoly& b) {
    if (b.is_zero()) throw PreconditionError("polynomial division by zero");
    const Fq zero = b.zero();
    const Fq inv_lead = b.leading().inverse();
    std::vector<Fq> rem = a.coeffs();
    const int db = b.degree();
    std::vector<Fq> quot(rem.size() > static_cast<std::size_t>(db) ? rem.size() - static_cast<std::size_t>(db) : 0, zero);
    for (int k = static_cast<int>(rem.size()) - 1; k >= db; --k) {
        Fq factor = rem[static_cast<std::size_t>(k)] * inv_lead;
        if (factor.is_zero()) continue;
        quot[static_cast<std::size_t>(k - db)] = factor;
        for (int i = 0; i <= db; ++i) rem[static_cast<std::size_t>(k - db + i)] -= factor * b.coeff(i);
    }
    return {FqPoly(zero, std::move(quot)), FqPoly(zero, std::move(rem))};
}

FqPoly gcd(FqPoly a, FqPoly b) {
    while (!b.is_zero()) {
        FqPoly r = divmod(a, b).second;
        a = std::move(b);
        b = std::move(r);
    }
    return a.is_zero() ? a : make_monic(a);
}

FqPoly make_monic(const FqPoly& a) {
    if (a.is_zero()) return a;
    return a.leading().inverse() * a;
}

bool is_separable(const FqPoly& r) {
    if (r.degree() < 1) return true;
    return gcd(r, r.derivative()).degree() == 0;
}

namespace {

FqPoly powmod(FqPoly base, std::uint64_t e, const FqPoly& m) {
    FqPoly result = FqPoly::constant(Fq(m.zero().q(), 1));
    base = divmod(base, m).second;
    while (e > 0) {
        if (e & 1) result = divmod(result * base, m).second;
        base = divmod(base * base, m).second;
        e >>= 1;
    }
    return result;
}

} // namespace

bool is_irreducible(const FqPoly& r) {
    const int d = r.degree();
    if (d < 1) return false;
    if (d == 1) return true;
    const std::uint32_t q = r.zero().q();
    const FqPoly x = FqPoly::x(Fq(q, 0));
    FqPoly xp = x;
    for (int i = 1; i <= d / 2; ++i) {
        xp = powmod(xp, q, r);
        if (gcd(r, xp - x).degree() > 0) return false;
    }
    return true;
}

FqPoly monic_reflection(const FqPoly& r) {
    FqPoly s = r.reflected();
    return r.degree() % 2 == 0 ? s : -s;
}

std::vector<FqPoly> monic_polys(std::uint32_t q, int d) {
    require_prime(q);
    if (d < 0) throw PreconditionError("negative degree");
    std::uint64_t count = 1;
    for (int i = 0; i < d; ++i) {
        count *= q;
        if (count > 10'000'000) throw BudgetExceeded("too many monic polynomials to enumerate");
    }
    std::vector<FqPoly> out;
    out.reserve(count);
    for (std::uint64_t k = 0; k < count; ++k) {
        std::vector<std::int64_t> c(static_cast<std::size_t>(d) + 1, 0);
        std::uint64_t rest = k;
        for (int i = d - 1; i >= 0; --i) {
            c[static_cast<std::size_t>(i)] = static_cast<std::int64_t>(rest % q);
            rest /= q;
        }
        c[static_cast<std::size_t>(d)] = 1;
        out.push_back(fq_poly(q, c));
    }
    return out;
}

std::vector<FqPoly> monic_irreducibles(std::uint32_t q, int d) {
    std::vector<FqPoly> out;
    for (auto& p : monic_polys(q, d))
        if (is_irreducible(p)) out.push_back(std::move(p));
    return out;
}

std::vector<FqPoly> factor(const FqPoly& r) {
    if (r.degree() < 1) throw PreconditionError("factor: constant polynomial");
    FqPoly rest = make_monic(r);
    const std::uint32_t q = r.zero().q();
    std::vector<FqPoly> out;
    for (int d = 1; 2 * d <= rest.degree(); ++d) {
        for (const auto& f : monic_irreducibles(q, d)) {
            while (rest.degree() >= d) {
                auto [quot, rem] = divmod(rest, f);
                if (!rem.is_zero()) break;
                out.push_back(f);
                rest = quot;
            }
        }
    }
    if (rest.degree() >= 1) out.push_back(rest);
    return out;
}

// ---- slope constants ----

SlopeConstants SlopeConstants::from_degree(const Rational& r, std::int64_t N) {
    if (N < 1) throw PreconditionError("degree must be positive");
    if (r < 0) throw PreconditionError("slope must be non-negative");
    const Rational L = r * N;
    if (denom(L) != 1) throw PreconditionError("slope " + to_string(r) + " incompatible with degree " + std::to_string(N));
    SlopeConstants c;
    c.r = r;
    c.N = N;
    c.L = to_int64(L);
    c.g = std::gcd(c.L, N);
    c.ell = c.L / c.g;
    c.n = N / c.g;
    return c;
}

SlopeConstants SlopeConstants::from_reduced(const Rational& r, std::int64_t g) {
    if (g < 1) throw PreconditionError("reduced degree must be positive");
    if (r < 0) throw PreconditionError("slope must be non-negative");
    const std::int64_t n = to_int64(denom(r));
    return from_degree(r, n * g);
}

// ---- Newton polygon ----

namespace {

void require_monic(const LPoly& p) {
    if (p.degree() < 1) throw PreconditionError("expected a monic polynomial of positive degree");
    const LaurentNumber& lead = p.leading();
    if (!(lead.is_exact() && lead.is_monomial() && lead.start() == 0 && lead.coeffs().front().is_one()))
        throw PreconditionError("polynomial is not monic");
}

struct Pt {
    Rational x, y;
};

// cross product of (b - a) and (c - a)
Rational cross(const Pt& a, const Pt& b, const Pt& c) { return (b.x - a.x) * (c.y - a.y) - (b.y - a.y) * (c.x - a.x); }

} // namespace

NewtonPolygon newton_polygon(const LPoly& p) {
    require_monic(p);
    const int N = p.degree();
    NewtonPolygon out;
    int m = 0;
    while (m < N && is_exact_zero(p.coeff(m))) ++m;
    out.zero_roots = m;
    if (m < N && p.coeff(m).zero_state() == ZeroState::Indistinguishable)
        throw PrecisionExhausted("Newton polygon: lowest coefficient indistinguishable from zero");
    std::vector<Pt> pts, bounds;
    for (int i = m; i <= N; ++i) {
        const LaurentNumber& c = p.coeff(i);
        switch (c.zero_state()) {
        case ZeroState::Zero:
            break;
        case ZeroState::Nonzero:
            pts.push_back({Rational(i), *c.ord()});
            break;
        case ZeroState::Indistinguishable:
            bounds.push_back({Rational(i), c.ord_lower_bound()});
            break;
        }
    }
    std::vector<Pt> hull;
    for (const auto& pt : pts) {
        while (hull.size() >= 2 && cross(hull[hull.size() - 2], hull.back(), pt) <= 0) hull.pop_back();
        hull.push_back(pt);
    }
    for (const auto& b : bounds) {
        for (std::size_t k = 0; k + 1 < hull.size(); ++k) {
            if (hull[k].x <= b.x && b.x <= hull[k + 1].x) {
                Rational at = hull[k].y + (hull[k + 1].y - hull[k].y) * (b.x - hull[k].x) / (hull[k + 1].x - hull[k].x);
                if (b.y < at) throw PrecisionExhausted("Newton polygon: hull-critical coefficient is undecidable");
                break;
            }
        }
    }
    for (std::size_t k = 0; k + 1 < hull.size(); ++k) {
        Rational len = hull[k + 1].x - hull[k].x;
        out.segments.push_back({-(hull[k + 1].y - hull[k].y) / len, to_int64(len)});
    }
    std::reverse(out.segments.begin(), out.segments.end());
    return out;
}

bool has_slope(const LPoly& p, const Rational& r) {
    require_monic(p);
    const int N = p.degree();
    const LaurentNumber& c0 = p.coeff(0);
    const Rational target = r * N;
    switch (c0.zero_state()) {
    case ZeroState::Zero:
        return false;
    case ZeroState::Indistinguishable:
        if (c0.ord_lower_bound() > target) return false;
        throw PrecisionExhausted("has_slope: constant term undecidable");
    case ZeroState::Nonzero:
        if (*c0.ord() != target) return false;
    }
    bool undecided = false;
    for (int j = 1; j < N; ++j) {
        const LaurentNumber& a = p.alpha(j);
        switch (a.zero_state()) {
        case ZeroState::Zero:
            break;
        case ZeroState::Nonzero:
            if (*a.ord() < r * j) return false;
            break;
        case ZeroState::Indistinguishable:
            if (a.ord_lower_bound() < r * j) undecided = true;
            break;
        }
    }
    if (undecided) throw PrecisionExhausted("has_slope: a coefficient is undecidable");
    return true;
}

void check_coefficient_bounds(const LPoly& p, const Rational& r) {
    require_monic(p);
    for (int j = 1; j <= p.degree(); ++j) {
        const LaurentNumber& a = p.alpha(j);
        switch (a.zero_state()) {
        case ZeroState::Zero:
            break;
        case ZeroState::Nonzero:
            if (*a.ord() < r * j)
                throw PreconditionError("coefficient bound violated: ord(alpha_" + std::to_string(j) + ") = " + to_string(*a.ord()) +
                                        " < " + to_string(Rational(r * j)));
            break;
        case ZeroState::Indistinguishable:
            if (a.ord_lower_bound() < r * j)
                throw PrecisionExhausted("coefficient bound undecidable for alpha_" + std::to_string(j));
            break;
        }
    }
}

FqPoly r_reduction(const LPoly& p, const Rational& r, Uniformizer u) {
    require_monic(p);
    const LaurentNumber& proto = p.prototype();
    if (proto.e() != 1 || proto.field().degree() != 1)
        throw PreconditionError("r_reduction expects coefficients in F_q((t))");
    const auto consts = SlopeConstants::from_degree(r, p.degree());
    check_coefficient_bounds(p, r);
    const std::uint32_t q = proto.q();
    std::vector<std::int64_t> a;
    for (std::int64_t j = 1; j <= consts.g; ++j) {
        const LaurentNumber& alpha = p.alpha(static_cast<int>(consts.n * j));
        if (alpha.e() != 1) throw PreconditionError("r_reduction expects coefficients in F_q((t))");
        a.push_back(alpha.res(Rational(consts.ell * j), u).coeff(0));
    }
    return fq_monic(q, a);
}

bool check_converse(const LPoly& p, const Rational& r, Uniformizer u) {
    FqPoly R = r_reduction(p, r, u);
    return !R.coeff(0).is_zero() && is_separable(R);
}

FqExt t_r(const LaurentNumber& lambda, const SlopeConstants& consts, Uniformizer u) {
    if (!lambda.is_distinguishable()) throw PrecisionExhausted("t_r: root indistinguishable from zero");
    if (*lambda.ord() != consts.r)
        throw PreconditionError("t_r: ord(lambda) = " + to_string(*lambda.ord()) + " differs from r = " + to_string(consts.r));
    LaurentNumber x = lambda.pow(consts.n).shifted(-static_cast<std::int64_t>(lambda.e()) * consts.ell);
    FqExt value = x.ac();
    if (u.scale % lambda.q() != 1 % lambda.q()) value *= lambda.field().from_int(u.scale).pow(-consts.ell);
    return value;
}

LPoly r_lift(const FqPoly& r_poly, const Rational& r, Uniformizer u) {
    if (!r_poly.is_monic()) throw PreconditionError("r_lift: R must be monic");
    if (r_poly.coeff(0).is_zero()) throw PreconditionError("r_lift: R(0) = 0");
    if (!is_separable(r_poly)) throw PreconditionError("r_lift: R is not separable");
    const std::int64_t g = r_poly.degree();
    const auto consts = SlopeConstants::from_reduced(r, g);
    const std::uint32_t q = r_poly.zero().q();
    const ExtField& F = ExtField::get(q, 1);
    const Fq scale(q, u.scale);
    if (scale.is_zero()) throw PreconditionError("uniformizer scale must be a unit");
    std::vector<LaurentNumber> c(static_cast<std::size_t>(consts.N) + 1, LaurentNumber::zero(F));
    for (std::int64_t j = 0; j <= g; ++j) {
        const Fq a = r_poly.alpha(static_cast<int>(j)) * scale.pow(consts.ell * j);
        c[static_cast<std::size_t>(consts.n * (g - j))] = LaurentNumber::monomial(F.from_fq(a), consts.ell * j);
    }
    return LPoly(LaurentNumber::zero(F), std::move(c));
}

std::string to_string(QuadType t) {
    switch (t) {
    case QuadType::Ramified:
        return "ramified";
    case QuadType::Unramified:
        return "unramified";
    case QuadType::Split:
        return "split";
    }
    return "?";
}

std::vector<EvenFactorRecord> even_factor_data(const FqPoly& r_poly, const SlopeConstants& consts) {
    if (consts.n % 2 == 1 && !is_even(r_poly)) throw PreconditionError("n odd requires an even reduction");
    if (r_poly.coeff(0).is_zero()) throw PreconditionError("R(0) = 0");
    if (!is_separable(r_poly)) throw PreconditionError("R is not separable");
    auto factors = factor(r_poly);
    std::vector<EvenFactorRecord> out;
    if (consts.n % 2 == 0) {
        for (auto& f : factors) out.push_back({{f}, QuadType::Ramified, f.degree(), consts.n});
        return out;
    }
    std::vector<bool> used(factors.size(), false);
    for (std::size_t i = 0; i < factors.size(); ++i) {
        if (used[i]) continue;
        used[i] = true;
        FqPoly partner = monic_reflection(factors[i]);
        if (partner == factors[i]) {
            out.push_back({{factors[i]}, QuadType::Unramified, factors[i].degree(), consts.n});
            continue;
        }
        auto it = std::find(factors.begin(), factors.end(), partner);
        while (it != factors.end() && used[static_cast<std::size_t>(it - factors.begin())])
            it = std::find(it + 1, factors.end(), partner);
        if (it == factors.end()) throw std::logic_error("even_factor_data: unpaired factor in an even polynomial");
        used[static_cast<std::size_t>(it - factors.begin())] = true;
        out.push_back({{factors[i], partner}, QuadType::Split, 2 * factors[i].degree(), consts.n});
    }
    return out;
}

} // namespace orbvol
