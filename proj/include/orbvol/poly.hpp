#pragma once

#include "orbvol/errors.hpp"
#include "orbvol/fields.hpp"
#include "orbvol/laurent.hpp"
#include "orbvol/matrix.hpp"
#include "orbvol/rational.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace orbvol {

// Ring glue so the polynomial template works over F_q, F_{q^f} and Laurent numbers.
inline bool is_exact_zero(const Fq& a) { return a.is_zero(); }
inline bool is_exact_zero(const FqExt& a) { return a.is_zero(); }
inline bool is_exact_zero(const LaurentNumber& a) { return a.zero_state() == ZeroState::Zero; }
inline Fq int_like(const Fq& a, std::int64_t v) { return Fq(a.q(), v); }
inline FqExt int_like(const FqExt& a, std::int64_t v) { return a.field().from_int(v); }
inline LaurentNumber int_like(const LaurentNumber& a, std::int64_t v) { return LaurentNumber::from_int(a.field(), v, a.e()); }

// Polynomial in lambda, coefficients constant-first. Exactly-zero leading
// coefficients are dropped, so degree() is the true degree whenever the top
// coefficient is decidable. A prototype element pins the coefficient ring.
template <class T>
class Poly {
public:
    Poly() = default;
    Poly(T prototype, std::vector<T> coeffs) : proto_(int_like(prototype, 0)), c_(std::move(coeffs)) { trim(); }
    static Poly constant(const T& c) { return Poly(c, {c}); }
    static Poly x(const T& prototype) { return Poly(prototype, {int_like(prototype, 0), int_like(prototype, 1)}); }
    // lambda^N + alpha_1 lambda^{N-1} + ... + alpha_N
    static Poly monic_from_alphas(const T& prototype, const std::vector<T>& alphas) {
        std::vector<T> c(alphas.rbegin(), alphas.rend());
        c.push_back(int_like(prototype, 1));
        return Poly(prototype, std::move(c));
    }

    int degree() const { return static_cast<int>(c_.size()) - 1; }
    bool is_zero() const { return c_.empty(); }
    const T& prototype() const { return proto_; }
    T zero() const { return proto_; }
    T one() const { return int_like(proto_, 1); }
    // Coefficient of lambda^i.
    T coeff(int i) const { return (i >= 0 && i < static_cast<int>(c_.size())) ? c_[static_cast<std::size_t>(i)] : proto_; }
    // alpha_j: coefficient of lambda^{N-j}.
    T alpha(int j) const { return coeff(degree() - j); }
    const T& leading() const {
        if (c_.empty()) throw PreconditionError("leading coefficient of the zero polynomial");
        return c_.back();
    }
    bool is_monic() const { return !c_.empty() && c_.back() == one(); }
    const std::vector<T>& coeffs() const { return c_; }

    T operator()(const T& x) const {
        T acc = proto_;
        for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = acc * x + *it;
        return acc;
    }

    Poly derivative() const {
        std::vector<T> d;
        for (std::size_t i = 1; i < c_.size(); ++i) d.push_back(c_[i] * int_like(proto_, static_cast<std::int64_t>(i)));
        return Poly(proto_, std::move(d));
    }

    // P(-lambda)
    Poly reflected() const {
        std::vector<T> c = c_;
        for (std::size_t i = 1; i < c.size(); i += 2) c[i] = -c[i];
        return Poly(proto_, std::move(c));
    }

    // P(lambda^k)
    Poly compose_power(int k) const {
        if (k < 1) throw PreconditionError("compose_power needs k >= 1");
        std::vector<T> c(c_.empty() ? 0 : (c_.size() - 1) * static_cast<std::size_t>(k) + 1, proto_);
        for (std::size_t i = 0; i < c_.size(); ++i) c[i * static_cast<std::size_t>(k)] = c_[i];
        return Poly(proto_, std::move(c));
    }

    Poly operator-() const {
        std::vector<T> c = c_;
        for (auto& v : c) v = -v;
        return Poly(proto_, std::move(c));
    }
    friend Poly operator+(const Poly& a, const Poly& b) {
        std::vector<T> c(std::max(a.c_.size(), b.c_.size()), a.proto_);
        for (std::size_t i = 0; i < a.c_.size(); ++i) c[i] += a.c_[i];
        for (std::size_t i = 0; i < b.c_.size(); ++i) c[i] += b.c_[i];
        return Poly(a.proto_, std::move(c));
    }
    friend Poly operator-(const Poly& a, const Poly& b) { return a + (-b); }
    friend Poly operator*(const Poly& a, const Poly& b) {
        if (a.c_.empty() || b.c_.empty()) return Poly(a.proto_, {});
        std::vector<T> c(a.c_.size() + b.c_.size() - 1, a.proto_);
        for (std::size_t i = 0; i < a.c_.size(); ++i)
            for (std::size_t j = 0; j < b.c_.size(); ++j) c[i + j] += a.c_[i] * b.c_[j];
        return Poly(a.proto_, std::move(c));
    }
    friend Poly operator*(const T& s, const Poly& p) {
        std::vector<T> c = p.c_;
        for (auto& v : c) v = s * v;
        return Poly(p.proto_, std::move(c));
    }
    friend bool operator==(const Poly& a, const Poly& b) { return a.c_ == b.c_; }

private:
    void trim() {
        while (!c_.empty() && is_exact_zero(c_.back())) c_.pop_back();
    }
    T proto_{};
    std::vector<T> c_;
};

using FqPoly = Poly<Fq>;
using LPoly = Poly<LaurentNumber>;

// ---- F_q[lambda] ----

FqPoly fq_poly(std::uint32_t q, const std::vector<std::int64_t>& constant_first);
// lambda^g + a_1 lambda^{g-1} + ... + a_g
FqPoly fq_monic(std::uint32_t q, const std::vector<std::int64_t>& alphas);
std::pair<FqPoly, FqPoly> divmod(const FqPoly& a, const FqPoly& b);
FqPoly gcd(FqPoly a, FqPoly b);
FqPoly make_monic(const FqPoly& a);
bool is_separable(const FqPoly& r);
bool is_irreducible(const FqPoly& r);
// P(-lambda) scaled back to monic.
FqPoly monic_reflection(const FqPoly& r);
// Monic polynomials of degree d, lexicographic in (c_0, ..., c_{d-1}).
std::vector<FqPoly> monic_polys(std::uint32_t q, int d);
std::vector<FqPoly> monic_irreducibles(std::uint32_t q, int d);
// Monic irreducible factors (with repetition), by trial division.
std::vector<FqPoly> factor(const FqPoly& r);

// ---- slope constants ----

struct SlopeConstants {
    Rational r;
    std::int64_t L = 0, N = 0, g = 0, n = 1, ell = 0;

    // From r and the degree N of the polynomial; needs rN integral.
    static SlopeConstants from_degree(const Rational& r, std::int64_t N);
    // From r and the degree g of the reduction: N = n*g.
    static SlopeConstants from_reduced(const Rational& r, std::int64_t g);
};

// ---- Newton polygon over F ----

struct NewtonSegment {
    Rational slope; // common valuation of the roots on this segment
    std::int64_t length = 0;
    friend bool operator==(const NewtonSegment&, const NewtonSegment&) = default;
};

struct NewtonPolygon {
    std::vector<NewtonSegment> segments; // increasing slope
    std::int64_t zero_roots = 0;
};

NewtonPolygon newton_polygon(const LPoly& p);
bool has_slope(const LPoly& p, const Rational& r);
// Checks |alpha_j| <= q^{-rj}; throws PreconditionError on a violation and
// PrecisionExhausted when a coefficient is undecidable.
void check_coefficient_bounds(const LPoly& p, const Rational& r);
FqPoly r_reduction(const LPoly& p, const Rational& r, Uniformizer u = {});
bool check_converse(const LPoly& p, const Rational& r, Uniformizer u = {});
FqExt t_r(const LaurentNumber& lambda, const SlopeConstants& consts, Uniformizer u = {});
LPoly r_lift(const FqPoly& r_poly, const Rational& r, Uniformizer u = {});

template <class T>
Poly<T> even_split(const Poly<T>& p) {
    std::vector<T> half;
    for (int i = 0; i <= p.degree(); ++i) {
        if (i % 2 == 1) {
            if (!is_exact_zero(p.coeff(i))) throw PreconditionError("polynomial is not even");
        } else {
            half.push_back(p.coeff(i));
        }
    }
    return Poly<T>(p.prototype(), std::move(half));
}

template <class T>
bool is_even(const Poly<T>& p) {
    for (int i = 1; i <= p.degree(); i += 2)
        if (!is_exact_zero(p.coeff(i))) return false;
    return true;
}

enum class QuadType { Ramified, Unramified, Split };
std::string to_string(QuadType t);

struct EvenFactorRecord {
    std::vector<FqPoly> factors; // one factor, or a {R_i, R_i(-lambda)} pair
    QuadType type;
    std::int64_t g_i = 0; // total degree of the record
    std::int64_t n = 1;
};

std::vector<EvenFactorRecord> even_factor_data(const FqPoly& r_poly, const SlopeConstants& consts);

// Sylvester resultant with formal degrees (m, n); the plain overload uses the true degrees.
template <class T>
T resultant(const Poly<T>& p, const Poly<T>& q, int m, int n) {
    const T zero = p.zero(), one = p.one();
    const std::size_t size = static_cast<std::size_t>(m + n);
    if (size == 0) return one;
    Matrix<T> syl(size, size, zero);
    for (int row = 0; row < n; ++row)
        for (int k = 0; k <= m; ++k) syl(static_cast<std::size_t>(row), static_cast<std::size_t>(row + k)) = p.coeff(m - k);
    for (int row = 0; row < m; ++row)
        for (int k = 0; k <= n; ++k)
            syl(static_cast<std::size_t>(n + row), static_cast<std::size_t>(row + k)) = q.coeff(n - k);
    return determinant(syl, one);
}

template <class T>
T resultant(const Poly<T>& p, const Poly<T>& q) {
    return resultant(p, q, p.degree(), q.degree());
}

// (-1)^{N(N-1)/2} res(P, P') / lc(P), with P' taken at formal degree N-1.
template <class T>
T discriminant(const Poly<T>& p) {
    const int N = p.degree();
    if (N < 1) throw PreconditionError("discriminant of a constant");
    T res = resultant(p, p.derivative(), N, N - 1);
    if ((static_cast<std::int64_t>(N) * (N - 1) / 2) % 2 == 1) res = -res;
    if (!(p.leading() == p.one())) res = res / p.leading();
    return res;
}

// Characteristic polynomial of a square matrix as a Poly.
template <class T>
Poly<T> char_poly(const Matrix<T>& a, const T& one) {
    return Poly<T>(one, charpoly_berkowitz(a, one));
}

} // namespace orbvol
