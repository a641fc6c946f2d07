#pragma once

#include "orbvol/errors.hpp"
#include "orbvol/fields.hpp"
#include "orbvol/rational.hpp"

#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <vector>

namespace orbvol {

// The uniformizer used for ac / res is scale * t. Only meaningful for e = 1;
// ramified numbers always use s with s^e = t.
struct Uniformizer {
    std::uint32_t scale = 1;
    friend bool operator==(const Uniformizer&, const Uniformizer&) = default;
};

enum class ZeroState { Zero, Nonzero, Indistinguishable };

// Truncated element of F_{q^f}((s)), s^e = t. Positions and precisions are
// counted in s-units. Canonical form: start_ is the valuation of a nonzero
// value (coeffs_.front() != 0); exact values drop trailing zeros, truncated
// values store every coefficient below the precision.
class LaurentNumber {
public:
    static constexpr std::int64_t kExact = std::numeric_limits<std::int64_t>::max();

    LaurentNumber() = default;

    static LaurentNumber zero(const ExtField& field, int e = 1);
    static LaurentNumber from_int(const ExtField& field, std::int64_t v, int e = 1);
    static LaurentNumber constant(const FqExt& c, int e = 1);
    // c * s^k
    static LaurentNumber monomial(const FqExt& c, std::int64_t k, int e = 1);
    // sum coeffs[i] s^{start+i}, known mod s^prec (kExact for exact values).
    static LaurentNumber from_coeffs(const ExtField& field, int e, std::int64_t start, std::vector<FqExt> coeffs,
                                     std::int64_t prec = kExact);
    // Integer coefficients of t^{start}, t^{start+1}, ... over F_q (e = 1).
    static LaurentNumber from_ints(std::uint32_t q, std::int64_t start, const std::vector<std::int64_t>& coeffs,
                                   std::int64_t prec = kExact);

    const ExtField& field() const { return *field_; }
    const ExtField* field_ptr() const { return field_; }
    std::uint32_t q() const { return field_->q(); }
    int e() const { return e_; }
    bool is_exact() const { return prec_ == kExact; }
    // Absolute precision in s-units (kExact when exact).
    std::int64_t precision() const { return prec_; }
    // Valuation lower bound in s-units: the valuation when nonzero, the
    // precision when indistinguishable.
    std::int64_t start() const { return start_; }
    const std::vector<FqExt>& coeffs() const { return coeffs_; }

    ZeroState zero_state() const;
    bool is_zero() const { return zero_state() == ZeroState::Zero; }
    bool is_distinguishable() const { return zero_state() == ZeroState::Nonzero; }
    // True for nonzero exact values with a single term.
    bool is_monomial() const;

    // Valuation in s-units; nullopt for zero or indistinguishable values.
    std::optional<std::int64_t> ord_s() const;
    // Normalized valuation i/e; nullopt stands for +infinity (exact zero or
    // indistinguishable from zero at the stored precision).
    std::optional<Rational> ord() const;
    // Lower bound on the valuation in ord-units (the precision when indistinguishable).
    Rational ord_lower_bound() const;

    FqExt ac(Uniformizer u = {}) const;
    FqExt res(const Rational& i, Uniformizer u = {}) const;
    // Coefficient of s^k; k must be below the precision.
    FqExt coeff_s(std::int64_t k) const;

    LaurentNumber truncated(std::int64_t prec_s) const;
    // Same value over e' = e*k (s = s'^k).
    LaurentNumber base_change(int e_new) const;
    // Embeds a number over F_q into an extension of F_q.
    LaurentNumber extend_field(const ExtField& target) const;

    LaurentNumber operator-() const;
    LaurentNumber& operator+=(const LaurentNumber& o);
    LaurentNumber& operator-=(const LaurentNumber& o);
    LaurentNumber& operator*=(const LaurentNumber& o);
    LaurentNumber& operator/=(const LaurentNumber& o);
    friend LaurentNumber operator+(LaurentNumber a, const LaurentNumber& b) { return a += b; }
    friend LaurentNumber operator-(LaurentNumber a, const LaurentNumber& b) { return a -= b; }
    friend LaurentNumber operator*(LaurentNumber a, const LaurentNumber& b) { return a *= b; }
    friend LaurentNumber operator/(LaurentNumber a, const LaurentNumber& b) { return a /= b; }
    LaurentNumber times(std::int64_t k) const;
    LaurentNumber times(const FqExt& c) const;
    // Multiplication by s^k.
    LaurentNumber shifted(std::int64_t k) const;

    // 1/x. Exact non-monomials need abs_prec (s-units) or PrecisionExhausted is thrown.
    LaurentNumber inverse(std::optional<std::int64_t> abs_prec = std::nullopt) const;
    LaurentNumber pow(std::int64_t n, std::optional<std::int64_t> abs_prec = std::nullopt) const;
    // A square root in the same field, or nullopt when none exists there.
    // Exact non-monomials need abs_prec.
    std::optional<LaurentNumber> sqrt(std::optional<std::int64_t> abs_prec = std::nullopt) const;

    // Agreement on the common window.
    bool congruent(const LaurentNumber& o) const;
    friend bool operator==(const LaurentNumber& a, const LaurentNumber& b);

    // t^v * [c0, c1, ...] @K (e=.., f=..), v and K in s-units.
    std::string str() const;
    // Compact human form, e.g. "1 + 2*t^2 + O(t^3)".
    std::string pretty() const;

private:
    void normalize();
    friend void align(LaurentNumber& a, LaurentNumber& b);
    const ExtField* field_ = nullptr;
    int e_ = 1;
    std::int64_t start_ = 0;
    std::vector<FqExt> coeffs_;
    std::int64_t prec_ = kExact;
};

LaurentNumber divide(const LaurentNumber& x, const LaurentNumber& y, std::optional<std::int64_t> abs_prec);

// Brings two numbers to a common field and ramification index.
void align(LaurentNumber& a, LaurentNumber& b);

} // namespace orbvol
