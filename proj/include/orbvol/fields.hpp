#pragma once

#include "orbvol/errors.hpp"

#include <array>
#include <complex>
#include <optional>
#include <cstdint>
#include <string>
#include <vector>

namespace orbvol {

bool is_prime(std::uint32_t n);
// Rejects non-primes and primes too large for the 16-bit coefficient storage.
void require_prime(std::uint32_t q);

// Element of the prime field F_q.
class Fq {
public:
    Fq() = default;
    Fq(std::uint32_t q, std::int64_t value);

    std::uint32_t q() const { return q_; }
    std::uint32_t value() const { return v_; }
    bool is_zero() const { return v_ == 0; }
    // Representative in (-q/2, q/2], used for printing.
    std::int64_t signed_value() const;

    Fq inverse() const;
    Fq pow(std::int64_t e) const;
    bool is_square() const;
    std::optional<Fq> sqrt() const;

    Fq& operator+=(const Fq& o);
    Fq& operator-=(const Fq& o);
    Fq& operator*=(const Fq& o);
    Fq& operator/=(const Fq& o);
    Fq operator-() const { return Fq(q_, q_ - v_); }
    friend Fq operator+(Fq a, const Fq& b) { return a += b; }
    friend Fq operator-(Fq a, const Fq& b) { return a -= b; }
    friend Fq operator*(Fq a, const Fq& b) { return a *= b; }
    friend Fq operator/(Fq a, const Fq& b) { return a /= b; }
    friend bool operator==(const Fq& a, const Fq& b) { return a.q_ == b.q_ && a.v_ == b.v_; }
    friend bool operator<(const Fq& a, const Fq& b) { return a.v_ < b.v_; }

private:
    void check_same(const Fq& o) const;
    std::uint32_t q_ = 0;
    std::uint32_t v_ = 0;
};

constexpr int kMaxExtDegree = 8;

class FqExt;

// F_{q^f} = F_q[x]/(m(x)). Instances live in a process-wide registry and are
// never destroyed, so elements can hold a plain pointer to their field.
class ExtField {
public:
    // Default modulus: the first monic irreducible in lexicographic order of
    // the constant-first coefficient array.
    static const ExtField& get(std::uint32_t q, int f);
    // Coefficients constant-first, leading 1 omitted.
    static const ExtField& with_modulus(std::uint32_t q, const std::vector<std::uint32_t>& low_first);
    // All monic irreducibles of degree f, lexicographic, without the leading 1.
    static std::vector<std::vector<std::uint32_t>> irreducible_moduli(std::uint32_t q, int f);

    std::uint32_t q() const { return q_; }
    std::uint32_t p() const { return q_; }
    int degree() const { return f_; }
    std::uint64_t size() const { return size_; }
    // Constant-first coefficients of m without the leading 1.
    const std::vector<std::uint32_t>& modulus() const { return mod_; }

    FqExt zero() const;
    FqExt one() const;
    FqExt from_int(std::int64_t v) const;
    FqExt from_fq(const Fq& a) const;
    FqExt from_coeffs(const std::vector<std::uint32_t>& low_first) const;
    // The class of x.
    FqExt generator() const;
    // Bijection [0, q^f) -> F_{q^f}, base-q digits as coefficients.
    FqExt element(std::uint64_t index) const;

private:
    ExtField(std::uint32_t q, std::vector<std::uint32_t> mod);
    std::uint32_t q_;
    int f_;
    std::uint64_t size_;
    std::vector<std::uint32_t> mod_;
};

class FqExt {
public:
    FqExt() = default;

    const ExtField& field() const { return *field_; }
    const ExtField* field_ptr() const { return field_; }
    std::uint32_t q() const { return field_->q(); }
    int degree() const { return field_->degree(); }
    std::uint32_t coeff(int i) const { return c_[static_cast<std::size_t>(i)]; }
    std::vector<std::uint32_t> coeffs() const;
    std::uint64_t index() const;

    bool is_zero() const;
    bool is_one() const;
    // True when the element lies in the prime field.
    bool in_prime_field() const;
    Fq to_fq() const;

    FqExt inverse() const;
    FqExt pow(std::int64_t e) const;
    FqExt frobenius() const;
    // Absolute trace to F_p.
    Fq trace() const;
    bool is_square() const;
    std::optional<FqExt> sqrt() const;

    FqExt& operator+=(const FqExt& o);
    FqExt& operator-=(const FqExt& o);
    FqExt& operator*=(const FqExt& o);
    FqExt& operator/=(const FqExt& o);
    FqExt operator-() const;
    friend FqExt operator+(FqExt a, const FqExt& b) { return a += b; }
    friend FqExt operator-(FqExt a, const FqExt& b) { return a -= b; }
    friend FqExt operator*(FqExt a, const FqExt& b) { return a *= b; }
    friend FqExt operator/(FqExt a, const FqExt& b) { return a /= b; }
    FqExt& operator*=(std::int64_t k);
    friend FqExt operator*(FqExt a, std::int64_t k) { return a *= k; }
    friend bool operator==(const FqExt& a, const FqExt& b) { return a.field_ == b.field_ && a.c_ == b.c_; }
    friend bool operator<(const FqExt& a, const FqExt& b) { return a.index() < b.index(); }

    // Decimal for f = 1, "[c0,c1,...]" otherwise.
    std::string str() const;

private:
    friend class ExtField;
    void check_same(const FqExt& o) const;
    const ExtField* field_ = nullptr;
    std::array<std::uint16_t, kMaxExtDegree> c_{};
};

// Element of Z[zeta_p]. Stored as a length-p vector reduced mod x^p - 1, so
// multiplying by a power of zeta is a rotation; the canonical form has the
// top coefficient zero, which leaves the p-1 coordinates on 1, x, ..., x^{p-2}.
class CycInt {
public:
    CycInt() = default;
    CycInt(std::uint32_t p, std::int64_t value);
    static CycInt zeta_pow(std::uint32_t p, std::int64_t k);
    static CycInt from_coeffs(std::uint32_t p, const std::vector<std::int64_t>& low_first);

    std::uint32_t p() const { return p_; }
    // The p-1 canonical coordinates.
    std::vector<std::int64_t> coeffs() const;
    bool is_zero() const;
    bool is_integer() const;
    std::int64_t integer_value() const;
    std::complex<double> to_complex() const;

    CycInt& operator+=(const CycInt& o);
    CycInt& operator-=(const CycInt& o);
    CycInt& operator*=(const CycInt& o);
    CycInt& operator*=(std::int64_t k);
    CycInt operator-() const;
    CycInt times_zeta(std::int64_t k) const;
    // Exact division by an integer; throws if some coordinate is not divisible.
    CycInt div_exact(std::int64_t k) const;
    friend CycInt operator+(CycInt a, const CycInt& b) { return a += b; }
    friend CycInt operator-(CycInt a, const CycInt& b) { return a -= b; }
    friend CycInt operator*(CycInt a, const CycInt& b) { return a *= b; }
    friend CycInt operator*(CycInt a, std::int64_t k) { return a *= k; }
    friend bool operator==(const CycInt& a, const CycInt& b);

    std::string str() const;

private:
    void canonicalize();
    void check_same(const CycInt& o) const;
    std::uint32_t p_ = 0;
    std::vector<std::int64_t> c_;
};

// psi(a) = zeta_p^{Tr(a)}.
CycInt char_psi(const FqExt& a);
CycInt char_psi(const Fq& a);

} // namespace orbvol
