#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <string>
#include <string_view>

namespace orbvol {

using Rational = boost::multiprecision::cpp_rational;
using BigInt = boost::multiprecision::cpp_int;

// Accepts "a", "-a", "a/b".
Rational parse_rational(std::string_view text);
std::string to_string(const Rational& r);

BigInt numer(const Rational& r);
BigInt denom(const Rational& r);

// Exact conversions; throw PreconditionError when the value does not fit.
std::int64_t to_int64(const BigInt& v);
std::int64_t to_int64(const Rational& r);

std::int64_t floor_div(std::int64_t a, std::int64_t b);
std::int64_t ceil_div(std::int64_t a, std::int64_t b);
Rational floor(const Rational& r);
Rational ceil(const Rational& r);

Rational pow(const Rational& base, std::int64_t exp);

// coefficient * q^exponent, kept exact when the exponent is not an integer.
// Canonical form: exponent in [0, 1), the integral part folded into the coefficient.
class NormalizedValue {
public:
    NormalizedValue() = default;
    NormalizedValue(Rational coefficient, Rational exponent, std::uint32_t q);

    const Rational& coefficient() const { return coeff_; }
    const Rational& exponent() const { return exp_; }
    std::uint32_t q() const { return q_; }
    bool is_rational() const { return exp_ == 0; }
    double to_double() const;
    std::string str() const;

    friend NormalizedValue operator*(const NormalizedValue& a, const NormalizedValue& b);
    friend NormalizedValue operator/(const NormalizedValue& a, const NormalizedValue& b);
    friend bool operator==(const NormalizedValue& a, const NormalizedValue& b) = default;

private:
    Rational coeff_{0};
    Rational exp_{0};
    std::uint32_t q_ = 0;
};

} // namespace orbvol
