#include "orbvol/rational.hpp"

#include "orbvol/errors.hpp"

#include <cctype>
#include <cmath>
#include <limits>

namespace orbvol {

namespace mp = boost::multiprecision;

Rational parse_rational(std::string_view text) {
    auto trim = [](std::string_view s) {
        while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
        while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
        return s;
    };
    auto parse_int = [&](std::string_view s) {
        s = trim(s);
        bool neg = false;
        if (!s.empty() && (s.front() == '-' || s.front() == '+')) {
            neg = s.front() == '-';
            s.remove_prefix(1);
        }
        if (s.empty()) throw PreconditionError("malformed rational '" + std::string(text) + "'");
        BigInt v = 0;
        for (char ch : s) {
            if (ch < '0' || ch > '9') throw PreconditionError("malformed rational '" + std::string(text) + "'");
            v = v * 10 + (ch - '0');
        }
        return neg ? BigInt(-v) : v;
    };
    auto slash = text.find('/');
    if (slash == std::string_view::npos) return Rational(parse_int(text));
    BigInt num = parse_int(text.substr(0, slash));
    BigInt den = parse_int(text.substr(slash + 1));
    if (den == 0) throw PreconditionError("zero denominator in '" + std::string(text) + "'");
    return Rational(num, den);
}

std::string to_string(const Rational& r) {
    if (denom(r) == 1) return numer(r).str();
    return numer(r).str() + "/" + denom(r).str();
}

BigInt numer(const Rational& r) { return mp::numerator(r); }
BigInt denom(const Rational& r) { return mp::denominator(r); }

std::int64_t to_int64(const BigInt& v) {
    if (v > std::numeric_limits<std::int64_t>::max() || v < std::numeric_limits<std::int64_t>::min())
        throw PreconditionError("integer out of range: " + v.str());
    return v.convert_to<std::int64_t>();
}

std::int64_t to_int64(const Rational& r) {
    if (denom(r) != 1) throw PreconditionError("expected an integer, got " + to_string(r));
    return to_int64(numer(r));
}

std::int64_t floor_div(std::int64_t a, std::int64_t b) {
    std::int64_t q = a / b;
    if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
    return q;
}

std::int64_t ceil_div(std::int64_t a, std::int64_t b) { return -floor_div(-a, b); }

Rational floor(const Rational& r) {
    BigInt n = numer(r), d = denom(r);
    BigInt q = n / d;
    if (n % d != 0 && n < 0) q -= 1;
    return Rational(q);
}

Rational ceil(const Rational& r) { return -floor(Rational(-r)); }

Rational pow(const Rational& base, std::int64_t exp) {
    if (exp < 0) {
        if (base == 0) throw PreconditionError("zero to a negative power");
        return pow(Rational(1) / base, -exp);
    }
    Rational result = 1, b = base;
    while (exp > 0) {
        if (exp & 1) result *= b;
        b *= b;
        exp >>= 1;
    }
    return result;
}

NormalizedValue::NormalizedValue(Rational coefficient, Rational exponent, std::uint32_t q)
    : coeff_(std::move(coefficient)), exp_(std::move(exponent)), q_(q) {
    if (coeff_ == 0) {
        exp_ = 0;
    } else {
        Rational whole = orbvol::floor(exp_);
        if (whole != 0) {
            if (q_ < 2) throw PreconditionError("NormalizedValue needs q >= 2");
            coeff_ *= pow(Rational(q_), to_int64(whole));
            exp_ -= whole;
        }
    }
    if (exp_ == 0) q_ = 0;
}

double NormalizedValue::to_double() const {
    double c = coeff_.convert_to<double>();
    if (exp_ == 0) return c;
    return c * std::pow(static_cast<double>(q_), exp_.convert_to<double>());
}

std::string NormalizedValue::str() const {
    if (exp_ == 0) return to_string(coeff_);
    return to_string(coeff_) + "*" + std::to_string(q_) + "^(" + to_string(exp_) + ")";
}

static std::uint32_t common_q(const NormalizedValue& a, const NormalizedValue& b) {
    if (a.q() != 0 && b.q() != 0 && a.q() != b.q()) throw PreconditionError("NormalizedValue: mixed q");
    return a.q() != 0 ? a.q() : b.q();
}

NormalizedValue operator*(const NormalizedValue& a, const NormalizedValue& b) {
    return NormalizedValue(a.coeff_ * b.coeff_, a.exp_ + b.exp_, common_q(a, b));
}

NormalizedValue operator/(const NormalizedValue& a, const NormalizedValue& b) {
    if (b.coeff_ == 0) throw PreconditionError("NormalizedValue: division by zero");
    return NormalizedValue(a.coeff_ / b.coeff_, a.exp_ - b.exp_, common_q(a, b));
}

} // namespace orbvol
