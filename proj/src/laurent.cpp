#include "orbvol/laurent.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>

namespace orbvol {

namespace {

std::int64_t sat_add(std::int64_t a, std::int64_t b) {
    if (a == LaurentNumber::kExact || b == LaurentNumber::kExact) return LaurentNumber::kExact;
    return a + b;
}

void check_tame(const ExtField& field, int e) {
    if (e < 1) throw PreconditionError("ramification index must be positive");
    if (e % static_cast<int>(field.p()) == 0)
        throw PreconditionError("wild ramification: e = " + std::to_string(e) + " divisible by p = " + std::to_string(field.p()));
}

} // namespace

LaurentNumber LaurentNumber::zero(const ExtField& field, int e) {
    check_tame(field, e);
    LaurentNumber x;
    x.field_ = &field;
    x.e_ = e;
    return x;
}

LaurentNumber LaurentNumber::from_int(const ExtField& field, std::int64_t v, int e) {
    return constant(field.from_int(v), e);
}

LaurentNumber LaurentNumber::constant(const FqExt& c, int e) { return monomial(c, 0, e); }

LaurentNumber LaurentNumber::monomial(const FqExt& c, std::int64_t k, int e) {
    LaurentNumber x = zero(c.field(), e);
    x.start_ = k;
    x.coeffs_.push_back(c);
    x.normalize();
    return x;
}

LaurentNumber LaurentNumber::from_coeffs(const ExtField& field, int e, std::int64_t start, std::vector<FqExt> coeffs,
                                         std::int64_t prec) {
    LaurentNumber x = zero(field, e);
    for (const auto& c : coeffs)
        if (c.field_ptr() != &field) throw FieldMismatch("coefficient from a different field");
    x.start_ = start;
    x.coeffs_ = std::move(coeffs);
    x.prec_ = prec;
    if (prec != kExact && static_cast<std::int64_t>(x.coeffs_.size()) > prec - start)
        x.coeffs_.resize(static_cast<std::size_t>(std::max<std::int64_t>(0, prec - start)), field.zero());
    x.normalize();
    return x;
}

LaurentNumber LaurentNumber::from_ints(std::uint32_t q, std::int64_t start, const std::vector<std::int64_t>& coeffs,
                                       std::int64_t prec) {
    const ExtField& field = ExtField::get(q, 1);
    std::vector<FqExt> c;
    c.reserve(coeffs.size());
    for (auto v : coeffs) c.push_back(field.from_int(v));
    return from_coeffs(field, 1, start, std::move(c), prec);
}

void LaurentNumber::normalize() {
    auto first = std::find_if(coeffs_.begin(), coeffs_.end(), [](const FqExt& c) { return !c.is_zero(); });
    start_ += first - coeffs_.begin();
    coeffs_.erase(coeffs_.begin(), first);
    if (prec_ == kExact) {
        while (!coeffs_.empty() && coeffs_.back().is_zero()) coeffs_.pop_back();
        if (coeffs_.empty()) start_ = 0;
        return;
    }
    if (coeffs_.empty() || start_ >= prec_) {
        coeffs_.clear();
        start_ = prec_;
        return;
    }
    coeffs_.resize(static_cast<std::size_t>(prec_ - start_), field_->zero());
}

ZeroState LaurentNumber::zero_state() const {
    if (!coeffs_.empty()) return ZeroState::Nonzero;
    return prec_ == kExact ? ZeroState::Zero : ZeroState::Indistinguishable;
}

bool LaurentNumber::is_monomial() const { return is_exact() && coeffs_.size() == 1; }

std::optional<std::int64_t> LaurentNumber::ord_s() const {
    if (coeffs_.empty()) return std::nullopt;
    return start_;
}

std::optional<Rational> LaurentNumber::ord() const {
    if (coeffs_.empty()) return std::nullopt;
    return Rational(start_, e_);
}

Rational LaurentNumber::ord_lower_bound() const {
    if (zero_state() == ZeroState::Zero) throw PreconditionError("ord_lower_bound of exact zero");
    return Rational(start_, e_);
}

FqExt LaurentNumber::ac(Uniformizer u) const {
    switch (zero_state()) {
    case ZeroState::Zero:
        return field_->zero();
    case ZeroState::Indistinguishable:
        throw PrecisionExhausted("ac: value indistinguishable from zero at precision " + std::to_string(prec_));
    case ZeroState::Nonzero:
        break;
    }
    FqExt lead = coeffs_.front();
    if (u.scale % q() == 1 % q()) return lead;
    if (e_ != 1) throw PreconditionError("rescaled uniformizer only supported for e = 1");
    return lead * field_->from_int(u.scale).pow(-start_);
}

FqExt LaurentNumber::res(const Rational& i, Uniformizer u) const {
    switch (zero_state()) {
    case ZeroState::Zero:
        return field_->zero();
    case ZeroState::Nonzero:
        return Rational(start_, e_) == i ? ac(u) : field_->zero();
    case ZeroState::Indistinguishable:
        break;
    }
    if (i < Rational(prec_, e_)) return field_->zero();
    throw PrecisionExhausted("res_" + to_string(i) + ": index outside the precision window");
}

FqExt LaurentNumber::coeff_s(std::int64_t k) const {
    if (k >= prec_) throw PrecisionExhausted("coefficient beyond the stored precision");
    if (k < start_) return field_->zero();
    auto idx = static_cast<std::size_t>(k - start_);
    return idx < coeffs_.size() ? coeffs_[idx] : field_->zero();
}

LaurentNumber LaurentNumber::truncated(std::int64_t prec_s) const {
    if (prec_s >= prec_) return *this;
    LaurentNumber x = *this;
    x.prec_ = prec_s;
    if (x.coeffs_.empty()) {
        x.start_ = prec_s;
        x.normalize();
        return x;
    }
    x.coeffs_.resize(static_cast<std::size_t>(std::max<std::int64_t>(0, prec_s - start_)), field_->zero());
    x.normalize();
    return x;
}

LaurentNumber LaurentNumber::base_change(int e_new) const {
    if (e_new % e_ != 0) throw PreconditionError("base change needs e | e'");
    if (e_new == e_) return *this;
    check_tame(*field_, e_new);
    const std::int64_t k = e_new / e_;
    LaurentNumber x = zero(*field_, e_new);
    x.prec_ = prec_ == kExact ? kExact : prec_ * k;
    x.start_ = start_ * k;
    if (!coeffs_.empty()) {
        x.coeffs_.assign((coeffs_.size() - 1) * static_cast<std::size_t>(k) + 1, field_->zero());
        for (std::size_t i = 0; i < coeffs_.size(); ++i) x.coeffs_[i * static_cast<std::size_t>(k)] = coeffs_[i];
    }
    x.normalize();
    return x;
}

LaurentNumber LaurentNumber::extend_field(const ExtField& target) const {
    if (field_ == &target) return *this;
    if (field_->degree() != 1 || field_->q() != target.q())
        throw FieldMismatch("cannot embed F_{q^" + std::to_string(field_->degree()) + "} into the requested field");
    LaurentNumber x = *this;
    x.field_ = &target;
    for (auto& c : x.coeffs_) c = target.from_int(c.coeff(0));
    return x;
}

void align(LaurentNumber& a, LaurentNumber& b) {
    if (!a.field_ || !b.field_) throw PreconditionError("uninitialized Laurent number");
    if (a.field_ != b.field_) {
        if (a.field_->degree() == 1 && a.q() == b.q())
            a = a.extend_field(*b.field_);
        else if (b.field_->degree() == 1 && a.q() == b.q())
            b = b.extend_field(*a.field_);
        else
            throw FieldMismatch("Laurent numbers over incompatible residue fields");
    }
    if (a.e_ != b.e_) {
        const int e = std::lcm(a.e_, b.e_);
        a = a.base_change(e);
        b = b.base_change(e);
    }
}

LaurentNumber LaurentNumber::operator-() const {
    LaurentNumber x = *this;
    for (auto& c : x.coeffs_) c = -c;
    return x;
}

LaurentNumber& LaurentNumber::operator+=(const LaurentNumber& o) {
    LaurentNumber b = o;
    align(*this, b);
    if (b.zero_state() == ZeroState::Zero) return *this;
    if (zero_state() == ZeroState::Zero) return *this = b;
    const std::int64_t prec = std::min(prec_, b.prec_);
    const std::int64_t lo = std::min(start_, b.start_);
    std::int64_t hi;
    if (prec == kExact)
        hi = std::max(start_ + static_cast<std::int64_t>(coeffs_.size()), b.start_ + static_cast<std::int64_t>(b.coeffs_.size()));
    else
        hi = prec;
    std::vector<FqExt> out;
    if (hi > lo) {
        out.assign(static_cast<std::size_t>(hi - lo), field_->zero());
        auto add_in = [&](const LaurentNumber& x) {
            for (std::size_t i = 0; i < x.coeffs_.size(); ++i) {
                std::int64_t k = x.start_ + static_cast<std::int64_t>(i);
                if (k >= hi) break;
                out[static_cast<std::size_t>(k - lo)] += x.coeffs_[i];
            }
        };
        add_in(*this);
        add_in(b);
    }
    start_ = lo;
    coeffs_ = std::move(out);
    prec_ = prec;
    normalize();
    return *this;
}

LaurentNumber& LaurentNumber::operator-=(const LaurentNumber& o) { return *this += -o; }

LaurentNumber& LaurentNumber::operator*=(const LaurentNumber& o) {
    LaurentNumber b = o;
    align(*this, b);
    if (zero_state() == ZeroState::Zero || b.zero_state() == ZeroState::Zero) return *this = zero(*field_, e_);
    const std::int64_t prec = std::min(sat_add(prec_, b.start_), sat_add(b.prec_, start_));
    const std::int64_t lo = start_ + b.start_;
    std::vector<FqExt> out;
    if (!coeffs_.empty() && !b.coeffs_.empty()) {
        std::size_t len = coeffs_.size() + b.coeffs_.size() - 1;
        if (prec != kExact) len = static_cast<std::size_t>(std::clamp<std::int64_t>(prec - lo, 0, static_cast<std::int64_t>(len)));
        out.assign(len, field_->zero());
        for (std::size_t i = 0; i < coeffs_.size() && i < len; ++i) {
            if (coeffs_[i].is_zero()) continue;
            for (std::size_t j = 0; j < b.coeffs_.size() && i + j < len; ++j) out[i + j] += coeffs_[i] * b.coeffs_[j];
        }
    }
    start_ = lo;
    coeffs_ = std::move(out);
    prec_ = prec;
    normalize();
    return *this;
}

LaurentNumber& LaurentNumber::operator/=(const LaurentNumber& o) { return *this = divide(*this, o, std::nullopt); }

LaurentNumber LaurentNumber::times(std::int64_t k) const { return times(field_->from_int(k)); }

LaurentNumber LaurentNumber::times(const FqExt& c) const {
    LaurentNumber x = *this;
    FqExt cc = c;
    if (cc.field_ptr() != field_) {
        if (cc.degree() != 1 || cc.q() != q()) throw FieldMismatch("scalar from a different field");
        cc = field_->from_int(cc.coeff(0));
    }
    if (cc.is_zero()) return zero(*field_, e_);
    for (auto& v : x.coeffs_) v *= cc;
    return x;
}

LaurentNumber LaurentNumber::shifted(std::int64_t k) const {
    LaurentNumber x = *this;
    x.start_ += k;
    if (x.prec_ != kExact) x.prec_ += k;
    if (x.zero_state() == ZeroState::Zero) x.start_ = 0;
    return x;
}

LaurentNumber LaurentNumber::inverse(std::optional<std::int64_t> abs_prec) const {
    if (zero_state() == ZeroState::Zero) throw PreconditionError("division by zero");
    if (zero_state() == ZeroState::Indistinguishable)
        throw PrecisionExhausted("division by a value indistinguishable from zero");
    const std::int64_t v = start_;
    if (is_monomial()) return monomial(coeffs_.front().inverse(), -v, e_);
    std::int64_t res_prec;
    if (is_exact()) {
        if (!abs_prec) throw PrecisionExhausted("inverse of an exact non-monomial needs an explicit precision");
        res_prec = *abs_prec;
    } else {
        res_prec = prec_ - 2 * v;
        if (abs_prec) res_prec = std::min(res_prec, *abs_prec);
    }
    const std::int64_t n = res_prec + v;
    LaurentNumber y = zero(*field_, e_);
    y.prec_ = res_prec;
    y.start_ = -v;
    if (n > 0) {
        const FqExt inv0 = coeffs_.front().inverse();
        auto a = [&](std::int64_t j) {
            return static_cast<std::size_t>(j) < coeffs_.size() ? coeffs_[static_cast<std::size_t>(j)] : field_->zero();
        };
        std::vector<FqExt> b(static_cast<std::size_t>(n), field_->zero());
        b[0] = inv0;
        for (std::int64_t k = 1; k < n; ++k) {
            FqExt acc = field_->zero();
            const std::int64_t jmax = std::min<std::int64_t>(k, static_cast<std::int64_t>(coeffs_.size()) - 1);
            for (std::int64_t j = 1; j <= jmax; ++j) acc += a(j) * b[static_cast<std::size_t>(k - j)];
            b[static_cast<std::size_t>(k)] = -(acc * inv0);
        }
        y.coeffs_ = std::move(b);
    }
    y.normalize();
    return y;
}

LaurentNumber divide(const LaurentNumber& x, const LaurentNumber& y, std::optional<std::int64_t> abs_prec) {
    if (y.zero_state() == ZeroState::Zero) throw PreconditionError("division by zero");
    if (y.zero_state() == ZeroState::Indistinguishable)
        throw PrecisionExhausted("division by a value indistinguishable from zero");
    if (x.zero_state() == ZeroState::Zero) return LaurentNumber::zero(x.field(), std::max(x.e(), y.e()));
    if (y.is_monomial()) {
        LaurentNumber r = x * y.inverse();
        return abs_prec ? r.truncated(*abs_prec) : r;
    }
    if (y.is_exact() && x.is_exact() && !abs_prec)
        throw PrecisionExhausted("exact division by a non-monomial needs an explicit precision");
    // Precision needed on 1/y so that the product keeps x's window.
    std::optional<std::int64_t> cap;
    if (abs_prec) {
        cap = *abs_prec - x.start();
    }
    if (!x.is_exact()) {
        const std::int64_t need = x.precision() - y.start() - x.start();
        cap = cap ? std::min(*cap, need) : need;
    }
    LaurentNumber r = x * y.inverse(cap);
    return abs_prec ? r.truncated(*abs_prec) : r;
}

LaurentNumber LaurentNumber::pow(std::int64_t n, std::optional<std::int64_t> abs_prec) const {
    if (n < 0) return inverse(abs_prec ? std::optional<std::int64_t>(*abs_prec) : std::nullopt).pow(-n, abs_prec);
    LaurentNumber result = from_int(*field_, 1, e_), b = *this;
    while (n > 0) {
        if (n & 1) result *= b;
        n >>= 1;
        if (n) b *= b;
        if (abs_prec) {
            result = result.truncated(*abs_prec);
            b = b.truncated(*abs_prec);
        }
    }
    return result;
}

std::optional<LaurentNumber> LaurentNumber::sqrt(std::optional<std::int64_t> abs_prec) const {
    if (zero_state() == ZeroState::Zero) return *this;
    if (zero_state() == ZeroState::Indistinguishable)
        throw PrecisionExhausted("sqrt of a value indistinguishable from zero");
    if (q() == 2) throw PreconditionError("sqrt needs odd characteristic");
    const std::int64_t v = start_;
    if (v % 2 != 0) return std::nullopt;
    auto root0 = coeffs_.front().sqrt();
    if (!root0) return std::nullopt;
    if (is_monomial()) return monomial(*root0, v / 2, e_);
    std::int64_t res_prec;
    if (is_exact()) {
        if (!abs_prec) throw PrecisionExhausted("sqrt of an exact non-monomial needs an explicit precision");
        res_prec = *abs_prec;
    } else {
        res_prec = v / 2 + (prec_ - v);
        if (abs_prec) res_prec = std::min(res_prec, *abs_prec);
    }
    const std::int64_t n = res_prec - v / 2;
    LaurentNumber y = zero(*field_, e_);
    y.prec_ = res_prec;
    y.start_ = v / 2;
    if (n > 0) {
        auto a = [&](std::int64_t j) {
            return static_cast<std::size_t>(j) < coeffs_.size() ? coeffs_[static_cast<std::size_t>(j)] : field_->zero();
        };
        const FqExt inv2y0 = (*root0 * 2).inverse();
        std::vector<FqExt> b(static_cast<std::size_t>(n), field_->zero());
        b[0] = *root0;
        for (std::int64_t k = 1; k < n; ++k) {
            FqExt acc = a(k);
            for (std::int64_t j = 1; j < k; ++j) acc -= b[static_cast<std::size_t>(j)] * b[static_cast<std::size_t>(k - j)];
            b[static_cast<std::size_t>(k)] = acc * inv2y0;
        }
        y.coeffs_ = std::move(b);
    }
    y.normalize();
    return y;
}

bool LaurentNumber::congruent(const LaurentNumber& o) const {
    LaurentNumber a = *this, b = o;
    align(a, b);
    if (a.is_exact() && b.is_exact()) return a == b;
    const std::int64_t window = std::min(a.prec_, b.prec_);
    const std::int64_t lo = std::min(a.start_, b.start_);
    for (std::int64_t k = lo; k < window; ++k)
        if (!(a.coeff_s(k) == b.coeff_s(k))) return false;
    return true;
}

bool operator==(const LaurentNumber& a, const LaurentNumber& b) {
    return a.field_ == b.field_ && a.e_ == b.e_ && a.start_ == b.start_ && a.prec_ == b.prec_ && a.coeffs_ == b.coeffs_;
}

std::string LaurentNumber::str() const {
    std::ostringstream os;
    os << "t^" << start_ << " * [";
    for (std::size_t i = 0; i < coeffs_.size(); ++i) os << (i ? ", " : "") << coeffs_[i].str();
    os << "] @";
    if (prec_ == kExact)
        os << "inf";
    else
        os << prec_;
    os << " (e=" << e_ << ", f=" << field_->degree() << ")";
    return os.str();
}

std::string LaurentNumber::pretty() const {
    const char* var = e_ == 1 ? "t" : "s";
    std::ostringstream os;
    bool first = true;
    for (std::size_t i = 0; i < coeffs_.size(); ++i) {
        const FqExt& c = coeffs_[i];
        if (c.is_zero()) continue;
        const std::int64_t k = start_ + static_cast<std::int64_t>(i);
        std::string mag;
        bool negative = false;
        if (c.degree() == 1) {
            std::int64_t sv = Fq(c.q(), c.coeff(0)).signed_value();
            negative = sv < 0;
            mag = std::to_string(negative ? -sv : sv);
        } else {
            mag = c.str();
        }
        if (first)
            os << (negative ? "-" : "");
        else
            os << (negative ? " - " : " + ");
        first = false;
        if (k == 0) {
            os << mag;
        } else {
            if (mag != "1") os << mag << "*";
            os << var;
            if (k != 1) os << "^" << k;
        }
    }
    if (first) os << "0";
    if (prec_ != kExact) os << " + O(" << var << "^" << prec_ << ")";
    return os.str();
}

} // namespace orbvol
