#include "orbvol/fields.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>
#include <sstream>

namespace orbvol {

bool is_prime(std::uint32_t n) {
    if (n < 2) return false;
    for (std::uint32_t d = 2; d * d <= n; ++d)
        if (n % d == 0) return false;
    return true;
}

void require_prime(std::uint32_t q) {
    if (!is_prime(q)) throw PreconditionError("q = " + std::to_string(q) + " is not prime");
    if (q > 65521) throw PreconditionError("q = " + std::to_string(q) + " is too large");
}

// ---- Fq ----

Fq::Fq(std::uint32_t q, std::int64_t value) : q_(q) {
    if (q < 2) throw PreconditionError("Fq: modulus must be a prime");
    std::int64_t m = value % static_cast<std::int64_t>(q);
    if (m < 0) m += q;
    v_ = static_cast<std::uint32_t>(m);
}

std::int64_t Fq::signed_value() const {
    std::int64_t v = v_;
    if (2 * v > static_cast<std::int64_t>(q_)) v -= q_;
    return v;
}

void Fq::check_same(const Fq& o) const {
    if (q_ != o.q_) throw FieldMismatch("F_q arithmetic with moduli " + std::to_string(q_) + " and " + std::to_string(o.q_));
}

Fq& Fq::operator+=(const Fq& o) {
    check_same(o);
    v_ = (v_ + o.v_) % q_;
    return *this;
}

Fq& Fq::operator-=(const Fq& o) {
    check_same(o);
    v_ = (v_ + q_ - o.v_) % q_;
    return *this;
}

Fq& Fq::operator*=(const Fq& o) {
    check_same(o);
    v_ = static_cast<std::uint32_t>((static_cast<std::uint64_t>(v_) * o.v_) % q_);
    return *this;
}

Fq& Fq::operator/=(const Fq& o) {
    check_same(o);
    return *this *= o.inverse();
}

Fq Fq::pow(std::int64_t e) const {
    if (e < 0) return inverse().pow(-e);
    std::uint64_t result = 1 % q_, b = v_;
    while (e > 0) {
        if (e & 1) result = result * b % q_;
        b = b * b % q_;
        e >>= 1;
    }
    return Fq(q_, static_cast<std::int64_t>(result));
}

Fq Fq::inverse() const {
    if (v_ == 0) throw PreconditionError("division by zero in F_" + std::to_string(q_));
    return pow(q_ - 2);
}

bool Fq::is_square() const {
    if (v_ == 0 || q_ == 2) return true;
    return pow((q_ - 1) / 2).v_ == 1;
}

std::optional<Fq> Fq::sqrt() const {
    auto r = ExtField::get(q_, 1).from_int(v_).sqrt();
    if (!r) return std::nullopt;
    return r->to_fq();
}

// ---- dense polynomials over F_q, used only for modulus bookkeeping ----

namespace {

using Dense = std::vector<std::uint32_t>; // constant first

void trim(Dense& a) {
    while (!a.empty() && a.back() == 0) a.pop_back();
}

Dense poly_mod(Dense a, const Dense& m, std::uint32_t q) {
    trim(a);
    Dense mm = m;
    trim(mm);
    const std::size_t dm = mm.size() - 1;
    const std::uint64_t inv_lead = Fq(q, mm.back()).inverse().value();
    while (a.size() > dm) {
        std::uint64_t factor = a.back() * inv_lead % q;
        std::size_t shift = a.size() - 1 - dm;
        for (std::size_t i = 0; i <= dm; ++i)
            a[shift + i] = static_cast<std::uint32_t>((a[shift + i] + q - factor * mm[i] % q) % q);
        trim(a);
    }
    return a;
}

Dense poly_mulmod(const Dense& a, const Dense& b, const Dense& m, std::uint32_t q) {
    if (a.empty() || b.empty()) return {};
    Dense c(a.size() + b.size() - 1, 0);
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < b.size(); ++j)
            c[i + j] = static_cast<std::uint32_t>((c[i + j] + static_cast<std::uint64_t>(a[i]) * b[j]) % q);
    return poly_mod(std::move(c), m, q);
}

Dense poly_powmod(Dense base, std::uint64_t e, const Dense& m, std::uint32_t q) {
    Dense result{1};
    base = poly_mod(std::move(base), m, q);
    while (e > 0) {
        if (e & 1) result = poly_mulmod(result, base, m, q);
        base = poly_mulmod(base, base, m, q);
        e >>= 1;
    }
    return result;
}

Dense poly_gcd(Dense a, Dense b, std::uint32_t q) {
    trim(a);
    trim(b);
    while (!b.empty()) {
        Dense r = poly_mod(a, b, q);
        a = std::move(b);
        b = std::move(r);
    }
    return a;
}

// Irreducibility of a monic m of degree f: no factor of degree <= f/2,
// i.e. gcd(x^{q^i} - x, m) = 1 for i = 1..f/2.
bool monic_irreducible(const Dense& m, std::uint32_t q) {
    const int f = static_cast<int>(m.size()) - 1;
    if (f <= 0) return false;
    if (f == 1) return true;
    Dense xp{0, 1};
    for (int i = 1; i <= f / 2; ++i) {
        xp = poly_powmod(xp, q, m, q);
        Dense diff = xp;
        if (diff.size() < 2) diff.resize(2, 0);
        diff[1] = (diff[1] + q - 1) % q;
        trim(diff);
        if (diff.empty()) return false;
        Dense g = poly_gcd(m, diff, q);
        if (g.size() > 1) return false;
    }
    return true;
}

std::uint64_t checked_power(std::uint32_t q, int f, std::uint64_t limit) {
    std::uint64_t n = 1;
    for (int i = 0; i < f; ++i) {
        n *= q;
        if (n > limit) throw BudgetExceeded("q^f too large");
    }
    return n;
}

// k-th monic polynomial of degree f in lexicographic order of (c0, ..., c_{f-1}).
Dense lex_monic(std::uint64_t k, std::uint32_t q, int f) {
    Dense c(static_cast<std::size_t>(f) + 1, 0);
    for (int i = f - 1; i >= 0; --i) {
        c[static_cast<std::size_t>(i)] = static_cast<std::uint32_t>(k % q);
        k /= q;
    }
    c[static_cast<std::size_t>(f)] = 1;
    return c;
}

std::mutex registry_mutex;
std::map<std::pair<std::uint32_t, std::vector<std::uint32_t>>, std::unique_ptr<ExtField>>& registry() {
    static std::map<std::pair<std::uint32_t, std::vector<std::uint32_t>>, std::unique_ptr<ExtField>> r;
    return r;
}
std::map<std::pair<std::uint32_t, int>, const ExtField*>& defaults() {
    static std::map<std::pair<std::uint32_t, int>, const ExtField*> d;
    return d;
}

} // namespace

// ---- ExtField ----

ExtField::ExtField(std::uint32_t q, std::vector<std::uint32_t> mod)
    : q_(q), f_(static_cast<int>(mod.size())), size_(checked_power(q, static_cast<int>(mod.size()), UINT64_MAX / 1024)),
      mod_(std::move(mod)) {}

std::vector<std::vector<std::uint32_t>> ExtField::irreducible_moduli(std::uint32_t q, int f) {
    require_prime(q);
    if (f < 1 || f > kMaxExtDegree) throw PreconditionError("extension degree out of range");
    const std::uint64_t count = checked_power(q, f, 10'000'000);
    std::vector<std::vector<std::uint32_t>> out;
    for (std::uint64_t k = 0; k < count; ++k) {
        Dense m = lex_monic(k, q, f);
        if (monic_irreducible(m, q)) {
            m.pop_back();
            out.push_back(std::move(m));
        }
    }
    return out;
}

const ExtField& ExtField::with_modulus(std::uint32_t q, const std::vector<std::uint32_t>& low_first) {
    require_prime(q);
    std::vector<std::uint32_t> mod = low_first;
    for (auto& c : mod) c %= q;
    if (mod.empty() || static_cast<int>(mod.size()) > kMaxExtDegree)
        throw PreconditionError("extension degree out of range");
    Dense full = mod;
    full.push_back(1);
    if (!monic_irreducible(full, q)) throw PreconditionError("modulus is not irreducible over F_" + std::to_string(q));
    std::lock_guard lock(registry_mutex);
    auto key = std::make_pair(q, mod);
    auto& slot = registry()[key];
    if (!slot) slot.reset(new ExtField(q, mod));
    return *slot;
}

const ExtField& ExtField::get(std::uint32_t q, int f) {
    require_prime(q);
    if (f < 1 || f > kMaxExtDegree) throw PreconditionError("extension degree out of range");
    {
        std::lock_guard lock(registry_mutex);
        auto it = defaults().find({q, f});
        if (it != defaults().end()) return *it->second;
    }
    const std::uint64_t count = checked_power(q, f, UINT64_MAX / 1024);
    for (std::uint64_t k = 0; k < count; ++k) {
        Dense m = lex_monic(k, q, f);
        if (monic_irreducible(m, q)) {
            m.pop_back();
            const ExtField& field = with_modulus(q, m);
            std::lock_guard lock(registry_mutex);
            defaults()[{q, f}] = &field;
            return field;
        }
    }
    throw PreconditionError("no irreducible polynomial found");
}

FqExt ExtField::zero() const {
    FqExt z;
    z.field_ = this;
    return z;
}

FqExt ExtField::one() const { return from_int(1); }

FqExt ExtField::from_int(std::int64_t v) const {
    FqExt z = zero();
    z.c_[0] = static_cast<std::uint16_t>(Fq(q_, v).value());
    return z;
}

FqExt ExtField::from_fq(const Fq& a) const {
    if (a.q() != q_) throw FieldMismatch("embedding F_" + std::to_string(a.q()) + " into an extension of F_" + std::to_string(q_));
    return from_int(a.value());
}

FqExt ExtField::from_coeffs(const std::vector<std::uint32_t>& low_first) const {
    if (static_cast<int>(low_first.size()) > f_) throw PreconditionError("too many coefficients for F_{q^f}");
    FqExt z = zero();
    for (std::size_t i = 0; i < low_first.size(); ++i) z.c_[i] = static_cast<std::uint16_t>(low_first[i] % q_);
    return z;
}

FqExt ExtField::generator() const {
    if (f_ == 1) return from_int(-static_cast<std::int64_t>(mod_[0]));
    FqExt z = zero();
    z.c_[1] = 1;
    return z;
}

FqExt ExtField::element(std::uint64_t index) const {
    if (index >= size_) throw PreconditionError("element index out of range");
    FqExt z = zero();
    for (int i = 0; i < f_; ++i) {
        z.c_[static_cast<std::size_t>(i)] = static_cast<std::uint16_t>(index % q_);
        index /= q_;
    }
    return z;
}

// ---- FqExt ----

void FqExt::check_same(const FqExt& o) const {
    if (field_ != o.field_) {
        if (!field_ || !o.field_) throw FieldMismatch("uninitialized extension element");
        throw FieldMismatch("arithmetic across different extension fields");
    }
}

std::vector<std::uint32_t> FqExt::coeffs() const {
    return std::vector<std::uint32_t>(c_.begin(), c_.begin() + degree());
}

std::uint64_t FqExt::index() const {
    std::uint64_t idx = 0;
    for (int i = degree() - 1; i >= 0; --i) idx = idx * q() + c_[static_cast<std::size_t>(i)];
    return idx;
}

bool FqExt::is_zero() const {
    return std::all_of(c_.begin(), c_.end(), [](std::uint16_t v) { return v == 0; });
}

bool FqExt::is_one() const {
    if (c_[0] != 1) return false;
    return std::all_of(c_.begin() + 1, c_.end(), [](std::uint16_t v) { return v == 0; });
}

bool FqExt::in_prime_field() const {
    return std::all_of(c_.begin() + 1, c_.end(), [](std::uint16_t v) { return v == 0; });
}

Fq FqExt::to_fq() const {
    if (!in_prime_field()) throw PreconditionError("element " + str() + " is not in the prime field");
    return Fq(q(), c_[0]);
}

FqExt& FqExt::operator+=(const FqExt& o) {
    check_same(o);
    const std::uint32_t p = q();
    for (int i = 0; i < degree(); ++i) {
        auto k = static_cast<std::size_t>(i);
        c_[k] = static_cast<std::uint16_t>((c_[k] + o.c_[k]) % p);
    }
    return *this;
}

FqExt& FqExt::operator-=(const FqExt& o) {
    check_same(o);
    const std::uint32_t p = q();
    for (int i = 0; i < degree(); ++i) {
        auto k = static_cast<std::size_t>(i);
        c_[k] = static_cast<std::uint16_t>((c_[k] + p - o.c_[k]) % p);
    }
    return *this;
}

FqExt FqExt::operator-() const {
    FqExt r = field_->zero();
    r -= *this;
    return r;
}

FqExt& FqExt::operator*=(std::int64_t k) {
    const std::uint32_t p = q();
    const std::uint64_t kk = Fq(p, k).value();
    for (int i = 0; i < degree(); ++i) {
        auto j = static_cast<std::size_t>(i);
        c_[j] = static_cast<std::uint16_t>(c_[j] * kk % p);
    }
    return *this;
}

FqExt& FqExt::operator*=(const FqExt& o) {
    check_same(o);
    const std::uint32_t p = q();
    const int f = degree();
    if (f == 1) {
        c_[0] = static_cast<std::uint16_t>(static_cast<std::uint32_t>(c_[0]) * o.c_[0] % p);
        return *this;
    }
    std::array<std::uint64_t, 2 * kMaxExtDegree> prod{};
    for (int i = 0; i < f; ++i) {
        if (!c_[static_cast<std::size_t>(i)]) continue;
        for (int j = 0; j < f; ++j)
            prod[static_cast<std::size_t>(i + j)] += static_cast<std::uint64_t>(c_[static_cast<std::size_t>(i)]) * o.c_[static_cast<std::size_t>(j)];
    }
    for (auto& v : prod) v %= p;
    const auto& m = field_->modulus();
    for (int k = 2 * f - 2; k >= f; --k) {
        std::uint64_t top = prod[static_cast<std::size_t>(k)];
        if (!top) continue;
        prod[static_cast<std::size_t>(k)] = 0;
        // x^f = -sum m_i x^i
        for (int i = 0; i < f; ++i) {
            auto idx = static_cast<std::size_t>(k - f + i);
            prod[idx] = (prod[idx] + (p - m[static_cast<std::size_t>(i)]) * top) % p;
        }
    }
    for (int i = 0; i < f; ++i) c_[static_cast<std::size_t>(i)] = static_cast<std::uint16_t>(prod[static_cast<std::size_t>(i)]);
    return *this;
}

FqExt FqExt::pow(std::int64_t e) const {
    if (e < 0) return inverse().pow(-e);
    FqExt result = field_->one(), b = *this;
    while (e > 0) {
        if (e & 1) result *= b;
        b *= b;
        e >>= 1;
    }
    return result;
}

FqExt FqExt::inverse() const {
    if (is_zero()) throw PreconditionError("division by zero in F_{q^f}");
    return pow(static_cast<std::int64_t>(field_->size()) - 2);
}

FqExt& FqExt::operator/=(const FqExt& o) {
    check_same(o);
    return *this *= o.inverse();
}

FqExt FqExt::frobenius() const { return pow(q()); }

Fq FqExt::trace() const {
    FqExt sum = field_->zero(), conj = *this;
    for (int i = 0; i < degree(); ++i) {
        sum += conj;
        conj = conj.frobenius();
    }
    return sum.to_fq();
}

bool FqExt::is_square() const {
    if (is_zero() || q() == 2) return true;
    return pow(static_cast<std::int64_t>((field_->size() - 1) / 2)).is_one();
}

// Tonelli-Shanks in a field of odd order Q.
std::optional<FqExt> FqExt::sqrt() const {
    if (is_zero()) return *this;
    const std::uint64_t Q = field_->size();
    if (q() == 2) return pow(static_cast<std::int64_t>(Q / 2));
    if (!is_square()) return std::nullopt;
    std::uint64_t s = 0, odd = Q - 1;
    while (odd % 2 == 0) {
        odd /= 2;
        ++s;
    }
    FqExt z = field_->one();
    for (std::uint64_t i = 2; i < Q; ++i) {
        z = field_->element(i);
        if (!z.is_square()) break;
    }
    FqExt c = z.pow(static_cast<std::int64_t>(odd));
    FqExt x = pow(static_cast<std::int64_t>((odd + 1) / 2));
    FqExt t = pow(static_cast<std::int64_t>(odd));
    std::uint64_t m = s;
    while (!t.is_one()) {
        std::uint64_t i = 0;
        FqExt tt = t;
        while (!tt.is_one()) {
            tt *= tt;
            ++i;
        }
        FqExt b = c;
        for (std::uint64_t k = 0; k + i + 1 < m; ++k) b *= b;
        x *= b;
        c = b * b;
        t *= c;
        m = i;
    }
    return x;
}

std::string FqExt::str() const {
    if (degree() == 1) return std::to_string(c_[0]);
    std::ostringstream os;
    os << '[';
    for (int i = 0; i < degree(); ++i) os << (i ? "," : "") << c_[static_cast<std::size_t>(i)];
    os << ']';
    return os.str();
}

// ---- CycInt ----

CycInt::CycInt(std::uint32_t p, std::int64_t value) : p_(p), c_(p, 0) {
    if (p < 2) throw PreconditionError("CycInt needs a prime p");
    c_[0] = value;
}

CycInt CycInt::zeta_pow(std::uint32_t p, std::int64_t k) {
    CycInt z(p, 0);
    std::int64_t m = k % static_cast<std::int64_t>(p);
    if (m < 0) m += p;
    z.c_[static_cast<std::size_t>(m)] = 1;
    z.canonicalize();
    return z;
}

CycInt CycInt::from_coeffs(std::uint32_t p, const std::vector<std::int64_t>& low_first) {
    CycInt z(p, 0);
    for (std::size_t i = 0; i < low_first.size(); ++i) z.c_[i % p] += low_first[i];
    z.canonicalize();
    return z;
}

void CycInt::canonicalize() {
    const std::int64_t top = c_.back();
    if (top != 0)
        for (auto& v : c_) v -= top;
}

void CycInt::check_same(const CycInt& o) const {
    if (p_ != o.p_) throw FieldMismatch("cyclotomic integers of different conductors");
}

std::vector<std::int64_t> CycInt::coeffs() const { return std::vector<std::int64_t>(c_.begin(), c_.end() - 1); }

bool CycInt::is_zero() const {
    return std::all_of(c_.begin(), c_.end(), [](std::int64_t v) { return v == 0; });
}

bool CycInt::is_integer() const {
    return std::all_of(c_.begin() + 1, c_.end(), [](std::int64_t v) { return v == 0; });
}

std::int64_t CycInt::integer_value() const {
    if (!is_integer()) throw PreconditionError("cyclotomic integer " + str() + " is not rational");
    return c_[0];
}

std::complex<double> CycInt::to_complex() const {
    std::complex<double> z = 0;
    for (std::size_t k = 0; k < c_.size(); ++k)
        z += static_cast<double>(c_[k]) * std::polar(1.0, 2.0 * std::numbers::pi * static_cast<double>(k) / p_);
    return z;
}

CycInt& CycInt::operator+=(const CycInt& o) {
    check_same(o);
    for (std::size_t i = 0; i < c_.size(); ++i) c_[i] += o.c_[i];
    canonicalize();
    return *this;
}

CycInt& CycInt::operator-=(const CycInt& o) {
    check_same(o);
    for (std::size_t i = 0; i < c_.size(); ++i) c_[i] -= o.c_[i];
    canonicalize();
    return *this;
}

CycInt& CycInt::operator*=(const CycInt& o) {
    check_same(o);
    std::vector<std::int64_t> out(p_, 0);
    for (std::size_t i = 0; i < p_; ++i) {
        if (!c_[i]) continue;
        for (std::size_t j = 0; j < p_; ++j) out[(i + j) % p_] += c_[i] * o.c_[j];
    }
    c_ = std::move(out);
    canonicalize();
    return *this;
}

CycInt& CycInt::operator*=(std::int64_t k) {
    for (auto& v : c_) v *= k;
    return *this;
}

CycInt CycInt::operator-() const {
    CycInt r = *this;
    for (auto& v : r.c_) v = -v;
    return r;
}

CycInt CycInt::times_zeta(std::int64_t k) const {
    CycInt r(p_, 0);
    std::int64_t m = k % static_cast<std::int64_t>(p_);
    if (m < 0) m += p_;
    for (std::size_t i = 0; i < p_; ++i) r.c_[(i + static_cast<std::size_t>(m)) % p_] = c_[i];
    r.canonicalize();
    return r;
}

CycInt CycInt::div_exact(std::int64_t k) const {
    if (k == 0) throw PreconditionError("CycInt division by zero");
    CycInt r = *this;
    for (auto& v : r.c_) {
        if (v % k != 0) throw PreconditionError("CycInt " + str() + " not divisible by " + std::to_string(k));
        v /= k;
    }
    return r;
}

bool operator==(const CycInt& a, const CycInt& b) { return a.p_ == b.p_ && a.c_ == b.c_; }

std::string CycInt::str() const {
    std::ostringstream os;
    os << '[';
    for (std::size_t i = 0; i + 1 < c_.size(); ++i) os << (i ? "," : "") << c_[i];
    os << ']';
    return os.str();
}

CycInt char_psi(const FqExt& a) { return CycInt::zeta_pow(a.q(), a.trace().value()); }

CycInt char_psi(const Fq& a) { return CycInt::zeta_pow(a.q(), a.value()); }

} // namespace orbvol
