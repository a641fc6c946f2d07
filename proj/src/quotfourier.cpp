#include "orbvol/quotfourier.hpp"

#include <algorithm>
#include <set>
#include <sstream>

namespace orbvol {

namespace {

std::size_t sz(int v) { return static_cast<std::size_t>(v); }

std::int64_t ceil_rat(const Rational& r) { return to_int64(ceil(r)); }
std::int64_t floor_plus_one(const Rational& r) { return to_int64(floor(r)) + 1; }

bool uniform(const CoordLattice& l) {
    return std::all_of(l.val.begin(), l.val.end(), [&](int v) { return v == l.val.front(); });
}

LaurentNumber scale_by(const LaurentNumber& x, const Fq& c) { return x.times(x.field().from_fq(c)); }

} // namespace

bool CoordLattice::contains(const std::vector<LaurentNumber>& coords) const {
    if (coords.size() != val.size()) throw PreconditionError("lattice membership: coordinate count mismatch");
    for (std::size_t b = 0; b < val.size(); ++b) {
        const LaurentNumber& c = coords[b];
        if (c.is_zero()) continue;
        if (c.is_distinguishable()) {
            if (*c.ord_s() < val[b]) return false;
        } else if (c.precision() < val[b]) {
            throw PrecisionExhausted("lattice membership undecidable at the stored precision");
        }
    }
    return true;
}

std::int64_t CoordLattice::volume_exponent() const {
    std::int64_t s = 0;
    for (int v : val) s += v;
    return s;
}

CoordLattice moy_prasad_lattice(const AlgebraType& type, BuildingPoint x, const Rational& r, bool plus) {
    auto level = [plus](const Rational& y) { return static_cast<int>(plus ? floor_plus_one(y) : ceil_rat(y)); };
    if (x == BuildingPoint::Hyperspecial) return CoordLattice{std::vector<int>(sz(type.dim()), level(r))};
    if (!(type == AlgebraType::sp(2))) throw PreconditionError("the barycenter fixture is only defined for sl(2)");
    // Basis order: e21, h, e12 (up to sign).
    const Rational half(1, 2);
    return CoordLattice{{level(r + half), level(r), level(r - half)}};
}

Matrix<Fq> trace_gram(const AlgebraType& type, std::uint32_t q) {
    const auto basis = algebra_basis(type);
    Matrix<Fq> g(basis.size(), basis.size(), Fq(q, 0));
    for (std::size_t a = 0; a < basis.size(); ++a)
        for (std::size_t b = 0; b < basis.size(); ++b) {
            std::int64_t tr = 0;
            const Matrix<int> prod = basis[a] * basis[b];
            for (std::size_t i = 0; i < prod.rows(); ++i) tr += prod(i, i);
            g(a, b) = Fq(q, tr);
        }
    return g;
}

Fq trace_pairing(const Matrix<LaurentNumber>& x, const Matrix<LaurentNumber>& y) {
    if (!x.square() || x.rows() != y.rows() || !y.square()) throw PreconditionError("trace pairing: dimension mismatch");
    LaurentNumber acc = int_like(x(0, 0), 0);
    for (std::size_t i = 0; i < x.rows(); ++i)
        for (std::size_t j = 0; j < x.cols(); ++j)
            if (!x(i, j).is_zero() && !y(j, i).is_zero()) acc += x(i, j) * y(j, i);
    if (acc.field().degree() != 1) throw PreconditionError("trace pairing expects entries over F_q");
    return Fq(acc.q(), acc.coeff_s(0).coeff(0));
}

// ---- QuotientSpace ----

QuotientSpace::QuotientSpace(AlgebraType type, std::uint32_t q, CoordLattice lo, CoordLattice hi, BuildingPoint x)
    : type_(type), q_(q), lo_(std::move(lo)), hi_(std::move(hi)), x_(x) {
    require_prime(q_);
    if (q_ == 2) throw PreconditionError("odd characteristic required");
    const std::size_t n = sz(type_.dim());
    if (lo_.val.size() != n || hi_.val.size() != n) throw PreconditionError("lattice rank does not match the algebra");
    double total = 1;
    for (std::size_t b = 0; b < n; ++b) {
        if (hi_.val[b] < lo_.val[b]) throw PreconditionError("quotient needs hi inside lo");
        for (int l = lo_.val[b]; l < hi_.val[b]; ++l) {
            slots_.push_back({static_cast<int>(b), l});
            total *= q_;
        }
    }
    if (total > 2e7) throw BudgetExceeded("quotient with " + std::to_string(static_cast<long long>(total)) + " points");
    size_ = static_cast<std::size_t>(total);
    gram_ = trace_gram(type_, q_);
    gram_inv_ = inverse(gram_, Fq(q_, 1));
}

QuotientSpace QuotientSpace::moy_prasad(const AlgebraType& type, std::uint32_t q, BuildingPoint x, const Rational& r) {
    return QuotientSpace(type, q, moy_prasad_lattice(type, x, r), moy_prasad_lattice(type, x, r, true), x);
}

QuotientSpace QuotientSpace::window(const AlgebraType& type, std::uint32_t q, int a, int b) {
    const std::size_t n = sz(type.dim());
    return QuotientSpace(type, q, CoordLattice{std::vector<int>(n, a)}, CoordLattice{std::vector<int>(n, b)});
}

std::string QuotientSpace::label() const {
    std::ostringstream os;
    os << type_.str() << " q=" << q_ << (x_ == BuildingPoint::Hyperspecial ? " x0" : " barycenter") << " lo=[";
    for (std::size_t i = 0; i < lo_.val.size(); ++i) os << (i ? "," : "") << lo_.val[i];
    os << "] hi=[";
    for (std::size_t i = 0; i < hi_.val.size(); ++i) os << (i ? "," : "") << hi_.val[i];
    os << "]";
    return os.str();
}

QuotientSpace QuotientSpace::dual() const {
    const std::size_t n = lo_.val.size();
    CoordLattice lo2{std::vector<int>(n)}, hi2{std::vector<int>(n)};
    if (uniform(lo_) && uniform(hi_)) {
        for (std::size_t b = 0; b < n; ++b) {
            lo2.val[b] = 1 - hi_.val[b];
            hi2.val[b] = 1 - lo_.val[b];
        }
    } else {
        // Needs a monomial Gram matrix: coordinate b pairs with exactly one partner.
        for (std::size_t b = 0; b < n; ++b) {
            std::optional<std::size_t> partner;
            for (std::size_t c = 0; c < n; ++c)
                if (!gram_(b, c).is_zero()) {
                    if (partner) throw PreconditionError("dual of a non-uniform lattice needs a monomial trace form");
                    partner = c;
                }
            lo2.val[*partner] = 1 - hi_.val[b];
            hi2.val[*partner] = 1 - lo_.val[b];
        }
    }
    return QuotientSpace(type_, q_, std::move(lo2), std::move(hi2), x_);
}

std::vector<std::uint32_t> QuotientSpace::digits(std::size_t index) const {
    if (index >= size_) throw PreconditionError("quotient point index out of range");
    std::vector<std::uint32_t> d(slots_.size());
    for (auto& v : d) {
        v = static_cast<std::uint32_t>(index % q_);
        index /= q_;
    }
    return d;
}

std::size_t QuotientSpace::index_of(const std::vector<std::uint32_t>& digits) const {
    if (digits.size() != slots_.size()) throw PreconditionError("wrong number of quotient digits");
    std::size_t idx = 0;
    for (std::size_t i = digits.size(); i-- > 0;) idx = idx * q_ + digits[i] % q_;
    return idx;
}

std::size_t QuotientSpace::negate(std::size_t index) const {
    auto d = digits(index);
    for (auto& v : d) v = (q_ - v) % q_;
    return index_of(d);
}

std::size_t QuotientSpace::add(std::size_t a, std::size_t b) const {
    auto da = digits(a);
    const auto db = digits(b);
    for (std::size_t i = 0; i < da.size(); ++i) da[i] = (da[i] + db[i]) % q_;
    return index_of(da);
}

Matrix<LaurentNumber> QuotientSpace::representative(std::size_t index) const {
    const ExtField& F = ExtField::get(q_, 1);
    const auto basis = algebra_basis(type_);
    const std::size_t d = sz(type_.d);
    Matrix<LaurentNumber> x(d, d, LaurentNumber::zero(F));
    const auto dg = digits(index);
    for (std::size_t s = 0; s < slots_.size(); ++s) {
        if (dg[s] == 0) continue;
        const LaurentNumber c = LaurentNumber::monomial(F.from_int(dg[s]), slots_[s].level);
        const Matrix<int>& B = basis[sz(slots_[s].basis)];
        for (std::size_t i = 0; i < d; ++i)
            for (std::size_t j = 0; j < d; ++j)
                if (B(i, j)) x(i, j) += c.times(B(i, j));
    }
    return x;
}

std::vector<LaurentNumber> QuotientSpace::coordinates(const Matrix<LaurentNumber>& x) const {
    const auto basis = algebra_basis(type_);
    const std::size_t n = basis.size();
    const LaurentNumber zero = int_like(x(0, 0), 0);
    // traces Tr(x B_b)
    std::vector<LaurentNumber> tr(n, zero);
    for (std::size_t b = 0; b < n; ++b)
        for (std::size_t i = 0; i < x.rows(); ++i)
            for (std::size_t j = 0; j < x.cols(); ++j)
                if (basis[b](j, i) && !x(i, j).is_zero()) tr[b] += x(i, j).times(basis[b](j, i));
    std::vector<LaurentNumber> c(n, zero);
    for (std::size_t b = 0; b < n; ++b)
        for (std::size_t k = 0; k < n; ++k)
            if (!gram_inv_(b, k).is_zero()) c[b] += scale_by(tr[k], gram_inv_(b, k));
    return c;
}

bool QuotientSpace::contains(const Matrix<LaurentNumber>& x) const { return lo_.contains(coordinates(x)); }

std::size_t QuotientSpace::reduce(const Matrix<LaurentNumber>& x) const {
    const auto c = coordinates(x);
    if (!lo_.contains(c)) throw PreconditionError("element is outside the lattice of " + label());
    std::vector<std::uint32_t> dg(slots_.size());
    for (std::size_t s = 0; s < slots_.size(); ++s)
        dg[s] = c[sz(slots_[s].basis)].coeff_s(slots_[s].level).coeff(0);
    return index_of(dg);
}

std::vector<QuotientSpace::PairTerm> QuotientSpace::pairing_terms() const {
    const QuotientSpace d = dual();
    std::vector<PairTerm> terms;
    for (std::size_t s = 0; s < slots_.size(); ++s)
        for (std::size_t u = 0; u < d.slots_.size(); ++u) {
            if (slots_[s].level + d.slots_[u].level != 0) continue;
            const Fq g = gram_(sz(slots_[s].basis), sz(d.slots_[u].basis));
            if (!g.is_zero()) terms.push_back({s, u, g.value()});
        }
    return terms;
}

namespace {

std::uint32_t pair_digits(const std::vector<QuotientSpace::PairTerm>& terms, const std::vector<std::uint32_t>& dx,
                          const std::vector<std::uint32_t>& dy, std::uint32_t q) {
    std::uint64_t acc = 0;
    for (const auto& t : terms) acc += static_cast<std::uint64_t>(dx[t.slot]) * dy[t.dual_slot] % q * t.coeff;
    return static_cast<std::uint32_t>(acc % q);
}

} // namespace

std::uint32_t QuotientSpace::pairing(std::size_t x, std::size_t y_dual) const {
    return pair_digits(pairing_terms(), digits(x), dual().digits(y_dual), q_);
}

std::vector<Matrix<Fq>> QuotientSpace::acting_group() const {
    if (x_ == BuildingPoint::Hyperspecial) return enumerate_group(type_, q_);
    std::vector<Matrix<Fq>> torus;
    for (std::uint32_t s = 1; s < q_; ++s) {
        Matrix<Fq> g(2, 2, Fq(q_, 0));
        g(0, 0) = Fq(q_, s);
        g(1, 1) = Fq(q_, s).inverse();
        torus.push_back(std::move(g));
    }
    return torus;
}

std::size_t QuotientSpace::act(const Matrix<Fq>& g, std::size_t index) const {
    const ExtField& F = ExtField::get(q_, 1);
    const Matrix<LaurentNumber> lg = g.map([&](const Fq& v) { return LaurentNumber::constant(F.from_fq(v)); });
    return reduce(adjoint(lg, representative(index), form_matrix(type_)));
}

std::vector<std::size_t> QuotientSpace::orbit(std::size_t index) const {
    std::set<std::size_t> pts;
    for (const auto& g : acting_group()) pts.insert(act(g, index));
    return {pts.begin(), pts.end()};
}

// ---- functions on quotients ----

FiniteFunction FiniteFunction::zero(const QuotientSpace& s) {
    return {s, std::vector<CycInt>(s.size(), CycInt(s.q(), 0)), Rational(1)};
}

FiniteFunction FiniteFunction::delta(const QuotientSpace& s, std::size_t point) {
    FiniteFunction f = zero(s);
    f.values.at(point) = CycInt(s.q(), 1);
    return f;
}

FiniteFunction FiniteFunction::constant(const QuotientSpace& s, std::int64_t v) {
    return {s, std::vector<CycInt>(s.size(), CycInt(s.q(), v)), Rational(1)};
}

bool operator==(const FiniteFunction& a, const FiniteFunction& b) {
    if (!(a.space == b.space) || a.values.size() != b.values.size()) return false;
    const std::int64_t na = to_int64(numer(a.scale)), da = to_int64(denom(a.scale));
    const std::int64_t nb = to_int64(numer(b.scale)), db = to_int64(denom(b.scale));
    for (std::size_t i = 0; i < a.values.size(); ++i)
        if (!(a.values[i] * (na * db) == b.values[i] * (nb * da))) return false;
    return true;
}

FiniteFunction finite_ft(const FiniteFunction& phi) {
    const QuotientSpace& s = phi.space;
    const QuotientSpace d = s.dual();
    const std::uint32_t p = s.q();
    const std::size_t n = s.size();
    // Raw length-p coefficient vectors; multiplication by zeta^k is a rotation.
    std::vector<std::vector<std::int64_t>> raw(n);
    std::vector<std::size_t> support;
    for (std::size_t y = 0; y < n; ++y) {
        if (phi.values[y].is_zero()) continue;
        raw[y] = phi.values[y].coeffs();
        raw[y].push_back(0);
        support.push_back(y);
    }
    FiniteFunction out{d, std::vector<CycInt>(d.size(), CycInt(p, 0)), phi.scale};
    const auto terms = s.pairing_terms();
    std::vector<std::vector<std::uint32_t>> ydigits;
    for (std::size_t y : support) ydigits.push_back(s.digits(y));
    std::vector<std::int64_t> acc(p);
    for (std::size_t x = 0; x < d.size(); ++x) {
        std::fill(acc.begin(), acc.end(), 0);
        const auto dx = d.digits(x);
        for (std::size_t i = 0; i < support.size(); ++i) {
            const std::size_t y = support[i];
            const std::uint32_t k = pair_digits(terms, ydigits[i], dx, p);
            for (std::uint32_t j = 0; j < p; ++j) acc[(j + k) % p] += raw[y][j];
        }
        out.values[x] = CycInt::from_coeffs(p, acc);
    }
    return out;
}

FiniteFunction inflate(const FiniteFunction& phi, const QuotientSpace& target) {
    const QuotientSpace& s = phi.space;
    if (!(s.type() == target.type()) || s.q() != target.q()) throw PreconditionError("inflate: incompatible quotients");
    for (std::size_t b = 0; b < s.lo().val.size(); ++b)
        if (target.lo().val[b] > s.lo().val[b] || target.hi().val[b] < s.hi().val[b])
            throw PreconditionError("inflate: target window does not resolve " + s.label());
    FiniteFunction out = FiniteFunction::zero(target);
    out.scale = phi.scale;
    for (std::size_t i = 0; i < target.size(); ++i) {
        const auto x = target.representative(i);
        if (s.contains(x)) out.values[i] = phi.values[s.reduce(x)];
    }
    return out;
}

FiniteFunction inflate(const FiniteFunction& phi, int K) {
    return inflate(phi, QuotientSpace::window(phi.space.type(), phi.space.q(), 0, K));
}

FiniteFunction orbit_indicator(const QuotientSpace& s, std::size_t point) {
    const auto orb = s.orbit(point);
    FiniteFunction f = FiniteFunction::zero(s);
    for (std::size_t i : orb) f.values[i] = CycInt(s.q(), 1);
    f.scale = Rational(1, static_cast<long long>(orb.size()));
    return f;
}

FiniteFunction coset_indicator(const QuotientSpace& window, const Matrix<LaurentNumber>& z, const CoordLattice& l) {
    for (std::size_t b = 0; b < l.val.size(); ++b)
        if (l.val[b] > window.hi().val[b]) throw PreconditionError("coset_indicator: lattice finer than the window");
    FiniteFunction f = FiniteFunction::zero(window);
    const auto zc = window.coordinates(z);
    for (std::size_t i = 0; i < window.size(); ++i) {
        auto c = window.coordinates(window.representative(i));
        for (std::size_t b = 0; b < c.size(); ++b) c[b] -= zc[b];
        if (l.contains(c)) f.values[i] = CycInt(window.q(), 1);
    }
    return f;
}

// ---- Gauss integrals ----

std::optional<Rational> GaussValue::rational() const {
    if (!sum.is_integer()) return std::nullopt;
    return Rational(sum.integer_value(), static_cast<long long>(group_order));
}

std::string GaussValue::str() const {
    if (auto r = rational()) return to_string(*r);
    return "(" + sum.str() + ")/" + std::to_string(group_order);
}

GaussValue gauss_integral(const LieElement& x, const LieElement& y, int K, std::uint64_t budget) {
    if (!(x.type() == y.type())) throw PreconditionError("gauss_integral: elements of different algebras");
    for (const auto& v : x.matrix().data())
        if (!v.is_zero() && v.ord_lower_bound() < 0) throw PreconditionError("gauss_integral: X must lie in g(O)");
    std::int64_t ymin = 0;
    for (const auto& v : y.matrix().data())
        if (v.is_distinguishable()) ymin = std::min(ymin, *v.ord_s());
    if (K < 1 + std::max<std::int64_t>(0, -ymin))
        throw PreconditionError("gauss_integral: K = " + std::to_string(K) + " does not determine the pairing (need " +
                                std::to_string(1 - ymin) + ")");
    const std::uint32_t q = x.q();
    const auto G = enumerate_group_truncated(x.type(), q, K, budget);
    const Matrix<int> J = form_matrix(x.type());
    std::vector<std::int64_t> counts(q, 0);
    for (const auto& g : G) {
        try {
            ++counts[trace_pairing(adjoint(g, x.matrix(), J), y.matrix()).value()];
        } catch (const PrecisionExhausted&) {
            throw PreconditionError("gauss_integral: pairing undetermined at K = " + std::to_string(K));
        }
    }
    return {CycInt::from_coeffs(q, counts), G.size()};
}

} // namespace orbvol
