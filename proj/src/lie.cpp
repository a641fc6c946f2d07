#include "orbvol/lie.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <sstream>

namespace orbvol {

namespace {

std::size_t sz(int v) { return static_cast<std::size_t>(v); }

} // namespace

// ---- AlgebraType ----

AlgebraType AlgebraType::sp(int d) {
    if (d < 2 || d % 2 != 0) throw PreconditionError("sp(d) needs even d >= 2");
    return {Family::Sp, d, d / 2};
}

AlgebraType AlgebraType::so(int d) {
    if (d < 2) throw PreconditionError("so(d) needs d >= 2");
    if (d % 2 == 1) return {Family::SOodd, d, d / 2};
    return {Family::SOeven, d, d / 2};
}

AlgebraType AlgebraType::parse(std::string_view spec) {
    const auto colon = spec.find(':');
    if (colon == std::string_view::npos) throw PreconditionError("algebra type must look like sp:4 or so:5");
    const std::string_view fam = spec.substr(0, colon);
    const std::string digits(spec.substr(colon + 1));
    if (digits.empty() || !std::all_of(digits.begin(), digits.end(), [](char ch) { return ch >= '0' && ch <= '9'; }))
        throw PreconditionError("bad algebra size in '" + std::string(spec) + "'");
    const int d = std::stoi(digits);
    if (fam == "sp") return sp(d);
    if (fam == "so") return so(d);
    if (fam == "sl") {
        if (d != 2) throw PreconditionError("only sl:2 is supported");
        return sp(2);
    }
    throw PreconditionError("unknown algebra family '" + std::string(fam) + "'");
}

std::string AlgebraType::str() const { return (family == Family::Sp ? "sp:" : "so:") + std::to_string(d); }

int AlgebraType::dim() const { return family == Family::Sp ? c * (2 * c + 1) : d * (d - 1) / 2; }

// ---- forms ----

Matrix<int> form_matrix(const AlgebraType& type) {
    const std::size_t d = sz(type.d);
    Matrix<int> j(d, d, 0);
    for (std::size_t i = 0; i < d; ++i) {
        const std::size_t k = d - 1 - i;
        if (type.family == Family::Sp)
            j(i, k) = i < k ? 1 : -1;
        else
            j(i, k) = 1;
    }
    return j;
}

std::int64_t form_determinant(const AlgebraType& type) {
    const Matrix<int> j = form_matrix(type);
    Matrix<std::int64_t> m(j.rows(), j.cols(), 0);
    for (std::size_t a = 0; a < j.rows(); ++a)
        for (std::size_t b = 0; b < j.cols(); ++b) m(a, b) = j(a, b);
    return determinant(m, std::int64_t{1});
}

std::vector<Matrix<int>> algebra_basis(const AlgebraType& type) {
    // X = J^{-1} A = tJ A, A symmetric (Sp) or skew (SO).
    const std::size_t d = sz(type.d);
    const Matrix<int> jt = form_matrix(type).transpose();
    std::vector<Matrix<int>> basis;
    for (std::size_t a = 0; a < d; ++a)
        for (std::size_t b = a; b < d; ++b) {
            if (type.family != Family::Sp && a == b) continue;
            Matrix<int> sym(d, d, 0);
            sym(a, b) = 1;
            sym(b, a) = type.family == Family::Sp ? 1 : -1;
            basis.push_back(jt * sym);
        }
    return basis;
}

// ---- LieElement ----

LieElement::LieElement(AlgebraType type, Matrix<LaurentNumber> x) : type_(type), x_(std::move(x)) {
    if (!x_.square() || x_.rows() != sz(type_.d)) throw PreconditionError("matrix size does not match " + type_.str());
    if (!membership(x_, form_matrix(type_))) throw PreconditionError("matrix is not in " + type_.str());
}

LieElement LieElement::from_coords(const AlgebraType& type, const std::vector<LaurentNumber>& coords) {
    const auto basis = algebra_basis(type);
    if (coords.size() != basis.size()) throw PreconditionError("wrong number of coordinates for " + type.str());
    const std::size_t d = sz(type.d);
    Matrix<LaurentNumber> x(d, d, int_like(coords.front(), 0));
    for (std::size_t b = 0; b < basis.size(); ++b) {
        if (coords[b].is_zero()) continue;
        for (std::size_t i = 0; i < d; ++i)
            for (std::size_t j = 0; j < d; ++j)
                if (basis[b](i, j)) x(i, j) += coords[b].times(basis[b](i, j));
    }
    return LieElement(type, std::move(x));
}

LieElement LieElement::truncated(std::int64_t prec) const {
    return LieElement(type_, x_.map([prec](const LaurentNumber& v) { return v.truncated(prec); }));
}

std::string LieElement::str() const {
    std::ostringstream os;
    os << '[';
    for (std::size_t i = 0; i < x_.rows(); ++i) {
        os << (i ? ", [" : "[");
        for (std::size_t j = 0; j < x_.cols(); ++j) os << (j ? ", " : "") << x_(i, j).pretty();
        os << ']';
    }
    os << ']';
    return os.str();
}

// ---- characteristic polynomial ----

namespace {

// Strips structural and exactly-zero low coefficients. When strict is false an
// undecidable coefficient ends the stripping instead of throwing.
NonzeroPart strip_zero_roots(const LieElement& x, bool strict) {
    const LaurentNumber& proto = x(0, 0);
    const LaurentNumber one = int_like(proto, 1);
    std::vector<LaurentNumber> cp = charpoly_berkowitz(x.matrix(), one);
    const int d = x.type().d;
    // f(-lambda) = (-1)^d f(lambda): coefficients of the wrong parity vanish identically.
    for (int i = 0; i <= d; ++i)
        if ((d - i) % 2 != 0) cp[sz(i)] = int_like(proto, 0);
    int m = x.type().base_zero_multiplicity();
    while (m < d && cp[sz(m)].is_zero()) m += 2;
    if (strict && m < d && cp[sz(m)].zero_state() == ZeroState::Indistinguishable)
        throw PrecisionExhausted("zero-root multiplicity undecidable at the stored precision");
    if (m > d) m = d;
    std::vector<LaurentNumber> rest(cp.begin() + m, cp.end());
    return {LPoly(proto, std::move(rest)), m};
}

} // namespace

NonzeroPart nonzero_part_charpoly(const LieElement& x) { return strip_zero_roots(x, true); }

// ---- pfaffian ----

namespace {

template <class T>
void require_skew(const Matrix<T>& a) {
    if (!a.square() || a.rows() % 2 != 0) throw PreconditionError("pfaffian needs an even square matrix");
    if (a.rows() > 12) throw PreconditionError("pfaffian supports sizes up to 12");
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j <= i; ++j) {
            const T s = a(i, j) + a(j, i);
            bool zero;
            if constexpr (std::is_same_v<T, LaurentNumber>)
                zero = s.zero_state() != ZeroState::Nonzero;
            else
                zero = is_exact_zero(s);
            if (!zero) throw PreconditionError("pfaffian of a matrix that is not skew");
        }
}

// Expansion along the first remaining index.
template <class T>
T pfaff_rec(const Matrix<T>& a, std::vector<std::size_t>& idx) {
    if (idx.empty()) return int_like(a(0, 0), 1);
    const std::size_t i0 = idx.front();
    T acc = int_like(a(0, 0), 0);
    for (std::size_t k = 1; k < idx.size(); ++k) {
        const std::size_t j = idx[k];
        if (is_exact_zero(a(i0, j))) continue;
        std::vector<std::size_t> rest;
        rest.reserve(idx.size() - 2);
        for (std::size_t m = 1; m < idx.size(); ++m)
            if (m != k) rest.push_back(idx[m]);
        T term = a(i0, j) * pfaff_rec(a, rest);
        if (k % 2 == 0) term = -term;
        acc += term;
    }
    return acc;
}

template <class T>
T pfaffian_impl(const Matrix<T>& a) {
    require_skew(a);
    std::vector<std::size_t> idx(a.rows());
    for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
    return pfaff_rec(a, idx);
}

Matrix<LaurentNumber> times_int_left(const Matrix<int>& j, const Matrix<LaurentNumber>& x) {
    Matrix<LaurentNumber> out(j.rows(), x.cols(), int_like(x(0, 0), 0));
    for (std::size_t i = 0; i < j.rows(); ++i)
        for (std::size_t k = 0; k < j.cols(); ++k) {
            if (!j(i, k)) continue;
            for (std::size_t c = 0; c < x.cols(); ++c) out(i, c) += x(k, c).times(j(i, k));
        }
    return out;
}

} // namespace

Fq pfaffian(const Matrix<Fq>& a) { return pfaffian_impl(a); }
LaurentNumber pfaffian(const Matrix<LaurentNumber>& a) { return pfaffian_impl(a); }

// ---- restricted elements ----

Classification is_restricted(const LieElement& x, const Rational& r, Uniformizer u) {
    Classification out;
    // An undecidable constant term can only lead to R(0) = 0 (or to an
    // undecidable bound), so the lenient split is safe here.
    const NonzeroPart np = strip_zero_roots(x, false);
    if (np.m >= 2) {
        out.reason = x.type().family == Family::SOeven && np.m == 2
                         ? "zero multiplicity 2 (unsupported for even orthogonal algebras)"
                         : "zero-root multiplicity " + std::to_string(np.m) + " > 1";
        return out;
    }
    const int N = np.P.degree();
    if (N == 0) {
        out.reason = "nonzero part is trivial";
        return out;
    }
    if (denom(Rational(r * N)) != 1) {
        out.reason = "r*N = " + to_string(Rational(r * N)) + " is not integral";
        return out;
    }
    try {
        check_coefficient_bounds(np.P, r);
    } catch (const PrecisionExhausted&) {
        throw;
    } catch (const PreconditionError& e) {
        out.reason = e.what();
        return out;
    }
    const SlopeConstants consts = SlopeConstants::from_degree(r, N);
    FqPoly R = r_reduction(np.P, r, u);
    if (R.coeff(0).is_zero()) {
        out.reason = "R(0) = 0";
        return out;
    }
    if (!is_separable(R)) {
        out.reason = "r-reduction has repeated roots";
        return out;
    }
    RestrictedWitness w{consts, np.P, np.m, std::move(R), std::nullopt};
    if (x.type().family == Family::SOeven) {
        const LaurentNumber pf = pfaffian(times_int_left(form_matrix(x.type()), x.matrix()));
        if (pf.zero_state() == ZeroState::Indistinguishable) throw PrecisionExhausted("pfaffian undecidable at the stored precision");
        w.pf_ac = pf.ac(u).to_fq();
    }
    out.witness = std::move(w);
    return out;
}

// ---- construction ----

namespace {

using LMatrix = Matrix<LaurentNumber>;

struct FormSpace {
    LMatrix G; // Gram matrix
    LMatrix M; // multiplication by lambda
    int d = 0;
};

// Twisted form <f, g> = tau(kappa lambda^{2m} [lambda] f sigma(g)); the extra
// lambda is present for SO. For SOodd the added line has norm e0_norm.
FormSpace companion_space(const AlgebraType& type, const LPoly& P, std::int64_t work, const LaurentNumber& kappa, int m,
                          const LaurentNumber& e0_norm) {
    const int N = P.degree();
    const LaurentNumber zero = P.zero();
    // red[k] = coordinates of lambda^k mod P, exact.
    std::vector<std::vector<LaurentNumber>> red;
    std::vector<LaurentNumber> cur(sz(N), zero);
    cur[0] = P.one();
    for (int k = 0; k <= 2 * N + 2 * m + 1; ++k) {
        red.push_back(cur);
        std::vector<LaurentNumber> next(sz(N), zero);
        for (int i = 0; i + 1 < N; ++i) next[sz(i + 1)] = cur[sz(i)];
        const LaurentNumber top = cur[sz(N - 1)];
        if (!top.is_zero())
            for (int i = 0; i < N; ++i) next[sz(i)] -= top * P.coeff(i);
        cur = std::move(next);
    }
    const int shift = type.family == Family::Sp ? 0 : 1;
    const int d = type.d;
    FormSpace fs{LMatrix(sz(d), sz(d), zero), LMatrix(sz(d), sz(d), zero), d};
    for (int i = 0; i < N; ++i)
        for (int j = 0; j < N; ++j) {
            LaurentNumber v = kappa * red[sz(i + j + shift + 2 * m)][sz(N - 1)];
            if (j % 2 == 1) v = -v;
            fs.G(sz(i), sz(j)) = v.truncated(work);
            fs.M(sz(i), sz(j)) = red[sz(j + 1)][sz(i)].truncated(work);
        }
    if (type.family == Family::SOodd) fs.G(sz(N), sz(N)) = e0_norm.truncated(work);
    return fs;
}

LaurentNumber bilinear(const LMatrix& G, const std::vector<LaurentNumber>& v, const std::vector<LaurentNumber>& w) {
    LaurentNumber acc = int_like(G(0, 0), 0);
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (v[i].is_zero()) continue;
        for (std::size_t j = 0; j < w.size(); ++j)
            if (!w[j].is_zero() && !G(i, j).is_zero()) acc += v[i] * G(i, j) * w[j];
    }
    return acc;
}

using Vec = std::vector<LaurentNumber>;

Vec axpy(const Vec& a, const LaurentNumber& s, const Vec& b) {
    Vec out = a;
    for (std::size_t i = 0; i < a.size(); ++i)
        if (!b[i].is_zero()) out[i] += s * b[i];
    return out;
}

Vec scaled(const Vec& a, const LaurentNumber& s) {
    Vec out = a;
    for (auto& v : out) v = v * s;
    return out;
}

// Index of the candidate with least valuation among distinguishable values.
std::optional<std::size_t> min_valuation(const std::vector<LaurentNumber>& vals) {
    std::optional<std::size_t> best;
    for (std::size_t i = 0; i < vals.size(); ++i) {
        if (!vals[i].is_distinguishable()) continue;
        if (!best || *vals[i].ord_s() < *vals[*best].ord_s()) best = i;
    }
    return best;
}

bool all_exact_zero(const std::vector<LaurentNumber>& vals) {
    return std::all_of(vals.begin(), vals.end(), [](const LaurentNumber& v) { return v.is_zero(); });
}

// Symplectic basis: columns b_k = e_k, b_{d-1-k} = f_k with B(e_k, f_k) = 1.
std::optional<std::vector<Vec>> symplectic_basis(const LMatrix& G, int d) {
    std::vector<Vec> w;
    for (int i = 0; i < d; ++i) {
        Vec v(sz(d), int_like(G(0, 0), 0));
        v[sz(i)] = int_like(G(0, 0), 1);
        w.push_back(std::move(v));
    }
    std::vector<Vec> out(sz(d));
    for (int k = 0; k < d / 2; ++k) {
        std::vector<LaurentNumber> vals;
        std::vector<std::pair<std::size_t, std::size_t>> pairs;
        for (std::size_t i = 0; i < w.size(); ++i)
            for (std::size_t j = i + 1; j < w.size(); ++j) {
                vals.push_back(bilinear(G, w[i], w[j]));
                pairs.emplace_back(i, j);
            }
        const auto best = min_valuation(vals);
        if (!best) {
            if (all_exact_zero(vals)) throw PreconditionError("degenerate form");
            throw PrecisionExhausted("symplectic pivot indistinguishable from zero");
        }
        const auto [i, j] = pairs[*best];
        const Vec e = w[i];
        const Vec f = scaled(w[j], vals[*best].inverse());
        out[sz(k)] = e;
        out[sz(d - 1 - k)] = f;
        std::vector<Vec> rest;
        for (std::size_t m = 0; m < w.size(); ++m) {
            if (m == i || m == j) continue;
            // w - B(w,f) e + B(w,e) f
            Vec v = axpy(w[m], -bilinear(G, w[m], f), e);
            v = axpy(v, bilinear(G, w[m], e), f);
            rest.push_back(std::move(v));
        }
        w = std::move(rest);
    }
    return out;
}

// Orthogonal basis with B(b_k, b_{d-1-k}) = 1 and all other pairings zero,
// or nullopt when the diagonal form is not split over F.
std::optional<std::vector<Vec>> orthogonal_basis(const LMatrix& G, int d, std::int64_t work) {
    const LaurentNumber zero = int_like(G(0, 0), 0);
    std::vector<Vec> w;
    for (int i = 0; i < d; ++i) {
        Vec v(sz(d), zero);
        v[sz(i)] = int_like(zero, 1);
        w.push_back(std::move(v));
    }
    // Diagonalize.
    std::vector<Vec> u;
    std::vector<LaurentNumber> a;
    while (!w.empty()) {
        // Candidates w_i and w_i + w_j; the pivot replaces w_i.
        std::vector<Vec> cand = w;
        std::vector<std::size_t> drops(w.size());
        for (std::size_t i = 0; i < w.size(); ++i) drops[i] = i;
        for (std::size_t i = 0; i < w.size(); ++i)
            for (std::size_t j = i + 1; j < w.size(); ++j) {
                cand.push_back(axpy(w[i], int_like(zero, 1), w[j]));
                drops.push_back(i);
            }
        std::vector<LaurentNumber> vals;
        for (const auto& c : cand) vals.push_back(bilinear(G, c, c));
        const auto best = min_valuation(vals);
        if (!best) {
            if (all_exact_zero(vals)) throw PreconditionError("degenerate form");
            throw PrecisionExhausted("orthogonal pivot indistinguishable from zero");
        }
        const Vec p = cand[*best];
        const LaurentNumber ap = vals[*best];
        const LaurentNumber ainv = ap.inverse();
        const std::size_t drop = drops[*best];
        std::vector<Vec> rest;
        for (std::size_t m = 0; m < w.size(); ++m) {
            if (m == drop) continue;
            rest.push_back(axpy(w[m], -(bilinear(G, w[m], p) * ainv), p));
        }
        u.push_back(p);
        a.push_back(ap);
        w = std::move(rest);
    }
    // Pair up diagonal vectors into hyperbolic planes: -a_k/a_l must be a square.
    const int half = d / 2;
    std::vector<bool> used(u.size(), false);
    std::vector<Vec> out(sz(d));
    std::function<bool(int)> match = [&](int k) -> bool {
        if (k == half) {
            if (d % 2 == 0) return true;
            for (std::size_t m = 0; m < u.size(); ++m) {
                if (used[m]) continue;
                auto s = a[m].sqrt(work);
                if (!s) return false;
                out[sz(half)] = scaled(u[m], s->inverse());
                return true;
            }
            return false;
        }
        std::size_t first = 0;
        while (used[first]) ++first;
        used[first] = true;
        for (std::size_t l = 0; l < u.size(); ++l) {
            if (used[l]) continue;
            const auto b = divide(-a[first], a[l], work).sqrt(work);
            if (!b) continue;
            used[l] = true;
            // e = u_k + b u_l, f = (u_k - b u_l) / (2 a_k)
            const Vec e = axpy(u[first], *b, u[l]);
            const Vec f = scaled(axpy(u[first], -*b, u[l]), a[first].times(2).inverse());
            out[sz(k)] = e;
            out[sz(d - 1 - k)] = f;
            if (match(k + 1)) return true;
            used[l] = false;
        }
        used[first] = false;
        return false;
    };
    if (!match(0)) return std::nullopt;
    return out;
}

LMatrix columns_to_matrix(const std::vector<Vec>& cols) {
    const std::size_t d = cols.size();
    LMatrix b(d, d, int_like(cols[0][0], 0));
    for (std::size_t j = 0; j < d; ++j)
        for (std::size_t i = 0; i < d; ++i) b(i, j) = cols[j][i];
    return b;
}

std::int64_t max_abs_ord(const LPoly& P) {
    std::int64_t m = 0;
    for (const auto& c : P.coeffs())
        if (auto o = c.ord_s()) m = std::max(m, std::abs(*o));
    return m;
}

} // namespace

Construction construct_element(const AlgebraType& type, const LPoly& P, std::int64_t abs_prec, std::optional<Fq> pfaff_target) {
    if (!P.is_monic()) throw PreconditionError("construct_element: P must be monic");
    const LaurentNumber& proto = P.prototype();
    if (proto.e() != 1 || proto.field().degree() != 1)
        throw PreconditionError("construct_element expects coefficients in F_q((t))");
    for (const auto& c : P.coeffs())
        if (!c.is_exact()) throw PreconditionError("construct_element expects exact coefficients");
    if (P.degree() != type.nonzero_degree())
        throw PreconditionError("nonzero part of " + type.str() + " must have degree " + std::to_string(type.nonzero_degree()));
    if (!is_even(P)) throw PreconditionError("nonzero part must be even");
    if (P.coeff(0).is_zero()) throw PreconditionError("nonzero part must have P(0) != 0");
    if (pfaff_target && type.family != Family::SOeven) throw PreconditionError("pfaffian target only applies to so(2c)");

    const int d = type.d;
    const std::int64_t work = abs_prec + 4 * static_cast<std::int64_t>(d) * (max_abs_ord(P) + 1);
    const LaurentNumber one = P.one();
    FormSpace fs = companion_space(type, P, work, one, 0, one);
    std::optional<std::vector<Vec>> basis;
    if (type.family == Family::Sp) {
        basis = symplectic_basis(fs.G, d);
    } else {
        // Orthogonal forms are not all equivalent: rescale the invariant form
        // by square-class representatives until it splits.
        const std::uint32_t q = proto.q();
        std::int64_t eps = 2;
        while (Fq(q, eps).is_square()) ++eps;
        const ExtField& F = proto.field();
        const std::vector<LaurentNumber> classes{one, LaurentNumber::from_int(F, eps), LaurentNumber::monomial(F.one(), 1),
                                                 LaurentNumber::monomial(F.from_int(eps), 1)};
        const std::vector<LaurentNumber> norms =
            type.family == Family::SOodd ? classes : std::vector<LaurentNumber>{one};
        for (int m = 0; m < 2 && !basis; ++m)
            for (const auto& kappa : classes) {
                if (basis) break;
                for (const auto& a : norms) {
                    FormSpace trial = companion_space(type, P, work, kappa, m, a);
                    basis = orthogonal_basis(trial.G, d, work);
                    if (basis) {
                        fs = std::move(trial);
                        break;
                    }
                }
            }
    }

    Construction out;
    out.companion = fs.M;
    if (!basis) {
        out.standard_form = false;
        out.form = fs.G;
        return out;
    }
    const LMatrix B = columns_to_matrix(*basis);
    const Matrix<int> J = form_matrix(type);
    // X = J^{-1} tB G M B
    LMatrix X = times_int_left(J.transpose(), B.transpose() * fs.G * fs.M * B);
    X = X.map([abs_prec](const LaurentNumber& v) { return v.truncated(abs_prec); });
    if (pfaff_target) {
        LieElement trial(type, X);
        const LaurentNumber pf = pfaffian(times_int_left(J, X));
        if (!pf.is_distinguishable()) throw PrecisionExhausted("pfaffian undecidable at the requested precision");
        const Fq cur = pf.ac().to_fq();
        if (!(cur == *pfaff_target)) {
            if (!(-cur == *pfaff_target))
                throw PreconditionError("pfaffian target must be +-ac(pfaff(JX)) = +-" + std::to_string(cur.signed_value()));
            // Swap the middle pair: an element of O(J) with determinant -1.
            const std::size_t m0 = sz(d / 2 - 1), m1 = sz(d / 2);
            LMatrix Y = X;
            for (std::size_t i = 0; i < sz(d); ++i) {
                std::swap(Y(m0, i), Y(m1, i));
            }
            for (std::size_t i = 0; i < sz(d); ++i) std::swap(Y(i, m0), Y(i, m1));
            X = std::move(Y);
        }
    }
    out.element = LieElement(type, std::move(X));
    out.form = lift_int_matrix(J, proto.field());
    return out;
}

LieElement split_torus_element(const AlgebraType& type, const std::vector<LaurentNumber>& eigenvalues) {
    if (eigenvalues.size() != sz(type.c)) throw PreconditionError("split torus element needs rank many eigenvalues");
    const std::size_t d = sz(type.d);
    LMatrix x(d, d, int_like(eigenvalues.front(), 0));
    for (std::size_t i = 0; i < eigenvalues.size(); ++i) {
        x(i, i) = eigenvalues[i];
        x(d - 1 - i, d - 1 - i) = -eigenvalues[i];
    }
    return LieElement(type, std::move(x));
}

// ---- groups ----

Matrix<LaurentNumber> lift_int_matrix(const Matrix<int>& m, const ExtField& field, int e) {
    return m.map([&](int v) { return LaurentNumber::from_int(field, v, e); });
}

Matrix<Fq> lift_int_matrix(const Matrix<int>& m, std::uint32_t q) {
    return m.map([q](int v) { return Fq(q, v); });
}

namespace {

// Vectors of F_q^d as residues, with J v precomputed for fast pairing.
struct GroupVector {
    std::vector<std::uint32_t> v, jv;
};

std::uint32_t dot(const std::vector<std::uint32_t>& a, const std::vector<std::uint32_t>& b, std::uint32_t q) {
    std::uint64_t acc = 0;
    for (std::size_t i = 0; i < a.size(); ++i) acc += static_cast<std::uint64_t>(a[i]) * b[i];
    return static_cast<std::uint32_t>(acc % q);
}

std::vector<GroupVector> all_vectors(const Matrix<int>& J, std::uint32_t q, std::size_t d) {
    std::vector<GroupVector> out;
    std::vector<std::uint32_t> v(d, 0);
    for (;;) {
        GroupVector g{v, std::vector<std::uint32_t>(d, 0)};
        for (std::size_t i = 0; i < d; ++i) {
            std::int64_t acc = 0;
            for (std::size_t j = 0; j < d; ++j) acc += J(i, j) * static_cast<std::int64_t>(v[j]);
            g.jv[i] = static_cast<std::uint32_t>(((acc % q) + q) % q);
        }
        out.push_back(std::move(g));
        std::size_t i = 0;
        while (i < d && v[i] + 1 == q) v[i++] = 0;
        if (i == d) break;
        ++v[i];
    }
    return out;
}

} // namespace

std::vector<Matrix<Fq>> enumerate_group(const AlgebraType& type, std::uint32_t q) {
    require_prime(q);
    const std::size_t d = sz(type.d);
    double space = 1;
    for (std::size_t i = 0; i < d; ++i) space *= q;
    if (space > 2e5) throw BudgetExceeded("group enumeration: q^d = " + std::to_string(static_cast<long long>(space)) + " vectors per column");
    const Matrix<int> J = form_matrix(type);
    const auto vectors = all_vectors(J, q, d);
    auto target = [&](std::size_t i, std::size_t j) { return static_cast<std::uint32_t>(((J(i, j) % static_cast<int>(q)) + static_cast<int>(q)) % static_cast<int>(q)); };
    // Candidates for column k: tv J v = J_kk.
    std::vector<std::vector<const GroupVector*>> candidates(d);
    for (std::size_t k = 0; k < d; ++k)
        for (const auto& v : vectors)
            if (dot(v.v, v.jv, q) == target(k, k)) candidates[k].push_back(&v);
    // Column-by-column search: tg_i J g_j = J_ij.
    std::vector<Matrix<Fq>> out;
    std::vector<const GroupVector*> cols;
    std::function<void()> rec = [&]() {
        const std::size_t k = cols.size();
        if (k == d) {
            Matrix<Fq> g(d, d, Fq(q, 0));
            for (std::size_t j = 0; j < d; ++j)
                for (std::size_t i = 0; i < d; ++i) g(i, j) = Fq(q, cols[j]->v[i]);
            if (type.family != Family::Sp && !(determinant(g, Fq(q, 1)) == Fq(q, 1))) return;
            out.push_back(std::move(g));
            if (out.size() > 5'000'000) throw BudgetExceeded("group enumeration exceeds 5e6 elements");
            return;
        }
        for (const GroupVector* v : candidates[k]) {
            bool ok = true;
            for (std::size_t j = 0; j < k && ok; ++j) ok = dot(cols[j]->v, v->jv, q) == target(j, k);
            if (!ok) continue;
            cols.push_back(v);
            rec();
            cols.pop_back();
        }
    };
    rec();
    return out;
}

std::vector<Matrix<LaurentNumber>> enumerate_group_truncated(const AlgebraType& type, std::uint32_t q, int K, std::uint64_t budget) {
    if (K < 1) throw PreconditionError("truncation level must be >= 1");
    if (q == 2) throw PreconditionError("odd characteristic required");
    const auto base = enumerate_group(type, q);
    const auto basis = algebra_basis(type);
    const std::size_t d = sz(type.d);
    double total = static_cast<double>(base.size());
    for (int k = 1; k < K; ++k)
        for (std::size_t b = 0; b < basis.size(); ++b) total *= q;
    if (total > static_cast<double>(budget))
        throw BudgetExceeded("|G(O/t^" + std::to_string(K) + ")| = " + std::to_string(static_cast<long long>(total)) + " exceeds the budget");
    const Matrix<int> J = form_matrix(type);
    const Matrix<Fq> Jq = lift_int_matrix(J, q), Jinv = lift_int_matrix(J.transpose(), q);
    std::vector<Matrix<Fq>> alg;
    for (const auto& b : basis) alg.push_back(lift_int_matrix(b, q));
    const Fq half = Fq(q, 2).inverse();

    using Digits = std::vector<Matrix<Fq>>;
    std::vector<Digits> cur;
    for (const auto& g : base) cur.push_back({g});
    for (int k = 1; k < K; ++k) {
        std::vector<Digits> next;
        next.reserve(cur.size() * static_cast<std::size_t>(std::pow(q, basis.size())));
        for (const auto& g : cur) {
            // C = coefficient of t^k in tg J g from the known digits.
            Matrix<Fq> C(d, d, Fq(q, 0));
            for (int a = 1; a < k; ++a) C = C + g[sz(a)].transpose() * Jq * g[sz(k - a)];
            // Y_p = -J^{-1} C / 2 solves J Y + tY J = -C.
            Matrix<Fq> Yp = (Jinv * C).map([&](const Fq& v) { return -v * half; });
            std::vector<int> coords(basis.size(), 0);
            for (;;) {
                Matrix<Fq> Y = Yp;
                for (std::size_t b = 0; b < alg.size(); ++b)
                    if (coords[b]) Y = Y + alg[b].map([&](const Fq& v) { return v * Fq(q, coords[b]); });
                Digits h = g;
                h.push_back(g[0] * Y);
                next.push_back(std::move(h));
                std::size_t i = 0;
                while (i < coords.size() && coords[i] + 1 == static_cast<int>(q)) coords[i++] = 0;
                if (i == coords.size()) break;
                ++coords[i];
            }
        }
        cur = std::move(next);
    }
    const ExtField& F = ExtField::get(q, 1);
    std::vector<Matrix<LaurentNumber>> out;
    out.reserve(cur.size());
    for (const auto& g : cur) {
        Matrix<LaurentNumber> m(d, d, LaurentNumber::zero(F));
        for (std::size_t i = 0; i < d; ++i)
            for (std::size_t j = 0; j < d; ++j) {
                std::vector<FqExt> c;
                for (int k = 0; k < K; ++k) c.push_back(F.from_fq(g[sz(k)](i, j)));
                m(i, j) = LaurentNumber::from_coeffs(F, 1, 0, std::move(c), K);
            }
        out.push_back(std::move(m));
    }
    return out;
}

Matrix<LaurentNumber> adjoint(const Matrix<LaurentNumber>& g, const Matrix<LaurentNumber>& x, const Matrix<int>& j) {
    // g^{-1} = J^{-1} tg J
    const Matrix<LaurentNumber> ginv = times_int_left(j.transpose(), g.transpose() * lift_int_matrix(j, g(0, 0).field(), g(0, 0).e()));
    return g * x * ginv;
}

Matrix<Fq> adjoint(const Matrix<Fq>& g, const Matrix<Fq>& x, const Matrix<int>& j) {
    const std::uint32_t q = g(0, 0).q();
    const Matrix<Fq> ginv = lift_int_matrix(j.transpose(), q) * g.transpose() * lift_int_matrix(j, q);
    return g * x * ginv;
}

} // namespace orbvol
