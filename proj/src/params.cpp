#include "orbvol/params.hpp"

#include "orbvol/textio.hpp"

#include <algorithm>
#include <sstream>

namespace orbvol {

std::string reduced_algebra(const AlgebraType& type, const SlopeConstants& consts) {
    const std::string g = std::to_string(consts.g);
    if (consts.n % 2 == 0) return "gl(" + g + ")";
    switch (type.family) {
    case Family::Sp:
        return "sp(" + g + ")";
    case Family::SOodd:
        return "so(" + std::to_string(consts.g + 1) + ")";
    case Family::SOeven:
        return "so(" + g + ")";
    }
    return {};
}

std::string SPoint::str() const {
    std::ostringstream os;
    os << algebra.str() << " r=" << to_string(r) << " R = " << format_poly(R);
    if (pf) os << ", pf = " << pf->signed_value();
    if (v) os << ", v = " << v->signed_value();
    return os.str();
}

SPoint mu(const LieElement& x, const Rational& r, Uniformizer u) {
    Classification c = is_restricted(x, r, u);
    if (!c.accepted()) throw PreconditionError("element is not restricted at r = " + to_string(r) + ": " + c.reason);
    RestrictedWitness& w = *c.witness;
    SPoint y{x.type(), r, std::move(w.R), std::nullopt, std::nullopt};
    if (x.type().family == Family::SOeven) {
        if (w.consts.n % 2 == 1)
            y.pf = w.pf_ac;
        else
            y.v = w.pf_ac;
    }
    return y;
}

bool equivalent(const LieElement& x, const LieElement& y, const Rational& r, Uniformizer u) {
    return mu(x, r, u) == mu(y, r, u);
}

namespace {

// Square roots of det(J) R(0) in F_q, ascending.
std::vector<Fq> pfaffian_data(const AlgebraType& type, const FqPoly& R) {
    const std::uint32_t q = R.zero().q();
    const Fq target = Fq(q, form_determinant(type)) * R.coeff(0);
    std::vector<Fq> out;
    if (auto s = target.sqrt()) {
        out.push_back(*s);
        if (!(-*s == *s)) out.push_back(-*s);
    }
    std::sort(out.begin(), out.end());
    return out;
}

bool r_invariants(const SlopeConstants& consts, const FqPoly& R) {
    if (!R.is_monic() || R.degree() != consts.g) return false;
    if (R.coeff(0).is_zero() || !is_separable(R)) return false;
    // n odd: the nonzero part is even in lambda^n, so R is even.
    if (consts.n % 2 == 1 && !is_even(R)) return false;
    return true;
}

std::optional<SlopeConstants> constants_for(const AlgebraType& type, const Rational& r) {
    const std::int64_t N = type.nonzero_degree();
    if (denom(Rational(r * N)) != 1) return std::nullopt;
    return SlopeConstants::from_degree(r, N);
}

} // namespace

bool is_valid_spoint(const SPoint& y) {
    const auto consts = constants_for(y.algebra, y.r);
    if (!consts || !r_invariants(*consts, y.R)) return false;
    if (y.algebra.family != Family::SOeven) return !y.pf && !y.v;
    const bool n_odd = consts->n % 2 == 1;
    const std::optional<Fq>& s = n_odd ? y.pf : y.v;
    const std::optional<Fq>& other = n_odd ? y.v : y.pf;
    if (!s || other) return false;
    return *s * *s == Fq(s->q(), form_determinant(y.algebra)) * y.R.coeff(0);
}

std::vector<SPoint> enumerate_S(const AlgebraType& type, const Rational& r, std::uint32_t q) {
    require_prime(q);
    if (q == 2) throw PreconditionError("odd characteristic required");
    const auto consts = constants_for(type, r);
    if (!consts) return {};
    double space = 1;
    for (std::int64_t i = 0; i < consts->g; ++i) space *= q;
    if (space > 1e6) throw BudgetExceeded("enumerate_S: q^g exceeds 10^6");
    std::vector<SPoint> out;
    for (FqPoly& R : monic_polys(q, static_cast<int>(consts->g))) {
        if (!r_invariants(*consts, R)) continue;
        if (type.family != Family::SOeven) {
            out.push_back({type, r, std::move(R), std::nullopt, std::nullopt});
            continue;
        }
        for (const Fq& s : pfaffian_data(type, R)) {
            SPoint y{type, r, R, std::nullopt, std::nullopt};
            (consts->n % 2 == 1 ? y.pf : y.v) = s;
            out.push_back(std::move(y));
        }
    }
    return out;
}

bool is_endoscopic_pair(const AlgebraType& g, const AlgebraType& h1, const AlgebraType& h2) {
    switch (g.family) {
    case Family::Sp:
        return h1.family == Family::Sp && h2.family == Family::SOeven && h2.c != 1 && h1.c + h2.c == g.c;
    case Family::SOodd:
        return h1.family == Family::SOodd && h2.family == Family::SOodd && h1.c + h2.c == g.c;
    case Family::SOeven:
        return h1.family == Family::SOeven && h2.family == Family::SOeven && h1.c != 1 && h2.c != 1 && h1.c + h2.c == g.c;
    }
    return false;
}

SPoint image(const AlgebraType& g, const SPairPoint& y) {
    if (!is_endoscopic_pair(g, y.y1.algebra, y.y2.algebra))
        throw PreconditionError(y.y1.algebra.str() + " x " + y.y2.algebra.str() + " is not an endoscopic pair for " + g.str());
    if (y.y1.r != y.y2.r) throw PreconditionError("image: both points need the same slope");
    if (y.y1.R.zero().q() != y.y2.R.zero().q()) throw FieldMismatch("image: points over different fields");
    if (gcd(y.y1.R, y.y2.R).degree() > 0) throw PreconditionError("image: reductions share a root (not G-regular)");
    SPoint x{g, y.y1.r, y.y1.R * y.y2.R, std::nullopt, std::nullopt};
    if (g.family == Family::SOeven) {
        if (y.y1.pf && y.y2.pf) x.pf = *y.y1.pf * *y.y2.pf;
        if (y.y1.v && y.y2.v) x.v = *y.y1.v * *y.y2.v;
    }
    return x;
}

bool in_S_gh(const AlgebraType& g, const SPairPoint& y) {
    try {
        return is_valid_spoint(image(g, y));
    } catch (const PreconditionError&) {
        return false;
    }
}

} // namespace orbvol
