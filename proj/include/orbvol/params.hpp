#pragma once

#include "orbvol/lie.hpp"
#include "orbvol/poly.hpp"

#include <optional>
#include <string>
#include <vector>

namespace orbvol {

// The reduced algebra g^[r]: "sp(g)", "so(g+1)", "so(g)" when n is odd, "gl(g)" otherwise.
std::string reduced_algebra(const AlgebraType& type, const SlopeConstants& consts);

// A point of S_{g,r} over F_q. For so(2c) the pfaffian datum s with
// s^2 = det(J) R(0) sits in pf when n is odd and in v when n is even.
struct SPoint {
    AlgebraType algebra;
    Rational r;
    FqPoly R;
    std::optional<Fq> pf;
    std::optional<Fq> v;

    std::string str() const;
    friend bool operator==(const SPoint&, const SPoint&) = default;
};

struct SPairPoint {
    SPoint y1, y2;
};

// Throws PreconditionError (with the rejection reason) when X is not restricted at r.
SPoint mu(const LieElement& x, const Rational& r, Uniformizer u = {});
bool equivalent(const LieElement& x, const LieElement& y, const Rational& r, Uniformizer u = {});

// All F_q-points, ordered by R (lexicographic, constant-first) then pfaffian datum.
std::vector<SPoint> enumerate_S(const AlgebraType& type, const Rational& r, std::uint32_t q);
// Checks the invariants of an S-point.
bool is_valid_spoint(const SPoint& y);

// Endoscopic pairs: sp(2c) <- sp(2a) x so(2b), so(2c+1) <- so(2a+1) x so(2b+1), so(2c) <- so(2a) x so(2b).
bool is_endoscopic_pair(const AlgebraType& g, const AlgebraType& h1, const AlgebraType& h2);
SPoint image(const AlgebraType& g, const SPairPoint& y);
bool in_S_gh(const AlgebraType& g, const SPairPoint& y);

} // namespace orbvol
