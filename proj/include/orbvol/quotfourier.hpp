#pragma once

#include "orbvol/fields.hpp"
#include "orbvol/lie.hpp"
#include "orbvol/rational.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace orbvol {

// Lattice { sum c_b B_b : ord(c_b) >= val[b] } in the coordinates of algebra_basis.
struct CoordLattice {
    std::vector<int> val;

    bool contains(const std::vector<LaurentNumber>& coords) const;
    // vol(L) = q^{-volume_exponent}, with vol(g(O)) = 1.
    std::int64_t volume_exponent() const;
    friend bool operator==(const CoordLattice&, const CoordLattice&) = default;
};

enum class BuildingPoint { Hyperspecial, Sl2Barycenter };

// Moy-Prasad lattice g_{x,r}, or g_{x,r+} when plus is set.
CoordLattice moy_prasad_lattice(const AlgebraType& type, BuildingPoint x, const Rational& r, bool plus = false);

// The finite quotient lo / hi of two coordinate lattices (hi inside lo).
// Points are indexed by base-q digits, one digit per (basis index, level) slot.
class QuotientSpace {
public:
    QuotientSpace() = default;
    QuotientSpace(AlgebraType type, std::uint32_t q, CoordLattice lo, CoordLattice hi, BuildingPoint x = BuildingPoint::Hyperspecial);
    // g_{x,r} / g_{x,r+}
    static QuotientSpace moy_prasad(const AlgebraType& type, std::uint32_t q, BuildingPoint x, const Rational& r);
    // t^a g(O) / t^b g(O)
    static QuotientSpace window(const AlgebraType& type, std::uint32_t q, int a, int b);

    const AlgebraType& type() const { return type_; }
    std::uint32_t q() const { return q_; }
    const CoordLattice& lo() const { return lo_; }
    const CoordLattice& hi() const { return hi_; }
    BuildingPoint point() const { return x_; }
    int dim() const { return static_cast<int>(slots_.size()); } // over F_q
    std::size_t size() const { return size_; }
    std::string label() const;

    // hi^perp / lo^perp for the pairing psi(coeff_0 Tr(XY)).
    QuotientSpace dual() const;

    std::vector<std::uint32_t> digits(std::size_t index) const;
    std::size_t index_of(const std::vector<std::uint32_t>& digits) const;
    std::size_t negate(std::size_t index) const;
    std::size_t add(std::size_t a, std::size_t b) const;

    Matrix<LaurentNumber> representative(std::size_t index) const;
    // Coordinates of an element of g in the algebra basis.
    std::vector<LaurentNumber> coordinates(const Matrix<LaurentNumber>& x) const;
    bool contains(const Matrix<LaurentNumber>& x) const;
    // rho: lo -> lo / hi. Throws PreconditionError outside lo.
    std::size_t reduce(const Matrix<LaurentNumber>& x) const;

    // k with Lambda(X, Y) = zeta_p^k, for X here and Y in dual().
    std::uint32_t pairing(std::size_t x, std::size_t y_dual) const;
    // Slot pairs (here, dual) at opposite levels with their trace coefficient.
    struct PairTerm {
        std::size_t slot = 0, dual_slot = 0;
        std::uint32_t coeff = 0;
    };
    std::vector<PairTerm> pairing_terms() const;

    // The finite group acting on the quotient: G(F_q) at the hyperspecial
    // point, the diagonal torus at the barycenter.
    std::vector<Matrix<Fq>> acting_group() const;
    std::size_t act(const Matrix<Fq>& g, std::size_t index) const;
    // Sorted orbit of a point; guard on the group size.
    std::vector<std::size_t> orbit(std::size_t index) const;

    friend bool operator==(const QuotientSpace& a, const QuotientSpace& b) {
        return a.type_ == b.type_ && a.q_ == b.q_ && a.lo_ == b.lo_ && a.hi_ == b.hi_;
    }

private:
    struct Slot {
        int basis = 0;
        int level = 0;
    };
    AlgebraType type_;
    std::uint32_t q_ = 0;
    CoordLattice lo_, hi_;
    BuildingPoint x_ = BuildingPoint::Hyperspecial;
    std::vector<Slot> slots_;
    std::size_t size_ = 1;
    Matrix<Fq> gram_, gram_inv_;
};

// Trace form on the algebra basis, reduced mod q.
Matrix<Fq> trace_gram(const AlgebraType& type, std::uint32_t q);
// coeff_0 Tr(XY) mod q; throws PrecisionExhausted when undetermined.
Fq trace_pairing(const Matrix<LaurentNumber>& x, const Matrix<LaurentNumber>& y);

// value(i) = scale * values[i]
struct FiniteFunction {
    QuotientSpace space;
    std::vector<CycInt> values;
    Rational scale{1};

    static FiniteFunction zero(const QuotientSpace& s);
    static FiniteFunction delta(const QuotientSpace& s, std::size_t point);
    static FiniteFunction constant(const QuotientSpace& s, std::int64_t v);
    // Exact comparison of the scaled values.
    friend bool operator==(const FiniteFunction& a, const FiniteFunction& b);
};

// (F phi)(X) = sum_Y Lambda(Y, X) phi(Y), a function on the dual quotient.
FiniteFunction finite_ft(const FiniteFunction& phi);
// Extension of phi to a finer window: phi o rho on phi's lattice, zero off it.
FiniteFunction inflate(const FiniteFunction& phi, const QuotientSpace& target);
// Extension to g(O/t^K) = window(0, K).
FiniteFunction inflate(const FiniteFunction& phi, int K);
// |O|^{-1} times the indicator of the orbit of the point.
FiniteFunction orbit_indicator(const QuotientSpace& s, std::size_t point);
// Indicator of Z + L on a window.
FiniteFunction coset_indicator(const QuotientSpace& window, const Matrix<LaurentNumber>& z, const CoordLattice& l);

struct GaussValue {
    CycInt sum; // sum over the group of psi(<Ad(g) X, Y>)
    std::uint64_t group_order = 0;

    // The value sum / |G| when all phases cancel.
    std::optional<Rational> rational() const;
    std::string str() const;
};

// i^{(K)}(X, Y) = |G(O/t^K)|^{-1} sum_g psi(coeff_0 Tr(Ad(g) X Y)), X in g(O).
GaussValue gauss_integral(const LieElement& x, const LieElement& y, int K, std::uint64_t budget = 200'000);

} // namespace orbvol
