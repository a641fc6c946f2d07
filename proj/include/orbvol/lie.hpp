#pragma once

#include "orbvol/errors.hpp"
#include "orbvol/laurent.hpp"
#include "orbvol/matrix.hpp"
#include "orbvol/poly.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace orbvol {

enum class Family { Sp, SOodd, SOeven };

struct AlgebraType {
    Family family = Family::Sp;
    int d = 2; // matrix size
    int c = 1; // rank

    static AlgebraType sp(int d);
    static AlgebraType so(int d);
    // "sp:2c", "so:2c+1", "so:2c"; "sl:2" is accepted as sp:2.
    static AlgebraType parse(std::string_view spec);
    std::string str() const;

    int dim() const;
    int rank() const { return c; }
    int delta() const { return dim() - rank(); }
    // Degree of the nonzero part of a regular characteristic polynomial.
    int nonzero_degree() const { return 2 * c; }
    // Structural zero-eigenvalue multiplicity of a regular element.
    int base_zero_multiplicity() const { return family == Family::SOodd ? 1 : 0; }

    friend bool operator==(const AlgebraType&, const AlgebraType&) = default;
};

// The fixed form: antidiagonal, +1 above / -1 below for Sp, all +1 for SO.
Matrix<int> form_matrix(const AlgebraType& type);
std::int64_t form_determinant(const AlgebraType& type);

// Integer basis of g(Z) = { J^{-1} A : A symmetric (Sp) / skew (SO) }.
std::vector<Matrix<int>> algebra_basis(const AlgebraType& type);

// Ring glue for integer scalars.
inline Fq scale_int(const Fq& a, int k) { return a * Fq(a.q(), k); }
inline LaurentNumber scale_int(const LaurentNumber& a, int k) { return a.times(k); }
inline int scale_int(int a, int k) { return a * k; }
inline bool is_exact_zero(int a) { return a == 0; }

// tX J + J X == 0, entrywise exactly or up to the stored precision.
template <class T>
bool membership(const Matrix<T>& x, const Matrix<int>& j) {
    if (!x.square() || x.rows() != j.rows() || j.rows() != j.cols()) throw PreconditionError("membership: dimension mismatch");
    const std::size_t d = x.rows();
    for (std::size_t r = 0; r < d; ++r)
        for (std::size_t c = 0; c < d; ++c) {
            T acc = scale_int(x(0, 0), 0);
            for (std::size_t k = 0; k < d; ++k) {
                if (j(k, c)) acc += scale_int(x(k, r), j(k, c));
                if (j(r, k)) acc += scale_int(x(k, c), j(r, k));
            }
            if constexpr (std::is_same_v<T, LaurentNumber>) {
                if (acc.zero_state() == ZeroState::Nonzero) return false;
            } else {
                if (!is_exact_zero(acc)) return false;
            }
        }
    return true;
}

class LieElement {
public:
    LieElement() = default;
    // Throws PreconditionError when the matrix is not in the algebra.
    LieElement(AlgebraType type, Matrix<LaurentNumber> x);
    // sum coords[b] * basis[b]
    static LieElement from_coords(const AlgebraType& type, const std::vector<LaurentNumber>& coords);

    const AlgebraType& type() const { return type_; }
    const Matrix<LaurentNumber>& matrix() const { return x_; }
    const LaurentNumber& operator()(std::size_t i, std::size_t j) const { return x_(i, j); }
    std::uint32_t q() const { return x_(0, 0).q(); }
    LieElement truncated(std::int64_t prec) const;
    std::string str() const;

private:
    AlgebraType type_;
    Matrix<LaurentNumber> x_;
};

struct NonzeroPart {
    LPoly P;
    int m = 0;
};

NonzeroPart nonzero_part_charpoly(const LieElement& x);

// Perfect-matching expansion; A must be skew with even size (d <= 12).
Fq pfaffian(const Matrix<Fq>& a);
LaurentNumber pfaffian(const Matrix<LaurentNumber>& a);

struct RestrictedWitness {
    SlopeConstants consts;
    LPoly P;
    int m = 0;
    FqPoly R;
    std::optional<Fq> pf_ac; // SOeven only
};

struct Classification {
    std::optional<RestrictedWitness> witness;
    std::string reason; // set when rejected

    bool accepted() const { return witness.has_value(); }
};

// Definitive accept / reject; PrecisionExhausted when undecidable.
Classification is_restricted(const LieElement& x, const Rational& r, Uniformizer u = {});

struct Construction {
    std::optional<LieElement> element; // present when the form reached the standard J
    bool standard_form = true;
    Matrix<LaurentNumber> form; // J, or the companion form J' when the conversion failed
    Matrix<LaurentNumber> companion;
};

// Multiplication by lambda on F[lambda]/(P) with the sigma-twisted form,
// moved to the standard J by Gram-Schmidt. P is the nonzero part: even,
// degree 2c, exact coefficients in F_q((t)). Divisions are capped at
// abs_prec (t-units). For SOeven an optional target for ac(pfaff(JX)).
Construction construct_element(const AlgebraType& type, const LPoly& P, std::int64_t abs_prec,
                               std::optional<Fq> pfaff_target = std::nullopt);

// diag(a_1..a_c, [0], -a_c..-a_1).
LieElement split_torus_element(const AlgebraType& type, const std::vector<LaurentNumber>& eigenvalues);

// ---- groups ----

// G(F_q): Sp(J) or SO(J) over the prime field.
std::vector<Matrix<Fq>> enumerate_group(const AlgebraType& type, std::uint32_t q);
// G(O/t^K) by lifting G(F_q) one t-adic digit at a time; entries carry precision K.
std::vector<Matrix<LaurentNumber>> enumerate_group_truncated(const AlgebraType& type, std::uint32_t q, int K,
                                                             std::uint64_t budget = 2'000'000);
// g X g^{-1} with g^{-1} = J^{-1} tg J.
Matrix<LaurentNumber> adjoint(const Matrix<LaurentNumber>& g, const Matrix<LaurentNumber>& x, const Matrix<int>& j);
Matrix<Fq> adjoint(const Matrix<Fq>& g, const Matrix<Fq>& x, const Matrix<int>& j);

// Lift of an integer matrix into a ring.
Matrix<LaurentNumber> lift_int_matrix(const Matrix<int>& m, const ExtField& field, int e = 1);
Matrix<Fq> lift_int_matrix(const Matrix<int>& m, std::uint32_t q);

} // namespace orbvol
