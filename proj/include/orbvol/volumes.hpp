#pragma once

#include "orbvol/params.hpp"
#include "orbvol/pasdsl.hpp"
#include "orbvol/rational.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace orbvol {

enum class VolumeMode { Exhaustive, MonteCarlo };
std::string to_string(VolumeMode m);

struct VolumeOptions {
    VolumeMode mode = VolumeMode::Exhaustive;
    std::uint64_t samples = 20000; // Monte Carlo only
    std::uint64_t seed = 0;
    unsigned jobs = 1;
    Uniformizer u{};
};

// Volumes for the measure with vol(g(O)) = 1. upper - lower is the mass
// on which the formula stayed unknown at precision K.
struct VolumeReport {
    Rational lower{0}, upper{0};
    VolumeMode mode = VolumeMode::Exhaustive;
    int K = 0;
    std::uint64_t samples = 0; // points evaluated
    std::uint64_t seed = 0;
    double estimate = 0; // Monte Carlo midpoint
    double radius = 0;   // 99% normal half-width
    // Split into the two sign classes once a transfer-sign oracle exists.
    std::optional<std::pair<Rational, Rational>> signed_parts;
};

constexpr double kZ99 = 2.5758;
constexpr std::uint64_t kExhaustiveBudget = 10'000'000;

VolumeReport volume(const Formula& f, const AlgebraType& type, std::uint32_t q, int K, const VolumeOptions& opt = {});

// |G(F_q)| from the classical order formula.
BigInt order_polynomial(const AlgebraType& type, std::uint32_t q);
// |G(F_q)|, enumerated when small and compared against the order formula.
BigInt group_order(const AlgebraType& type, std::uint32_t q);
// |Z_G(X)(F_q)| by enumeration.
std::uint64_t centralizer_order(const AlgebraType& type, const Matrix<Fq>& x);

struct NormalizationData {
    BigInt group_order;
    int dim = 0, rank = 0;
    int delta = 0;        // dim g - rank g
    Rational group_factor; // <G>_q = |G(F_q)| q^{-dim G}
};
NormalizationData normalization(const AlgebraType& type, std::uint32_t q);

// Point counts of the mu-fibers on the restricted locus of g(O/t^K).
struct FiberTable {
    AlgebraType type;
    Rational r;
    std::uint32_t q = 0;
    int K = 0;
    std::vector<SPoint> points; // enumerate_S order
    std::vector<std::uint64_t> counts;
    std::vector<std::optional<std::uint64_t>> first_index; // a fiber element, by lattice index
    std::uint64_t restricted = 0, unknown = 0, total = 0;

    Rational volume(std::size_t i) const;
    std::optional<std::size_t> find(const SPoint& y) const;
};
FiberTable fiber_table(const AlgebraType& type, const Rational& r, std::uint32_t q, int K, unsigned jobs = 1,
                       Uniformizer u = {});

enum class Corruption { None, DropDeltaFactor, DropGroupFactor };

// vol(mu-fiber of y) / (<G>_q q^{-r delta / 2}); throws PrecisionExhausted
// when unknown mass remains at K.
NormalizedValue stable_orbital(const FiberTable& table, const SPoint& y, Corruption c = Corruption::None);
NormalizedValue stable_orbital(const SPoint& y, std::uint32_t q, int K, unsigned jobs = 1);

struct FlRow {
    std::string y; // g-side point
    NormalizedValue lhs, rhs;
    std::optional<std::uint64_t> torus_order; // |Z_G(X bar)(F_q)| for a fiber element, r = 0
    bool pass = false;
};

struct FlCheck {
    std::vector<FlRow> rows;
    bool all_pass() const;
};

// Stable face of the fundamental-lemma identity: h = g, or h = h1 x h2 an
// endoscopic pair, compared point by point through the image map.
FlCheck fl_check(const AlgebraType& g, const std::vector<AlgebraType>& h, const Rational& r, std::uint32_t q, int K,
                 unsigned jobs = 1, Corruption corrupt_g_side = Corruption::None);
inline FlCheck fl_r0_check(const AlgebraType& g, const std::vector<AlgebraType>& h, std::uint32_t q, unsigned jobs = 1,
                           Corruption c = Corruption::None) {
    return fl_check(g, h, Rational(0), q, 1, jobs, c);
}

} // namespace orbvol
