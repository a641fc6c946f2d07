#pragma once

#include "orbvol/laurent.hpp"
#include "orbvol/matrix.hpp"
#include "orbvol/poly.hpp"

#include <cstdint>
#include <string>
#include <string_view>

namespace orbvol {

// Polynomial literals: integers, t, the variable (λ, lambda, x or L), + - *,
// ^ with integer exponents (negative only on t), parentheses and
// juxtaposition, e.g. "λ^6 - t^2", "λ^2 - (1+t)", "2t λ^3 + 1".
LPoly parse_lpoly(std::string_view text, std::uint32_t q);
FqPoly parse_fqpoly(std::string_view text, std::uint32_t q);
// An expression in t alone, optionally ending in "+ O(t^k)".
LaurentNumber parse_laurent(std::string_view text, std::uint32_t q);

// Square matrix "[[a, b], [c, d]]" with entries in the parse_laurent grammar.
Matrix<LaurentNumber> parse_matrix(std::string_view text, std::uint32_t q);

std::string format_poly(const FqPoly& p);
std::string format_poly(const LPoly& p);

} // namespace orbvol
