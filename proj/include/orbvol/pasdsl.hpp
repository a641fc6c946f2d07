#pragma once

#include "orbvol/errors.hpp"
#include "orbvol/lie.hpp"
#include "orbvol/params.hpp"

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace orbvol {

// Predicate language, quantifier free:
//
//   formula := disj
//   disj    := conj { "||" conj }
//   conj    := unary { "&&" unary }
//   unary   := "!" unary | "(" formula ")" | atom
//   atom    := "ord" "(" term ")" cmp rational
//            | "ac" "(" term ")" eq fq
//            | "res" "[" int "]" "(" term ")" eq fq
//            | "member" | "true" | "false"
//            | "restricted" "(" rational ")"
//            | "mu_eq" "(" "{" key ":" value { "," key ":" value } "}" ")"
//            | "pfaff_ac_eq" "(" fq ")"
//   term    := prod { ("+" | "-") prod }
//   prod    := factor { "*" factor }
//   factor  := "-" factor | base [ "^" int ]
//   base    := int | "t" | "X" | "x" IJ | "alpha" "[" int "]" "(" "X" ")" | "(" term ")"
//
// cmp is one of = == != < <= > >=, eq one of = == !=. ord(X) is the minimum
// valuation of the entries. mu_eq keys: R (coefficient list from the leading
// one down), r, pf, v; r defaults to the argument of the formula's single
// restricted(r) atom.
class FormulaError : public PreconditionError {
public:
    enum class Kind { Syntax, Sort };
    FormulaError(Kind kind, int line, int col, const std::string& msg);
    Kind kind() const { return kind_; }
    int line() const { return line_; }
    int col() const { return col_; }

private:
    Kind kind_;
    int line_, col_;
};

enum class Truth { False, True, Unknown };
Truth operator&&(Truth a, Truth b);
Truth operator||(Truth a, Truth b);
Truth operator!(Truth a);
std::string to_string(Truth t);

struct FormulaNode;

class Formula {
public:
    explicit Formula(std::shared_ptr<const FormulaNode> root) : root_(std::move(root)) {}
    const FormulaNode& root() const { return *root_; }
    // Canonical text; parse(str()) reproduces the tree.
    std::string str() const;
    std::size_t atom_count() const;

private:
    std::shared_ptr<const FormulaNode> root_;
};

Formula parse_formula(std::string_view src);

// Kleene evaluation on X as stored (entries known to their own precision).
// "member" means consistent with membership at the stored precision.
Truth eval(const Formula& f, const AlgebraType& type, const Matrix<LaurentNumber>& x, Uniformizer u = {});
Truth eval(const Formula& f, const LieElement& x, Uniformizer u = {});
// Evaluates on X known modulo t^K.
Truth eval(const Formula& f, const LieElement& x, int K, Uniformizer u = {});

// Elements of g(O/t^K): index -> X with entries known mod t^K.
class LatticeEnumerator {
public:
    LatticeEnumerator(AlgebraType type, std::uint32_t q, int K);
    std::uint64_t size() const { return size_; }
    Matrix<LaurentNumber> element(std::uint64_t index) const;
    // digits of the index, base q, one per (basis, level) slot
    std::vector<std::uint32_t> digits(std::uint64_t index) const;
    std::uint64_t index_of(const std::vector<std::uint32_t>& digits) const;
    const AlgebraType& type() const { return type_; }
    std::uint32_t q() const { return q_; }
    int K() const { return K_; }

private:
    AlgebraType type_;
    std::uint32_t q_;
    int K_;
    std::uint64_t size_ = 1;
    std::vector<Matrix<int>> basis_;
};

struct LevelProbe {
    int level = 0;          // smallest M with no disagreeing pair found
    std::uint64_t samples = 0; // elements (exhaustive) or pairs (sampled) evaluated
    std::uint64_t unknown = 0;
    bool exhaustive = false;
    std::uint64_t seed = 0;
};

// Exhaustive over g(O/t^K) when trials is empty, otherwise random pairs
// X, X + t^M Z from a seeded generator. Throws BudgetExceeded when the
// predicate is not constant even modulo t^{K-1}.
LevelProbe level_probe(const Formula& f, const AlgebraType& type, std::uint32_t q, int K,
                       std::optional<std::uint64_t> trials = std::nullopt, std::uint64_t seed = 0);

// Counter-based generator: value i of stream seed.
std::uint64_t splitmix64(std::uint64_t seed, std::uint64_t counter);

} // namespace orbvol
