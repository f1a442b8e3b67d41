#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "nexp2dqbf/circuit.hpp"

namespace n2d {

constexpr uint64_t kDefaultBudget = uint64_t{1} << 20;

struct Literal {
    std::string var;
    bool neg = false;
    bool operator==(const Literal&) const = default;
};

// Disjunction of conjunctive terms.
struct DnfMatrix {
    std::vector<std::vector<Literal>> terms;
};

// Prenex DQBF.  A circuit matrix uses one width-1 input group per variable,
// named after the variable; declaration order is universals then existentials.
struct Dqbf {
    struct Existential {
        std::string name;
        std::vector<std::string> deps;  // subset of universals
    };
    std::vector<std::string> universals;
    std::vector<Existential> existentials;
    std::variant<Circuit, DnfMatrix> matrix;

    void validate() const;  // unique names, deps declared, matrix vars declared
};

// Skolem function table for one existential: values indexed by num() of the
// dependency bits (dep[0] is the most significant bit).
struct SkolemTable {
    std::string var;
    std::vector<uint8_t> values;  // size 2^{#deps}
};

struct SolveResult {
    bool sat = false;
    std::vector<SkolemTable> tables;  // witness when sat
};

// Exhaustive Skolem-table search.  Exact: SAT iff some choice of tables makes
// the matrix a tautology.  The witness is the lexicographically first one,
// reading the concatenated tables (declaration order, entries ascending) as a
// bit string.  Throws CapacityError when the nominal search space
// prod_i 2^{2^{|deps_i|}} exceeds the budget.
SolveResult solve_bruteforce(const Dqbf& phi, uint64_t budget = kDefaultBudget);

// True iff the given tables make the matrix true under every universal
// assignment.  Throws std::invalid_argument on arity mismatch.
bool check_skolem(const Dqbf& phi, const std::vector<SkolemTable>& tables);

// Tseitin-style normalization: same existentials and dependency sets, fresh
// universals for gates and existential copies, DNF matrix with at most one
// existential literal per term.  Equisatisfiable with the input.
Dqbf prop1_dnf_transform(const Dqbf& phi);

}  // namespace n2d
