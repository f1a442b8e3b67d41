#pragma once

#include <string>
#include <vector>

#include "nexp2dqbf/dqbf.hpp"

namespace n2d {

// Parsed DQDIMACS instance.  Variables are numbered from 1; every variable
// appears in exactly one prefix line (`a` for universals, `d` for an
// existential followed by its dependencies).
struct DqdimacsFile {
    struct Exist {
        int var = 0;
        std::vector<int> deps;
    };
    std::vector<int> universals;
    std::vector<Exist> existentials;
    std::vector<std::vector<int>> clauses;  // signed literals, no terminating 0

    int num_vars() const;
};

// CNF conversion: universals keep their numbers (1..n in declaration order),
// declared existentials follow with their dependency sets, then one Tseitin
// auxiliary per gate (or per DNF term), each depending on all universals.
DqdimacsFile to_dqdimacs_file(const Dqbf& phi);

std::string emit_dqdimacs(const DqdimacsFile& f);
inline std::string to_dqdimacs(const Dqbf& phi) { return emit_dqdimacs(to_dqdimacs_file(phi)); }

// Throws ParseError on grammar violations, header/count mismatches, variables
// missing from or duplicated across the prefix lines, or out-of-range
// literals.
DqdimacsFile parse_dqdimacs(const std::string& text);

// Rebuilds a DQBF with a CNF circuit matrix; variables are named v1..vN.
Dqbf dqdimacs_to_dqbf(const DqdimacsFile& f);

// Independent decision procedure: expands universals into a propositional
// CNF over (existential, dependency-assignment) variables and runs DPLL.
// Throws CapacityError when the expansion exceeds the budget.
bool solve_expansion(const DqdimacsFile& f, uint64_t budget = kDefaultBudget);

}  // namespace n2d
