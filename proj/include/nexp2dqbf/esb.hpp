#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "nexp2dqbf/dqbf.hpp"

namespace n2d {

enum class Quant { Forall, Exists };

// Argument of a function variable: a prefix variable or a constant bit.
// Constants show up when several function symbols are packed into one with
// selector bits; plain formulas only use variables.
struct EsbArg {
    bool is_const = false;
    uint8_t value = 0;
    std::string var;

    static EsbArg of_var(std::string v) { return EsbArg{false, 0, std::move(v)}; }
    static EsbArg of_const(int b) { return EsbArg{true, static_cast<uint8_t>(b ? 1 : 0), {}}; }
    bool operator==(const EsbArg&) const = default;
};

// Quantifier-free boolean formula over prefix variables and function
// variables f(z).
struct BoolExpr {
    enum class Kind { Const, Var, FuncApp, Not, And, Or, Xor, Implies, Iff };
    Kind kind = Kind::Const;
    bool value = false;           // Const
    std::string name;             // Var / FuncApp
    std::vector<EsbArg> args;     // FuncApp
    std::vector<BoolExpr> children;

    static BoolExpr constant(bool v);
    static BoolExpr var(std::string n);
    static BoolExpr func(std::string n, std::vector<EsbArg> args);
    static BoolExpr make(Kind k, std::vector<BoolExpr> ch);
};

// QBF extended with leading existential quantification over boolean
// functions.
struct EsbFormula {
    struct Func {
        std::string name;
        int arity = 0;
    };
    std::vector<Func> functions;
    std::vector<std::pair<Quant, std::string>> prefix;
    BoolExpr matrix;

    void validate() const;
    int func_arity(const std::string& name) const;  // -1 if absent
};

struct FuncTable {
    std::string name;
    std::vector<uint8_t> values;  // indexed by num() of args, arg 0 most significant
};

struct EsbSolveResult {
    bool sat = false;
    std::vector<FuncTable> tables;
};

// One function symbol per existential, arity = |dependency set|; prefix is
// all-universal; occurrences y_i are replaced by f_i(z_i).
EsbFormula dqbf_to_esb(const Dqbf& phi);

// Inverse direction: first-order existentials depend on all preceding
// universals; each distinct occurrence f(z) becomes its own existential and
// same-symbol occurrences are tied together with (z = z' -> y = y').
// Function arguments must be universal prefix variables or constants.
Dqbf esb_to_dqbf(const EsbFormula& phi);

// Exhaustive search over function interpretations; exact within budget.
EsbSolveResult esb_solve_bruteforce(const EsbFormula& phi, uint64_t budget = kDefaultBudget);

}  // namespace n2d
