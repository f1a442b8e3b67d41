#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "nexp2dqbf/esb.hpp"
#include "nexp2dqbf/reductions.hpp"

namespace n2d {

// First-order formula over predicate atoms P(x...), equalities x = y, and
// function equalities z = g(x...) (the only place function symbols appear).
struct FoFormula {
    enum class Kind {
        Const, Pred, Eq, FuncEq, Not, And, Or, Implies, Iff, Forall, Exists
    };
    Kind kind = Kind::Const;
    bool value = false;             // Const
    std::string name;               // Pred/FuncEq: symbol; Forall/Exists: variable
    std::vector<std::string> args;  // Pred: arguments; Eq: {a, b}; FuncEq: {z, x...}
    std::vector<FoFormula> children;

    static FoFormula constant(bool v);
    static FoFormula pred(std::string p, std::vector<std::string> args);
    static FoFormula eq(std::string a, std::string b);
    static FoFormula func_eq(std::string z, std::string g, std::vector<std::string> args);
    static FoFormula make(Kind k, std::vector<FoFormula> ch);
    static FoFormula quant(Kind k, std::string var, FoFormula body);
};

struct FOSentence {
    FoFormula root;
    std::map<std::string, int> predicates;  // name -> arity
    std::map<std::string, int> functions;   // name -> arity

    // Closed formula, consistent arities matching the declared signature.
    void validate() const;
};

// Finite structure; predicate and function tables are indexed by the tuple
// of arguments read as a base-`domain` number, first argument most
// significant.
struct Structure {
    int domain = 1;
    std::map<std::string, std::vector<uint8_t>> preds;
    std::map<std::string, std::vector<int>> funcs;
};

enum class FragmentTag { Bsr, Fo2Scott, Monadic };

struct FragmentClass {
    FragmentTag tag = FragmentTag::Bsr;
    int m = 0;  // Bsr: leading existentials; Fo2Scott: conjuncts
    int n = 0;  // unary predicates
    int r = 0;  // Monadic: quantifier rank
};

// Smallest-model guarantee for the fragment.
uint64_t esm_bound(const FragmentClass& cls);

// Prenex input; removes existential quantifiers outermost-first, each one
// becoming a trailing universal z guarded by z = g(<earlier universals>).
// A redundant leading universal is added when the sentence starts with an
// existential.  Output prefix is all-universal.
FOSentence skolemize(const FOSentence& phi);

// Bounded-model encoding: domain elements are bit strings of width
// t = max(1, ceil(log N)); f0 selects the model's elements, each function
// symbol becomes t bit functions, each predicate one boolean function.
EsbFormula bsatfo_to_esb(const FOSentence& phi, uint64_t n_bound);

// Two-element-model view: function tables become predicates over arguments
// drawn from {x0, x1}.  Output prefix is exists x0 exists x1 forall ...
FOSentence esb_to_bsr(const EsbFormula& phi);

// Single-function all-universal input; point = prefix assignment, value =
// the tuple of occurrence values, consistency ties equal argument tuples
// across the two copies.
ProjectionCircuit project_esb(const EsbFormula& phi);

// First-order existentials removed via the DQBF round trip; multiple
// function symbols merged into one with constant selector-bit arguments.
EsbFormula normalize_esb(const EsbFormula& phi);

// Formulas with free variables x and y: profile equality, and profile
// successor (R1 least significant, with the wraparound disjunct).
std::pair<FoFormula, FoFormula> build_feq_fsuc(const std::vector<std::string>& preds);

// Two-variable translation: unary predicates R1..Rn carry the point bits,
// S1..Sm the value bits; same-profile points take the same value, the
// circuit holds on every pair of profiles, and every profile has a
// successor.
FOSentence algorithm2(const ProjectionCircuit& d);

bool fo_model_check(const FOSentence& phi, const Structure& s);

struct BoundedSatResult {
    bool sat = false;
    Structure model;
};

// Enumerates structures of domain size 1..N in lexicographic order and
// returns the first model.  Exact; throws CapacityError past the budget.
BoundedSatResult bounded_sat_bruteforce(const FOSentence& phi, int n_bound,
                                        uint64_t budget = kDefaultBudget);

// S-expression reader/printer, e.g.
//   (forall x (forall y (or (not (E x y)) (= x y))))
// with function atoms written (= z (g x1 x2)).
FOSentence parse_fo(const std::string& text);
std::string emit_fo(const FOSentence& phi);

}  // namespace n2d
