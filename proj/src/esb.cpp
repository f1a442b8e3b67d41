#include "nexp2dqbf/esb.hpp"

#include <cmath>
#include <functional>
#include <map>
#include <set>

namespace n2d {

BoolExpr BoolExpr::constant(bool v) {
    BoolExpr e;
    e.kind = Kind::Const;
    e.value = v;
    return e;
}

BoolExpr BoolExpr::var(std::string n) {
    BoolExpr e;
    e.kind = Kind::Var;
    e.name = std::move(n);
    return e;
}

BoolExpr BoolExpr::func(std::string n, std::vector<EsbArg> args) {
    BoolExpr e;
    e.kind = Kind::FuncApp;
    e.name = std::move(n);
    e.args = std::move(args);
    return e;
}

BoolExpr BoolExpr::make(Kind k, std::vector<BoolExpr> ch) {
    BoolExpr e;
    e.kind = k;
    e.children = std::move(ch);
    return e;
}

int EsbFormula::func_arity(const std::string& name) const {
    for (auto& f : functions)
        if (f.name == name) return f.arity;
    return -1;
}

namespace {

void validate_expr(const EsbFormula& phi, const std::set<std::string>& vars,
                   const BoolExpr& e) {
    switch (e.kind) {
        case BoolExpr::Kind::Const:
            break;
        case BoolExpr::Kind::Var:
            if (!vars.count(e.name))
                throw std::invalid_argument("undeclared variable: " + e.name);
            break;
        case BoolExpr::Kind::FuncApp: {
            int ar = phi.func_arity(e.name);
            if (ar < 0) throw std::invalid_argument("undeclared function: " + e.name);
            if (static_cast<int>(e.args.size()) != ar)
                throw std::invalid_argument("arity mismatch on function " + e.name);
            for (auto& a : e.args)
                if (!a.is_const && !vars.count(a.var))
                    throw std::invalid_argument("function argument is not a prefix variable: " +
                                                a.var);
            break;
        }
        default:
            for (auto& c : e.children) validate_expr(phi, vars, c);
    }
}

}  // namespace

void EsbFormula::validate() const {
    std::set<std::string> vars;
    for (auto& [q, v] : prefix)
        if (!vars.insert(v).second) throw std::invalid_argument("duplicate prefix variable: " + v);
    std::set<std::string> fnames;
    for (auto& f : functions)
        if (!fnames.insert(f.name).second)
            throw std::invalid_argument("duplicate function symbol: " + f.name);
    validate_expr(*this, vars, matrix);
}

namespace {

BoolExpr circuit_to_expr_ref(const Circuit& c, const Ref& r,
                             const std::function<BoolExpr(const std::string&)>& leaf,
                             std::map<int, BoolExpr>& memo);

BoolExpr circuit_to_expr_gate(const Circuit& c, int gi,
                              const std::function<BoolExpr(const std::string&)>& leaf,
                              std::map<int, BoolExpr>& memo) {
    auto it = memo.find(gi);
    if (it != memo.end()) return it->second;
    const Gate& g = c.gates[gi];
    BoolExpr e;
    if (g.kind == GateKind::Const) {
        e = BoolExpr::constant(g.const_value != 0);
    } else {
        std::vector<BoolExpr> ch;
        for (auto& r : g.operands) ch.push_back(circuit_to_expr_ref(c, r, leaf, memo));
        switch (g.kind) {
            case GateKind::And: e = BoolExpr::make(BoolExpr::Kind::And, std::move(ch)); break;
            case GateKind::Or: e = BoolExpr::make(BoolExpr::Kind::Or, std::move(ch)); break;
            case GateKind::Not: e = BoolExpr::make(BoolExpr::Kind::Not, std::move(ch)); break;
            case GateKind::Xor: e = BoolExpr::make(BoolExpr::Kind::Xor, std::move(ch)); break;
            case GateKind::Const: break;
        }
    }
    memo[gi] = e;
    return e;
}

BoolExpr circuit_to_expr_ref(const Circuit& c, const Ref& r,
                             const std::function<BoolExpr(const std::string&)>& leaf,
                             std::map<int, BoolExpr>& memo) {
    if (r.is_input()) return leaf(c.groups[r.group].first);
    return circuit_to_expr_gate(c, r.gate, leaf, memo);
}

BoolExpr dnf_to_expr(const DnfMatrix& dnf,
                     const std::function<BoolExpr(const std::string&)>& leaf) {
    std::vector<BoolExpr> terms;
    for (auto& term : dnf.terms) {
        std::vector<BoolExpr> lits;
        for (auto& l : term) {
            BoolExpr e = leaf(l.var);
            if (l.neg) e = BoolExpr::make(BoolExpr::Kind::Not, {std::move(e)});
            lits.push_back(std::move(e));
        }
        terms.push_back(BoolExpr::make(BoolExpr::Kind::And, std::move(lits)));
    }
    if (terms.empty()) return BoolExpr::constant(false);
    return BoolExpr::make(BoolExpr::Kind::Or, std::move(terms));
}

}  // namespace

EsbFormula dqbf_to_esb(const Dqbf& phi) {
    phi.validate();
    EsbFormula out;
    for (auto& e : phi.existentials)
        out.functions.push_back({e.name, static_cast<int>(e.deps.size())});
    for (auto& u : phi.universals) out.prefix.emplace_back(Quant::Forall, u);

    std::map<std::string, const Dqbf::Existential*> exist;
    for (auto& e : phi.existentials) exist[e.name] = &e;
    auto leaf = [&](const std::string& var) -> BoolExpr {
        auto it = exist.find(var);
        if (it == exist.end()) return BoolExpr::var(var);
        std::vector<EsbArg> args;
        for (auto& d : it->second->deps) args.push_back(EsbArg::of_var(d));
        return BoolExpr::func(var, std::move(args));
    };
    if (auto* c = std::get_if<Circuit>(&phi.matrix)) {
        std::map<int, BoolExpr> memo;
        out.matrix = circuit_to_expr_ref(*c, c->output, leaf, memo);
    } else {
        out.matrix = dnf_to_expr(std::get<DnfMatrix>(phi.matrix), leaf);
    }
    out.validate();
    return out;
}

namespace {

struct Occurrence {
    std::string func;
    std::vector<EsbArg> args;
    std::string exist_name;  // the DQBF variable standing for it
};

void collect_occurrences(const BoolExpr& e, std::vector<Occurrence>& occ) {
    if (e.kind == BoolExpr::Kind::FuncApp) {
        for (auto& o : occ)
            if (o.func == e.name && o.args == e.args) return;
        occ.push_back({e.name, e.args, {}});
        return;
    }
    for (auto& c : e.children) collect_occurrences(c, occ);
}

Ref expr_to_ref(const BoolExpr& e, CircuitBuilder& b,
                const std::map<std::string, Ref>& var_ref,
                const std::vector<Occurrence>& occ) {
    switch (e.kind) {
        case BoolExpr::Kind::Const:
            return b.constant(e.value);
        case BoolExpr::Kind::Var:
            return var_ref.at(e.name);
        case BoolExpr::Kind::FuncApp:
            for (auto& o : occ)
                if (o.func == e.name && o.args == e.args) return var_ref.at(o.exist_name);
            throw std::logic_error("occurrence not collected");
        case BoolExpr::Kind::Not:
            return b.lnot(expr_to_ref(e.children[0], b, var_ref, occ));
        case BoolExpr::Kind::Xor:
            return b.lxor(expr_to_ref(e.children[0], b, var_ref, occ),
                          expr_to_ref(e.children[1], b, var_ref, occ));
        case BoolExpr::Kind::Implies:
            return b.implies(expr_to_ref(e.children[0], b, var_ref, occ),
                             expr_to_ref(e.children[1], b, var_ref, occ));
        case BoolExpr::Kind::Iff:
            return b.iff(expr_to_ref(e.children[0], b, var_ref, occ),
                         expr_to_ref(e.children[1], b, var_ref, occ));
        case BoolExpr::Kind::And:
        case BoolExpr::Kind::Or: {
            std::vector<Ref> ch;
            for (auto& c : e.children) ch.push_back(expr_to_ref(c, b, var_ref, occ));
            return e.kind == BoolExpr::Kind::And ? b.land(std::move(ch))
                                                 : b.lor(std::move(ch));
        }
    }
    throw std::logic_error("unreachable");
}

}  // namespace

Dqbf esb_to_dqbf(const EsbFormula& phi) {
    phi.validate();

    Dqbf out;
    std::set<std::string> universal_set;
    std::vector<Dqbf::Existential> fo_exist;
    for (auto& [q, v] : phi.prefix) {
        if (q == Quant::Forall) {
            out.universals.push_back(v);
            universal_set.insert(v);
        } else {
            // A first-order existential may read everything quantified before it.
            fo_exist.push_back({v, out.universals});
        }
    }

    std::vector<Occurrence> occ;
    collect_occurrences(phi.matrix, occ);
    std::set<std::string> taken(universal_set);
    for (auto& e : fo_exist) taken.insert(e.name);
    int counter = 0;
    for (auto& o : occ) {
        for (auto& a : o.args)
            if (!a.is_const && !universal_set.count(a.var))
                throw std::invalid_argument(
                    "function argument must be a universal prefix variable: " + a.var);
        std::string name;
        do {
            name = o.func + "_o" + std::to_string(counter++);
        } while (taken.count(name));
        taken.insert(name);
        o.exist_name = name;
    }

    out.existentials = fo_exist;
    for (auto& o : occ) {
        std::vector<std::string> deps;
        for (auto& a : o.args)
            if (!a.is_const) deps.push_back(a.var);
        out.existentials.push_back({o.exist_name, std::move(deps)});
    }

    CircuitBuilder b("esb_matrix");
    std::map<std::string, Ref> var_ref;
    for (auto& u : out.universals) var_ref[u] = b.add_group(u, 1)[0];
    for (auto& e : out.existentials) var_ref[e.name] = b.add_group(e.name, 1)[0];

    std::vector<Ref> conj{expr_to_ref(phi.matrix, b, var_ref, occ)};
    // Consistency: equal argument tuples of the same symbol must yield equal
    // values.
    auto arg_ref = [&](const EsbArg& a) { return a.is_const ? b.constant(a.value) : var_ref.at(a.var); };
    for (size_t i = 0; i < occ.size(); ++i)
        for (size_t j = i + 1; j < occ.size(); ++j) {
            if (occ[i].func != occ[j].func) continue;
            std::vector<Ref> eqs;
            for (size_t p = 0; p < occ[i].args.size(); ++p)
                eqs.push_back(b.iff(arg_ref(occ[i].args[p]), arg_ref(occ[j].args[p])));
            conj.push_back(b.implies(b.land(std::move(eqs)),
                                     b.iff(var_ref.at(occ[i].exist_name),
                                           var_ref.at(occ[j].exist_name))));
        }
    out.matrix = b.finish(b.land(std::move(conj)));
    out.validate();
    return out;
}

namespace {

bool eval_expr(const BoolExpr& e, const std::map<std::string, uint8_t>& env,
               const std::map<std::string, const FuncTable*>& tables) {
    switch (e.kind) {
        case BoolExpr::Kind::Const:
            return e.value;
        case BoolExpr::Kind::Var:
            return env.at(e.name);
        case BoolExpr::Kind::FuncApp: {
            int idx = 0;
            for (auto& a : e.args) idx = (idx << 1) | (a.is_const ? a.value : env.at(a.var));
            return tables.at(e.name)->values[idx];
        }
        case BoolExpr::Kind::Not:
            return !eval_expr(e.children[0], env, tables);
        case BoolExpr::Kind::Xor:
            return eval_expr(e.children[0], env, tables) ^ eval_expr(e.children[1], env, tables);
        case BoolExpr::Kind::Implies:
            return !eval_expr(e.children[0], env, tables) ||
                   eval_expr(e.children[1], env, tables);
        case BoolExpr::Kind::Iff:
            return eval_expr(e.children[0], env, tables) == eval_expr(e.children[1], env, tables);
        case BoolExpr::Kind::And:
            for (auto& c : e.children)
                if (!eval_expr(c, env, tables)) return false;
            return true;
        case BoolExpr::Kind::Or:
            for (auto& c : e.children)
                if (eval_expr(c, env, tables)) return true;
            return false;
    }
    return false;
}

bool eval_qbf(const EsbFormula& phi, size_t qi, std::map<std::string, uint8_t>& env,
              const std::map<std::string, const FuncTable*>& tables) {
    if (qi == phi.prefix.size()) return eval_expr(phi.matrix, env, tables);
    auto& [q, v] = phi.prefix[qi];
    for (int b = 0; b <= 1; ++b) {
        env[v] = static_cast<uint8_t>(b);
        bool sub = eval_qbf(phi, qi + 1, env, tables);
        if (q == Quant::Forall && !sub) return false;
        if (q == Quant::Exists && sub) return true;
    }
    return q == Quant::Forall;
}

}  // namespace

EsbSolveResult esb_solve_bruteforce(const EsbFormula& phi, uint64_t budget) {
    phi.validate();
    long double nominal = 1.0L;
    std::vector<int> sizes;
    for (auto& f : phi.functions) {
        if (f.arity > 20) throw CapacityError("function arity too large");
        int sz = 1 << f.arity;
        sizes.push_back(sz);
        nominal *= std::pow(2.0L, static_cast<long double>(sz));
        if (nominal > static_cast<long double>(budget))
            throw CapacityError("function interpretation space exceeds budget");
    }
    std::vector<FuncTable> tables;
    std::map<std::string, const FuncTable*> by_name;
    for (size_t i = 0; i < phi.functions.size(); ++i) {
        tables.push_back({phi.functions[i].name, std::vector<uint8_t>(sizes[i], 0)});
    }
    for (auto& t : tables) by_name[t.name] = &t;

    // Odometer over all interpretations, first function most significant.
    std::function<bool(size_t)> enumerate = [&](size_t fi) -> bool {
        if (fi == tables.size()) {
            std::map<std::string, uint8_t> env;
            return eval_qbf(phi, 0, env, by_name);
        }
        uint64_t combos = uint64_t{1} << sizes[fi];
        for (uint64_t v = 0; v < combos; ++v) {
            for (int b = 0; b < sizes[fi]; ++b)
                tables[fi].values[b] = (v >> (sizes[fi] - 1 - b)) & 1;
            if (enumerate(fi + 1)) return true;
        }
        return false;
    };
    if (enumerate(0)) return {true, tables};
    return {false, {}};
}

}  // namespace n2d
