#include "nexp2dqbf/dqdimacs.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <sstream>

namespace n2d {

int DqdimacsFile::num_vars() const {
    return static_cast<int>(universals.size() + existentials.size());
}

namespace {

// Clauses for aux <-> <gate over operand literals>; literals are signed vars.
void tseitin_gate(std::vector<std::vector<int>>& clauses, int aux, GateKind kind,
                  const std::vector<int>& ops, int const_value) {
    switch (kind) {
        case GateKind::And: {
            std::vector<int> big{aux};
            for (int l : ops) {
                clauses.push_back({-aux, l});
                big.push_back(-l);
            }
            clauses.push_back(std::move(big));
            break;
        }
        case GateKind::Or: {
            std::vector<int> big{-aux};
            for (int l : ops) {
                clauses.push_back({aux, -l});
                big.push_back(l);
            }
            clauses.push_back(std::move(big));
            break;
        }
        case GateKind::Not:
            clauses.push_back({-aux, -ops[0]});
            clauses.push_back({aux, ops[0]});
            break;
        case GateKind::Xor:
            clauses.push_back({-aux, ops[0], ops[1]});
            clauses.push_back({-aux, -ops[0], -ops[1]});
            clauses.push_back({aux, ops[0], -ops[1]});
            clauses.push_back({aux, -ops[0], ops[1]});
            break;
        case GateKind::Const:
            clauses.push_back({const_value ? aux : -aux});
            break;
    }
}

}  // namespace

DqdimacsFile to_dqdimacs_file(const Dqbf& phi) {
    phi.validate();
    DqdimacsFile out;
    std::map<std::string, int> num;
    for (auto& u : phi.universals) {
        num[u] = static_cast<int>(num.size()) + 1;
        out.universals.push_back(num[u]);
    }
    for (auto& e : phi.existentials) {
        num[e.name] = static_cast<int>(num.size()) + 1;
        DqdimacsFile::Exist x;
        x.var = num[e.name];
        for (auto& d : e.deps) x.deps.push_back(num.at(d));
        out.existentials.push_back(std::move(x));
    }
    int next_var = static_cast<int>(num.size()) + 1;
    auto add_aux = [&]() {
        int v = next_var++;
        out.existentials.push_back({v, out.universals});
        return v;
    };

    if (auto* c = std::get_if<Circuit>(&phi.matrix)) {
        std::vector<int> gate_var(c->gates.size());
        auto lit_of = [&](const Ref& r) {
            return r.is_input() ? num.at(c->groups[r.group].first) : gate_var[r.gate];
        };
        for (size_t gi = 0; gi < c->gates.size(); ++gi) {
            const Gate& g = c->gates[gi];
            gate_var[gi] = add_aux();
            std::vector<int> ops;
            for (auto& r : g.operands) ops.push_back(lit_of(r));
            tseitin_gate(out.clauses, gate_var[gi], g.kind, ops, g.const_value);
        }
        out.clauses.push_back({lit_of(c->output)});
    } else {
        auto& dnf = std::get<DnfMatrix>(phi.matrix);
        std::vector<int> disjunction;
        for (auto& term : dnf.terms) {
            int aux = add_aux();
            std::vector<int> big{aux};
            for (auto& l : term) {
                int v = num.at(l.var) * (l.neg ? -1 : 1);
                out.clauses.push_back({-aux, v});
                big.push_back(-v);
            }
            out.clauses.push_back(std::move(big));
            disjunction.push_back(aux);
        }
        out.clauses.push_back(std::move(disjunction));
    }
    return out;
}

std::string emit_dqdimacs(const DqdimacsFile& f) {
    std::ostringstream os;
    os << "p cnf " << f.num_vars() << ' ' << f.clauses.size() << '\n';
    os << 'a';
    for (int u : f.universals) os << ' ' << u;
    os << " 0\n";
    for (auto& e : f.existentials) {
        os << 'd' << ' ' << e.var;
        for (int d : e.deps) os << ' ' << d;
        os << " 0\n";
    }
    for (auto& cl : f.clauses) {
        for (int l : cl) os << l << ' ';
        os << "0\n";
    }
    return os.str();
}

DqdimacsFile parse_dqdimacs(const std::string& text) {
    DqdimacsFile out;
    std::istringstream is(text);
    std::string line;
    int lineno = 0;
    int declared_vars = -1, declared_clauses = -1;
    bool saw_a = false;
    std::set<int> prefixed;

    auto read_zero_terminated = [&](std::istringstream& ls) {
        std::vector<int> xs;
        int v;
        bool closed = false;
        while (ls >> v) {
            if (v == 0) { closed = true; break; }
            xs.push_back(v);
        }
        if (!closed) throw ParseError("missing terminating 0", lineno);
        std::string rest;
        if (ls >> rest) throw ParseError("trailing tokens after 0", lineno);
        return xs;
    };
    auto check_var = [&](int v) {
        if (v < 1 || v > declared_vars) throw ParseError("variable out of range", lineno);
    };

    while (std::getline(is, line)) {
        ++lineno;
        if (line.empty() || line[0] == 'c') continue;
        std::istringstream ls(line);
        if (declared_vars < 0) {
            std::string p, cnf;
            if (!(ls >> p >> cnf >> declared_vars >> declared_clauses) || p != "p" ||
                cnf != "cnf" || declared_vars < 0 || declared_clauses < 0)
                throw ParseError("expected `p cnf <vars> <clauses>` header", lineno);
            std::string rest;
            if (ls >> rest) throw ParseError("trailing tokens after header", lineno);
            continue;
        }
        char tag = line[0];
        if (tag == 'a') {
            if (saw_a) throw ParseError("duplicate `a` line", lineno);
            if (!out.existentials.empty() || !out.clauses.empty())
                throw ParseError("`a` line must precede `d` lines and clauses", lineno);
            saw_a = true;
            ls.get();
            for (int v : read_zero_terminated(ls)) {
                check_var(v);
                if (!prefixed.insert(v).second)
                    throw ParseError("variable quantified twice", lineno);
                out.universals.push_back(v);
            }
        } else if (tag == 'd') {
            if (!out.clauses.empty()) throw ParseError("`d` line after clauses", lineno);
            ls.get();
            auto xs = read_zero_terminated(ls);
            if (xs.empty()) throw ParseError("empty `d` line", lineno);
            DqdimacsFile::Exist e;
            e.var = xs[0];
            check_var(e.var);
            if (!prefixed.insert(e.var).second)
                throw ParseError("variable quantified twice", lineno);
            std::set<int> uset(out.universals.begin(), out.universals.end());
            for (size_t i = 1; i < xs.size(); ++i) {
                check_var(xs[i]);
                if (!uset.count(xs[i]))
                    throw ParseError("dependency is not a universal", lineno);
                e.deps.push_back(xs[i]);
            }
            out.existentials.push_back(std::move(e));
        } else {
            auto xs = read_zero_terminated(ls);
            for (int l : xs) {
                check_var(std::abs(l));
                if (!prefixed.count(std::abs(l)))
                    throw ParseError("clause literal not quantified", lineno);
            }
            out.clauses.push_back(std::move(xs));
        }
    }
    if (declared_vars < 0) throw ParseError("missing header", 1);
    if (!saw_a) throw ParseError("missing `a` line", lineno);
    if (out.num_vars() != declared_vars)
        throw ParseError("header variable count does not match prefix", lineno);
    if (static_cast<int>(out.clauses.size()) != declared_clauses)
        throw ParseError("header clause count does not match body", lineno);
    return out;
}

Dqbf dqdimacs_to_dqbf(const DqdimacsFile& f) {
    Dqbf out;
    auto name_of = [](int v) { return "v" + std::to_string(v); };
    for (int u : f.universals) out.universals.push_back(name_of(u));
    for (auto& e : f.existentials) {
        Dqbf::Existential x{name_of(e.var), {}};
        for (int d : e.deps) x.deps.push_back(name_of(d));
        out.existentials.push_back(std::move(x));
    }
    CircuitBuilder b("cnf");
    std::map<int, Ref> var_ref;
    for (int u : f.universals) var_ref[u] = b.add_group(name_of(u), 1)[0];
    for (auto& e : f.existentials) var_ref[e.var] = b.add_group(name_of(e.var), 1)[0];
    std::vector<Ref> conj;
    for (auto& cl : f.clauses) {
        std::vector<Ref> lits;
        for (int l : cl)
            lits.push_back(l > 0 ? var_ref.at(l) : b.lnot(var_ref.at(-l)));
        conj.push_back(lits.empty() ? b.constant(0) : b.lor(std::move(lits)));
    }
    out.matrix = b.finish(conj.empty() ? b.constant(1) : b.land(std::move(conj)));
    out.validate();
    return out;
}

namespace {

// Plain recursive DPLL with unit propagation; clauses over 1-based variables.
bool dpll(const std::vector<std::vector<int>>& clauses, std::vector<int8_t>& assign) {
    // Unit propagation to fixpoint.
    std::vector<int> trail;
    bool changed = true;
    bool conflict = false;
    while (changed && !conflict) {
        changed = false;
        for (auto& cl : clauses) {
            int unassigned = 0, unit = 0;
            bool sat = false;
            for (int l : cl) {
                int8_t a = assign[std::abs(l)];
                if (a < 0) {
                    ++unassigned;
                    unit = l;
                } else if ((a == 1) == (l > 0)) {
                    sat = true;
                    break;
                }
            }
            if (sat) continue;
            if (unassigned == 0) { conflict = true; break; }
            if (unassigned == 1) {
                assign[std::abs(unit)] = unit > 0 ? 1 : 0;
                trail.push_back(std::abs(unit));
                changed = true;
            }
        }
    }
    if (!conflict) {
        int branch = 0;
        for (size_t v = 1; v < assign.size(); ++v)
            if (assign[v] < 0) { branch = static_cast<int>(v); break; }
        if (branch == 0) return true;
        for (int val = 0; val <= 1; ++val) {
            assign[branch] = static_cast<int8_t>(val);
            if (dpll(clauses, assign)) return true;
        }
        assign[branch] = -1;
    }
    for (int v : trail) assign[v] = -1;
    return false;
}

}  // namespace

bool solve_expansion(const DqdimacsFile& f, uint64_t budget) {
    int nu = static_cast<int>(f.universals.size());
    if (nu > 24) throw CapacityError("too many universals for expansion");
    uint64_t n_assign = uint64_t{1} << nu;
    if (n_assign * f.clauses.size() > budget * 64)
        throw CapacityError("expansion size exceeds budget");

    // Expansion variable block per existential, one slot per dep assignment.
    std::map<int, int> upos;  // universal var -> bit position
    for (int i = 0; i < nu; ++i) upos[f.universals[i]] = i;
    std::map<int, std::pair<int, const DqdimacsFile::Exist*>> eblock;  // var -> (offset, e)
    uint64_t total = 1;  // variable 0 unused
    for (auto& e : f.existentials) {
        if (e.deps.size() > 20) throw CapacityError("dependency set too large for expansion");
        eblock[e.var] = {static_cast<int>(total), &e};
        total += uint64_t{1} << e.deps.size();
        if (total > budget * 64) throw CapacityError("expansion size exceeds budget");
    }

    std::vector<std::vector<int>> clauses;
    std::vector<int> cl;
    for (uint64_t a = 0; a < n_assign; ++a) {
        for (auto& src : f.clauses) {
            cl.clear();
            bool sat = false;
            for (int l : src) {
                int v = std::abs(l);
                auto it = upos.find(v);
                if (it != upos.end()) {
                    bool val = (a >> it->second) & 1;
                    if (val == (l > 0)) { sat = true; break; }
                    continue;  // false literal drops out
                }
                auto& [offset, e] = eblock.at(v);
                int idx = 0;
                for (int d : e->deps) idx = (idx << 1) | static_cast<int>((a >> upos.at(d)) & 1);
                cl.push_back((offset + idx) * (l > 0 ? 1 : -1));
            }
            if (!sat) clauses.push_back(cl);
        }
    }
    std::sort(clauses.begin(), clauses.end());
    clauses.erase(std::unique(clauses.begin(), clauses.end()), clauses.end());

    std::vector<int8_t> assign(total, -1);
    return dpll(clauses, assign);
}

}  // namespace n2d
