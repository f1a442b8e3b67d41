#include "nexp2dqbf/dqbf.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <set>

namespace n2d {

namespace {

// Evaluates the matrix against a flat variable-bit vector ordered
// [universals..., existentials...].
class MatrixEval {
public:
    MatrixEval(const Dqbf& phi) : phi_(&phi) {
        int pos = 0;
        for (auto& u : phi.universals) var_pos_[u] = pos++;
        for (auto& e : phi.existentials) var_pos_[e.name] = pos++;
        nvars_ = pos;
        if (auto* c = std::get_if<Circuit>(&phi.matrix)) {
            ev_.emplace(*c);
            for (auto& [gname, w] : c->groups) {
                auto it = var_pos_.find(gname);
                if (it == var_pos_.end() || w != 1)
                    throw std::invalid_argument("matrix group is not a declared variable: " +
                                                gname);
                circuit_inputs_.push_back(it->second);
            }
            flat_.resize(circuit_inputs_.size());
        } else {
            auto& dnf = std::get<DnfMatrix>(phi.matrix);
            for (auto& term : dnf.terms) {
                std::vector<std::pair<int, bool>> t;
                for (auto& lit : term) {
                    auto it = var_pos_.find(lit.var);
                    if (it == var_pos_.end())
                        throw std::invalid_argument("matrix references undeclared variable: " +
                                                    lit.var);
                    t.emplace_back(it->second, lit.neg);
                }
                dnf_.push_back(std::move(t));
            }
        }
    }

    int num_vars() const { return nvars_; }

    int run(const std::vector<uint8_t>& varbits) {
        if (ev_) {
            for (size_t i = 0; i < circuit_inputs_.size(); ++i)
                flat_[i] = varbits[circuit_inputs_[i]];
            return ev_->run(flat_);
        }
        for (auto& term : dnf_) {
            bool ok = true;
            for (auto& [pos, neg] : term)
                if (static_cast<bool>(varbits[pos]) == neg) {
                    ok = false;
                    break;
                }
            if (ok) return 1;
        }
        return 0;
    }

private:
    const Dqbf* phi_;
    int nvars_ = 0;
    std::map<std::string, int> var_pos_;
    std::optional<Evaluator> ev_;
    std::vector<int> circuit_inputs_;
    std::vector<uint8_t> flat_;
    std::vector<std::vector<std::pair<int, bool>>> dnf_;
};

}  // namespace

void Dqbf::validate() const {
    std::set<std::string> names;
    for (auto& u : universals)
        if (!names.insert(u).second) throw std::invalid_argument("duplicate variable: " + u);
    for (auto& e : existentials) {
        if (!names.insert(e.name).second)
            throw std::invalid_argument("duplicate variable: " + e.name);
        for (auto& d : e.deps)
            if (std::find(universals.begin(), universals.end(), d) == universals.end())
                throw std::invalid_argument("dependency is not a universal: " + d);
    }
    MatrixEval check(*this);  // verifies matrix variables are declared
    (void)check;
}

namespace {

struct SearchLayout {
    int n_univ = 0;
    std::vector<int> table_offset;  // bit offset of each existential's table
    std::vector<int> table_size;
    int total_bits = 0;
};

SearchLayout layout_of(const Dqbf& phi, uint64_t budget) {
    SearchLayout L;
    L.n_univ = static_cast<int>(phi.universals.size());
    if (L.n_univ > 24) throw CapacityError("too many universal variables");
    // Nominal search space: prod 2^{2^{|deps|}}, checked against the budget.
    long double nominal = 1.0L;
    for (auto& e : phi.existentials) {
        if (e.deps.size() > 20) throw CapacityError("dependency set too large");
        int sz = 1 << e.deps.size();
        L.table_offset.push_back(L.total_bits);
        L.table_size.push_back(sz);
        L.total_bits += sz;
        nominal *= std::pow(2.0L, static_cast<long double>(sz));
        if (nominal > static_cast<long double>(budget))
            throw CapacityError("Skolem search space exceeds budget");
    }
    return L;
}

}  // namespace

SolveResult solve_bruteforce(const Dqbf& phi, uint64_t budget) {
    phi.validate();
    SearchLayout L = layout_of(phi, budget);
    MatrixEval me(phi);
    const int n = L.n_univ;
    const int m = static_cast<int>(phi.existentials.size());
    const uint64_t n_assign = uint64_t{1} << n;

    // Dependency positions of each universal within the declaration order.
    std::map<std::string, int> upos;
    for (int i = 0; i < n; ++i) upos[phi.universals[i]] = i;

    // For every universal assignment: the universal bits, the table entry
    // each existential reads, and the last-assigned of those entries (the
    // point in the DFS where the assignment becomes checkable).
    std::vector<std::vector<int>> by_trigger(std::max(L.total_bits, 1));
    std::vector<std::vector<int>> entry(n_assign, std::vector<int>(m));
    std::vector<std::vector<uint8_t>> ubits(n_assign, std::vector<uint8_t>(n));
    std::vector<int> immediate;  // checkable with no table bits (m == 0)
    for (uint64_t a = 0; a < n_assign; ++a) {
        for (int i = 0; i < n; ++i) ubits[a][i] = (a >> (n - 1 - i)) & 1;
        int trig = -1;
        for (int i = 0; i < m; ++i) {
            int idx = 0;
            for (auto& d : phi.existentials[i].deps) idx = (idx << 1) | ubits[a][upos[d]];
            entry[a][i] = idx;
            trig = std::max(trig, L.table_offset[i] + idx);
        }
        if (trig < 0)
            immediate.push_back(static_cast<int>(a));
        else
            by_trigger[trig].push_back(static_cast<int>(a));
    }

    std::vector<uint8_t> bits(L.total_bits, 0);
    std::vector<uint8_t> varbits(n + m, 0);
    auto matrix_ok = [&](int a) {
        for (int i = 0; i < n; ++i) varbits[i] = ubits[a][i];
        for (int i = 0; i < m; ++i) varbits[n + i] = bits[L.table_offset[i] + entry[a][i]];
        return me.run(varbits) == 1;
    };

    for (int a : immediate)
        if (!matrix_ok(a)) return {false, {}};

    // DFS over table bits in lexicographic order (0 before 1): the first
    // complete assignment equals the lexicographically first witness of the
    // naive table enumeration.
    std::function<bool(int)> dfs = [&](int pos) -> bool {
        if (pos == L.total_bits) return true;
        for (int v = 0; v <= 1; ++v) {
            bits[pos] = static_cast<uint8_t>(v);
            bool ok = true;
            for (int a : by_trigger[pos])
                if (!matrix_ok(a)) {
                    ok = false;
                    break;
                }
            if (ok && dfs(pos + 1)) return true;
        }
        bits[pos] = 0;
        return false;
    };

    if (!dfs(0)) return {false, {}};

    SolveResult res;
    res.sat = true;
    for (int i = 0; i < m; ++i) {
        SkolemTable t;
        t.var = phi.existentials[i].name;
        t.values.assign(bits.begin() + L.table_offset[i],
                        bits.begin() + L.table_offset[i] + L.table_size[i]);
        res.tables.push_back(std::move(t));
    }
    return res;
}

bool check_skolem(const Dqbf& phi, const std::vector<SkolemTable>& tables) {
    phi.validate();
    const int n = static_cast<int>(phi.universals.size());
    const int m = static_cast<int>(phi.existentials.size());
    if (static_cast<int>(tables.size()) != m)
        throw std::invalid_argument("table count does not match existential count");
    for (int i = 0; i < m; ++i) {
        if (tables[i].var != phi.existentials[i].name)
            throw std::invalid_argument("table order does not match existentials");
        if (tables[i].values.size() != size_t{1} << phi.existentials[i].deps.size())
            throw std::invalid_argument("table arity mismatch for " + tables[i].var);
    }
    if (n > 24) throw CapacityError("too many universal variables");
    std::map<std::string, int> upos;
    for (int i = 0; i < n; ++i) upos[phi.universals[i]] = i;
    MatrixEval me(phi);
    std::vector<uint8_t> varbits(n + m);
    for (uint64_t a = 0; a < (uint64_t{1} << n); ++a) {
        for (int i = 0; i < n; ++i) varbits[i] = (a >> (n - 1 - i)) & 1;
        for (int i = 0; i < m; ++i) {
            int idx = 0;
            for (auto& d : phi.existentials[i].deps) idx = (idx << 1) | varbits[upos[d]];
            varbits[n + i] = tables[i].values[idx];
        }
        if (me.run(varbits) != 1) return false;
    }
    return true;
}

namespace {

std::string fresh_name(std::string base, const std::set<std::string>& taken) {
    while (taken.count(base)) base = "_" + base;
    return base;
}

}  // namespace

Dqbf prop1_dnf_transform(const Dqbf& phi) {
    phi.validate();
    if (std::holds_alternative<DnfMatrix>(phi.matrix)) return phi;  // already DNF
    const Circuit& c = std::get<Circuit>(phi.matrix);

    std::set<std::string> taken(phi.universals.begin(), phi.universals.end());
    for (auto& e : phi.existentials) taken.insert(e.name);

    const int k = static_cast<int>(c.gates.size());
    const int m = static_cast<int>(phi.existentials.size());
    std::vector<std::string> u_names, v_names;
    for (int i = 1; i <= k; ++i) {
        u_names.push_back(fresh_name("u" + std::to_string(i), taken));
        taken.insert(u_names.back());
    }
    for (int i = 1; i <= m; ++i) {
        v_names.push_back(fresh_name("v" + std::to_string(i), taken));
        taken.insert(v_names.back());
    }

    std::map<std::string, int> exist_idx;
    for (int i = 0; i < m; ++i) exist_idx[phi.existentials[i].name] = i;

    // Literal standing for a gate operand in the universal copy: existential
    // inputs go through their v mirror, gates through their u variable.
    auto lit_of = [&](const Ref& r) -> Literal {
        if (r.is_gate()) return {u_names[r.gate], false};
        const std::string& var = c.groups[r.group].first;
        auto it = exist_idx.find(var);
        if (it != exist_idx.end()) return {v_names[it->second], false};
        return {var, false};
    };
    auto neg = [](Literal l) {
        l.neg = !l.neg;
        return l;
    };

    DnfMatrix dnf;
    // (v_i <-> y_i) conjuncts, negated: (v_i & ~y_i) | (~v_i & y_i).
    for (int i = 0; i < m; ++i) {
        const std::string& y = phi.existentials[i].name;
        dnf.terms.push_back({{v_names[i], false}, {y, true}});
        dnf.terms.push_back({{v_names[i], true}, {y, false}});
    }
    // Negated gate definitions.
    for (int j = 0; j < k; ++j) {
        const Gate& g = c.gates[j];
        Literal u{u_names[j], false};
        std::vector<Literal> ls;
        for (auto& r : g.operands) ls.push_back(lit_of(r));
        switch (g.kind) {
            case GateKind::And: {
                for (auto& l : ls) dnf.terms.push_back({u, neg(l)});
                std::vector<Literal> t{neg(u)};
                t.insert(t.end(), ls.begin(), ls.end());
                dnf.terms.push_back(std::move(t));
                break;
            }
            case GateKind::Or: {
                std::vector<Literal> t{u};
                for (auto& l : ls) t.push_back(neg(l));
                dnf.terms.push_back(std::move(t));
                for (auto& l : ls) dnf.terms.push_back({neg(u), l});
                break;
            }
            case GateKind::Not:
                dnf.terms.push_back({u, ls[0]});
                dnf.terms.push_back({neg(u), neg(ls[0])});
                break;
            case GateKind::Xor:
                dnf.terms.push_back({u, ls[0], ls[1]});
                dnf.terms.push_back({u, neg(ls[0]), neg(ls[1])});
                dnf.terms.push_back({neg(u), ls[0], neg(ls[1])});
                dnf.terms.push_back({neg(u), neg(ls[0]), ls[1]});
                break;
            case GateKind::Const:
                dnf.terms.push_back({g.const_value ? neg(u) : u});
                break;
        }
    }
    // The surviving output term.
    dnf.terms.push_back({lit_of(c.output)});

    Dqbf out;
    out.universals = phi.universals;
    out.universals.insert(out.universals.end(), u_names.begin(), u_names.end());
    out.universals.insert(out.universals.end(), v_names.begin(), v_names.end());
    out.existentials = phi.existentials;
    out.matrix = std::move(dnf);
    out.validate();
    return out;
}

}  // namespace n2d
