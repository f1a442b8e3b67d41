#include "nexp2dqbf/oracle.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <functional>

namespace n2d {

ExplicitGraph expand_graph(const SuccinctGraph& g) {
    int n = g.vertex_bits;
    if (n < 1) throw std::invalid_argument("graph needs at least one vertex bit");
    if (n > 12) throw CapacityError("graph too large to expand");
    if (g.edge.groups != std::vector<std::pair<std::string, int>>{{"u", n}, {"v", n}})
        throw std::invalid_argument("edge circuit needs groups u, v of the vertex width");
    ExplicitGraph out;
    out.vertex_bits = n;
    int sz = 1 << n;
    out.adj.assign(static_cast<size_t>(sz) * sz, 0);
    Evaluator ev(g.edge);
    std::vector<uint8_t> in(2 * n);
    for (int u = 0; u < sz; ++u)
        for (int v = 0; v < sz; ++v) {
            for (int b = 0; b < n; ++b) {
                in[b] = (u >> (n - 1 - b)) & 1;
                in[n + b] = (v >> (n - 1 - b)) & 1;
            }
            out.adj[static_cast<size_t>(u) * sz + v] = static_cast<uint8_t>(ev.run(in));
        }
    out.undirected = true;
    out.selfloop_free = true;
    for (int u = 0; u < sz; ++u) {
        if (out.edge(u, u)) out.selfloop_free = false;
        for (int v = 0; v < u; ++v)
            if (out.edge(u, v) != out.edge(v, u)) out.undirected = false;
    }
    return out;
}

std::optional<std::vector<int>> oracle_3col(const ExplicitGraph& g) {
    if (g.vertex_bits > 8) throw CapacityError("graph too large for coloring search");
    int sz = g.size();
    std::vector<int> color(sz, -1);
    std::function<bool(int)> dfs = [&](int v) -> bool {
        if (v == sz) return true;
        for (int c = 0; c < 3; ++c) {
            bool ok = !(g.edge(v, v));
            for (int u = 0; ok && u < v; ++u)
                if (color[u] == c && (g.edge(u, v) || g.edge(v, u))) ok = false;
            if (!ok) continue;
            color[v] = c;
            if (dfs(v + 1)) return true;
            color[v] = -1;
        }
        return false;
    };
    if (dfs(0)) return color;
    return std::nullopt;
}

bool check_coloring(const ExplicitGraph& g, const std::vector<int>& coloring) {
    int sz = g.size();
    if (static_cast<int>(coloring.size()) != sz) return false;
    for (int u = 0; u < sz; ++u) {
        if (coloring[u] < 0 || coloring[u] > 2) return false;
        for (int v = 0; v < sz; ++v)
            if ((g.edge(u, v) || g.edge(v, u)) && coloring[u] == coloring[v]) return false;
    }
    return true;
}

std::optional<std::vector<int>> oracle_hamiltonian(const ExplicitGraph& g) {
    if (g.vertex_bits > 4) throw CapacityError("graph too large for cycle search");
    int sz = g.size();
    std::vector<int> cycle{0};
    std::vector<uint8_t> used(sz, 0);
    used[0] = 1;
    std::function<bool()> dfs = [&]() -> bool {
        if (static_cast<int>(cycle.size()) == sz) return g.edge(cycle.back(), cycle[0]);
        for (int v = 0; v < sz; ++v) {
            if (used[v] || !g.edge(cycle.back(), v)) continue;
            used[v] = 1;
            cycle.push_back(v);
            if (dfs()) return true;
            cycle.pop_back();
            used[v] = 0;
        }
        return false;
    };
    if (dfs()) return cycle;
    return std::nullopt;
}

bool check_hamiltonian_cycle(const ExplicitGraph& g, const std::vector<int>& cycle) {
    int sz = g.size();
    if (static_cast<int>(cycle.size()) != sz) return false;
    std::vector<uint8_t> seen(sz, 0);
    for (int v : cycle) {
        if (v < 0 || v >= sz || seen[v]) return false;
        seen[v] = 1;
    }
    for (int i = 0; i < sz; ++i)
        if (!g.edge(cycle[i], cycle[(i + 1) % sz])) return false;
    return true;
}

std::optional<std::vector<int>> oracle_set_packing(const SetFamilyInstance& inst) {
    int m = inst.element_bits, n = inst.name_bits;
    if (m > 10 || n > 10) throw CapacityError("set family too large");
    int names = 1 << n, elems = 1 << m;
    if (inst.k < 1) throw std::invalid_argument("set packing needs k >= 1");
    long double nominal = std::pow(static_cast<long double>(names),
                                   static_cast<long double>(inst.k));
    if (nominal > static_cast<long double>(1 << 20))
        throw CapacityError("set packing search too large");

    Evaluator ev(inst.membership);
    std::vector<uint8_t> in(m + n);
    std::vector<uint64_t> mask(names, 0);
    for (int b = 0; b < names; ++b)
        for (int a = 0; a < elems; ++a) {
            for (int i = 0; i < m; ++i) in[i] = (a >> (m - 1 - i)) & 1;
            for (int i = 0; i < n; ++i) in[m + i] = (b >> (n - 1 - i)) & 1;
            if (ev.run(in)) mask[b] |= uint64_t{1} << a;
        }
    // Repeats are legal exactly when the repeated set is empty, which is what
    // pairwise mask disjointness over the tuple already enforces.
    std::vector<int> pick;
    std::function<bool()> dfs = [&]() -> bool {
        if (pick.size() == inst.k) return true;
        for (int b = 0; b < names; ++b) {
            bool ok = true;
            for (int p : pick)
                if (mask[p] & mask[b]) { ok = false; break; }
            if (!ok) continue;
            pick.push_back(b);
            if (dfs()) return true;
            pick.pop_back();
        }
        return false;
    };
    if (dfs()) return pick;
    return std::nullopt;
}

std::optional<std::vector<int>> oracle_subset_sum(const SubsetSumInstance& inst) {
    int n1 = inst.c1.group_width("u1");
    int n2 = inst.c2.group_width("u2");
    int m = inst.c1.group_width("v");
    int n = std::max(n1, n2);
    if (n > 5 || m > 4) throw CapacityError("subset-sum instance too large");
    int bits = 1 << n, rows = 1 << m;

    auto number = [&](const Circuit& c, int uw, int row, bool with_row) {
        Evaluator ev(c);
        uint64_t value = 0;
        std::vector<uint8_t> in(uw + (with_row ? m : 0));
        for (int pos = 0; pos < bits; ++pos) {
            if (pos >= (1 << uw)) break;  // padded high positions read zero
            for (int i = 0; i < uw; ++i) in[i] = (pos >> (uw - 1 - i)) & 1;
            for (int i = 0; with_row && i < m; ++i) in[uw + i] = (row >> (m - 1 - i)) & 1;
            if (ev.run(in)) value |= uint64_t{1} << pos;
        }
        return value;
    };
    std::vector<uint64_t> s(rows);
    for (int j = 0; j < rows; ++j) s[j] = number(inst.c1, n1, j, true);
    uint64_t target = number(inst.c2, n2, 0, false);

    for (int x = 0; x < (1 << rows); ++x) {
        uint64_t sum = 0;
        for (int j = 0; j < rows; ++j)
            if ((x >> j) & 1) sum += s[j];
        if (sum == target) {
            std::vector<int> subset;
            for (int j = 0; j < rows; ++j)
                if ((x >> j) & 1) subset.push_back(j);
            return subset;
        }
    }
    return std::nullopt;
}

std::optional<std::vector<int>> oracle_independent_set(const ExplicitGraph& g, uint64_t k) {
    if (g.vertex_bits > 8) throw CapacityError("graph too large for independent-set search");
    if (k == 0) throw std::invalid_argument("independent set needs k >= 1");
    int sz = g.size();
    if (k > static_cast<uint64_t>(sz)) return std::nullopt;
    std::vector<int> pick;
    // Self-loops do not disqualify a vertex; only edges between distinct
    // members do.
    std::function<bool(int)> dfs = [&](int from) -> bool {
        if (pick.size() == k) return true;
        for (int v = from; v < sz; ++v) {
            bool ok = true;
            for (int u : pick)
                if (g.edge(u, v) || g.edge(v, u)) { ok = false; break; }
            if (!ok) continue;
            pick.push_back(v);
            if (dfs(v + 1)) return true;
            pick.pop_back();
        }
        return false;
    };
    if (dfs(0)) return pick;
    return std::nullopt;
}

std::optional<std::vector<int>> oracle_subgraph_iso(const ExplicitGraph& g1,
                                                    const ExplicitGraph& g2) {
    if (g1.vertex_bits > 4 || g2.vertex_bits > 4)
        throw CapacityError("graphs too large for isomorphism search");
    if (g1.vertex_bits > g2.vertex_bits)
        throw std::invalid_argument("pattern graph larger than host graph");
    int s1 = g1.size(), s2 = g2.size();
    std::vector<int> map(s1, -1);
    std::vector<uint8_t> used(s2, 0);
    // Induced semantics: non-edges (and self-loop status) must be preserved.
    std::function<bool(int)> dfs = [&](int v) -> bool {
        if (v == s1) return true;
        for (int w = 0; w < s2; ++w) {
            if (used[w]) continue;
            bool ok = g1.edge(v, v) == g2.edge(w, w);
            for (int u = 0; ok && u < v; ++u)
                ok = g1.edge(u, v) == g2.edge(map[u], w) &&
                     g1.edge(v, u) == g2.edge(w, map[u]);
            if (!ok) continue;
            map[v] = w;
            used[w] = 1;
            if (dfs(v + 1)) return true;
            map[v] = -1;
            used[w] = 0;
        }
        return false;
    };
    if (dfs(0)) return map;
    return std::nullopt;
}

std::optional<std::vector<int>> oracle_vertex_cover(const ExplicitGraph& g, uint64_t k) {
    if (g.vertex_bits > 4) throw CapacityError("graph too large for cover search");
    int sz = g.size();
    uint64_t kk = std::min<uint64_t>(k, sz);
    for (uint32_t mask = 0; mask < (uint32_t{1} << sz); ++mask) {
        if (static_cast<uint64_t>(std::popcount(mask)) > kk) continue;
        bool covered = true;
        for (int u = 0; covered && u < sz; ++u)
            for (int v = 0; covered && v < sz; ++v)
                if (g.edge(u, v) && !((mask >> u) & 1) && !((mask >> v) & 1)) covered = false;
        if (covered) {
            std::vector<int> cover;
            for (int u = 0; u < sz; ++u)
                if ((mask >> u) & 1) cover.push_back(u);
            return cover;
        }
    }
    return std::nullopt;
}

std::optional<std::vector<int>> oracle_dominating_set(const ExplicitGraph& g, uint64_t k) {
    if (g.vertex_bits > 4) throw CapacityError("graph too large for domination search");
    if (k == 0) throw std::invalid_argument("dominating set needs k >= 1");
    int sz = g.size();
    uint64_t kk = std::min<uint64_t>(k, sz);
    for (uint32_t mask = 0; mask < (uint32_t{1} << sz); ++mask) {
        if (mask == 0 || static_cast<uint64_t>(std::popcount(mask)) > kk) continue;
        bool dominated = true;
        for (int v = 0; dominated && v < sz; ++v) {
            if ((mask >> v) & 1) continue;
            bool hit = false;
            for (int w = 0; !hit && w < sz; ++w)
                if (((mask >> w) & 1) && g.edge(v, w)) hit = true;
            dominated = hit;
        }
        if (dominated) {
            std::vector<int> set;
            for (int u = 0; u < sz; ++u)
                if ((mask >> u) & 1) set.push_back(u);
            return set;
        }
    }
    return std::nullopt;
}

std::optional<std::vector<int>> oracle_succinct_sat(const Circuit& c) {
    int m = c.group_width("u");
    int n = c.group_width("v");
    if (c.group_width("t") != 1) throw std::invalid_argument("clause circuit needs group t");
    if (m > 4 || n > 10) throw CapacityError("formula too large for assignment search");
    int vars = 1 << m, clauses = 1 << n;
    Evaluator ev(c);
    std::vector<uint8_t> in(1 + m + n);
    auto contains = [&](int sign, int var, int clause) {
        in[0] = static_cast<uint8_t>(sign);
        for (int i = 0; i < m; ++i) in[1 + i] = (var >> (m - 1 - i)) & 1;
        for (int i = 0; i < n; ++i) in[1 + m + i] = (clause >> (n - 1 - i)) & 1;
        return ev.run(in) != 0;
    };
    for (uint32_t assign = 0; assign < (uint32_t{1} << vars); ++assign) {
        bool ok = true;
        for (int j = 0; ok && j < clauses; ++j) {
            bool sat = false;
            for (int i = 0; !sat && i < vars; ++i) {
                int val = (assign >> i) & 1;
                if (contains(val, i, j)) sat = true;
            }
            ok = sat;
        }
        if (ok) {
            std::vector<int> out(vars);
            for (int i = 0; i < vars; ++i) out[i] = (assign >> i) & 1;
            return out;
        }
    }
    return std::nullopt;
}

AgreementResult agreement_search(const ProjectionCircuit& d, uint64_t budget) {
    d.validate();
    int n = d.point_width, m = d.value_width;
    if (n > 16 || m > 16) throw CapacityError("projection too wide");
    uint64_t points = uint64_t{1} << n;
    // The candidate space is (2^m)^points, but pruning usually collapses it;
    // budget the pair evaluations actually performed instead.
    uint64_t spent = 0;

    Evaluator ev(d.d);
    std::vector<uint8_t> in(2 * (n + m));
    auto load = [&](int off, uint64_t value, int width) {
        for (int i = 0; i < width; ++i)
            in[off + i] = static_cast<uint8_t>((value >> (width - 1 - i)) & 1);
    };
    // Layout x1 | y1 | x2 | y2.
    auto pair_ok = [&](uint64_t w1, uint64_t v1, uint64_t w2, uint64_t v2) {
        if (++spent > budget) throw CapacityError("agreement search exceeds budget");
        load(0, w1, n);
        load(n, v1, m);
        load(n + m, w2, n);
        load(2 * n + m, v2, m);
        return ev.run(in) != 0;
    };

    std::vector<uint64_t> g(points, 0);
    std::function<bool(uint64_t)> dfs = [&](uint64_t w) -> bool {
        if (w == points) return true;
        for (uint64_t v = 0; v < (uint64_t{1} << m); ++v) {
            bool ok = pair_ok(w, v, w, v);
            for (uint64_t w2 = 0; ok && w2 < w; ++w2)
                ok = pair_ok(w, v, w2, g[w2]) && pair_ok(w2, g[w2], w, v);
            if (!ok) continue;
            g[w] = v;
            if (dfs(w + 1)) return true;
        }
        return false;
    };
    if (dfs(0)) return {true, g};
    return {false, {}};
}

std::optional<std::vector<uint64_t>> ntm_run_oracle(const NTM& machine, const std::string& word,
                                                    int t) {
    machine.validate();
    if (t < 1) throw std::invalid_argument("tableau exponent must be positive");
    if (t > 3) throw CapacityError("tableau too large to simulate");
    int side = 1 << t;
    if (word.size() > static_cast<size_t>(side)) throw CapacityError("word longer than the tape");

    int ns = static_cast<int>(machine.alphabet.size());
    auto sym_code = [&](int s) { return static_cast<uint64_t>(s); };
    auto head_code = [&](int q, int s) { return static_cast<uint64_t>(ns + q * ns + s); };

    std::vector<int> tape(side, machine.blank);
    for (size_t i = 0; i < word.size(); ++i) {
        int s = machine.symbol_index(std::string(1, word[i]));
        if (s < 0) throw std::invalid_argument("word symbol outside the tape alphabet");
        tape[i] = s;
    }

    std::vector<uint64_t> tableau(static_cast<size_t>(side) * side, 0);
    auto record_row = [&](int j, const std::vector<int>& tp, int head, int state) {
        for (int i = 0; i < side; ++i)
            tableau[static_cast<size_t>(i) * side + j] =
                i == head ? head_code(state, tp[i]) : sym_code(tp[i]);
    };

    uint64_t steps = 0;
    std::function<bool(int, int, int, std::vector<int>&)> dfs =
        [&](int j, int state, int head, std::vector<int>& tp) -> bool {
        if (++steps > (uint64_t{1} << 22)) throw CapacityError("simulation branching too wide");
        record_row(j, tp, head, state);
        if (j == side - 1) return head == 0 && state == machine.accepting;
        for (auto* tr : machine.moves_from(state, tp[head])) {
            int old = tp[head];
            tp[head] = tr->write;
            int nh = head;
            if (tr->move == Move::Right) nh = (head + 1) % side;
            if (tr->move == Move::Left) nh = (head + side - 1) % side;
            if (dfs(j + 1, tr->next_state, nh, tp)) return true;
            tp[head] = old;
        }
        return false;
    };
    if (dfs(0, machine.initial, 0, tape)) return tableau;
    return std::nullopt;
}

}  // namespace n2d
