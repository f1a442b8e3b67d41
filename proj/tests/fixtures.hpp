#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "nexp2dqbf/manifest.hpp"
#include "nexp2dqbf/oracle.hpp"
#include "nexp2dqbf/reductions.hpp"

namespace n2d::fix {

// Truth-table circuit: bit num(concatenated groups) of `mask` is the output.
inline Circuit table_circuit(const std::string& name,
                             const std::vector<std::pair<std::string, int>>& groups,
                             uint64_t mask) {
    CircuitBuilder b(name);
    std::vector<Ref> all;
    int total = 0;
    for (auto& [g, w] : groups) {
        auto refs = b.add_group(g, w);
        all.insert(all.end(), refs.begin(), refs.end());
        total += w;
    }
    std::vector<Ref> rows;
    for (uint64_t idx = 0; idx < (uint64_t{1} << total); ++idx)
        if ((mask >> idx) & 1) rows.push_back(b.eq_const(all, idx));
    return b.finish(b.lor(std::move(rows)));
}

// Graph on 2^n vertices whose directed edge (u, v) is bit u*2^n+v of `mask`.
inline SuccinctGraph table_graph(int n, uint64_t mask) {
    SuccinctGraph g;
    g.vertex_bits = n;
    g.edge = table_circuit("edge", {{"u", n}, {"v", n}}, mask);
    return g;
}

inline uint64_t edge_bit(int n, int u, int v) {
    return uint64_t{1} << ((u << n) | v);
}

// Triangle 00-01-10 plus isolated vertex 11, undirected.
inline SuccinctGraph tri() {
    uint64_t mask = 0;
    for (auto [u, v] : {std::pair{0, 1}, {1, 2}, {0, 2}})
        mask |= edge_bit(2, u, v) | edge_bit(2, v, u);
    return table_graph(2, mask);
}

// Complete graph on 4 vertices, no self-loops.
inline SuccinctGraph k4() {
    uint64_t mask = 0;
    for (int u = 0; u < 4; ++u)
        for (int v = 0; v < 4; ++v)
            if (u != v) mask |= edge_bit(2, u, v);
    return table_graph(2, mask);
}

inline SuccinctGraph edgeless(int n) { return table_graph(n, 0); }

// Accepts exactly the words starting with 1: reading a 1 in the start state
// walks q0 -> q1 -> q2 -> qacc in place, then qacc idles; anything else
// stalls without reaching the accepting state.
inline NTM first1() {
    NTM m;
    m.states = {"q0", "q1", "q2", "qacc"};
    m.initial = 0;
    m.accepting = 3;
    m.alphabet = {"0", "1", "_"};
    m.blank = 2;
    m.transitions = {
        {0, 1, 1, 1, Move::Stay},
        {1, 1, 2, 1, Move::Stay},
        {2, 1, 3, 1, Move::Stay},
        {3, 1, 3, 1, Move::Stay},
    };
    return m;
}

// All 2^(m+n)-entry membership tables as set-family instances.
inline SetFamilyInstance set_family(int m, int n, uint64_t mask, uint64_t k) {
    SetFamilyInstance inst;
    inst.element_bits = m;
    inst.name_bits = n;
    inst.membership = table_circuit("membership", {{"u", m}, {"v", n}}, mask);
    inst.k = k;
    return inst;
}

// Numbers given explicitly: s[j] is a 2^n-bit value, target likewise.
inline SubsetSumInstance subset_sum(int n, int m, const std::vector<uint64_t>& s,
                                    uint64_t target) {
    uint64_t m1 = 0;
    for (uint64_t j = 0; j < s.size(); ++j)
        for (uint64_t a = 0; a < (uint64_t{1} << n); ++a)
            if ((s[j] >> a) & 1) m1 |= uint64_t{1} << ((a << m) | j);
    uint64_t m2 = 0;
    for (uint64_t a = 0; a < (uint64_t{1} << n); ++a)
        if ((target >> a) & 1) m2 |= uint64_t{1} << a;
    SubsetSumInstance inst;
    inst.bit_width = n;
    inst.index_bits = m;
    inst.c1 = table_circuit("c1", {{"u1", n}, {"v", m}}, m1);
    inst.c2 = table_circuit("c2", {{"u2", n}}, m2);
    return inst;
}

}  // namespace n2d::fix
