#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "nexp2dqbf/dqbf.hpp"

namespace n2d {

// Projection circuit D over groups x1 (n), y1 (m), x2 (n), y2 (m), declared
// in that order.  A function g: 2^n -> 2^m agrees with D when
// D(w1, g(w1), w2, g(w2)) = 1 for every pair of points (w1, w2).
struct ProjectionCircuit {
    int point_width = 0;
    int value_width = 0;
    Circuit d;

    void validate() const;  // group names, order and widths
};

// Graph on 2^n vertices; (u, v) is an edge iff edge(u, v) = 1.  The flags
// record properties a construction assumes; they are verified at expansion
// time, never trusted.
struct SuccinctGraph {
    int vertex_bits = 0;
    Circuit edge;  // groups u (n), v (n)
    bool undirected_expected = false;
    bool selfloop_free_expected = false;
};

// Family of 2^n sets over 2^m elements: element a is in set named b iff
// membership(a, b) = 1.  k = number of mutually disjoint sets sought.
struct SetFamilyInstance {
    int element_bits = 0;  // m
    int name_bits = 0;     // n
    Circuit membership;    // groups u (m), v (n)
    uint64_t k = 0;
};

// 2^m numbers of 2^n bits each plus a target: c1(a, b) is bit num(a) of
// s_{num(b)} (bit 0 least significant), c2(a) is bit num(a) of the target.
struct SubsetSumInstance {
    int bit_width = 0;   // n: index width of bit positions
    int index_bits = 0;  // m: index width of numbers
    Circuit c1;          // groups u1 (n), v (m)
    Circuit c2;          // group u2 (n)
};

enum class Move { Left, Right, Stay };

// Nondeterministic Turing machine running on a circular tape of 2^t cells
// for exactly 2^t - 1 steps; accepts iff cell 0 then holds the accepting
// state.  Branching is only allowed among Stay transitions.
struct NTM {
    struct Transition {
        int state = 0, symbol = 0;
        int next_state = 0, write = 0;
        Move move = Move::Stay;
    };
    std::vector<std::string> states;
    int initial = 0;
    int accepting = 0;
    std::vector<std::string> alphabet;
    int blank = 0;
    std::vector<Transition> transitions;

    int state_index(const std::string& name) const;   // -1 if absent
    int symbol_index(const std::string& name) const;  // -1 if absent
    std::vector<const Transition*> moves_from(int state, int symbol) const;
    // Branching only on Stay; indices in range.
    void validate() const;
};

// Universals x1_i, x2_i; existentials y1_i depending on all of x1 and y2_i
// on all of x2; matrix D(x1,y1,x2,y2) & (x1=x2 -> y1=y2).  SAT iff some g
// agrees with d.
Dqbf algorithm1(const ProjectionCircuit& d);

// Direct 3-colorability encoding: two color bits per copy, color 00
// excluded, adjacent vertices colored differently.
Dqbf project_3col_direct(const SuccinctGraph& g);

// Tableau projection: point (i, j) with t bits each, value = a tape-cell
// code from Delta = Gamma u (Q x Gamma).  Agreement iff the machine accepts
// word within 2^t steps.  Requires t >= 1 and |word| <= 2^t.
ProjectionCircuit project_ntm(const NTM& machine, const std::string& word, int t);

// g enumerates a Hamiltonian cycle: injective on points, consecutive points
// (cyclically) map to edges.
ProjectionCircuit project_hamiltonian(const SuccinctGraph& g);

// Point (a: ceil(log k) bits, b: m bits), value = set name (n bits); equal
// indices name equal sets, distinct indices name element-disjoint sets.
// Non-power-of-two k restricts both index atoms with num(a) < k tests.
ProjectionCircuit project_set_packing(const SetFamilyInstance& inst);

// Point (a: n bits, b: m bits), value y = (alpha, beta, gamma, delta,
// epsilon): selection bit, running-sum bit, carry-in, carry-out, sum-out of
// the column adder at bit position a of row b.  Agreement iff some subset
// sums to the target.
ProjectionCircuit project_subset_sum(const SubsetSumInstance& inst);

// g names k distinct pairwise non-adjacent vertices.
ProjectionCircuit project_independent_set(const SuccinctGraph& g, uint64_t k);

// g is an injection mapping edges to edges and non-edges to non-edges
// (induced-subgraph semantics).  Requires n1 <= n2.
ProjectionCircuit project_subgraph_iso(const SuccinctGraph& g1, const SuccinctGraph& g2);

// Value = a counter in [0, 2^ceil(log(k+1))); vertices with counter value
// < k form the cover, counter values below k are used at most once.
ProjectionCircuit project_vertex_cover(const SuccinctGraph& g, uint64_t k);

// Value = (b: ceil(log k) bits, c: n bits); c factors through b, and c(x)
// dominates x.  Requires the graph undirected (verified at oracle time).
ProjectionCircuit project_dominating_set(const SuccinctGraph& g, uint64_t k);

// c over groups t (1), u (m), v (n): clause num(v) contains literal
// (sign t, variable num(u)) iff c = 1.  Point = clause index, value =
// (sign, variable); agreement iff the formula is satisfiable.
ProjectionCircuit project_succinct_sat(const Circuit& c);

}  // namespace n2d
