#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "nexp2dqbf/reductions.hpp"

namespace n2d {

// Fully expanded graph on 2^n vertices.
struct ExplicitGraph {
    int vertex_bits = 0;
    std::vector<uint8_t> adj;  // row-major 2^n x 2^n
    bool undirected = false;
    bool selfloop_free = false;

    int size() const { return 1 << vertex_bits; }
    bool edge(int u, int v) const { return adj[static_cast<size_t>(u) * size() + v] != 0; }
};

// Problem-tagged certificate; `data` is the payload named by `kind`
// (coloring, cycle, names, subset, vertices, embedding, assignment,
// tableau, g).
struct Witness {
    std::string kind;
    std::vector<uint64_t> data;
};

// n <= 12; also measures the undirected / self-loop-free flags.
ExplicitGraph expand_graph(const SuccinctGraph& g);

// Exhaustive checkers.  Each returns a witness on yes, nothing on no, and
// throws CapacityError beyond its hard ceiling.  All are independent of the
// projection encodings they validate.
std::optional<std::vector<int>> oracle_3col(const ExplicitGraph& g);
std::optional<std::vector<int>> oracle_hamiltonian(const ExplicitGraph& g);
// k names, repeats allowed only for empty sets (pairwise disjointness over
// the chosen multiset).
std::optional<std::vector<int>> oracle_set_packing(const SetFamilyInstance& inst);
std::optional<std::vector<int>> oracle_subset_sum(const SubsetSumInstance& inst);
std::optional<std::vector<int>> oracle_independent_set(const ExplicitGraph& g, uint64_t k);
// Induced semantics: the injection maps edges to edges and non-edges to
// non-edges.
std::optional<std::vector<int>> oracle_subgraph_iso(const ExplicitGraph& g1,
                                                    const ExplicitGraph& g2);
std::optional<std::vector<int>> oracle_vertex_cover(const ExplicitGraph& g, uint64_t k);
std::optional<std::vector<int>> oracle_dominating_set(const ExplicitGraph& g, uint64_t k);
// Satisfying assignment over the 2^m variables of the clause circuit.
std::optional<std::vector<int>> oracle_succinct_sat(const Circuit& c);

// Recheck helpers used to validate witnesses independently of the search
// that produced them.
bool check_coloring(const ExplicitGraph& g, const std::vector<int>& coloring);
bool check_hamiltonian_cycle(const ExplicitGraph& g, const std::vector<int>& cycle);

struct AgreementResult {
    bool found = false;
    std::vector<uint64_t> g;  // g[point] = value, both read MSB first
};

// Exhaustive search for a function agreeing with the projection; the
// returned table is the lexicographically first one (value ascending, point
// by point).  Nominal space (2^m)^(2^n) must fit the budget.
AgreementResult agreement_search(const ProjectionCircuit& d, uint64_t budget = kDefaultBudget);

// Explicit nondeterministic simulation on the circular 2^t-cell tape for
// exactly 2^t - 1 steps; accept iff cell 0 then holds the accepting state.
// On accept returns the tableau g(i, j) as cell codes, row-major by i.
// Requires 2^t <= 8.
std::optional<std::vector<uint64_t>> ntm_run_oracle(const NTM& machine, const std::string& word,
                                                    int t);

}  // namespace n2d
