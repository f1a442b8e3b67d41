#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "fixtures.hpp"
#include "nexp2dqbf/oracle.hpp"

using namespace n2d;

TEST_CASE("graph expansion measures its flags") {
    ExplicitGraph empty = expand_graph(fix::edgeless(2));
    CHECK(empty.size() == 4);
    CHECK(empty.undirected);
    CHECK(empty.selfloop_free);
    for (int u = 0; u < 4; ++u)
        for (int v = 0; v < 4; ++v) CHECK_FALSE(empty.edge(u, v));

    // Equality as an edge predicate gives exactly the self-loops.
    SuccinctGraph loops;
    loops.vertex_bits = 2;
    loops.edge = substitute(build_equality(2),
                            {{"x", BindRename{"u"}}, {"y", BindRename{"v"}}});
    ExplicitGraph e = expand_graph(loops);
    CHECK_FALSE(e.selfloop_free);
    CHECK(e.undirected);
    for (int u = 0; u < 4; ++u)
        for (int v = 0; v < 4; ++v) CHECK(e.edge(u, v) == (u == v));

    ExplicitGraph tri = expand_graph(fix::tri());
    CHECK(tri.undirected);
    CHECK(tri.selfloop_free);
    int edges = 0;
    for (int u = 0; u < 4; ++u)
        for (int v = 0; v < 4; ++v) edges += tri.edge(u, v);
    CHECK(edges == 6);
    for (int v = 0; v < 4; ++v) CHECK_FALSE(tri.edge(3, v));
}

TEST_CASE("three-coloring oracle") {
    auto w = oracle_3col(expand_graph(fix::tri()));
    REQUIRE(w.has_value());
    CHECK(check_coloring(expand_graph(fix::tri()), *w));
    CHECK_FALSE(oracle_3col(expand_graph(fix::k4())).has_value());
    // Self-loops are never colorable.
    SuccinctGraph loop = fix::table_graph(1, fix::edge_bit(1, 0, 0));
    CHECK_FALSE(oracle_3col(expand_graph(loop)).has_value());
}

TEST_CASE("hamiltonian oracle finds the directed four-cycle") {
    uint64_t cyc = fix::edge_bit(2, 0, 1) | fix::edge_bit(2, 1, 2) | fix::edge_bit(2, 2, 3) |
                   fix::edge_bit(2, 3, 0);
    ExplicitGraph g = expand_graph(fix::table_graph(2, cyc));
    auto w = oracle_hamiltonian(g);
    REQUIRE(w.has_value());
    CHECK(*w == std::vector<int>{0, 1, 2, 3});
    CHECK(check_hamiltonian_cycle(g, *w));
    CHECK_FALSE(check_hamiltonian_cycle(g, {0, 2, 1, 3}));
    CHECK_FALSE(oracle_hamiltonian(expand_graph(fix::edgeless(2))).has_value());
}

TEST_CASE("set packing oracle") {
    CHECK(oracle_set_packing(fix::set_family(1, 1, 0b1001, 2)).has_value());
    CHECK_FALSE(oracle_set_packing(fix::set_family(1, 1, 0b0011, 2)).has_value());
    CHECK(oracle_set_packing(fix::set_family(1, 1, 0b0011, 1)).has_value());
    // Two empty sets are trivially disjoint.
    CHECK(oracle_set_packing(fix::set_family(1, 1, 0, 2)).has_value());
}

TEST_CASE("subset-sum oracle") {
    auto w = oracle_subset_sum(fix::subset_sum(2, 1, {1, 2}, 3));
    REQUIRE(w.has_value());
    CHECK(*w == std::vector<int>{0, 1});  // both numbers selected
    CHECK_FALSE(oracle_subset_sum(fix::subset_sum(2, 1, {1, 1}, 3)).has_value());
    CHECK(oracle_subset_sum(fix::subset_sum(2, 1, {1, 2}, 0)).has_value());
}

TEST_CASE("independent set oracle") {
    CHECK(oracle_independent_set(expand_graph(fix::edgeless(1)), 2).has_value());
    uint64_t both = fix::edge_bit(1, 0, 1) | fix::edge_bit(1, 1, 0);
    CHECK_FALSE(oracle_independent_set(expand_graph(fix::table_graph(1, both)), 2).has_value());
    CHECK(oracle_independent_set(expand_graph(fix::tri()), 2).has_value());
    CHECK_FALSE(oracle_independent_set(expand_graph(fix::tri()), 3).has_value());
}

TEST_CASE("subgraph isomorphism oracle uses induced semantics") {
    ExplicitGraph edge = expand_graph(fix::table_graph(1, fix::edge_bit(1, 0, 1)));
    ExplicitGraph full = expand_graph(fix::table_graph(1, 0xF));
    CHECK(oracle_subgraph_iso(edge, edge).has_value());
    CHECK_FALSE(oracle_subgraph_iso(edge, expand_graph(fix::edgeless(1))).has_value());
    CHECK_FALSE(oracle_subgraph_iso(edge, full).has_value());
    ExplicitGraph host = expand_graph(fix::table_graph(2, fix::edge_bit(2, 2, 3)));
    auto w = oracle_subgraph_iso(edge, host);
    REQUIRE(w.has_value());
    CHECK(*w == std::vector<int>{2, 3});
}

TEST_CASE("vertex cover oracle") {
    uint64_t e01 = fix::edge_bit(1, 0, 1) | fix::edge_bit(1, 1, 0);
    CHECK(oracle_vertex_cover(expand_graph(fix::table_graph(1, e01)), 1).has_value());
    CHECK_FALSE(oracle_vertex_cover(expand_graph(fix::table_graph(1, e01)), 0).has_value());
    CHECK(oracle_vertex_cover(expand_graph(fix::tri()), 2).has_value());
    CHECK_FALSE(oracle_vertex_cover(expand_graph(fix::tri()), 1).has_value());
}

TEST_CASE("dominating set oracle") {
    uint64_t e01 = fix::edge_bit(1, 0, 1) | fix::edge_bit(1, 1, 0);
    CHECK(oracle_dominating_set(expand_graph(fix::table_graph(1, e01)), 1).has_value());
    CHECK_FALSE(oracle_dominating_set(expand_graph(fix::edgeless(1)), 1).has_value());
    CHECK(oracle_dominating_set(expand_graph(fix::edgeless(1)), 2).has_value());
    // Isolated vertex 11 forces itself into every dominating set of TRI.
    CHECK(oracle_dominating_set(expand_graph(fix::tri()), 2).has_value());
    CHECK_FALSE(oracle_dominating_set(expand_graph(fix::tri()), 1).has_value());
}

TEST_CASE("succinct satisfiability oracle") {
    auto clause_circuit = [](uint64_t mask) {
        return fix::table_circuit("f", {{"t", 1}, {"u", 1}, {"v", 1}}, mask);
    };
    auto w = oracle_succinct_sat(clause_circuit((1u << 4) | (1u << 7)));
    REQUIRE(w.has_value());
    CHECK(*w == std::vector<int>{1, 1});
    CHECK_FALSE(oracle_succinct_sat(clause_circuit((1u << 4) | (1u << 1))).has_value());
}

TEST_CASE("agreement search returns the lexicographically first table") {
    CircuitBuilder b("d");
    b.add_group("x1", 1);
    b.add_group("y1", 1);
    b.add_group("x2", 1);
    b.add_group("y2", 1);
    ProjectionCircuit always{1, 1, b.finish(b.constant(1))};
    AgreementResult r = agreement_search(always);
    REQUIRE(r.found);
    CHECK(r.g == std::vector<uint64_t>{0, 0});

    CircuitBuilder b2("d");
    b2.add_group("x1", 1);
    b2.add_group("y1", 1);
    b2.add_group("x2", 1);
    b2.add_group("y2", 1);
    ProjectionCircuit never{1, 1, b2.finish(b2.constant(0))};
    CHECK_FALSE(agreement_search(never).found);
}

TEST_CASE("agreement search matches the hamiltonian witness") {
    uint64_t cyc = fix::edge_bit(2, 0, 1) | fix::edge_bit(2, 1, 2) | fix::edge_bit(2, 2, 3) |
                   fix::edge_bit(2, 3, 0);
    AgreementResult r = agreement_search(project_hamiltonian(fix::table_graph(2, cyc)));
    REQUIRE(r.found);
    // g enumerates the cycle: successive points map to successive vertices.
    ExplicitGraph g = expand_graph(fix::table_graph(2, cyc));
    std::vector<int> order(r.g.begin(), r.g.end());
    CHECK(check_hamiltonian_cycle(g, order));
}

TEST_CASE("agreement refutation is exhaustive on tiny spaces") {
    // <= 64 candidate functions: re-verify none of them agrees.
    uint64_t both = fix::edge_bit(1, 0, 1) | fix::edge_bit(1, 1, 0);
    ProjectionCircuit d = project_independent_set(fix::table_graph(1, both), 2);
    CHECK_FALSE(agreement_search(d).found);
    Evaluator ev(d.d);
    int points = 1 << d.point_width, values = 1 << d.value_width;
    int total = points * d.value_width;
    REQUIRE(total <= 6);
    for (uint64_t enc = 0; enc < (uint64_t{1} << total); ++enc) {
        std::vector<uint64_t> g(points);
        for (int w = 0; w < points; ++w)
            g[w] = (enc >> (w * d.value_width)) & (values - 1);
        bool agrees = true;
        for (int w1 = 0; agrees && w1 < points; ++w1)
            for (int w2 = 0; agrees && w2 < points; ++w2) {
                std::vector<uint8_t> in;
                auto push = [&](uint64_t v, int width) {
                    for (int b = width - 1; b >= 0; --b) in.push_back((v >> b) & 1);
                };
                push(w1, d.point_width);
                push(g[w1], d.value_width);
                push(w2, d.point_width);
                push(g[w2], d.value_width);
                agrees = ev.run(in) != 0;
            }
        CHECK_FALSE(agrees);
    }
}

TEST_CASE("machine simulation accepts exactly the words starting with 1") {
    NTM m = fix::first1();
    CHECK(ntm_run_oracle(m, "10", 2).has_value());
    CHECK(ntm_run_oracle(m, "11", 2).has_value());
    CHECK_FALSE(ntm_run_oracle(m, "00", 2).has_value());
    CHECK_FALSE(ntm_run_oracle(m, "01", 2).has_value());
    CHECK_FALSE(ntm_run_oracle(m, "", 2).has_value());

    auto tab = ntm_run_oracle(m, "10", 2);
    REQUIRE(tab.has_value());
    REQUIRE(tab->size() == 16);
    // Row 0: head (q0, 1) over cell 0, then symbol 0, then blanks.
    int ns = 3;
    CHECK((*tab)[0 * 4 + 0] == static_cast<uint64_t>(ns + 0 * ns + 1));
    CHECK((*tab)[1 * 4 + 0] == 0);
    CHECK((*tab)[2 * 4 + 0] == 2);
    CHECK((*tab)[3 * 4 + 0] == 2);
    // Final row: accepting head back at cell 0.
    CHECK((*tab)[0 * 4 + 3] == static_cast<uint64_t>(ns + 3 * ns + 1));
}

TEST_CASE("machine with no transitions rejects") {
    NTM m = fix::first1();
    m.transitions.clear();
    CHECK_FALSE(ntm_run_oracle(m, "1", 1).has_value());
}

TEST_CASE("capacity ceilings are hard errors") {
    CHECK_THROWS_AS(ntm_run_oracle(fix::first1(), "1", 4), CapacityError);
    CHECK_THROWS_AS(ntm_run_oracle(fix::first1(), "111", 1), CapacityError);
    SuccinctGraph big;
    big.vertex_bits = 13;
    CircuitBuilder b("edge");
    b.add_group("u", 13);
    b.add_group("v", 13);
    big.edge = b.finish(b.constant(0));
    CHECK_THROWS_AS(expand_graph(big), CapacityError);
}
