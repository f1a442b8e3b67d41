#include "nexp2dqbf/reductions.hpp"

#include <bit>
#include <set>

namespace n2d {

namespace {

int ceil_log2(uint64_t k) {
    return k <= 1 ? 0 : std::bit_width(k - 1);
}

std::vector<Ref> slice(const std::vector<Ref>& v, int from, int count) {
    return {v.begin() + from, v.begin() + from + count};
}

void require_groups(const Circuit& c, const std::vector<std::pair<std::string, int>>& want,
                    const std::string& what) {
    if (c.groups != want)
        throw std::invalid_argument(what + ": unexpected input groups in circuit " + c.name);
}

}  // namespace

void ProjectionCircuit::validate() const {
    require_groups(d,
                   {{"x1", point_width}, {"y1", value_width}, {"x2", point_width},
                    {"y2", value_width}},
                   "projection");
}

int NTM::state_index(const std::string& name) const {
    for (size_t i = 0; i < states.size(); ++i)
        if (states[i] == name) return static_cast<int>(i);
    return -1;
}

int NTM::symbol_index(const std::string& name) const {
    for (size_t i = 0; i < alphabet.size(); ++i)
        if (alphabet[i] == name) return static_cast<int>(i);
    return -1;
}

std::vector<const NTM::Transition*> NTM::moves_from(int state, int symbol) const {
    std::vector<const Transition*> out;
    for (auto& tr : transitions)
        if (tr.state == state && tr.symbol == symbol) out.push_back(&tr);
    return out;
}

void NTM::validate() const {
    int nq = static_cast<int>(states.size());
    int ns = static_cast<int>(alphabet.size());
    if (nq == 0 || ns == 0) throw std::invalid_argument("machine needs states and symbols");
    auto state_ok = [&](int q) { return q >= 0 && q < nq; };
    auto sym_ok = [&](int s) { return s >= 0 && s < ns; };
    if (!state_ok(initial) || !state_ok(accepting) || !sym_ok(blank))
        throw std::invalid_argument("initial/accepting/blank out of range");
    for (auto& tr : transitions)
        if (!state_ok(tr.state) || !state_ok(tr.next_state) || !sym_ok(tr.symbol) ||
            !sym_ok(tr.write))
            throw std::invalid_argument("transition index out of range");
    for (int q = 0; q < nq; ++q)
        for (int s = 0; s < ns; ++s) {
            auto ms = moves_from(q, s);
            if (ms.size() > 1)
                for (auto* tr : ms)
                    if (tr->move != Move::Stay)
                        throw std::invalid_argument(
                            "nondeterministic branching requires stay moves");
        }
}

Dqbf algorithm1(const ProjectionCircuit& d) {
    d.validate();
    int n = d.point_width, m = d.value_width;
    Dqbf out;
    auto var = [](const char* base, int i) { return std::string(base) + "_" + std::to_string(i); };
    for (int i = 0; i < n; ++i) out.universals.push_back(var("x1", i));
    for (int i = 0; i < n; ++i) out.universals.push_back(var("x2", i));
    std::vector<std::string> dep1(out.universals.begin(), out.universals.begin() + n);
    std::vector<std::string> dep2(out.universals.begin() + n, out.universals.end());
    for (int i = 0; i < m; ++i) out.existentials.push_back({var("y1", i), dep1});
    for (int i = 0; i < m; ++i) out.existentials.push_back({var("y2", i), dep2});

    CircuitBuilder b("matrix");
    std::vector<Ref> x1, x2, y1, y2;
    for (int i = 0; i < n; ++i) x1.push_back(b.add_group(var("x1", i), 1)[0]);
    for (int i = 0; i < n; ++i) x2.push_back(b.add_group(var("x2", i), 1)[0]);
    for (int i = 0; i < m; ++i) y1.push_back(b.add_group(var("y1", i), 1)[0]);
    for (int i = 0; i < m; ++i) y2.push_back(b.add_group(var("y2", i), 1)[0]);
    Ref dd = b.embed(d.d, {{"x1", x1}, {"y1", y1}, {"x2", x2}, {"y2", y2}});
    Ref consistent = b.implies(b.eq(x1, x2), b.eq(y1, y2));
    out.matrix = b.finish(b.land({dd, consistent}));
    out.validate();
    return out;
}

Dqbf project_3col_direct(const SuccinctGraph& g) {
    int n = g.vertex_bits;
    require_groups(g.edge, {{"u", n}, {"v", n}}, "3col");
    Dqbf out;
    auto var = [](const char* base, int i) { return std::string(base) + "_" + std::to_string(i); };
    for (int i = 0; i < n; ++i) out.universals.push_back(var("x1", i));
    for (int i = 0; i < n; ++i) out.universals.push_back(var("x2", i));
    std::vector<std::string> dep1(out.universals.begin(), out.universals.begin() + n);
    std::vector<std::string> dep2(out.universals.begin() + n, out.universals.end());
    out.existentials = {{"y1", dep1}, {"y2", dep1}, {"y3", dep2}, {"y4", dep2}};

    CircuitBuilder b("matrix");
    std::vector<Ref> x1, x2;
    for (int i = 0; i < n; ++i) x1.push_back(b.add_group(var("x1", i), 1)[0]);
    for (int i = 0; i < n; ++i) x2.push_back(b.add_group(var("x2", i), 1)[0]);
    Ref y1 = b.add_group("y1", 1)[0], y2 = b.add_group("y2", 1)[0];
    Ref y3 = b.add_group("y3", 1)[0], y4 = b.add_group("y4", 1)[0];
    Ref same_color = b.land({b.iff(y1, y3), b.iff(y2, y4)});
    Ref edge = b.embed(g.edge, {{"u", x1}, {"v", x2}});
    out.matrix = b.finish(b.land({
        b.implies(b.eq(x1, x2), same_color),
        b.lor({y1, y2}),
        b.lor({y3, y4}),
        b.implies(edge, b.lnot(same_color)),
    }));
    out.validate();
    return out;
}

ProjectionCircuit project_ntm(const NTM& machine, const std::string& word, int t) {
    machine.validate();
    if (t < 1) throw std::invalid_argument("tableau exponent must be positive");
    uint64_t side = uint64_t{1} << t;
    if (word.size() > side) throw CapacityError("word longer than the tape");

    int ns = static_cast<int>(machine.alphabet.size());
    int nq = static_cast<int>(machine.states.size());
    int ncodes = ns + nq * ns;  // symbols first, then (state, symbol) pairs
    int m = std::max(1, ceil_log2(static_cast<uint64_t>(ncodes)));
    auto sym_code = [&](int s) { return s; };
    auto head_code = [&](int q, int s) { return ns + q * ns + s; };

    std::vector<int> word_syms;
    for (char ch : word) {
        int s = machine.symbol_index(std::string(1, ch));
        if (s < 0) throw std::invalid_argument("word symbol outside the tape alphabet");
        word_syms.push_back(s);
    }

    // States the head can enter by moving onto a cell from the side.
    std::set<int> enterable;
    for (auto& tr : machine.transitions)
        if (tr.move != Move::Stay) enterable.insert(tr.next_state);

    CircuitBuilder b("ntm");
    auto x1 = b.add_group("x1", 2 * t);
    auto y1 = b.add_group("y1", m);
    auto x2 = b.add_group("x2", 2 * t);
    auto y2 = b.add_group("y2", m);
    auto i1 = slice(x1, 0, t), j1 = slice(x1, t, t);
    auto i2 = slice(x2, 0, t), j2 = slice(x2, t, t);

    auto value_in = [&](const std::vector<Ref>& y, const std::vector<int>& codes) {
        std::vector<Ref> alts;
        for (int c : codes) alts.push_back(b.eq_const(y, static_cast<uint64_t>(c)));
        return b.lor(std::move(alts));
    };

    std::vector<Ref> conds;
    // Valid cell codes only.
    conds.push_back(b.less_const(y1, static_cast<uint64_t>(ncodes)));
    // Time-0 row: head over the first input symbol (blank if the word is
    // empty), then the rest of the word, then blanks.
    int w0 = word_syms.empty() ? machine.blank : word_syms[0];
    Ref at_time0 = b.eq_const(j1, 0);
    conds.push_back(b.implies(b.land({b.eq_const(i1, 0), at_time0}),
                              b.eq_const(y1, head_code(machine.initial, w0))));
    for (size_t c = 1; c < word_syms.size(); ++c)
        conds.push_back(b.implies(b.land({b.eq_const(i1, c), at_time0}),
                                  b.eq_const(y1, sym_code(word_syms[c]))));
    uint64_t first_blank = std::max<uint64_t>(word_syms.size(), 1);
    if (first_blank < side)
        conds.push_back(b.implies(b.land({at_time0, b.lnot(b.less_const(i1, first_blank))}),
                                  b.eq_const(y1, sym_code(machine.blank))));
    // Acceptance: cell 0 of the last row holds the accepting state.
    std::vector<int> acc_codes;
    for (int s = 0; s < ns; ++s) acc_codes.push_back(head_code(machine.accepting, s));
    conds.push_back(b.implies(b.land({b.eq_const(i1, 0), b.eq_const(j1, side - 1)}),
                              value_in(y1, acc_codes)));
    // At most one head per time row.
    std::vector<int> all_heads;
    for (int q = 0; q < nq; ++q)
        for (int s = 0; s < ns; ++s) all_heads.push_back(head_code(q, s));
    Ref head1 = value_in(y1, all_heads), head2 = value_in(y2, all_heads);
    conds.push_back(b.implies(b.land({b.eq(j1, j2), b.neq(i1, i2)}),
                              b.lnot(b.land({head1, head2}))));

    // Successive time rows: the time index does not wrap, the cell index does.
    Ref time_succ = b.land({b.successor(j1, j2), b.lnot(b.eq_const(j1, side - 1))});

    // Same-cell evolution.
    {
        std::vector<Ref> steps;
        for (int s = 0; s < ns; ++s) {
            std::vector<int> allowed{sym_code(s)};
            for (int q : enterable) allowed.push_back(head_code(q, s));
            steps.push_back(b.implies(b.eq_const(y1, sym_code(s)), value_in(y2, allowed)));
        }
        for (int q = 0; q < nq; ++q)
            for (int s = 0; s < ns; ++s) {
                std::vector<int> allowed;
                for (auto* tr : machine.moves_from(q, s))
                    allowed.push_back(tr->move == Move::Stay
                                          ? head_code(tr->next_state, tr->write)
                                          : sym_code(tr->write));
                steps.push_back(b.implies(b.eq_const(y1, head_code(q, s)),
                                          value_in(y2, allowed)));
            }
        conds.push_back(b.implies(b.land({b.eq(i1, i2), time_succ}), b.land(std::move(steps))));
    }
    // Head arrival at the neighbouring cell.
    auto arrivals = [&](Move dir, Ref cell_rel) {
        std::vector<Ref> steps;
        for (auto& tr : machine.transitions) {
            if (tr.move != dir) continue;
            std::vector<int> allowed;
            for (int s = 0; s < ns; ++s) allowed.push_back(head_code(tr.next_state, s));
            steps.push_back(b.implies(b.eq_const(y1, head_code(tr.state, tr.symbol)),
                                      value_in(y2, allowed)));
        }
        conds.push_back(b.implies(b.land({cell_rel, time_succ}), b.land(std::move(steps))));
    };
    arrivals(Move::Right, b.successor(i1, i2));
    arrivals(Move::Left, b.successor(i2, i1));

    ProjectionCircuit out;
    out.point_width = 2 * t;
    out.value_width = m;
    out.d = b.finish(b.land(std::move(conds)));
    out.validate();
    return out;
}

ProjectionCircuit project_hamiltonian(const SuccinctGraph& g) {
    int n = g.vertex_bits;
    require_groups(g.edge, {{"u", n}, {"v", n}}, "hamiltonian");
    CircuitBuilder b("hamiltonian");
    auto x1 = b.add_group("x1", n), y1 = b.add_group("y1", n);
    auto x2 = b.add_group("x2", n), y2 = b.add_group("y2", n);
    Ref injective = b.implies(b.neq(x1, x2), b.neq(y1, y2));
    Ref edge = b.embed(g.edge, {{"u", y1}, {"v", y2}});
    Ref follows = b.implies(b.successor(x1, x2), edge);
    ProjectionCircuit out{n, n, b.finish(b.land({injective, follows}))};
    out.validate();
    return out;
}

ProjectionCircuit project_set_packing(const SetFamilyInstance& inst) {
    if (inst.k == 0) throw std::invalid_argument("set packing needs k >= 1");
    int m = inst.element_bits, n = inst.name_bits;
    require_groups(inst.membership, {{"u", m}, {"v", n}}, "set packing");
    int la = ceil_log2(inst.k);
    CircuitBuilder b("setpacking");
    auto x1 = b.add_group("x1", la + m), y1 = b.add_group("y1", n);
    auto x2 = b.add_group("x2", la + m), y2 = b.add_group("y2", n);
    auto a1 = slice(x1, 0, la), b1 = slice(x1, la, m);
    auto a2 = slice(x2, 0, la), b2 = slice(x2, la, m);

    std::vector<Ref> in_range;  // strengthen both index atoms when k < 2^la
    if ((uint64_t{1} << la) != inst.k)
        in_range = {b.less_const(a1, inst.k), b.less_const(a2, inst.k)};
    auto with_range = [&](Ref atom) {
        std::vector<Ref> parts{atom};
        parts.insert(parts.end(), in_range.begin(), in_range.end());
        return b.land(std::move(parts));
    };
    Ref same_name = b.implies(with_range(b.eq(a1, a2)), b.eq(y1, y2));
    Ref member1 = b.embed(inst.membership, {{"u", b1}, {"v", y1}});
    Ref member2 = b.embed(inst.membership, {{"u", b1}, {"v", y2}});
    Ref disjoint = b.implies(b.land({with_range(b.neq(a1, a2)), b.eq(b1, b2)}),
                             b.lnot(b.land({member1, member2})));
    ProjectionCircuit out{la + m, n, b.finish(b.land({same_name, disjoint}))};
    out.validate();
    return out;
}

ProjectionCircuit project_subset_sum(const SubsetSumInstance& inst) {
    int n1 = inst.c1.group_width("u1");
    int n2 = inst.c2.group_width("u2");
    int m = inst.c1.group_width("v");
    if (n1 < 0 || n2 < 0 || m < 0 || inst.c2.group_index("v") >= 0)
        throw std::invalid_argument("subset sum: bit circuits need groups u1/v and u2");
    int n = std::max(n1, n2);

    CircuitBuilder b("subsetsum");
    auto x1 = b.add_group("x1", n + m), y1 = b.add_group("y1", 5);
    auto x2 = b.add_group("x2", n + m), y2 = b.add_group("y2", 5);
    auto a1 = slice(x1, 0, n), b1 = slice(x1, n, m);
    auto a2 = slice(x2, 0, n), b2 = slice(x2, n, m);
    Ref alpha1 = y1[0], beta1 = y1[1], gamma1 = y1[2], delta1 = y1[3], eps1 = y1[4];
    Ref alpha2 = y2[0], beta2 = y2[1], gamma2 = y2[2];

    // Bit circuits padded to width n: positions beyond the original index
    // range read as zero.
    auto padded = [&](const Circuit& c, const char* ugroup, const std::vector<Ref>& a,
                      int orig_width, bool with_index) {
        std::vector<Ref> low = slice(a, n - orig_width, orig_width);
        std::map<std::string, std::vector<Ref>> in{{ugroup, low}};
        if (with_index) in["v"] = b1;
        Ref bit = b.embed(c, in);
        if (orig_width == n) return bit;
        std::vector<Ref> high = slice(a, 0, n - orig_width);
        return b.land({b.eq_const(high, 0), bit});
    };
    Ref c = padded(inst.c1, "u1", a1, n1, true);      // bit num(a1) of s_{num(b1)}
    Ref target = padded(inst.c2, "u2", a1, n2, false);  // bit num(a1) of t

    uint64_t a_top = (uint64_t{1} << n) - 1;
    uint64_t b_top = (uint64_t{1} << m) - 1;
    Ref maj = b.lor({b.land({gamma1, c}), b.land({gamma1, beta1}), b.land({c, beta1})});
    std::vector<Ref> conds{
        // Selection bit depends only on the row.
        b.implies(b.eq(b1, b2), b.iff(alpha1, alpha2)),
        // Unselected rows add nothing and pass the running sum through.
        b.implies(b.lnot(alpha1),
                  b.land({b.lnot(gamma1), b.lnot(delta1), b.iff(beta1, eps1)})),
        // Selected rows run a full adder: gamma + c + beta = (delta, eps).
        b.implies(alpha1, b.land({b.iff(eps1, b.lxor(b.lxor(gamma1, c), beta1)),
                                  b.iff(delta1, maj)})),
        // No carry into the lowest bit, none out of the highest.
        b.implies(b.eq_const(a1, 0), b.lnot(gamma1)),
        b.implies(b.eq_const(a1, a_top), b.lnot(delta1)),
        // Running sum starts at zero; the last row's output is the target.
        b.implies(b.eq_const(b1, 0), b.land({b.lnot(beta1), b.lnot(gamma1)})),
        b.implies(b.eq_const(b1, b_top), b.iff(eps1, target)),
        // Carry chains along bit positions, sums chain along rows; neither
        // successor wraps.
        b.implies(b.land({alpha1, b.eq(b1, b2), b.successor(a1, a2),
                          b.lnot(b.eq_const(a1, a_top))}),
                  b.iff(delta1, gamma2)),
        // Unguarded by alpha: for an unselected row eps = beta, so this is
        // exactly the pass-through that keeps the running sum threaded.
        b.implies(b.land({b.successor(b1, b2), b.lnot(b.eq_const(b1, b_top)),
                          b.eq(a1, a2)}),
                  b.iff(eps1, beta2)),
    };
    ProjectionCircuit out{n + m, 5, b.finish(b.land(std::move(conds)))};
    out.validate();
    return out;
}

ProjectionCircuit project_independent_set(const SuccinctGraph& g, uint64_t k) {
    if (k == 0) throw std::invalid_argument("independent set needs k >= 1");
    int n = g.vertex_bits;
    require_groups(g.edge, {{"u", n}, {"v", n}}, "independent set");
    int w = std::max(1, ceil_log2(k));
    CircuitBuilder b("independentset");
    auto x1 = b.add_group("x1", w), y1 = b.add_group("y1", n);
    auto x2 = b.add_group("x2", w), y2 = b.add_group("y2", n);
    std::vector<Ref> distinct{b.neq(x1, x2)};
    if ((uint64_t{1} << w) != k) {
        distinct.push_back(b.less_const(x1, k));
        distinct.push_back(b.less_const(x2, k));
    }
    Ref edge = b.embed(g.edge, {{"u", y1}, {"v", y2}});
    Ref cond = b.implies(b.land(std::move(distinct)),
                         b.land({b.neq(y1, y2), b.lnot(edge)}));
    ProjectionCircuit out{w, n, b.finish(cond)};
    out.validate();
    return out;
}

ProjectionCircuit project_subgraph_iso(const SuccinctGraph& g1, const SuccinctGraph& g2) {
    int n1 = g1.vertex_bits, n2 = g2.vertex_bits;
    require_groups(g1.edge, {{"u", n1}, {"v", n1}}, "subgraph iso");
    require_groups(g2.edge, {{"u", n2}, {"v", n2}}, "subgraph iso");
    if (n1 > n2) throw std::invalid_argument("pattern graph larger than host graph");
    CircuitBuilder b("subgraphiso");
    auto x1 = b.add_group("x1", n1), y1 = b.add_group("y1", n2);
    auto x2 = b.add_group("x2", n1), y2 = b.add_group("y2", n2);
    Ref injective = b.implies(b.neq(x1, x2), b.neq(y1, y2));
    Ref e1 = b.embed(g1.edge, {{"u", x1}, {"v", x2}});
    Ref e2 = b.embed(g2.edge, {{"u", y1}, {"v", y2}});
    ProjectionCircuit out{n1, n2, b.finish(b.land({injective, b.iff(e1, e2)}))};
    out.validate();
    return out;
}

ProjectionCircuit project_vertex_cover(const SuccinctGraph& g, uint64_t k) {
    int n = g.vertex_bits;
    require_groups(g.edge, {{"u", n}, {"v", n}}, "vertex cover");
    int w = std::max(1, ceil_log2(k + 1));
    CircuitBuilder b("vertexcover");
    auto x1 = b.add_group("x1", n), y1 = b.add_group("y1", w);
    auto x2 = b.add_group("x2", n), y2 = b.add_group("y2", w);
    Ref in1 = b.less_const(y1, k);  // counter value marks a cover member
    Ref in2 = b.less_const(y2, k);
    Ref unique = b.implies(b.land({b.eq(y1, y2), in1}), b.eq(x1, x2));
    Ref edge = b.embed(g.edge, {{"u", x1}, {"v", x2}});
    Ref covered = b.implies(edge, b.lor({in1, in2}));
    ProjectionCircuit out{n, w, b.finish(b.land({unique, covered}))};
    out.validate();
    return out;
}

ProjectionCircuit project_dominating_set(const SuccinctGraph& g, uint64_t k) {
    if (k == 0) throw std::invalid_argument("dominating set needs k >= 1");
    int n = g.vertex_bits;
    require_groups(g.edge, {{"u", n}, {"v", n}}, "dominating set");
    int lb = ceil_log2(k);
    CircuitBuilder b("dominatingset");
    auto x1 = b.add_group("x1", n), y1 = b.add_group("y1", lb + n);
    auto x2 = b.add_group("x2", n), y2 = b.add_group("y2", lb + n);
    auto b1 = slice(y1, 0, lb), c1 = slice(y1, lb, n);
    auto b2 = slice(y2, 0, lb), c2 = slice(y2, lb, n);
    std::vector<Ref> conds{
        b.implies(b.eq(b1, b2), b.eq(c1, c2)),  // dominator factors through its index
        b.implies(b.neq(x1, c1), b.embed(g.edge, {{"u", x1}, {"v", c1}})),
    };
    if ((uint64_t{1} << lb) != k) {
        conds.push_back(b.less_const(b1, k));
        conds.push_back(b.less_const(b2, k));
    }
    ProjectionCircuit out{n, lb + n, b.finish(b.land(std::move(conds)))};
    out.validate();
    return out;
}

ProjectionCircuit project_succinct_sat(const Circuit& c) {
    int m = c.group_width("u");
    int n = c.group_width("v");
    if (c.group_width("t") != 1 || m < 1 || n < 1 || c.groups.size() != 3)
        throw std::invalid_argument("succinct sat: circuit needs groups t (1), u, v");
    CircuitBuilder b("succinctsat");
    auto x1 = b.add_group("x1", n), y1 = b.add_group("y1", 1 + m);
    auto x2 = b.add_group("x2", n), y2 = b.add_group("y2", 1 + m);
    auto sign1 = slice(y1, 0, 1), var1 = slice(y1, 1, m);
    auto sign2 = slice(y2, 0, 1), var2 = slice(y2, 1, m);
    Ref in_clause = b.embed(c, {{"t", sign1}, {"u", var1}, {"v", x1}});
    Ref consistent = b.implies(b.eq(var1, var2), b.eq(sign1, sign2));
    ProjectionCircuit out{n, 1 + m, b.finish(b.land({in_clause, consistent}))};
    out.validate();
    return out;
}

}  // namespace n2d
