#include "nexp2dqbf/manifest.hpp"

#include <algorithm>
#include <bit>
#include <fstream>
#include <map>
#include <sstream>

namespace n2d {

namespace {

const std::map<std::string, ProblemKind> kTags = {
    {"3col", ProblemKind::ThreeCol},
    {"hamiltonian", ProblemKind::Hamiltonian},
    {"setpacking", ProblemKind::SetPacking},
    {"subsetsum", ProblemKind::SubsetSum},
    {"indepset", ProblemKind::IndependentSet},
    {"subgraphiso", ProblemKind::SubgraphIso},
    {"vertexcover", ProblemKind::VertexCover},
    {"dominatingset", ProblemKind::DominatingSet},
    {"succinctsat", ProblemKind::SuccinctSat},
    {"ntm", ProblemKind::Ntm},
};

std::string trim(const std::string& s) {
    size_t a = s.find_first_not_of(" \t\r\n");
    if (a == std::string::npos) return "";
    size_t b = s.find_last_not_of(" \t\r\n");
    return s.substr(a, b - a + 1);
}

// `key = value` lines; blank lines and # comments skipped.
std::map<std::string, std::string> parse_kv(const std::string& text,
                                            const std::vector<std::string>& allowed) {
    std::map<std::string, std::string> kv;
    std::istringstream is(text);
    std::string line;
    int lineno = 0;
    while (std::getline(is, line)) {
        ++lineno;
        std::string t = trim(line);
        if (t.empty() || t[0] == '#') continue;
        auto eq = t.find('=');
        if (eq == std::string::npos) throw ParseError("expected `key = value`", lineno);
        std::string key = trim(t.substr(0, eq));
        std::string value = trim(t.substr(eq + 1));
        if (std::find(allowed.begin(), allowed.end(), key) == allowed.end())
            throw ParseError("unknown key: " + key, lineno);
        if (kv.count(key)) throw ParseError("duplicate key: " + key, lineno);
        if (value.empty() && key != "word") throw ParseError("empty value for " + key, lineno);
        kv[key] = value;
    }
    return kv;
}

std::string slurp(const std::filesystem::path& p) {
    std::ifstream in(p);
    if (!in) throw ParseError("cannot read file: " + p.string(), 0);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

uint64_t parse_u64(const std::string& s, const std::string& key) {
    try {
        size_t pos = 0;
        uint64_t v = std::stoull(s, &pos);
        if (pos != s.size()) throw std::invalid_argument(s);
        return v;
    } catch (...) {
        throw ParseError("bad number for " + key + ": " + s, 0);
    }
}

const std::string& need(const std::map<std::string, std::string>& kv, const std::string& key) {
    auto it = kv.find(key);
    if (it == kv.end()) throw ParseError("missing key: " + key, 0);
    return it->second;
}

void forbid(const std::map<std::string, std::string>& kv, const std::string& key) {
    if (kv.count(key)) throw ParseError("key not used by this problem: " + key, 0);
}

int required_width(const Circuit& c, const std::string& group) {
    if (c.group_index(group) < 0)
        throw ParseError("circuit " + c.name + " lacks input group " + group, 0);
    return c.group_width(group);
}

SuccinctGraph graph_from(const Circuit& edge) {
    int n = required_width(edge, "u");
    if (required_width(edge, "v") != n)
        throw ParseError("edge circuit groups u and v differ in width", 0);
    SuccinctGraph g;
    g.vertex_bits = n;
    g.edge = edge;
    return g;
}

int ceil_log2(uint64_t k) { return k <= 1 ? 0 : std::bit_width(k - 1); }

}  // namespace

ProblemKind parse_problem_kind(const std::string& tag) {
    auto it = kTags.find(tag);
    if (it == kTags.end()) throw std::invalid_argument("unknown problem: " + tag);
    return it->second;
}

std::string problem_kind_name(ProblemKind kind) {
    for (auto& [tag, k] : kTags)
        if (k == kind) return tag;
    throw std::invalid_argument("unknown problem kind");
}

ProblemInstance parse_manifest(const std::string& text, const std::filesystem::path& base_dir) {
    auto kv = parse_kv(text, {"problem", "k", "t", "word", "circuit", "circuit2"});
    ProblemInstance inst;
    inst.kind = parse_problem_kind(need(kv, "problem"));

    auto circuit_at = [&](const std::string& key) {
        return parse_circuit(slurp(base_dir / need(kv, key)));
    };

    switch (inst.kind) {
        case ProblemKind::ThreeCol:
        case ProblemKind::Hamiltonian:
            forbid(kv, "k"); forbid(kv, "t"); forbid(kv, "word"); forbid(kv, "circuit2");
            inst.graph = graph_from(circuit_at("circuit"));
            break;
        case ProblemKind::IndependentSet:
        case ProblemKind::VertexCover:
        case ProblemKind::DominatingSet:
            forbid(kv, "t"); forbid(kv, "word"); forbid(kv, "circuit2");
            inst.graph = graph_from(circuit_at("circuit"));
            inst.k = parse_u64(need(kv, "k"), "k");
            break;
        case ProblemKind::SubgraphIso:
            forbid(kv, "k"); forbid(kv, "t"); forbid(kv, "word");
            inst.graph = graph_from(circuit_at("circuit"));
            inst.graph2 = graph_from(circuit_at("circuit2"));
            break;
        case ProblemKind::SetPacking: {
            forbid(kv, "t"); forbid(kv, "word"); forbid(kv, "circuit2");
            Circuit m = circuit_at("circuit");
            inst.sets.element_bits = required_width(m, "u");
            inst.sets.name_bits = required_width(m, "v");
            inst.sets.membership = std::move(m);
            inst.sets.k = parse_u64(need(kv, "k"), "k");
            break;
        }
        case ProblemKind::SubsetSum: {
            forbid(kv, "k"); forbid(kv, "t"); forbid(kv, "word");
            Circuit c1 = circuit_at("circuit");
            Circuit c2 = circuit_at("circuit2");
            inst.subset.bit_width = required_width(c1, "u1");
            inst.subset.index_bits = required_width(c1, "v");
            required_width(c2, "u2");
            inst.subset.c1 = std::move(c1);
            inst.subset.c2 = std::move(c2);
            break;
        }
        case ProblemKind::SuccinctSat: {
            forbid(kv, "k"); forbid(kv, "t"); forbid(kv, "word"); forbid(kv, "circuit2");
            Circuit c = circuit_at("circuit");
            required_width(c, "t");
            required_width(c, "u");
            required_width(c, "v");
            inst.clause_circuit = std::move(c);
            break;
        }
        case ProblemKind::Ntm: {
            forbid(kv, "k"); forbid(kv, "circuit2");
            inst.machine = parse_ntm(slurp(base_dir / need(kv, "circuit")));
            inst.t = static_cast<int>(parse_u64(need(kv, "t"), "t"));
            auto it = kv.find("word");
            inst.word = it == kv.end() ? "" : it->second;
            break;
        }
    }
    return inst;
}

ProblemInstance load_manifest(const std::filesystem::path& path) {
    return parse_manifest(slurp(path), path.parent_path());
}

NTM parse_ntm(const std::string& text) {
    NTM m;
    std::string initial, accept, blank;
    std::istringstream is(text);
    std::string line;
    int lineno = 0;
    bool saw_name = false;
    while (std::getline(is, line)) {
        ++lineno;
        std::istringstream ls(trim(line));
        std::string head;
        if (!(ls >> head) || head[0] == '#') continue;
        std::vector<std::string> toks;
        std::string tok;
        while (ls >> tok) toks.push_back(tok);
        if (head == "ntm") {
            if (saw_name || toks.size() != 1) throw ParseError("malformed ntm line", lineno);
            saw_name = true;
        } else if (head == "states") {
            m.states = toks;
        } else if (head == "initial") {
            if (toks.size() != 1) throw ParseError("malformed initial line", lineno);
            initial = toks[0];
        } else if (head == "accept") {
            if (toks.size() != 1) throw ParseError("malformed accept line", lineno);
            accept = toks[0];
        } else if (head == "alphabet") {
            for (auto& s : toks)
                if (s.size() != 1) throw ParseError("symbols must be single characters", lineno);
            m.alphabet = toks;
        } else if (head == "blank") {
            if (toks.size() != 1) throw ParseError("malformed blank line", lineno);
            blank = toks[0];
        } else if (head == "trans") {
            if (toks.size() != 6 || toks[2] != "->")
                throw ParseError("expected `trans q s -> q' s' move`", lineno);
            NTM::Transition tr;
            tr.state = m.state_index(toks[0]);
            tr.symbol = m.symbol_index(toks[1]);
            tr.next_state = m.state_index(toks[3]);
            tr.write = m.symbol_index(toks[4]);
            if (tr.state < 0 || tr.symbol < 0 || tr.next_state < 0 || tr.write < 0)
                throw ParseError("transition mentions an undeclared state or symbol", lineno);
            if (toks[5] == "left") tr.move = Move::Left;
            else if (toks[5] == "right") tr.move = Move::Right;
            else if (toks[5] == "stay") tr.move = Move::Stay;
            else throw ParseError("move must be left, right or stay", lineno);
            m.transitions.push_back(tr);
        } else {
            throw ParseError("unknown directive: " + head, lineno);
        }
    }
    if (!saw_name) throw ParseError("missing ntm line", 0);
    m.initial = m.state_index(initial);
    m.accepting = m.state_index(accept);
    m.blank = m.symbol_index(blank);
    if (m.initial < 0) throw ParseError("initial state undeclared: " + initial, 0);
    if (m.accepting < 0) throw ParseError("accepting state undeclared: " + accept, 0);
    if (m.blank < 0) throw ParseError("blank symbol undeclared: " + blank, 0);
    m.validate();
    return m;
}

std::string emit_ntm(const NTM& m) {
    std::ostringstream os;
    os << "ntm machine\nstates";
    for (auto& s : m.states) os << ' ' << s;
    os << "\ninitial " << m.states[m.initial] << "\naccept " << m.states[m.accepting]
       << "\nalphabet";
    for (auto& s : m.alphabet) os << ' ' << s;
    os << "\nblank " << m.alphabet[m.blank] << "\n";
    for (auto& tr : m.transitions) {
        os << "trans " << m.states[tr.state] << ' ' << m.alphabet[tr.symbol] << " -> "
           << m.states[tr.next_state] << ' ' << m.alphabet[tr.write] << ' '
           << (tr.move == Move::Left ? "left" : tr.move == Move::Right ? "right" : "stay")
           << "\n";
    }
    return os.str();
}

FragmentClass parse_fragment_manifest(const std::string& text) {
    auto kv = parse_kv(text, {"class", "m", "n", "r"});
    FragmentClass cls;
    const std::string& tag = need(kv, "class");
    if (tag == "bsr") cls.tag = FragmentTag::Bsr;
    else if (tag == "fo2") cls.tag = FragmentTag::Fo2Scott;
    else if (tag == "monadic") cls.tag = FragmentTag::Monadic;
    else throw ParseError("unknown fragment class: " + tag, 0);
    if (kv.count("m")) cls.m = static_cast<int>(parse_u64(kv.at("m"), "m"));
    if (kv.count("n")) cls.n = static_cast<int>(parse_u64(kv.at("n"), "n"));
    if (kv.count("r")) cls.r = static_cast<int>(parse_u64(kv.at("r"), "r"));
    return cls;
}

std::optional<ProjectionCircuit> project_instance(const ProblemInstance& inst) {
    switch (inst.kind) {
        case ProblemKind::ThreeCol: return std::nullopt;
        case ProblemKind::Hamiltonian: return project_hamiltonian(inst.graph);
        case ProblemKind::SetPacking: return project_set_packing(inst.sets);
        case ProblemKind::SubsetSum: return project_subset_sum(inst.subset);
        case ProblemKind::IndependentSet: return project_independent_set(inst.graph, inst.k);
        case ProblemKind::SubgraphIso: return project_subgraph_iso(inst.graph, inst.graph2);
        case ProblemKind::VertexCover: return project_vertex_cover(inst.graph, inst.k);
        case ProblemKind::DominatingSet: return project_dominating_set(inst.graph, inst.k);
        case ProblemKind::SuccinctSat: return project_succinct_sat(inst.clause_circuit);
        case ProblemKind::Ntm: return project_ntm(inst.machine, inst.word, inst.t);
    }
    throw std::logic_error("unreachable");
}

Dqbf reduce_instance(const ProblemInstance& inst) {
    if (inst.kind == ProblemKind::ThreeCol) return project_3col_direct(inst.graph);
    return algorithm1(*project_instance(inst));
}

namespace {

std::optional<Witness> lift(const char* kind, const std::optional<std::vector<int>>& w) {
    if (!w) return std::nullopt;
    Witness out;
    out.kind = kind;
    for (int v : *w) out.data.push_back(static_cast<uint64_t>(v));
    return out;
}

}  // namespace

std::optional<Witness> oracle_check(const ProblemInstance& inst) {
    switch (inst.kind) {
        case ProblemKind::ThreeCol:
            return lift("coloring", oracle_3col(expand_graph(inst.graph)));
        case ProblemKind::Hamiltonian:
            return lift("cycle", oracle_hamiltonian(expand_graph(inst.graph)));
        case ProblemKind::SetPacking:
            return lift("names", oracle_set_packing(inst.sets));
        case ProblemKind::SubsetSum:
            return lift("subset", oracle_subset_sum(inst.subset));
        case ProblemKind::IndependentSet:
            return lift("vertices", oracle_independent_set(expand_graph(inst.graph), inst.k));
        case ProblemKind::SubgraphIso:
            return lift("embedding",
                        oracle_subgraph_iso(expand_graph(inst.graph), expand_graph(inst.graph2)));
        case ProblemKind::VertexCover:
            return lift("vertices", oracle_vertex_cover(expand_graph(inst.graph), inst.k));
        case ProblemKind::DominatingSet:
            return lift("vertices", oracle_dominating_set(expand_graph(inst.graph), inst.k));
        case ProblemKind::SuccinctSat:
            return lift("assignment", oracle_succinct_sat(inst.clause_circuit));
        case ProblemKind::Ntm: {
            auto tab = ntm_run_oracle(inst.machine, inst.word, inst.t);
            if (!tab) return std::nullopt;
            return Witness{"tableau", *tab};
        }
    }
    throw std::logic_error("unreachable");
}

std::string emit_witness(const Witness& w) {
    std::ostringstream os;
    os << w.kind;
    int width = std::max(1, ceil_log2(w.data.size()));
    for (size_t i = 0; i < w.data.size(); ++i) {
        os << ' ';
        for (int b = width - 1; b >= 0; --b) os << ((i >> b) & 1);
        os << '=' << w.data[i];
    }
    os << '\n';
    return os.str();
}

}  // namespace n2d
