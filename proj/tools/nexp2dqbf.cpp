// Batch front end: reduce succinct instances to DQBF, solve small files
// exactly, cross-check reductions against the exhaustive oracles, expand
// succinct objects, and convert between the text formats.
//
// Exit codes: 0 ok, 10 SAT, 20 UNSAT, 1 disagreement, 2 malformed input,
// 3 unsupported parameter or budget exceeded.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "nexp2dqbf/dqdimacs.hpp"
#include "nexp2dqbf/folog.hpp"
#include "nexp2dqbf/manifest.hpp"

namespace fs = std::filesystem;
using namespace n2d;

namespace {

constexpr int kExitSat = 10;
constexpr int kExitUnsat = 20;
constexpr int kExitMalformed = 2;
constexpr int kExitUnsupported = 3;

std::string slurp(const fs::path& p) {
    std::ifstream in(p);
    if (!in) throw ParseError("cannot read file: " + p.string(), 0);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

void spit(const fs::path& p, const std::string& text) {
    std::ofstream out(p);
    if (!out) throw std::runtime_error("cannot write file: " + p.string());
    out << text;
}

std::string ext_of(const fs::path& p) { return p.extension().string(); }

// Flips the projection's matrix so the reduction disagrees with the oracle;
// used by `check --mutate` to prove the harness can detect a broken encoding.
ProjectionCircuit corrupt(const ProjectionCircuit& d) {
    ProjectionCircuit out = d;
    Gate g;
    g.id = "mutant";
    g.kind = GateKind::Not;
    g.operands = {out.d.output};
    out.d.gates.push_back(g);
    out.d.output = Ref::of_gate(static_cast<int32_t>(out.d.gates.size()) - 1);
    return out;
}

std::string skolem_text(const std::vector<SkolemTable>& tables) {
    std::ostringstream os;
    for (auto& t : tables) {
        os << "skolem " << t.var << ' ';
        for (uint8_t v : t.values) os << int(v);
        os << '\n';
    }
    return os.str();
}

std::string model_text(const Structure& s) {
    std::ostringstream os;
    os << "domain " << s.domain << '\n';
    for (auto& [p, table] : s.preds) {
        os << "pred " << p;
        for (uint8_t v : table) os << ' ' << int(v);
        os << '\n';
    }
    for (auto& [g, table] : s.funcs) {
        os << "func " << g;
        for (int v : table) os << ' ' << v;
        os << '\n';
    }
    return os.str();
}

struct Options {
    std::string input, out, witness;
    std::string problem, target = "dqdimacs", enumerate;
    uint64_t budget = kDefaultBudget;
    int bound = 4;
    bool mutate = false, do_skolemize = false;
};

int cmd_reduce(const Options& opt) {
    ProblemInstance inst = load_manifest(opt.input);
    if (!opt.problem.empty() && parse_problem_kind(opt.problem) != inst.kind)
        throw ParseError("--problem disagrees with the manifest", 0);

    if (opt.target == "dqdimacs") {
        DqdimacsFile f = to_dqdimacs_file(reduce_instance(inst));
        spit(opt.out, emit_dqdimacs(f));
        std::cout << "universals " << f.universals.size() << " existentials "
                  << f.existentials.size() << " clauses " << f.clauses.size() << '\n';
        return 0;
    }
    if (opt.target == "fo21") {
        auto d = project_instance(inst);
        if (!d) {
            std::cerr << "error: " << problem_kind_name(inst.kind)
                      << " reduces directly to DQBF; no two-variable form\n";
            return kExitUnsupported;
        }
        FOSentence phi = algorithm2(*d);
        spit(opt.out, emit_fo(phi));
        std::cout << "predicates " << phi.predicates.size() << " functions "
                  << phi.functions.size() << '\n';
        return 0;
    }
    if (opt.target == "bsr") {
        FOSentence phi = esb_to_bsr(dqbf_to_esb(reduce_instance(inst)));
        spit(opt.out, emit_fo(phi));
        std::cout << "predicates " << phi.predicates.size() << " functions "
                  << phi.functions.size() << '\n';
        return 0;
    }
    std::cerr << "error: unknown target " << opt.target << '\n';
    return kExitUnsupported;
}

int verdict(bool sat) {
    std::cout << (sat ? "SAT" : "UNSAT") << '\n';
    return sat ? kExitSat : kExitUnsat;
}

int cmd_solve(const Options& opt) {
    std::string ext = ext_of(opt.input);
    if (ext == ".dqdimacs") {
        DqdimacsFile f = parse_dqdimacs(slurp(opt.input));
        bool sat = solve_expansion(f, opt.budget);
        if (sat && !opt.witness.empty()) {
            SolveResult r = solve_bruteforce(dqdimacs_to_dqbf(f), opt.budget);
            spit(opt.witness, skolem_text(r.tables));
        }
        return verdict(sat);
    }
    if (ext == ".fo") {
        FOSentence phi = parse_fo(slurp(opt.input));
        BoundedSatResult r = bounded_sat_bruteforce(phi, opt.bound, opt.budget);
        if (r.sat && !opt.witness.empty()) spit(opt.witness, model_text(r.model));
        return verdict(r.sat);
    }
    ProblemInstance inst = load_manifest(opt.input);
    if (inst.kind == ProblemKind::ThreeCol) {
        SolveResult r = solve_bruteforce(reduce_instance(inst), opt.budget);
        if (r.sat && !opt.witness.empty()) spit(opt.witness, skolem_text(r.tables));
        return verdict(r.sat);
    }
    AgreementResult r = agreement_search(*project_instance(inst), opt.budget);
    if (r.found && !opt.witness.empty()) spit(opt.witness, emit_witness({"g", r.g}));
    return verdict(r.found);
}

bool reduction_says_yes(const ProblemInstance& inst, bool mutate, uint64_t budget) {
    if (inst.kind == ProblemKind::ThreeCol) {
        Dqbf phi = reduce_instance(inst);
        if (mutate) {
            Circuit& c = std::get<Circuit>(phi.matrix);
            Gate g;
            g.id = "mutant";
            g.kind = GateKind::Not;
            g.operands = {c.output};
            c.gates.push_back(g);
            c.output = Ref::of_gate(static_cast<int32_t>(c.gates.size()) - 1);
        }
        return solve_bruteforce(phi, budget).sat;
    }
    ProjectionCircuit d = *project_instance(inst);
    if (mutate) d = corrupt(d);
    return agreement_search(d, budget).found;
}

// One agree/disagree comparison; prints both sides on mismatch.
bool check_one(const ProblemInstance& inst, const std::string& label, const Options& opt) {
    auto w = oracle_check(inst);
    bool reduction = reduction_says_yes(inst, opt.mutate, opt.budget);
    if (w.has_value() == reduction) return true;
    std::cout << "disagree " << label << ": oracle=" << (w ? "yes" : "no")
              << " reduction=" << (reduction ? "yes" : "no") << '\n';
    if (w) std::cout << "  oracle witness: " << emit_witness(*w);
    return false;
}

// Truth-table graph on 2^n vertices: bit (u, v) of `mask` is the edge (u, v).
SuccinctGraph table_graph(int n, uint64_t mask) {
    CircuitBuilder b("edge");
    auto u = b.add_group("u", n), v = b.add_group("v", n);
    std::vector<Ref> uv(u);
    uv.insert(uv.end(), v.begin(), v.end());
    std::vector<Ref> rows;
    int total = 2 * n;
    for (uint64_t idx = 0; idx < (uint64_t{1} << total); ++idx)
        if ((mask >> idx) & 1) rows.push_back(b.eq_const(uv, idx));
    SuccinctGraph g;
    g.vertex_bits = n;
    g.edge = b.finish(b.lor(std::move(rows)));
    return g;
}

Circuit table_circuit(const std::string& name, const std::vector<std::pair<std::string, int>>& groups,
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

std::map<std::string, int> parse_enumerate(const std::string& s) {
    std::map<std::string, int> params;
    std::istringstream is(s);
    std::string item;
    while (std::getline(is, item, ',')) {
        auto eq = item.find('=');
        if (eq == std::string::npos) throw ParseError("expected key=value in --enumerate", 0);
        params[item.substr(0, eq)] = std::stoi(item.substr(eq + 1));
    }
    return params;
}

int cmd_check(const Options& opt) {
    if (opt.enumerate.empty()) {
        ProblemInstance inst = load_manifest(opt.input);
        if (!opt.problem.empty() && parse_problem_kind(opt.problem) != inst.kind)
            throw ParseError("--problem disagrees with the manifest", 0);
        if (!check_one(inst, opt.input, opt)) return 1;
        std::cout << "all 1 instances agree\n";
        return 0;
    }

    ProblemKind kind = parse_problem_kind(opt.problem);
    auto params = parse_enumerate(opt.enumerate);
    auto get = [&](const std::string& key, int dflt) {
        auto it = params.find(key);
        return it == params.end() ? dflt : it->second;
    };
    std::vector<ProblemInstance> suite;

    switch (kind) {
        case ProblemKind::SubsetSum: {
            int n = get("n", 2), m = get("m", 1);
            int c1_bits = 1 << (n + m), c2_bits = 1 << n;
            for (uint64_t m1 = 0; m1 < (uint64_t{1} << c1_bits); ++m1)
                for (uint64_t m2 = 0; m2 < (uint64_t{1} << c2_bits); ++m2) {
                    ProblemInstance inst;
                    inst.kind = kind;
                    inst.subset.bit_width = n;
                    inst.subset.index_bits = m;
                    inst.subset.c1 = table_circuit("c1", {{"u1", n}, {"v", m}}, m1);
                    inst.subset.c2 = table_circuit("c2", {{"u2", n}}, m2);
                    suite.push_back(std::move(inst));
                }
            break;
        }
        case ProblemKind::SetPacking: {
            int m = get("m", 1), n = get("n", 1), k = get("k", 1);
            for (uint64_t mask = 0; mask < (uint64_t{1} << (1 << (m + n))); ++mask) {
                ProblemInstance inst;
                inst.kind = kind;
                inst.sets.element_bits = m;
                inst.sets.name_bits = n;
                inst.sets.membership = table_circuit("membership", {{"u", m}, {"v", n}}, mask);
                inst.sets.k = static_cast<uint64_t>(k);
                suite.push_back(std::move(inst));
            }
            break;
        }
        case ProblemKind::ThreeCol:
        case ProblemKind::Hamiltonian:
        case ProblemKind::IndependentSet:
        case ProblemKind::VertexCover:
        case ProblemKind::DominatingSet: {
            int n = get("n", 1), k = get("k", 1);
            for (uint64_t mask = 0; mask < (uint64_t{1} << (1 << (2 * n))); ++mask) {
                ProblemInstance inst;
                inst.kind = kind;
                inst.graph = table_graph(n, mask);
                inst.k = static_cast<uint64_t>(k);
                if (kind == ProblemKind::DominatingSet) {
                    // Only undirected tables make sense here.
                    ExplicitGraph eg = expand_graph(inst.graph);
                    if (!eg.undirected) continue;
                }
                suite.push_back(std::move(inst));
            }
            break;
        }
        default:
            std::cerr << "error: --enumerate not supported for "
                      << problem_kind_name(kind) << '\n';
            return kExitUnsupported;
    }

    int bad = 0;
    for (size_t i = 0; i < suite.size(); ++i)
        if (!check_one(suite[i], problem_kind_name(kind) + "#" + std::to_string(i), opt)) ++bad;
    if (bad) {
        std::cout << bad << " of " << suite.size() << " instances disagree\n";
        return 1;
    }
    std::cout << "all " << suite.size() << " instances agree\n";
    return 0;
}

int cmd_expand(const Options& opt) {
    ProblemInstance inst = load_manifest(opt.input);
    std::ostringstream os;
    switch (inst.kind) {
        case ProblemKind::ThreeCol:
        case ProblemKind::Hamiltonian:
        case ProblemKind::IndependentSet:
        case ProblemKind::VertexCover:
        case ProblemKind::DominatingSet:
        case ProblemKind::SubgraphIso: {
            ExplicitGraph g = expand_graph(inst.graph);
            os << "vertices " << g.size() << (g.undirected ? " undirected" : " directed")
               << (g.selfloop_free ? " selfloop-free" : "") << '\n';
            for (int u = 0; u < g.size(); ++u) {
                for (int v = 0; v < g.size(); ++v) os << (g.edge(u, v) ? '1' : '0');
                os << '\n';
            }
            break;
        }
        case ProblemKind::SubsetSum: {
            const SubsetSumInstance& s = inst.subset;
            Evaluator e1(s.c1), e2(s.c2);
            int n1 = s.c1.group_width("u1"), m = s.index_bits, n2 = s.c2.group_width("u2");
            auto number = [&](Evaluator& e, int nbits, int extra_bits, uint64_t extra,
                              bool has_extra) {
                uint64_t value = 0;
                for (uint64_t a = 0; a < (uint64_t{1} << nbits); ++a) {
                    std::vector<uint8_t> in;
                    for (int b = nbits - 1; b >= 0; --b) in.push_back((a >> b) & 1);
                    if (has_extra)
                        for (int b = extra_bits - 1; b >= 0; --b) in.push_back((extra >> b) & 1);
                    if (e.run(in)) value |= uint64_t{1} << a;
                }
                return value;
            };
            for (uint64_t j = 0; j < (uint64_t{1} << m); ++j)
                os << "number " << j << " = " << number(e1, n1, m, j, true) << '\n';
            os << "target = " << number(e2, n2, 0, 0, false) << '\n';
            break;
        }
        case ProblemKind::SetPacking: {
            const SetFamilyInstance& s = inst.sets;
            Evaluator e(s.membership);
            for (uint64_t b = 0; b < (uint64_t{1} << s.name_bits); ++b) {
                os << "set " << b << " =";
                for (uint64_t a = 0; a < (uint64_t{1} << s.element_bits); ++a) {
                    std::vector<uint8_t> in;
                    for (int i = s.element_bits - 1; i >= 0; --i) in.push_back((a >> i) & 1);
                    for (int i = s.name_bits - 1; i >= 0; --i) in.push_back((b >> i) & 1);
                    if (e.run(in)) os << ' ' << a;
                }
                os << '\n';
            }
            break;
        }
        default:
            std::cerr << "error: expand not supported for "
                      << problem_kind_name(inst.kind) << '\n';
            return kExitUnsupported;
    }
    if (opt.out.empty()) std::cout << os.str();
    else spit(opt.out, os.str());
    return 0;
}

int cmd_convert(const Options& opt) {
    std::string from = ext_of(opt.input), to = ext_of(opt.out);
    std::string text = slurp(opt.input);

    if (from == ".fo" && to == ".fo") {
        FOSentence phi = parse_fo(text);
        if (opt.do_skolemize) phi = skolemize(phi);
        spit(opt.out, emit_fo(phi));
        return 0;
    }
    if (from == ".fo" && to == ".dqdimacs") {
        FOSentence phi = skolemize(parse_fo(text));
        Dqbf d = esb_to_dqbf(bsatfo_to_esb(phi, static_cast<uint64_t>(opt.bound)));
        spit(opt.out, to_dqdimacs(d));
        return 0;
    }
    if (from == ".dqdimacs" && to == ".fo") {
        Dqbf d = dqdimacs_to_dqbf(parse_dqdimacs(text));
        spit(opt.out, emit_fo(esb_to_bsr(dqbf_to_esb(d))));
        return 0;
    }
    if (from == ".dqdimacs" && to == ".circuit") {
        Dqbf d = dqdimacs_to_dqbf(parse_dqdimacs(text));
        spit(opt.out, emit_circuit(std::get<Circuit>(d.matrix)));
        return 0;
    }
    if (from == ".circuit" && to == ".dqdimacs") {
        ProjectionCircuit d{0, 0, parse_circuit(text)};
        d.point_width = d.d.group_width("x1");
        d.value_width = d.d.group_width("y1");
        d.validate();
        spit(opt.out, to_dqdimacs(algorithm1(d)));
        return 0;
    }
    if (from == ".circuit" && to == ".fo") {
        ProjectionCircuit d{0, 0, parse_circuit(text)};
        d.point_width = d.d.group_width("x1");
        d.value_width = d.d.group_width("y1");
        d.validate();
        spit(opt.out, emit_fo(algorithm2(d)));
        return 0;
    }
    std::cerr << "error: no conversion from " << from << " to " << to << '\n';
    return kExitUnsupported;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Reduction toolkit: succinct instances to DQBF and back"};
    app.require_subcommand(1);
    Options opt;

    if (const char* env = std::getenv("NEXP2DQBF_BUDGET")) {
        try {
            opt.budget = std::stoull(env);
        } catch (...) {
            std::cerr << "error: bad NEXP2DQBF_BUDGET\n";
            return kExitMalformed;
        }
    }

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--budget", opt.budget, "enumeration budget");
    };

    CLI::App* reduce = app.add_subcommand("reduce", "manifest -> DQDIMACS / FO sentence");
    reduce->add_option("--problem", opt.problem, "expected problem tag");
    reduce->add_option("--input", opt.input, "instance manifest")->required();
    reduce->add_option("--out", opt.out, "output path")->required();
    reduce->add_option("--target", opt.target, "dqdimacs (default), fo21, bsr");
    add_common(reduce);

    CLI::App* solve = app.add_subcommand("solve", "decide a .dqdimacs, .fo or manifest file");
    solve->add_option("--input", opt.input, "input file")->required();
    solve->add_option("--witness", opt.witness, "write the witness here when satisfiable");
    solve->add_option("--bound", opt.bound, "model bound for .fo inputs (default 4)");
    add_common(solve);

    CLI::App* check = app.add_subcommand("check", "compare reduction verdicts with the oracle");
    check->add_option("--problem", opt.problem, "problem tag");
    check->add_option("--input", opt.input, "instance manifest");
    check->add_option("--enumerate", opt.enumerate, "generate a full suite, e.g. n=2,m=1");
    check->add_flag("--mutate", opt.mutate)->group("");  // harness self-test
    add_common(check);

    CLI::App* expand = app.add_subcommand("expand", "print the explicit object behind a manifest");
    expand->add_option("--input", opt.input, "instance manifest")->required();
    expand->add_option("--out", opt.out, "output path (default stdout)");
    add_common(expand);

    CLI::App* convert = app.add_subcommand("convert", "translate between the text formats");
    convert->add_option("--input", opt.input, "input file")->required();
    convert->add_option("--out", opt.out, "output file")->required();
    convert->add_option("--bound", opt.bound, "model bound for .fo -> .dqdimacs");
    convert->add_flag("--skolemize", opt.do_skolemize, "skolemize a .fo file in place");
    add_common(convert);

    CLI11_PARSE(app, argc, argv);

    try {
        if (reduce->parsed()) return cmd_reduce(opt);
        if (solve->parsed()) return cmd_solve(opt);
        if (check->parsed()) return cmd_check(opt);
        if (expand->parsed()) return cmd_expand(opt);
        if (convert->parsed()) return cmd_convert(opt);
    } catch (const CapacityError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitUnsupported;
    } catch (const ParseError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitMalformed;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitMalformed;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitMalformed;
    }
    return kExitMalformed;
}
