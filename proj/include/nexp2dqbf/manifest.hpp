#pragma once

#include <filesystem>
#include <optional>
#include <string>

#include "nexp2dqbf/folog.hpp"
#include "nexp2dqbf/oracle.hpp"
#include "nexp2dqbf/reductions.hpp"

namespace n2d {

enum class ProblemKind {
    ThreeCol, Hamiltonian, SetPacking, SubsetSum, IndependentSet,
    SubgraphIso, VertexCover, DominatingSet, SuccinctSat, Ntm
};

// Tag strings used in manifests and on the command line (3col, hamiltonian,
// setpacking, subsetsum, indepset, subgraphiso, vertexcover, dominatingset,
// succinctsat, ntm).
ProblemKind parse_problem_kind(const std::string& tag);
std::string problem_kind_name(ProblemKind kind);

// One succinct instance; only the fields the kind requires are meaningful.
struct ProblemInstance {
    ProblemKind kind = ProblemKind::ThreeCol;
    SuccinctGraph graph;
    SuccinctGraph graph2;      // subgraph isomorphism host
    SetFamilyInstance sets;
    SubsetSumInstance subset;
    Circuit clause_circuit;    // succinct SAT
    NTM machine;
    std::string word;
    int t = 0;
    uint64_t k = 0;
};

// Manifest: `key = value` lines with keys drawn from exactly {problem, k, t,
// word, circuit, circuit2}; circuit paths are resolved relative to the
// manifest's directory.  The `ntm` problem names a machine file under the
// `circuit` key.
ProblemInstance load_manifest(const std::filesystem::path& path);
ProblemInstance parse_manifest(const std::string& text, const std::filesystem::path& base_dir);

// Machine file: `ntm NAME`, `states ...`, `initial q`, `accept q`,
// `alphabet ...` (single-character symbols), `blank s`, and one
// `trans q s -> q' s' left|right|stay` line per transition.
NTM parse_ntm(const std::string& text);
std::string emit_ntm(const NTM& machine);

// Fragment manifest: `key = value` lines with keys class (bsr, fo2, monadic),
// m, n, r.
FragmentClass parse_fragment_manifest(const std::string& text);

// Projection dispatch; empty for 3col, which reduces directly to DQBF.
std::optional<ProjectionCircuit> project_instance(const ProblemInstance& inst);

// Full reduction to DQBF (3col direct, everything else through the
// two-copy agreement encoding).
Dqbf reduce_instance(const ProblemInstance& inst);

// Independent exhaustive decision with certificate.
std::optional<Witness> oracle_check(const ProblemInstance& inst);

// `kind idx=value ...`, indices in binary.
std::string emit_witness(const Witness& w);

}  // namespace n2d
