#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <sys/wait.h>
#include <unistd.h>

#include "fixtures.hpp"
#include "nexp2dqbf/manifest.hpp"

namespace fs = std::filesystem;
using namespace n2d;

namespace {

std::string cli() {
    const char* p = std::getenv("N2D_CLI");
    REQUIRE_MESSAGE(p != nullptr, "N2D_CLI must point at the command-line binary");
    return p;
}

struct RunResult {
    int exit_code = -1;
    std::string out;
};

RunResult run(const std::string& cmd) {
    FILE* pipe = popen((cmd + " 2>/dev/null").c_str(), "r");
    REQUIRE(pipe != nullptr);
    RunResult r;
    char buf[512];
    while (size_t got = fread(buf, 1, sizeof buf, pipe)) r.out.append(buf, got);
    int status = pclose(pipe);
    r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return r;
}

struct TempDir {
    fs::path path;
    TempDir() {
        path = fs::temp_directory_path() / ("n2d-cli-" + std::to_string(::getpid()));
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
    fs::path file(const std::string& name, const std::string& text) const {
        fs::path p = path / name;
        std::ofstream(p) << text;
        return p;
    }
};

fs::path write_graph_manifest(const TempDir& dir, const std::string& stem,
                              const SuccinctGraph& g, const std::string& problem) {
    dir.file(stem + ".circuit", emit_circuit(g.edge));
    return dir.file(stem + ".manifest",
                    "problem = " + problem + "\ncircuit = " + stem + ".circuit\n");
}

}  // namespace

TEST_CASE("reduce writes dqdimacs and reports sizes") {
    TempDir dir;
    fs::path m = write_graph_manifest(dir, "tri", fix::tri(), "3col");
    fs::path out = dir.path / "tri.dqdimacs";
    RunResult r = run(cli() + " reduce --input " + m.string() + " --out " + out.string());
    CHECK(r.exit_code == 0);
    CHECK(r.out.find("universals") != std::string::npos);
    CHECK(fs::file_size(out) > 0);

    // The reduced file solves satisfiable.
    RunResult s = run(cli() + " solve --input " + out.string());
    CHECK(s.exit_code == 10);
    CHECK(s.out == "SAT\n");
}

TEST_CASE("solve writes Skolem tables for small dqdimacs files") {
    TempDir dir;
    fs::path f = dir.file("id.dqdimacs",
                          "p cnf 2 2\na 1 0\nd 2 1 0\n-1 2 0\n1 -2 0\n");
    fs::path wit = dir.path / "id.witness";
    RunResult s = run(cli() + " solve --input " + f.string() + " --witness " + wit.string());
    CHECK(s.exit_code == 10);
    std::stringstream ws;
    ws << std::ifstream(wit).rdbuf();
    CHECK(ws.str().find("skolem") != std::string::npos);
    CHECK(ws.str().find("01") != std::string::npos);  // y copies x
}

TEST_CASE("solve decides manifests with the problem-specific search") {
    TempDir dir;
    fs::path tri = write_graph_manifest(dir, "tri", fix::tri(), "3col");
    fs::path k4 = write_graph_manifest(dir, "k4", fix::k4(), "3col");
    CHECK(run(cli() + " solve --input " + tri.string()).exit_code == 10);
    CHECK(run(cli() + " solve --input " + k4.string()).exit_code == 20);

    SuccinctGraph cyc = fix::table_graph(1, fix::edge_bit(1, 0, 1) | fix::edge_bit(1, 1, 0));
    fs::path ham = write_graph_manifest(dir, "cyc", cyc, "hamiltonian");
    fs::path wit = dir.path / "cyc.witness";
    RunResult r = run(cli() + " solve --input " + ham.string() + " --witness " + wit.string());
    CHECK(r.exit_code == 10);
    std::stringstream ws;
    ws << std::ifstream(wit).rdbuf();
    CHECK(ws.str().find("g ") == 0);
}

TEST_CASE("solve decides sentence files under a model bound") {
    TempDir dir;
    fs::path two = dir.file("two.fo", "(exists x (exists y (not (= x y))))\n");
    CHECK(run(cli() + " solve --input " + two.string()).exit_code == 10);
    CHECK(run(cli() + " solve --bound 1 --input " + two.string()).exit_code == 20);
    fs::path contra = dir.file("contra.fo", "(and (forall x (P x)) (exists x (not (P x))))\n");
    CHECK(run(cli() + " solve --input " + contra.string()).exit_code == 20);
}

TEST_CASE("solve runs machine manifests through the tableau reduction") {
    TempDir dir;
    dir.file("first1.ntm", emit_ntm(fix::first1()));
    fs::path yes = dir.file("yes.manifest",
                            "problem = ntm\ncircuit = first1.ntm\nt = 2\nword = 10\n");
    fs::path no = dir.file("no.manifest",
                           "problem = ntm\ncircuit = first1.ntm\nt = 2\nword = 00\n");
    std::string budget = " --budget " + std::to_string(uint64_t{1} << 34);
    CHECK(run(cli() + " solve --input " + yes.string() + budget).exit_code == 10);
    CHECK(run(cli() + " solve --input " + no.string() + budget).exit_code == 20);
}

TEST_CASE("check agrees with the oracle and detects a corrupted encoding") {
    TempDir dir;
    SuccinctGraph cyc = fix::table_graph(1, fix::edge_bit(1, 0, 1) | fix::edge_bit(1, 1, 0));
    fs::path m = write_graph_manifest(dir, "cyc", cyc, "hamiltonian");
    RunResult ok = run(cli() + " check --input " + m.string());
    CHECK(ok.exit_code == 0);
    CHECK(ok.out.find("all 1 instances agree") != std::string::npos);

    RunResult bad = run(cli() + " check --mutate --input " + m.string());
    CHECK(bad.exit_code == 1);
    CHECK(bad.out.find("disagree") != std::string::npos);
}

TEST_CASE("check enumerates a full suite") {
    RunResult r = run(cli() + " check --problem setpacking --enumerate m=1,n=1,k=2");
    CHECK(r.exit_code == 0);
    CHECK(r.out.find("all 16 instances agree") != std::string::npos);
}

TEST_CASE("expand prints the explicit graph") {
    TempDir dir;
    fs::path m = write_graph_manifest(dir, "tri", fix::tri(), "3col");
    RunResult r = run(cli() + " expand --input " + m.string());
    CHECK(r.exit_code == 0);
    CHECK(r.out.find("vertices 4 undirected selfloop-free") != std::string::npos);
    // Adjacency rows: triangle on 00, 01, 10 with 11 isolated.
    CHECK(r.out.find("0110\n1010\n1100\n0000\n") != std::string::npos);
}

TEST_CASE("expand prints numbers and target for subset-sum") {
    TempDir dir;
    SubsetSumInstance ss = fix::subset_sum(2, 1, {1, 2}, 3);
    dir.file("c1.circuit", emit_circuit(ss.c1));
    dir.file("c2.circuit", emit_circuit(ss.c2));
    fs::path m = dir.file("ss.manifest",
                          "problem = subsetsum\ncircuit = c1.circuit\ncircuit2 = c2.circuit\n");
    RunResult r = run(cli() + " expand --input " + m.string());
    CHECK(r.exit_code == 0);
    CHECK(r.out.find("number 0 = 1") != std::string::npos);
    CHECK(r.out.find("number 1 = 2") != std::string::npos);
    CHECK(r.out.find("target = 3") != std::string::npos);
}

TEST_CASE("convert chains sentence files into dqdimacs") {
    TempDir dir;
    fs::path phi = dir.file("phi.fo", "(forall x (exists y (E x y)))\n");
    fs::path sk = dir.path / "sk.fo";
    RunResult c1 = run(cli() + " convert --skolemize --input " + phi.string() + " --out " +
                       sk.string());
    CHECK(c1.exit_code == 0);
    std::stringstream ss;
    ss << std::ifstream(sk).rdbuf();
    CHECK(ss.str() == "(forall x (forall z (implies (= z (g x)) (E x z))))\n");

    fs::path dq = dir.path / "phi.dqdimacs";
    CHECK(run(cli() + " convert --bound 2 --input " + sk.string() + " --out " + dq.string())
              .exit_code == 0);
    CHECK(run(cli() + " solve --input " + dq.string()).exit_code == 10);
}

TEST_CASE("convert compiles projection circuits both ways") {
    TempDir dir;
    SuccinctGraph cyc = fix::table_graph(1, fix::edge_bit(1, 0, 1) | fix::edge_bit(1, 1, 0));
    ProjectionCircuit d = project_hamiltonian(cyc);
    fs::path c = dir.file("d.circuit", emit_circuit(d.d));
    fs::path dq = dir.path / "d.dqdimacs";
    CHECK(run(cli() + " convert --input " + c.string() + " --out " + dq.string()).exit_code == 0);
    CHECK(run(cli() + " solve --input " + dq.string()).exit_code == 10);

    fs::path fo = dir.path / "d.fo";
    CHECK(run(cli() + " convert --input " + c.string() + " --out " + fo.string()).exit_code == 0);
    CHECK(run(cli() + " solve --bound 4 --input " + fo.string()).exit_code == 10);
}

TEST_CASE("malformed inputs exit 2") {
    TempDir dir;
    fs::path bad = dir.file("bad.manifest", "problem = 3col\nwrongkey = x\n");
    CHECK(run(cli() + " solve --input " + bad.string()).exit_code == 2);
    fs::path badfo = dir.file("bad.fo", "(forall x (P y))\n");
    CHECK(run(cli() + " solve --input " + badfo.string()).exit_code == 2);
}

TEST_CASE("unsupported requests and exhausted budgets exit 3") {
    TempDir dir;
    fs::path m = write_graph_manifest(dir, "tri", fix::tri(), "3col");
    fs::path out = dir.path / "tri.fo";
    CHECK(run(cli() + " reduce --target fo21 --input " + m.string() + " --out " + out.string())
              .exit_code == 3);
    CHECK(run("NEXP2DQBF_BUDGET=1 " + cli() + " solve --input " + m.string()).exit_code == 3);
}
