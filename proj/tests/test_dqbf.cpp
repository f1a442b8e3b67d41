#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <random>

#include "fixtures.hpp"
#include "nexp2dqbf/dqdimacs.hpp"
#include "nexp2dqbf/esb.hpp"

using namespace n2d;

namespace {

// \-/x Ey(x) (y <-> x)
Dqbf identity_dqbf() {
    Dqbf phi;
    phi.universals = {"x"};
    phi.existentials = {{"y", {"x"}}};
    CircuitBuilder b("m");
    auto x = b.add_group("x", 1);
    auto y = b.add_group("y", 1);
    phi.matrix = b.finish(b.iff(y[0], x[0]));
    return phi;
}

Dqbf constant_dqbf(bool v) {
    Dqbf phi;
    phi.universals = {"x"};
    phi.existentials = {{"y", {"x"}}};
    CircuitBuilder b("m");
    b.add_group("x", 1);
    b.add_group("y", 1);
    phi.matrix = b.finish(b.constant(v));
    return phi;
}

// Random DQBF with <= 2 universals, <= 2 existentials, <= 4 extra gates.
Dqbf random_dqbf(std::mt19937& rng) {
    auto pick = [&](int n) { return static_cast<int>(rng() % n); };
    Dqbf phi;
    int nu = 1 + pick(2), ne = 1 + pick(2);
    for (int i = 0; i < nu; ++i) phi.universals.push_back("x" + std::to_string(i + 1));
    CircuitBuilder b("m");
    std::vector<Ref> pool;
    for (auto& u : phi.universals) pool.push_back(b.add_group(u, 1)[0]);
    for (int i = 0; i < ne; ++i) {
        std::string y = "y" + std::to_string(i + 1);
        std::vector<std::string> deps;
        for (auto& u : phi.universals)
            if (pick(2)) deps.push_back(u);
        phi.existentials.push_back({y, deps});
        pool.push_back(b.add_group(y, 1)[0]);
    }
    int gates = 1 + pick(4);
    for (int i = 0; i < gates; ++i) {
        Ref a = pool[pick(static_cast<int>(pool.size()))];
        Ref c = pool[pick(static_cast<int>(pool.size()))];
        switch (pick(4)) {
            case 0: pool.push_back(b.land({a, c})); break;
            case 1: pool.push_back(b.lor({a, c})); break;
            case 2: pool.push_back(b.lnot(a)); break;
            case 3: pool.push_back(b.lxor(a, c)); break;
        }
    }
    phi.matrix = b.finish(pool.back());
    return phi;
}

int existential_literals(const Dqbf& phi, const std::vector<Literal>& term) {
    int count = 0;
    for (auto& lit : term)
        for (auto& e : phi.existentials)
            if (e.name == lit.var) ++count;
    return count;
}

}  // namespace

TEST_CASE("identity Skolem function tracks the universal") {
    SolveResult r = solve_bruteforce(identity_dqbf());
    REQUIRE(r.sat);
    REQUIRE(r.tables.size() == 1);
    CHECK(r.tables[0].values == std::vector<uint8_t>{0, 1});
    CHECK(check_skolem(identity_dqbf(), r.tables));

    SkolemTable negation{"y", {1, 0}};
    CHECK_FALSE(check_skolem(identity_dqbf(), {negation}));
}

TEST_CASE("a constant cannot track the universal") {
    Dqbf phi = identity_dqbf();
    phi.existentials[0].deps.clear();
    CHECK_FALSE(solve_bruteforce(phi).sat);
}

TEST_CASE("constant matrices decide immediately") {
    CHECK(solve_bruteforce(constant_dqbf(true)).sat);
    CHECK_FALSE(solve_bruteforce(constant_dqbf(false)).sat);
}

TEST_CASE("budget overruns are errors, not answers") {
    Dqbf phi;
    for (int i = 0; i < 5; ++i) phi.universals.push_back("x" + std::to_string(i));
    phi.existentials.push_back({"y", phi.universals});
    CircuitBuilder b("m");
    for (auto& u : phi.universals) b.add_group(u, 1);
    b.add_group("y", 1);
    phi.matrix = b.finish(b.constant(1));
    CHECK_THROWS_AS(solve_bruteforce(phi, 16), CapacityError);
}

TEST_CASE("dnf transform of the two-copy negation formula") {
    // \-/x1 \-/x2 Ey1(x1) Ey2(x2) . not(x2 or (y1 and x1 and y2))
    Dqbf phi;
    phi.universals = {"x1", "x2"};
    phi.existentials = {{"y1", {"x1"}}, {"y2", {"x2"}}};
    CircuitBuilder b("m");
    auto x1 = b.add_group("x1", 1), x2 = b.add_group("x2", 1);
    auto y1 = b.add_group("y1", 1), y2 = b.add_group("y2", 1);
    phi.matrix = b.finish(b.lnot(b.lor({x2[0], b.land({y1[0], x1[0], y2[0]})})));

    Dqbf out = prop1_dnf_transform(phi);
    out.validate();
    // Fresh universals: one per internal gate (3) and one per existential (2).
    CHECK(out.universals.size() == 7);
    CHECK(out.existentials.size() == 2);
    CHECK(out.existentials[0].name == "y1");
    CHECK(out.existentials[0].deps == std::vector<std::string>{"x1"});
    CHECK(out.existentials[1].deps == std::vector<std::string>{"x2"});
    const DnfMatrix& dnf = std::get<DnfMatrix>(out.matrix);
    for (auto& term : dnf.terms) CHECK(existential_literals(out, term) <= 1);
    // x2 = 1 falsifies the matrix, so both sides are unsatisfiable.
    CHECK_FALSE(solve_bruteforce(phi).sat);
    CHECK_FALSE(solve_bruteforce(out).sat);
}

TEST_CASE("dnf transform preserves satisfiability on a random suite") {
    std::mt19937 rng(7);
    for (int i = 0; i < 20; ++i) {
        Dqbf phi = random_dqbf(rng);
        Dqbf out = prop1_dnf_transform(phi);
        CHECK(out.existentials.size() == phi.existentials.size());
        for (size_t j = 0; j < out.existentials.size(); ++j) {
            CHECK(out.existentials[j].name == phi.existentials[j].name);
            CHECK(out.existentials[j].deps == phi.existentials[j].deps);
        }
        const DnfMatrix& dnf = std::get<DnfMatrix>(out.matrix);
        for (auto& term : dnf.terms) CHECK(existential_literals(out, term) <= 1);
        CHECK(solve_bruteforce(phi).sat == solve_bruteforce(out).sat);
    }
}

TEST_CASE("solver witnesses always recheck") {
    std::mt19937 rng(11);
    for (int i = 0; i < 20; ++i) {
        Dqbf phi = random_dqbf(rng);
        SolveResult r = solve_bruteforce(phi);
        if (r.sat) CHECK(check_skolem(phi, r.tables));
    }
}

TEST_CASE("dqdimacs emission for the identity formula") {
    std::string text = to_dqdimacs(identity_dqbf());
    CHECK(text.rfind("p cnf ", 0) == 0);
    DqdimacsFile f = parse_dqdimacs(text);
    CHECK(f.universals == std::vector<int>{1});
    REQUIRE_FALSE(f.existentials.empty());
    CHECK(f.existentials[0].var == 2);
    CHECK(f.existentials[0].deps == std::vector<int>{1});
    CHECK(solve_expansion(f));
}

TEST_CASE("dqdimacs round trip and expansion agree with brute force") {
    std::mt19937 rng(23);
    for (int i = 0; i < 20; ++i) {
        Dqbf phi = random_dqbf(rng);
        std::string text = to_dqdimacs(phi);
        DqdimacsFile f = parse_dqdimacs(text);
        CHECK(emit_dqdimacs(f) == text);
        CHECK(solve_expansion(f) == solve_bruteforce(phi).sat);
        // The Tseitin auxiliaries blow up the nominal table space, but their
        // clauses prune the search to near-determinism.
        CHECK(solve_bruteforce(dqdimacs_to_dqbf(f), uint64_t{1} << 44).sat ==
              solve_bruteforce(phi).sat);
    }
}

TEST_CASE("dqdimacs parser rejects bad input") {
    CHECK_THROWS_AS(parse_dqdimacs("p cnf 1 0\n"), ParseError);          // var unquantified
    CHECK_THROWS_AS(parse_dqdimacs("p cnf 1 1\na 1 0\n1 0\n1 0\n"), ParseError);  // count
    CHECK_THROWS_AS(parse_dqdimacs("p cnf 2 0\na 1 0\nd 2 3 0\n"), ParseError);   // bad dep
    CHECK_THROWS_AS(parse_dqdimacs("junk\n"), ParseError);
}

TEST_CASE("esb conversions preserve truth") {
    // Ef \-/x (f(x) <-> x)
    Dqbf phi = identity_dqbf();
    EsbFormula esb = dqbf_to_esb(phi);
    CHECK(esb.functions.size() == 1);
    CHECK(esb.functions[0].arity == 1);
    CHECK(esb_solve_bruteforce(esb).sat);
    CHECK(solve_bruteforce(esb_to_dqbf(esb)).sat);
}

TEST_CASE("occurrence consistency makes the flip formula unsatisfiable") {
    // Ef \-/x1 \-/x2 (f(x1) <-> not f(x2))
    EsbFormula esb;
    esb.functions = {{"f", 1}};
    esb.prefix = {{Quant::Forall, "x1"}, {Quant::Forall, "x2"}};
    esb.matrix = BoolExpr::make(
        BoolExpr::Kind::Iff,
        {BoolExpr::func("f", {EsbArg::of_var("x1")}),
         BoolExpr::make(BoolExpr::Kind::Not, {BoolExpr::func("f", {EsbArg::of_var("x2")})})});
    CHECK_FALSE(esb_solve_bruteforce(esb).sat);
    Dqbf d = esb_to_dqbf(esb);
    CHECK(d.existentials.size() == 2);  // one per occurrence
    CHECK_FALSE(solve_bruteforce(d).sat);
}

TEST_CASE("esb round trip preserves brute-force truth on the random suite") {
    std::mt19937 rng(31);
    for (int i = 0; i < 20; ++i) {
        Dqbf phi = random_dqbf(rng);
        Dqbf back = esb_to_dqbf(dqbf_to_esb(phi));
        CHECK(solve_bruteforce(back).sat == solve_bruteforce(phi).sat);
    }
}
