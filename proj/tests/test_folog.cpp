#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <random>

#include "fixtures.hpp"
#include "nexp2dqbf/esb.hpp"
#include "nexp2dqbf/folog.hpp"
#include "nexp2dqbf/oracle.hpp"

using namespace n2d;

TEST_CASE("smallest-model bounds per fragment") {
    CHECK(esm_bound({FragmentTag::Bsr, 3, 0, 0}) == 4);
    CHECK(esm_bound({FragmentTag::Fo2Scott, 2, 3, 0}) == 16);
    CHECK(esm_bound({FragmentTag::Monadic, 0, 2, 2}) == 8);
}

TEST_CASE("sentence files parse and re-emit") {
    std::string text = "(forall x (forall y (or (not (E x y)) (= x y))))\n";
    FOSentence phi = parse_fo(text);
    CHECK(phi.predicates.at("E") == 2);
    CHECK(emit_fo(phi) == text);

    FOSentence sk = parse_fo("(forall x (forall z (implies (= z (g x)) (E x z))))");
    CHECK(sk.functions.at("g") == 1);

    CHECK_THROWS_AS(parse_fo("(forall x (P y))"), std::exception);    // free variable
    CHECK_THROWS_AS(parse_fo("(forall x (P x)) junk"), ParseError);
    CHECK_THROWS_AS(parse_fo("(forall x (and (P x) (P x x)))"), std::exception);  // arity clash
}

TEST_CASE("skolemize produces the guarded trailing universal") {
    FOSentence phi = parse_fo("(forall x (exists y (E x y)))");
    FOSentence sk = skolemize(phi);
    CHECK(emit_fo(sk) == "(forall x (forall z (implies (= z (g x)) (E x z))))\n");
    CHECK(sk.functions.at("g") == 1);
}

TEST_CASE("skolemize leaves universal sentences unchanged") {
    FOSentence phi = parse_fo("(forall x (forall y (E x y)))");
    CHECK(emit_fo(skolemize(phi)) == emit_fo(phi));
}

TEST_CASE("skolemize preserves bounded satisfiability") {
    const char* suite[] = {
        "(forall x (exists y (E x y)))",
        "(exists x (P x))",
        "(exists x (forall y (E x y)))",
        "(forall x (exists y (and (E x y) (not (= x y)))))",
        "(exists x (exists y (and (P x) (not (P y)))))",
    };
    for (const char* text : suite) {
        FOSentence phi = parse_fo(text);
        FOSentence sk = skolemize(phi);
        for (int nb = 1; nb <= 3; ++nb)
            CHECK(bounded_sat_bruteforce(phi, nb).sat == bounded_sat_bruteforce(sk, nb).sat);
    }
}

TEST_CASE("model checking is standard Tarskian truth") {
    Structure one;
    one.domain = 1;
    CHECK(fo_model_check(parse_fo("(forall x (= x x))"), one));
    CHECK_FALSE(fo_model_check(parse_fo("(exists x (exists y (not (= x y))))"), one));

    Structure two;
    two.domain = 2;
    two.preds["P"] = {1, 0};
    FOSentence some = parse_fo("(exists x (P x))");
    FOSentence all = parse_fo("(forall x (P x))");
    CHECK(fo_model_check(some, two));
    CHECK_FALSE(fo_model_check(all, two));

    // Function tables interpret equality atoms z = g(x).
    Structure f;
    f.domain = 2;
    f.funcs["g"] = {1, 0};
    CHECK(fo_model_check(parse_fo("(forall x (forall z (implies (= z (g x)) (not (= x z)))))"),
                         f));
}

TEST_CASE("bounded satisfiability search") {
    FOSentence pigeon = parse_fo("(exists x (exists y (not (= x y))))");
    CHECK_FALSE(bounded_sat_bruteforce(pigeon, 1).sat);
    BoundedSatResult r = bounded_sat_bruteforce(pigeon, 2);
    CHECK(r.sat);
    CHECK(r.model.domain == 2);

    FOSentence contra = parse_fo("(and (forall x (P x)) (exists x (not (P x))))");
    for (int nb = 1; nb <= 3; ++nb) CHECK_FALSE(bounded_sat_bruteforce(contra, nb).sat);

    FOSentence wide = parse_fo("(forall x (forall y (forall z (E3 x y z))))");
    CHECK_THROWS_AS(bounded_sat_bruteforce(wide, 4, 1000), CapacityError);
}

TEST_CASE("bounded-model encoding mirrors bounded satisfiability") {
    FOSentence contra = parse_fo("(forall x (and (P x) (not (P x))))");
    CHECK_FALSE(esb_solve_bruteforce(bsatfo_to_esb(contra, 2)).sat);

    FOSentence single = parse_fo("(forall x (forall y (= x y)))");
    CHECK(esb_solve_bruteforce(bsatfo_to_esb(single, 2)).sat);

    // Full chain on a Skolemized sentence.
    FOSentence sk = skolemize(parse_fo("(forall x (exists y (and (E x y) (not (= x y)))))"));
    for (uint64_t nb : {1u, 2u, 4u}) {
        bool chain = solve_bruteforce(esb_to_dqbf(bsatfo_to_esb(sk, nb)),
                                      uint64_t{1} << 40).sat;
        // The chain decides satisfiability at the bound rounded up to a
        // power of two, which for 1, 2, 4 is the bound itself.
        // Domain 4 enumerates 2^16 edge tables times 4^4 function tables.
        CHECK(chain == bounded_sat_bruteforce(sk, nb, uint64_t{1} << 26).sat);
    }
}

TEST_CASE("two-element translation of function formulas") {
    // Ef \-/u (f(u) <-> u)
    EsbFormula tracks;
    tracks.functions = {{"f", 1}};
    tracks.prefix = {{Quant::Forall, "u"}};
    tracks.matrix = BoolExpr::make(BoolExpr::Kind::Iff,
                                   {BoolExpr::func("f", {EsbArg::of_var("u")}),
                                    BoolExpr::var("u")});
    FOSentence bsr = esb_to_bsr(tracks);
    CHECK(bsr.predicates.at("P_f") == 1);
    CHECK(bounded_sat_bruteforce(bsr, 2).sat);
    CHECK(esb_solve_bruteforce(tracks).sat);

    EsbFormula contra = tracks;
    contra.matrix = BoolExpr::make(
        BoolExpr::Kind::And,
        {BoolExpr::func("f", {EsbArg::of_var("u")}),
         BoolExpr::make(BoolExpr::Kind::Not, {BoolExpr::func("f", {EsbArg::of_var("u")})})});
    CHECK_FALSE(esb_solve_bruteforce(contra).sat);
    CHECK_FALSE(bounded_sat_bruteforce(esb_to_bsr(contra), 2).sat);
}

TEST_CASE("two-element translation agrees on a random suite") {
    std::mt19937 rng(43);
    auto pick = [&](int n) { return static_cast<int>(rng() % n); };
    for (int iter = 0; iter < 20; ++iter) {
        EsbFormula phi;
        int arity = 1 + pick(2);
        phi.functions = {{"f", arity}};
        int nvars = std::max(arity, 1 + pick(2));
        for (int i = 0; i < nvars; ++i)
            phi.prefix.emplace_back(Quant::Forall, "u" + std::to_string(i + 1));
        // Random matrix over two function occurrences and the variables.
        auto rand_args = [&]() {
            std::vector<EsbArg> args;
            for (int i = 0; i < arity; ++i)
                args.push_back(EsbArg::of_var("u" + std::to_string(1 + pick(nvars))));
            return args;
        };
        BoolExpr a = BoolExpr::func("f", rand_args());
        BoolExpr b = BoolExpr::func("f", rand_args());
        BoolExpr c = BoolExpr::var("u1");
        BoolExpr ab = BoolExpr::make(pick(2) ? BoolExpr::Kind::And : BoolExpr::Kind::Iff,
                                     {std::move(a), std::move(b)});
        phi.matrix = BoolExpr::make(pick(2) ? BoolExpr::Kind::Or : BoolExpr::Kind::Implies,
                                    {std::move(ab), std::move(c)});
        bool esb_truth = esb_solve_bruteforce(phi).sat;
        uint64_t bound = esm_bound({FragmentTag::Bsr, 2, 0, 0});
        CHECK(esb_truth ==
              bounded_sat_bruteforce(esb_to_bsr(phi), static_cast<int>(bound)).sat);
    }
}

TEST_CASE("function-occurrence projection") {
    EsbFormula tracks;
    tracks.functions = {{"f", 1}};
    tracks.prefix = {{Quant::Forall, "u"}};
    tracks.matrix = BoolExpr::make(BoolExpr::Kind::Iff,
                                   {BoolExpr::func("f", {EsbArg::of_var("u")}),
                                    BoolExpr::var("u")});
    AgreementResult r = agreement_search(project_esb(tracks));
    REQUIRE(r.found);
    CHECK(r.g == std::vector<uint64_t>{0, 1});  // g(u) = u

    EsbFormula flip;
    flip.functions = {{"f", 1}};
    flip.prefix = {{Quant::Forall, "u1"}, {Quant::Forall, "u2"}};
    flip.matrix = BoolExpr::make(
        BoolExpr::Kind::Iff,
        {BoolExpr::func("f", {EsbArg::of_var("u1")}),
         BoolExpr::make(BoolExpr::Kind::Not, {BoolExpr::func("f", {EsbArg::of_var("u2")})})});
    CHECK_FALSE(agreement_search(project_esb(flip)).found);

    EsbFormula trivial;
    trivial.functions = {{"f", 1}};
    trivial.prefix = {{Quant::Forall, "u"}};
    trivial.matrix = BoolExpr::constant(true);
    CHECK(agreement_search(project_esb(trivial)).found);
}

TEST_CASE("normalization to a single function and universal prefix") {
    // Two unary functions merge behind a selector bit.
    std::mt19937 rng(47);
    auto pick = [&](int n) { return static_cast<int>(rng() % n); };
    for (int iter = 0; iter < 10; ++iter) {
        EsbFormula phi;
        phi.functions = {{"f1", 1}, {"f2", 1}};
        phi.prefix = {{Quant::Forall, "u"}};
        BoolExpr a = BoolExpr::func("f1", {EsbArg::of_var("u")});
        BoolExpr b = BoolExpr::func("f2", {EsbArg::of_var("u")});
        BoolExpr u = BoolExpr::var("u");
        BoolExpr inner = BoolExpr::make(pick(2) ? BoolExpr::Kind::Iff : BoolExpr::Kind::And,
                                        {std::move(a), std::move(b)});
        phi.matrix = BoolExpr::make(pick(2) ? BoolExpr::Kind::Implies : BoolExpr::Kind::Or,
                                    {std::move(inner), std::move(u)});
        EsbFormula norm = normalize_esb(phi);
        CHECK(norm.functions.size() == 1);
        CHECK(norm.functions[0].arity == 2);  // one selector bit + one argument
        CHECK(esb_solve_bruteforce(norm).sat == esb_solve_bruteforce(phi).sat);
    }

    // First-order existential removed through the DQBF round trip.
    EsbFormula ex;
    ex.functions = {{"f", 1}};
    ex.prefix = {{Quant::Forall, "x"}, {Quant::Exists, "y"}};
    ex.matrix = BoolExpr::make(BoolExpr::Kind::Iff,
                               {BoolExpr::func("f", {EsbArg::of_var("x")}),
                                BoolExpr::var("y")});
    EsbFormula norm = normalize_esb(ex);
    for (auto& [q, v] : norm.prefix) CHECK(q == Quant::Forall);
    CHECK(norm.functions.size() == 1);
    CHECK(esb_solve_bruteforce(norm).sat == esb_solve_bruteforce(ex).sat);
}

namespace {

// Truth of a two-free-variable formula at elements (a, b), via marker
// predicates.
bool holds_at(const FoFormula& body, const Structure& s, int a, int b,
              std::map<std::string, int> preds) {
    Structure marked = s;
    marked.preds["At_a"] = std::vector<uint8_t>(s.domain, 0);
    marked.preds["At_b"] = std::vector<uint8_t>(s.domain, 0);
    marked.preds["At_a"][a] = 1;
    marked.preds["At_b"][b] = 1;
    FOSentence phi;
    FoFormula guard = FoFormula::make(FoFormula::Kind::And,
                                      {FoFormula::pred("At_a", {"x"}),
                                       FoFormula::pred("At_b", {"y"})});
    phi.root = FoFormula::quant(
        FoFormula::Kind::Forall, "x",
        FoFormula::quant(FoFormula::Kind::Forall, "y",
                         FoFormula::make(FoFormula::Kind::Implies, {std::move(guard), body})));
    phi.predicates = std::move(preds);
    phi.predicates["At_a"] = 1;
    phi.predicates["At_b"] = 1;
    return fo_model_check(phi, marked);
}

}  // namespace

TEST_CASE("profile equality and successor formulas") {
    auto [feq1, fsuc1] = build_feq_fsuc({"R1"});
    Structure s;
    s.domain = 2;
    s.preds["R1"] = {1, 0};  // element 0 has profile 1, element 1 profile 0
    std::map<std::string, int> sig{{"R1", 1}};
    CHECK(holds_at(fsuc1, s, 0, 1, sig));   // 1 wraps to 0
    CHECK(holds_at(fsuc1, s, 1, 0, sig));   // 0 + 1 = 1
    CHECK_FALSE(holds_at(fsuc1, s, 0, 0, sig));
    CHECK(holds_at(feq1, s, 0, 0, sig));
    CHECK(holds_at(feq1, s, 1, 1, sig));
    CHECK_FALSE(holds_at(feq1, s, 0, 1, sig));

    // n = 2: formula truth table equals the successor circuit's, profile
    // bit 1 (R1) least significant.
    auto [feq2, fsuc2] = build_feq_fsuc({"R1", "R2"});
    Structure s4;
    s4.domain = 4;
    s4.preds["R1"] = {0, 1, 0, 1};  // element e has profile e
    s4.preds["R2"] = {0, 0, 1, 1};
    std::map<std::string, int> sig2{{"R1", 1}, {"R2", 1}};
    Circuit suc = build_successor(2);
    for (int a = 0; a < 4; ++a)
        for (int b = 0; b < 4; ++b) {
            Assignment as(suc);
            as.set_group(0, static_cast<uint64_t>(a));
            as.set_group(1, static_cast<uint64_t>(b));
            CHECK(holds_at(fsuc2, s4, a, b, sig2) == (eval(suc, as) == 1));
            CHECK(holds_at(feq2, s4, a, b, sig2) == (a == b));
        }
}

TEST_CASE("two-variable translation of projections") {
    CircuitBuilder cb("d");
    cb.add_group("x1", 1);
    cb.add_group("y1", 1);
    cb.add_group("x2", 1);
    cb.add_group("y2", 1);
    ProjectionCircuit trivial{1, 1, cb.finish(cb.constant(1))};
    FOSentence phi = algorithm2(trivial);
    CHECK(phi.predicates.size() == 2);  // R1 and S1
    CHECK(bounded_sat_bruteforce(phi, 4).sat);

    SuccinctGraph cyc = fix::table_graph(1, fix::edge_bit(1, 0, 1) | fix::edge_bit(1, 1, 0));
    CHECK(bounded_sat_bruteforce(algorithm2(project_hamiltonian(cyc)), 4).sat);
    CHECK_FALSE(bounded_sat_bruteforce(algorithm2(project_hamiltonian(fix::edgeless(1))), 4).sat);
}
