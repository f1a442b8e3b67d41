#include "nexp2dqbf/folog.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <functional>
#include <set>
#include <sstream>

namespace n2d {

FoFormula FoFormula::constant(bool v) {
    FoFormula f;
    f.kind = Kind::Const;
    f.value = v;
    return f;
}

FoFormula FoFormula::pred(std::string p, std::vector<std::string> args) {
    FoFormula f;
    f.kind = Kind::Pred;
    f.name = std::move(p);
    f.args = std::move(args);
    return f;
}

FoFormula FoFormula::eq(std::string a, std::string b) {
    FoFormula f;
    f.kind = Kind::Eq;
    f.args = {std::move(a), std::move(b)};
    return f;
}

FoFormula FoFormula::func_eq(std::string z, std::string g, std::vector<std::string> args) {
    FoFormula f;
    f.kind = Kind::FuncEq;
    f.name = std::move(g);
    f.args.push_back(std::move(z));
    for (auto& a : args) f.args.push_back(std::move(a));
    return f;
}

FoFormula FoFormula::make(Kind k, std::vector<FoFormula> ch) {
    FoFormula f;
    f.kind = k;
    f.children = std::move(ch);
    return f;
}

FoFormula FoFormula::quant(Kind k, std::string var, FoFormula body) {
    FoFormula f;
    f.kind = k;
    f.name = std::move(var);
    f.children.push_back(std::move(body));
    return f;
}

namespace {

int ceil_log2(uint64_t k) {
    return k <= 1 ? 0 : std::bit_width(k - 1);
}

void collect_signature(const FoFormula& f, std::map<std::string, int>& preds,
                       std::map<std::string, int>& funcs) {
    switch (f.kind) {
        case FoFormula::Kind::Pred: {
            int ar = static_cast<int>(f.args.size());
            auto [it, fresh] = preds.emplace(f.name, ar);
            if (!fresh && it->second != ar)
                throw std::invalid_argument("inconsistent arity for predicate " + f.name);
            break;
        }
        case FoFormula::Kind::FuncEq: {
            int ar = static_cast<int>(f.args.size()) - 1;
            auto [it, fresh] = funcs.emplace(f.name, ar);
            if (!fresh && it->second != ar)
                throw std::invalid_argument("inconsistent arity for function " + f.name);
            break;
        }
        default:
            for (auto& c : f.children) collect_signature(c, preds, funcs);
    }
}

void check_closed(const FoFormula& f, std::set<std::string>& bound) {
    switch (f.kind) {
        case FoFormula::Kind::Const:
            break;
        case FoFormula::Kind::Pred:
        case FoFormula::Kind::Eq:
        case FoFormula::Kind::FuncEq:
            for (auto& a : f.args)
                if (!bound.count(a)) throw std::invalid_argument("free variable: " + a);
            break;
        case FoFormula::Kind::Forall:
        case FoFormula::Kind::Exists: {
            bool fresh = bound.insert(f.name).second;
            check_closed(f.children[0], bound);
            if (fresh) bound.erase(f.name);
            break;
        }
        default:
            for (auto& c : f.children) check_closed(c, bound);
    }
}

}  // namespace

void FOSentence::validate() const {
    std::map<std::string, int> preds, funcs;
    collect_signature(root, preds, funcs);
    for (auto& [name, ar] : preds) {
        auto it = predicates.find(name);
        if (it == predicates.end() || it->second != ar)
            throw std::invalid_argument("predicate not declared: " + name);
        if (funcs.count(name))
            throw std::invalid_argument("symbol used as predicate and function: " + name);
    }
    for (auto& [name, ar] : funcs) {
        auto it = functions.find(name);
        if (it == functions.end() || it->second != ar)
            throw std::invalid_argument("function not declared: " + name);
    }
    std::set<std::string> bound;
    check_closed(root, bound);
}

uint64_t esm_bound(const FragmentClass& cls) {
    switch (cls.tag) {
        case FragmentTag::Bsr:
            return static_cast<uint64_t>(cls.m) + 1;
        case FragmentTag::Fo2Scott:
            return static_cast<uint64_t>(cls.m) << cls.n;
        case FragmentTag::Monadic:
            return static_cast<uint64_t>(cls.r) << cls.n;
    }
    throw std::invalid_argument("unknown fragment");
}

namespace {

void collect_names(const FoFormula& f, std::set<std::string>& names) {
    if (!f.name.empty()) names.insert(f.name);
    for (auto& a : f.args) names.insert(a);
    for (auto& c : f.children) collect_names(c, names);
}

std::string fresh_name(const std::string& base, std::set<std::string>& taken) {
    std::string name = base;
    int i = 0;
    while (taken.count(name)) name = base + std::to_string(++i);
    taken.insert(name);
    return name;
}

void rename_var(FoFormula& f, const std::string& from, const std::string& to) {
    for (auto& a : f.args)
        if (a == from) a = to;
    for (auto& c : f.children) rename_var(c, from, to);
}

bool quantifier_free(const FoFormula& f) {
    if (f.kind == FoFormula::Kind::Forall || f.kind == FoFormula::Kind::Exists) return false;
    for (auto& c : f.children)
        if (!quantifier_free(c)) return false;
    return true;
}

}  // namespace

FOSentence skolemize(const FOSentence& phi) {
    phi.validate();
    std::vector<std::pair<FoFormula::Kind, std::string>> prefix;
    const FoFormula* cur = &phi.root;
    while (cur->kind == FoFormula::Kind::Forall || cur->kind == FoFormula::Kind::Exists) {
        prefix.emplace_back(cur->kind, cur->name);
        cur = &cur->children[0];
    }
    if (!quantifier_free(*cur)) throw std::invalid_argument("sentence is not prenex");
    FoFormula matrix = *cur;

    std::set<std::string> taken;
    collect_names(phi.root, taken);
    for (auto& [p, a] : phi.predicates) taken.insert(p);
    for (auto& [g, a] : phi.functions) taken.insert(g);

    FOSentence out;
    out.predicates = phi.predicates;
    out.functions = phi.functions;

    if (!prefix.empty() && prefix[0].first == FoFormula::Kind::Exists)
        prefix.insert(prefix.begin(), {FoFormula::Kind::Forall, fresh_name("x0", taken)});

    for (;;) {
        size_t i = 0;
        while (i < prefix.size() && prefix[i].first == FoFormula::Kind::Forall) ++i;
        if (i == prefix.size()) break;
        std::string xi = prefix[i].second;
        std::string z = fresh_name("z", taken);
        std::string g = fresh_name("g", taken);
        std::vector<std::string> gargs;
        for (size_t j = 0; j < i; ++j) gargs.push_back(prefix[j].second);
        out.functions[g] = static_cast<int>(gargs.size());
        rename_var(matrix, xi, z);
        matrix = FoFormula::make(FoFormula::Kind::Implies,
                                 {FoFormula::func_eq(z, g, gargs), std::move(matrix)});
        prefix.erase(prefix.begin() + i);
        prefix.emplace_back(FoFormula::Kind::Forall, z);
    }

    FoFormula root = std::move(matrix);
    for (auto it = prefix.rbegin(); it != prefix.rend(); ++it)
        root = FoFormula::quant(FoFormula::Kind::Forall, it->second, std::move(root));
    out.root = std::move(root);
    out.validate();
    return out;
}

namespace {

struct UniversalPrenexView {
    std::vector<std::string> vars;  // universal prefix, in order
    FoFormula matrix;
};

UniversalPrenexView universal_prenex_view(const FOSentence& phi) {
    phi.validate();
    UniversalPrenexView v;
    const FoFormula* cur = &phi.root;
    while (cur->kind == FoFormula::Kind::Forall) {
        v.vars.push_back(cur->name);
        cur = &cur->children[0];
    }
    if (!quantifier_free(*cur))
        throw std::invalid_argument("expected an all-universal prenex sentence");
    v.matrix = *cur;
    return v;
}

}  // namespace

EsbFormula bsatfo_to_esb(const FOSentence& phi, uint64_t n_bound) {
    if (n_bound == 0) throw std::invalid_argument("model bound must be positive");
    UniversalPrenexView v = universal_prenex_view(phi);
    int t = std::max(1, ceil_log2(n_bound));

    auto ubit = [&](const std::string& x, int b) {
        return "u_" + x + "_" + std::to_string(b);
    };
    std::map<std::string, int> var_pos;
    for (size_t i = 0; i < v.vars.size(); ++i) var_pos[v.vars[i]] = static_cast<int>(i);

    EsbFormula out;
    out.functions.push_back({"f0", t});
    for (auto& [g, ar] : phi.functions)
        for (int b = 0; b < t; ++b)
            out.functions.push_back({"f_" + g + "_" + std::to_string(b), t * ar});
    for (auto& [p, ar] : phi.predicates) out.functions.push_back({"f_" + p, t * ar});
    for (auto& x : v.vars)
        for (int b = 0; b < t; ++b) out.prefix.emplace_back(Quant::Forall, ubit(x, b));

    auto bits_of = [&](const std::string& x) {
        if (!var_pos.count(x)) throw std::invalid_argument("unquantified variable: " + x);
        std::vector<EsbArg> bits;
        for (int b = 0; b < t; ++b) bits.push_back(EsbArg::of_var(ubit(x, b)));
        return bits;
    };
    auto concat_bits = [&](const std::vector<std::string>& xs, size_t from) {
        std::vector<EsbArg> all;
        for (size_t i = from; i < xs.size(); ++i)
            for (auto& a : bits_of(xs[i])) all.push_back(a);
        return all;
    };

    std::vector<const FoFormula*> func_atoms;
    std::function<BoolExpr(const FoFormula&)> rewrite = [&](const FoFormula& f) -> BoolExpr {
        using K = FoFormula::Kind;
        switch (f.kind) {
            case K::Const:
                return BoolExpr::constant(f.value);
            case K::Pred:
                return BoolExpr::func("f_" + f.name, concat_bits(f.args, 0));
            case K::Eq: {
                std::vector<BoolExpr> parts;
                for (int b = 0; b < t; ++b)
                    parts.push_back(BoolExpr::make(
                        BoolExpr::Kind::Iff, {BoolExpr::var(ubit(f.args[0], b)),
                                              BoolExpr::var(ubit(f.args[1], b))}));
                return BoolExpr::make(BoolExpr::Kind::And, std::move(parts));
            }
            case K::FuncEq: {
                func_atoms.push_back(&f);
                auto fargs = concat_bits(f.args, 1);
                std::vector<BoolExpr> parts;
                for (int b = 0; b < t; ++b)
                    parts.push_back(BoolExpr::make(
                        BoolExpr::Kind::Iff,
                        {BoolExpr::var(ubit(f.args[0], b)),
                         BoolExpr::func("f_" + f.name + "_" + std::to_string(b), fargs)}));
                return BoolExpr::make(BoolExpr::Kind::And, std::move(parts));
            }
            case K::Not:
            case K::And:
            case K::Or:
            case K::Implies:
            case K::Iff: {
                std::vector<BoolExpr> ch;
                for (auto& c : f.children) ch.push_back(rewrite(c));
                auto k = f.kind == K::Not       ? BoolExpr::Kind::Not
                         : f.kind == K::And     ? BoolExpr::Kind::And
                         : f.kind == K::Or      ? BoolExpr::Kind::Or
                         : f.kind == K::Implies ? BoolExpr::Kind::Implies
                                                : BoolExpr::Kind::Iff;
                return BoolExpr::make(k, std::move(ch));
            }
            default:
                throw std::invalid_argument("quantifier inside the matrix");
        }
    };
    BoolExpr psi = rewrite(v.matrix);

    if (v.vars.empty()) {
        out.matrix = std::move(psi);
    } else {
        std::vector<BoolExpr> zero;
        for (int b = 0; b < t; ++b)
            zero.push_back(BoolExpr::make(BoolExpr::Kind::Not,
                                          {BoolExpr::var(ubit(v.vars[0], b))}));
        BoolExpr nonempty = BoolExpr::make(
            BoolExpr::Kind::Implies, {BoolExpr::make(BoolExpr::Kind::And, std::move(zero)),
                                      BoolExpr::func("f0", bits_of(v.vars[0]))});
        std::vector<BoolExpr> members;
        for (auto& x : v.vars) members.push_back(BoolExpr::func("f0", bits_of(x)));
        BoolExpr guarded = BoolExpr::make(
            BoolExpr::Kind::Implies,
            {BoolExpr::make(BoolExpr::Kind::And, std::move(members)), std::move(psi)});
        std::vector<BoolExpr> parts;
        parts.push_back(std::move(nonempty));
        parts.push_back(std::move(guarded));
        // Function outputs stay inside the model: whenever the guard variable
        // names the output and every argument is selected, the output is
        // selected too.  Without this, a Skolem function could map into an
        // unselected string, vacuously discharging its guard.
        std::set<std::string> closed;
        for (const FoFormula* atom : func_atoms) {
            std::string key = atom->name;
            for (auto& a : atom->args) key += "," + a;
            if (!closed.insert(key).second) continue;
            std::vector<BoolExpr> ante;
            for (size_t i = 1; i < atom->args.size(); ++i)
                ante.push_back(BoolExpr::func("f0", bits_of(atom->args[i])));
            auto fargs = concat_bits(atom->args, 1);
            for (int b = 0; b < t; ++b)
                ante.push_back(BoolExpr::make(
                    BoolExpr::Kind::Iff,
                    {BoolExpr::var(ubit(atom->args[0], b)),
                     BoolExpr::func("f_" + atom->name + "_" + std::to_string(b), fargs)}));
            parts.push_back(BoolExpr::make(
                BoolExpr::Kind::Implies,
                {BoolExpr::make(BoolExpr::Kind::And, std::move(ante)),
                 BoolExpr::func("f0", bits_of(atom->args[0]))}));
        }
        // Strings past the rounded bound never enter the model; only the
        // n = 1 case leaves such a string, since t is at least 1.
        uint64_t rounded = uint64_t{1} << ceil_log2(n_bound);
        for (uint64_t w = rounded; w < (uint64_t{1} << t); ++w) {
            std::vector<EsbArg> bits;
            for (int b = 0; b < t; ++b) bits.push_back(EsbArg::of_const((w >> (t - 1 - b)) & 1));
            parts.push_back(BoolExpr::make(BoolExpr::Kind::Not,
                                           {BoolExpr::func("f0", std::move(bits))}));
        }
        out.matrix = BoolExpr::make(BoolExpr::Kind::And, std::move(parts));
    }
    out.validate();
    return out;
}

FOSentence esb_to_bsr(const EsbFormula& phi) {
    phi.validate();
    for (auto& [q, v] : phi.prefix)
        if (q != Quant::Forall)
            throw std::invalid_argument("expected an all-universal prefix");

    std::set<std::string> taken;
    for (auto& [q, v] : phi.prefix) taken.insert(v);
    for (auto& f : phi.functions) taken.insert(f.name);
    std::string x0 = fresh_name("x0", taken);
    std::string x1 = fresh_name("x1", taken);

    FOSentence out;
    for (auto& f : phi.functions) out.predicates["P_" + f.name] = f.arity;

    std::function<FoFormula(const BoolExpr&)> hat = [&](const BoolExpr& e) -> FoFormula {
        using K = BoolExpr::Kind;
        switch (e.kind) {
            case K::Const:
                return FoFormula::constant(e.value);
            case K::Var:
                return FoFormula::eq(e.name, x1);
            case K::FuncApp: {
                std::vector<std::string> args;
                for (auto& a : e.args) args.push_back(a.is_const ? (a.value ? x1 : x0) : a.var);
                return FoFormula::pred("P_" + e.name, std::move(args));
            }
            case K::Not:
                return FoFormula::make(FoFormula::Kind::Not, {hat(e.children[0])});
            case K::Xor:
                return FoFormula::make(
                    FoFormula::Kind::Not,
                    {FoFormula::make(FoFormula::Kind::Iff,
                                     {hat(e.children[0]), hat(e.children[1])})});
            case K::And:
            case K::Or:
            case K::Implies:
            case K::Iff: {
                std::vector<FoFormula> ch;
                for (auto& c : e.children) ch.push_back(hat(c));
                auto k = e.kind == K::And       ? FoFormula::Kind::And
                         : e.kind == K::Or      ? FoFormula::Kind::Or
                         : e.kind == K::Implies ? FoFormula::Kind::Implies
                                                : FoFormula::Kind::Iff;
                return FoFormula::make(k, std::move(ch));
            }
        }
        throw std::logic_error("unreachable");
    };

    std::vector<FoFormula> parts{
        FoFormula::make(FoFormula::Kind::Not, {FoFormula::eq(x0, x1)})};
    for (auto& [q, v] : phi.prefix)
        parts.push_back(FoFormula::make(FoFormula::Kind::Or,
                                        {FoFormula::eq(v, x0), FoFormula::eq(v, x1)}));
    parts.push_back(hat(phi.matrix));

    FoFormula body = FoFormula::make(FoFormula::Kind::And, std::move(parts));
    for (auto it = phi.prefix.rbegin(); it != phi.prefix.rend(); ++it)
        body = FoFormula::quant(FoFormula::Kind::Forall, it->second, std::move(body));
    body = FoFormula::quant(FoFormula::Kind::Exists, x1, std::move(body));
    out.root = FoFormula::quant(FoFormula::Kind::Exists, x0, std::move(body));
    out.validate();
    return out;
}

namespace {

void esb_occurrences(const BoolExpr& e, std::vector<std::vector<EsbArg>>& occ) {
    if (e.kind == BoolExpr::Kind::FuncApp) {
        for (auto& o : occ)
            if (o == e.args) return;
        occ.push_back(e.args);
        return;
    }
    for (auto& c : e.children) esb_occurrences(c, occ);
}

}  // namespace

ProjectionCircuit project_esb(const EsbFormula& phi) {
    phi.validate();
    if (phi.functions.size() != 1)
        throw std::invalid_argument("expected exactly one function symbol");
    for (auto& [q, v] : phi.prefix)
        if (q != Quant::Forall)
            throw std::invalid_argument("expected an all-universal prefix");
    int n = static_cast<int>(phi.prefix.size());
    if (n == 0) throw std::invalid_argument("empty universal prefix");

    std::map<std::string, int> upos;
    for (int i = 0; i < n; ++i) upos[phi.prefix[i].second] = i;
    std::vector<std::vector<EsbArg>> occ;
    esb_occurrences(phi.matrix, occ);
    int m = std::max<int>(1, static_cast<int>(occ.size()));

    CircuitBuilder b("esbprojection");
    auto x1 = b.add_group("x1", n), y1 = b.add_group("y1", m);
    auto x2 = b.add_group("x2", n), y2 = b.add_group("y2", m);

    auto occ_index = [&](const std::vector<EsbArg>& args) {
        for (size_t i = 0; i < occ.size(); ++i)
            if (occ[i] == args) return static_cast<int>(i);
        throw std::logic_error("occurrence not collected");
    };
    std::function<Ref(const BoolExpr&)> build = [&](const BoolExpr& e) -> Ref {
        using K = BoolExpr::Kind;
        switch (e.kind) {
            case K::Const: return b.constant(e.value);
            case K::Var: return x1[upos.at(e.name)];
            case K::FuncApp: return y1[occ_index(e.args)];
            case K::Not: return b.lnot(build(e.children[0]));
            case K::Xor: return b.lxor(build(e.children[0]), build(e.children[1]));
            case K::Implies: return b.implies(build(e.children[0]), build(e.children[1]));
            case K::Iff: return b.iff(build(e.children[0]), build(e.children[1]));
            case K::And:
            case K::Or: {
                std::vector<Ref> ch;
                for (auto& c : e.children) ch.push_back(build(c));
                return e.kind == K::And ? b.land(std::move(ch)) : b.lor(std::move(ch));
            }
        }
        throw std::logic_error("unreachable");
    };

    std::vector<Ref> conds{build(phi.matrix)};
    auto arg_at = [&](const EsbArg& a, const std::vector<Ref>& copy) {
        return a.is_const ? b.constant(a.value) : copy[upos.at(a.var)];
    };
    for (size_t i = 0; i < occ.size(); ++i)
        for (size_t j = 0; j < occ.size(); ++j) {
            std::vector<Ref> eqs;
            for (size_t p = 0; p < occ[i].size(); ++p)
                eqs.push_back(b.iff(arg_at(occ[i][p], x1), arg_at(occ[j][p], x2)));
            conds.push_back(b.implies(b.land(std::move(eqs)),
                                      b.iff(y1[i], y2[j])));
        }
    ProjectionCircuit out{n, m, b.finish(b.land(std::move(conds)))};
    out.validate();
    return out;
}

EsbFormula normalize_esb(const EsbFormula& phi) {
    phi.validate();
    EsbFormula cur = phi;
    bool has_exists = false;
    for (auto& [q, v] : cur.prefix)
        if (q == Quant::Exists) has_exists = true;
    if (has_exists) cur = dqbf_to_esb(esb_to_dqbf(cur));
    if (cur.functions.size() <= 1) return cur;

    int p = static_cast<int>(cur.functions.size());
    int sel = ceil_log2(static_cast<uint64_t>(p));
    int maxar = 0;
    std::map<std::string, int> fidx;
    for (int i = 0; i < p; ++i) {
        maxar = std::max(maxar, cur.functions[i].arity);
        fidx[cur.functions[i].name] = i;
    }
    std::set<std::string> taken;
    for (auto& [q, v] : cur.prefix) taken.insert(v);
    std::string merged = fresh_name("f", taken);

    std::function<void(BoolExpr&)> rewrite = [&](BoolExpr& e) {
        for (auto& c : e.children) rewrite(c);
        if (e.kind != BoolExpr::Kind::FuncApp) return;
        int i = fidx.at(e.name);
        std::vector<EsbArg> args;
        for (int b = 0; b < sel; ++b) args.push_back(EsbArg::of_const((i >> (sel - 1 - b)) & 1));
        for (auto& a : e.args) args.push_back(a);
        while (static_cast<int>(args.size()) < sel + maxar) args.push_back(EsbArg::of_const(0));
        e.name = merged;
        e.args = std::move(args);
    };
    rewrite(cur.matrix);
    cur.functions = {{merged, sel + maxar}};
    cur.validate();
    return cur;
}

std::pair<FoFormula, FoFormula> build_feq_fsuc(const std::vector<std::string>& preds) {
    int n = static_cast<int>(preds.size());
    if (n < 1) throw std::invalid_argument("need at least one profile predicate");
    auto R = [&](int i, const char* v) { return FoFormula::pred(preds[i], {v}); };
    auto neg = [](FoFormula f) { return FoFormula::make(FoFormula::Kind::Not, {std::move(f)}); };

    std::vector<FoFormula> eqs;
    for (int i = 0; i < n; ++i)
        eqs.push_back(FoFormula::make(FoFormula::Kind::Iff, {R(i, "x"), R(i, "y")}));
    FoFormula feq = FoFormula::make(FoFormula::Kind::And, std::move(eqs));

    // Increment with R1 (index 0) least significant: lower bits flip 1 -> 0,
    // one bit flips 0 -> 1, higher bits are unchanged; plus the wraparound.
    std::vector<FoFormula> terms;
    for (int i = 0; i < n; ++i) {
        std::vector<FoFormula> parts{neg(R(i, "x")), R(i, "y")};
        for (int j = 0; j < i; ++j) {
            parts.push_back(R(j, "x"));
            parts.push_back(neg(R(j, "y")));
        }
        for (int j = i + 1; j < n; ++j)
            parts.push_back(FoFormula::make(FoFormula::Kind::Iff, {R(j, "x"), R(j, "y")}));
        terms.push_back(FoFormula::make(FoFormula::Kind::And, std::move(parts)));
    }
    std::vector<FoFormula> wrap;
    for (int i = 0; i < n; ++i) {
        wrap.push_back(R(i, "x"));
        wrap.push_back(neg(R(i, "y")));
    }
    terms.push_back(FoFormula::make(FoFormula::Kind::And, std::move(wrap)));
    FoFormula fsuc = FoFormula::make(FoFormula::Kind::Or, std::move(terms));
    return {std::move(feq), std::move(fsuc)};
}

namespace {

FoFormula circuit_to_fo(const Circuit& c, const Ref& r,
                        const std::function<FoFormula(int, int)>& leaf) {
    if (r.is_input()) return leaf(r.group, r.bit);
    const Gate& g = c.gates[r.gate];
    if (g.kind == GateKind::Const) return FoFormula::constant(g.const_value != 0);
    std::vector<FoFormula> ch;
    for (auto& op : g.operands) ch.push_back(circuit_to_fo(c, op, leaf));
    switch (g.kind) {
        case GateKind::And: return FoFormula::make(FoFormula::Kind::And, std::move(ch));
        case GateKind::Or: return FoFormula::make(FoFormula::Kind::Or, std::move(ch));
        case GateKind::Not: return FoFormula::make(FoFormula::Kind::Not, std::move(ch));
        case GateKind::Xor:
            return FoFormula::make(
                FoFormula::Kind::Not,
                {FoFormula::make(FoFormula::Kind::Iff, std::move(ch))});
        case GateKind::Const: break;
    }
    throw std::logic_error("unreachable");
}

}  // namespace

FOSentence algorithm2(const ProjectionCircuit& d) {
    d.validate();
    int n = d.point_width, m = d.value_width;
    if (n < 1) throw std::invalid_argument("point width must be positive");

    std::vector<std::string> rnames, snames;
    for (int i = 1; i <= n; ++i) rnames.push_back("R" + std::to_string(i));
    for (int i = 1; i <= m; ++i) snames.push_back("S" + std::to_string(i));

    auto [feq_r, fsuc_r] = build_feq_fsuc(rnames);
    FoFormula feq_s = FoFormula::constant(true);
    if (m >= 1) feq_s = build_feq_fsuc(snames).first;
    FoFormula alpha1 =
        FoFormula::make(FoFormula::Kind::Implies, {std::move(feq_r), std::move(feq_s)});

    // Circuit bits become unary predicates of the copy's variable.
    auto leaf = [&](int group, int bit) -> FoFormula {
        const std::string& gname = d.d.groups[group].first;
        const char* var = (gname == "x1" || gname == "y1") ? "x" : "y";
        const auto& preds = (gname == "x1" || gname == "x2") ? rnames : snames;
        return FoFormula::pred(preds[bit], {var});
    };
    FoFormula alpha2 = circuit_to_fo(d.d, d.d.output, leaf);

    FoFormula part1 = FoFormula::quant(
        FoFormula::Kind::Forall, "x",
        FoFormula::quant(FoFormula::Kind::Forall, "y",
                         FoFormula::make(FoFormula::Kind::And,
                                         {std::move(alpha1), std::move(alpha2)})));
    FoFormula part2 = FoFormula::quant(
        FoFormula::Kind::Forall, "x",
        FoFormula::quant(FoFormula::Kind::Exists, "y", std::move(fsuc_r)));

    FOSentence out;
    out.root = FoFormula::make(FoFormula::Kind::And, {std::move(part1), std::move(part2)});
    for (auto& r : rnames) out.predicates[r] = 1;
    for (auto& s : snames) out.predicates[s] = 1;
    out.validate();
    return out;
}

namespace {

size_t table_index(const std::vector<int>& args, int domain) {
    size_t idx = 0;
    for (int a : args) idx = idx * domain + a;
    return idx;
}

bool eval_fo(const FoFormula& f, const Structure& s, std::map<std::string, int>& env) {
    using K = FoFormula::Kind;
    switch (f.kind) {
        case K::Const:
            return f.value;
        case K::Pred: {
            auto it = s.preds.find(f.name);
            if (it == s.preds.end())
                throw std::invalid_argument("predicate not interpreted: " + f.name);
            std::vector<int> vals;
            for (auto& a : f.args) vals.push_back(env.at(a));
            size_t idx = table_index(vals, s.domain);
            if (idx >= it->second.size())
                throw std::invalid_argument("arity mismatch for predicate " + f.name);
            return it->second[idx] != 0;
        }
        case K::Eq:
            return env.at(f.args[0]) == env.at(f.args[1]);
        case K::FuncEq: {
            auto it = s.funcs.find(f.name);
            if (it == s.funcs.end())
                throw std::invalid_argument("function not interpreted: " + f.name);
            std::vector<int> vals;
            for (size_t i = 1; i < f.args.size(); ++i) vals.push_back(env.at(f.args[i]));
            size_t idx = table_index(vals, s.domain);
            if (idx >= it->second.size())
                throw std::invalid_argument("arity mismatch for function " + f.name);
            return it->second[idx] == env.at(f.args[0]);
        }
        case K::Not:
            return !eval_fo(f.children[0], s, env);
        case K::And:
            for (auto& c : f.children)
                if (!eval_fo(c, s, env)) return false;
            return true;
        case K::Or:
            for (auto& c : f.children)
                if (eval_fo(c, s, env)) return true;
            return false;
        case K::Implies:
            return !eval_fo(f.children[0], s, env) || eval_fo(f.children[1], s, env);
        case K::Iff:
            return eval_fo(f.children[0], s, env) == eval_fo(f.children[1], s, env);
        case K::Forall:
        case K::Exists: {
            bool exists = f.kind == K::Exists;
            auto saved = env.find(f.name) != env.end()
                             ? std::optional<int>(env[f.name])
                             : std::nullopt;
            for (int v = 0; v < s.domain; ++v) {
                env[f.name] = v;
                bool sub = eval_fo(f.children[0], s, env);
                if (exists && sub) {
                    if (saved) env[f.name] = *saved; else env.erase(f.name);
                    return true;
                }
                if (!exists && !sub) {
                    if (saved) env[f.name] = *saved; else env.erase(f.name);
                    return false;
                }
            }
            if (saved) env[f.name] = *saved; else env.erase(f.name);
            return !exists;
        }
    }
    return false;
}

}  // namespace

bool fo_model_check(const FOSentence& phi, const Structure& s) {
    phi.validate();
    if (s.domain < 1) throw std::invalid_argument("domain must be nonempty");
    std::map<std::string, int> env;
    return eval_fo(phi.root, s, env);
}

BoundedSatResult bounded_sat_bruteforce(const FOSentence& phi, int n_bound, uint64_t budget) {
    phi.validate();
    if (n_bound < 1) throw std::invalid_argument("model bound must be positive");

    long double total = 0.0L;
    for (int d = 1; d <= n_bound; ++d) {
        long double count = 1.0L;
        for (auto& [p, ar] : phi.predicates)
            count *= std::pow(2.0L, std::pow(static_cast<long double>(d),
                                             static_cast<long double>(ar)));
        for (auto& [g, ar] : phi.functions)
            count *= std::pow(static_cast<long double>(d),
                              std::pow(static_cast<long double>(d),
                                       static_cast<long double>(ar)));
        total += count;
        if (total > static_cast<long double>(budget))
            throw CapacityError("structure enumeration exceeds budget");
    }

    for (int d = 1; d <= n_bound; ++d) {
        Structure s;
        s.domain = d;
        std::vector<std::pair<uint8_t*, int>> cells;  // (cell, radix)
        for (auto& [p, ar] : phi.predicates) {
            size_t sz = 1;
            for (int i = 0; i < ar; ++i) sz *= d;
            s.preds[p].assign(sz, 0);
        }
        std::vector<std::pair<std::string, size_t>> fsizes;
        for (auto& [g, ar] : phi.functions) {
            size_t sz = 1;
            for (int i = 0; i < ar; ++i) sz *= d;
            s.funcs[g].assign(sz, 0);
            fsizes.emplace_back(g, sz);
        }
        for (auto& [p, table] : s.preds)
            for (auto& cell : table) cells.emplace_back(&cell, 2);
        std::vector<std::pair<int*, int>> fcells;
        for (auto& [g, table] : s.funcs)
            for (auto& cell : table) fcells.emplace_back(&cell, d);

        for (;;) {
            if (fo_model_check(phi, s)) return {true, s};
            // Odometer: last cell least significant, predicates before
            // functions.
            size_t i = fcells.size();
            while (i > 0) {
                auto& [cell, radix] = fcells[i - 1];
                if (++*cell < radix) break;
                *cell = 0;
                --i;
            }
            if (i > 0) continue;
            size_t j = cells.size();
            while (j > 0) {
                auto& [cell, radix] = cells[j - 1];
                if (++*cell < radix) break;
                *cell = 0;
                --j;
            }
            if (j == 0) break;
        }
    }
    return {false, {}};
}

namespace {

struct SexprParser {
    const std::string& text;
    size_t pos = 0;

    explicit SexprParser(const std::string& t) : text(t) {}

    void skip_ws() {
        while (pos < text.size()) {
            if (std::isspace(static_cast<unsigned char>(text[pos]))) { ++pos; continue; }
            if (text[pos] == ';') {
                while (pos < text.size() && text[pos] != '\n') ++pos;
                continue;
            }
            break;
        }
    }
    bool at_end() { skip_ws(); return pos >= text.size(); }
    char peek() { skip_ws(); if (pos >= text.size()) throw ParseError("unexpected end of input", 0); return text[pos]; }
    std::string atom() {
        skip_ws();
        size_t start = pos;
        while (pos < text.size() && !std::isspace(static_cast<unsigned char>(text[pos])) &&
               text[pos] != '(' && text[pos] != ')')
            ++pos;
        if (start == pos) throw ParseError("expected a symbol", 0);
        return text.substr(start, pos - start);
    }
    void expect(char c) {
        if (peek() != c) throw ParseError(std::string("expected '") + c + "'", 0);
        ++pos;
    }

    FoFormula formula() {
        if (peek() != '(') {
            std::string a = atom();
            if (a == "true") return FoFormula::constant(true);
            if (a == "false") return FoFormula::constant(false);
            throw ParseError("unexpected bare symbol: " + a, 0);
        }
        expect('(');
        std::string head = atom();
        FoFormula out;
        if (head == "forall" || head == "exists") {
            std::string var = atom();
            out = FoFormula::quant(head == "forall" ? FoFormula::Kind::Forall
                                                    : FoFormula::Kind::Exists,
                                   var, formula());
        } else if (head == "and" || head == "or" || head == "not" || head == "implies" ||
                   head == "iff") {
            std::vector<FoFormula> ch;
            while (peek() != ')') ch.push_back(formula());
            size_t want = head == "not" ? 1 : head == "and" || head == "or" ? 0 : 2;
            if (want && ch.size() != want)
                throw ParseError("wrong operand count for " + head, 0);
            auto k = head == "and"       ? FoFormula::Kind::And
                     : head == "or"      ? FoFormula::Kind::Or
                     : head == "not"     ? FoFormula::Kind::Not
                     : head == "implies" ? FoFormula::Kind::Implies
                                         : FoFormula::Kind::Iff;
            out = FoFormula::make(k, std::move(ch));
        } else if (head == "true" || head == "false") {
            out = FoFormula::constant(head == "true");
        } else if (head == "=") {
            std::string lhs = atom();
            if (peek() == '(') {
                expect('(');
                std::string g = atom();
                std::vector<std::string> args;
                while (peek() != ')') args.push_back(atom());
                expect(')');
                out = FoFormula::func_eq(lhs, g, std::move(args));
            } else {
                out = FoFormula::eq(lhs, atom());
            }
        } else {
            std::vector<std::string> args;
            while (peek() != ')') args.push_back(atom());
            out = FoFormula::pred(head, std::move(args));
        }
        expect(')');
        return out;
    }
};

void emit_formula(const FoFormula& f, std::ostringstream& os) {
    using K = FoFormula::Kind;
    switch (f.kind) {
        case K::Const:
            os << (f.value ? "(true)" : "(false)");
            break;
        case K::Pred:
            os << '(' << f.name;
            for (auto& a : f.args) os << ' ' << a;
            os << ')';
            break;
        case K::Eq:
            os << "(= " << f.args[0] << ' ' << f.args[1] << ')';
            break;
        case K::FuncEq:
            os << "(= " << f.args[0] << " (" << f.name;
            for (size_t i = 1; i < f.args.size(); ++i) os << ' ' << f.args[i];
            os << "))";
            break;
        case K::Forall:
        case K::Exists:
            os << (f.kind == K::Forall ? "(forall " : "(exists ") << f.name << ' ';
            emit_formula(f.children[0], os);
            os << ')';
            break;
        default: {
            const char* head = f.kind == K::Not       ? "not"
                               : f.kind == K::And     ? "and"
                               : f.kind == K::Or      ? "or"
                               : f.kind == K::Implies ? "implies"
                                                      : "iff";
            os << '(' << head;
            for (auto& c : f.children) {
                os << ' ';
                emit_formula(c, os);
            }
            os << ')';
        }
    }
}

}  // namespace

FOSentence parse_fo(const std::string& text) {
    SexprParser p(text);
    FOSentence out;
    out.root = p.formula();
    if (!p.at_end()) throw ParseError("trailing input after the sentence", 0);
    collect_signature(out.root, out.predicates, out.functions);
    for (auto& [name, ar] : out.predicates)
        if (out.functions.count(name))
            throw ParseError("symbol used as predicate and function: " + name, 0);
    out.validate();
    return out;
}

std::string emit_fo(const FOSentence& phi) {
    std::ostringstream os;
    emit_formula(phi.root, os);
    os << '\n';
    return os.str();
}

}  // namespace n2d
