#include "nexp2dqbf/circuit.hpp"

#include <algorithm>
#include <sstream>

namespace n2d {

int Circuit::group_index(const std::string& g) const {
    for (size_t i = 0; i < groups.size(); ++i)
        if (groups[i].first == g) return static_cast<int>(i);
    return -1;
}

int Circuit::group_width(const std::string& g) const {
    int i = group_index(g);
    if (i < 0) throw std::invalid_argument("unknown input group: " + g);
    return groups[i].second;
}

int Circuit::total_input_bits() const {
    int n = 0;
    for (auto& [_, w] : groups) n += w;
    return n;
}

int Circuit::flat_index(int group, int bit) const {
    int off = 0;
    for (int i = 0; i < group; ++i) off += groups[i].second;
    return off + bit;
}

Assignment::Assignment(const Circuit& c) {
    bits_.reserve(c.groups.size());
    for (auto& [_, w] : c.groups) bits_.emplace_back(w, 0);
}

void Assignment::set(int group, int bit, int v) { bits_.at(group).at(bit) = v ? 1 : 0; }
uint8_t Assignment::get(int group, int bit) const { return bits_.at(group).at(bit); }

void Assignment::set_group(int group, uint64_t value) {
    auto& g = bits_.at(group);
    int w = static_cast<int>(g.size());
    for (int i = 0; i < w; ++i) g[i] = (value >> (w - 1 - i)) & 1;
}

uint64_t Assignment::get_group(int group) const {
    uint64_t v = 0;
    for (uint8_t b : bits_.at(group)) v = (v << 1) | b;
    return v;
}

Assignment assignment_from_map(const Circuit& c,
                               const std::map<std::pair<std::string, int>, int>& m) {
    Assignment a(c);
    size_t covered = 0;
    for (auto& [key, v] : m) {
        int gi = c.group_index(key.first);
        if (gi < 0)
            throw std::invalid_argument("assignment names unknown group: " + key.first);
        if (key.second < 0 || key.second >= c.groups[gi].second)
            throw std::invalid_argument("assignment bit out of range in group " + key.first);
        a.set(gi, key.second, v);
        ++covered;
    }
    if (covered != static_cast<size_t>(c.total_input_bits()))
        throw std::invalid_argument("assignment does not cover every input bit exactly once");
    return a;
}

int eval(const Circuit& c, const Assignment& a) {
    std::vector<uint8_t> flat;
    flat.reserve(c.total_input_bits());
    for (auto& g : a.bits()) flat.insert(flat.end(), g.begin(), g.end());
    if (static_cast<int>(flat.size()) != c.total_input_bits())
        throw std::invalid_argument("assignment arity mismatch");
    Evaluator ev(c);
    return ev.run(flat);
}

Evaluator::Evaluator(const Circuit& c) : c_(&c), n_inputs_(c.total_input_bits()) {
    vals_.resize(n_inputs_ + c.gates.size());
    ops_.resize(c.gates.size());
    auto flatten = [&](const Ref& r) {
        return r.is_input() ? c.flat_index(r.group, r.bit) : n_inputs_ + r.gate;
    };
    for (size_t i = 0; i < c.gates.size(); ++i)
        for (auto& r : c.gates[i].operands) ops_[i].push_back(flatten(r));
    out_ = {flatten(c.output)};
}

int Evaluator::run(std::span<const uint8_t> inputs) {
    if (static_cast<int>(inputs.size()) != n_inputs_)
        throw std::invalid_argument("evaluator input arity mismatch");
    std::copy(inputs.begin(), inputs.end(), vals_.begin());
    for (size_t i = 0; i < c_->gates.size(); ++i) {
        const Gate& g = c_->gates[i];
        const auto& ops = ops_[i];
        uint8_t v = 0;
        switch (g.kind) {
            case GateKind::And:
                v = 1;
                for (int o : ops) v &= vals_[o];
                break;
            case GateKind::Or:
                v = 0;
                for (int o : ops) v |= vals_[o];
                break;
            case GateKind::Not:
                v = !vals_[ops[0]];
                break;
            case GateKind::Xor:
                v = vals_[ops[0]] ^ vals_[ops[1]];
                break;
            case GateKind::Const:
                v = static_cast<uint8_t>(g.const_value);
                break;
        }
        vals_[n_inputs_ + i] = v;
    }
    return vals_[out_[0]];
}

CircuitBuilder::CircuitBuilder(std::string name) { c_.name = std::move(name); }

std::vector<Ref> CircuitBuilder::add_group(const std::string& name, int width) {
    if (width <= 0) throw std::invalid_argument("group width must be positive: " + name);
    if (c_.group_index(name) >= 0) throw std::invalid_argument("duplicate group: " + name);
    int gi = static_cast<int>(c_.groups.size());
    c_.groups.emplace_back(name, width);
    std::vector<Ref> refs;
    for (int b = 0; b < width; ++b) refs.push_back(Ref::input(gi, b));
    return refs;
}

Ref CircuitBuilder::input(const std::string& group, int bit) const {
    int gi = c_.group_index(group);
    if (gi < 0) throw std::invalid_argument("unknown group: " + group);
    if (bit < 0 || bit >= c_.groups[gi].second)
        throw std::invalid_argument("input bit out of range: " + group);
    return Ref::input(gi, bit);
}

Ref CircuitBuilder::push(GateKind kind, std::vector<Ref> operands, int const_value) {
    Gate g;
    g.id = "g" + std::to_string(next_id_++);
    g.kind = kind;
    g.operands = std::move(operands);
    g.const_value = const_value;
    c_.gates.push_back(std::move(g));
    return Ref::of_gate(static_cast<int32_t>(c_.gates.size() - 1));
}

Ref CircuitBuilder::constant(int v) { return push(GateKind::Const, {}, v ? 1 : 0); }

Ref CircuitBuilder::land(std::vector<Ref> xs) {
    if (xs.empty()) return constant(1);
    if (xs.size() == 1) return xs[0];
    return push(GateKind::And, std::move(xs));
}

Ref CircuitBuilder::lor(std::vector<Ref> xs) {
    if (xs.empty()) return constant(0);
    if (xs.size() == 1) return xs[0];
    return push(GateKind::Or, std::move(xs));
}

Ref CircuitBuilder::lnot(Ref x) { return push(GateKind::Not, {x}); }
Ref CircuitBuilder::lxor(Ref a, Ref b) { return push(GateKind::Xor, {a, b}); }
Ref CircuitBuilder::implies(Ref a, Ref b) { return lor({lnot(a), b}); }
Ref CircuitBuilder::iff(Ref a, Ref b) { return lnot(lxor(a, b)); }

Ref CircuitBuilder::eq(std::span<const Ref> a, std::span<const Ref> b) {
    if (a.size() != b.size()) throw std::invalid_argument("eq: width mismatch");
    std::vector<Ref> parts;
    for (size_t i = 0; i < a.size(); ++i) parts.push_back(iff(a[i], b[i]));
    return land(std::move(parts));
}

Ref CircuitBuilder::neq(std::span<const Ref> a, std::span<const Ref> b) {
    return lnot(eq(a, b));
}

Ref CircuitBuilder::eq_const(std::span<const Ref> a, uint64_t value) {
    std::vector<Ref> parts;
    int w = static_cast<int>(a.size());
    for (int i = 0; i < w; ++i) {
        int bit = (value >> (w - 1 - i)) & 1;
        parts.push_back(bit ? a[i] : lnot(a[i]));
    }
    return land(std::move(parts));
}

Ref CircuitBuilder::less_const(std::span<const Ref> a, uint64_t k) {
    int w = static_cast<int>(a.size());
    if (w < 64 && k >= (uint64_t{1} << w)) return constant(1);
    if (k == 0) return constant(0);
    // MSB-first comparator chain: a < k iff at some position a has 0 where k
    // has 1 and all more significant bits agree.
    std::vector<Ref> wins;
    std::vector<Ref> prefix;  // equalities on more significant bits
    for (int i = 0; i < w; ++i) {
        int kbit = (k >> (w - 1 - i)) & 1;
        if (kbit) {
            std::vector<Ref> term = prefix;
            term.push_back(lnot(a[i]));
            wins.push_back(land(std::move(term)));
            prefix.push_back(a[i]);
        } else {
            prefix.push_back(lnot(a[i]));
        }
    }
    return lor(std::move(wins));
}

Ref CircuitBuilder::successor(std::span<const Ref> prev, std::span<const Ref> next) {
    if (prev.size() != next.size()) throw std::invalid_argument("successor: width mismatch");
    int w = static_cast<int>(prev.size());
    std::vector<Ref> conds;
    Ref carry = constant(1);
    for (int i = w - 1; i >= 0; --i) {  // LSB to MSB
        conds.push_back(iff(next[i], lxor(prev[i], carry)));
        if (i > 0) carry = land({prev[i], carry});
    }
    return land(std::move(conds));
}

Ref CircuitBuilder::embed(const Circuit& sub,
                          const std::map<std::string, std::vector<Ref>>& inputs) {
    std::vector<std::vector<Ref>> bound(sub.groups.size());
    for (size_t gi = 0; gi < sub.groups.size(); ++gi) {
        auto it = inputs.find(sub.groups[gi].first);
        if (it == inputs.end())
            throw std::invalid_argument("embed: group not bound: " + sub.groups[gi].first);
        if (static_cast<int>(it->second.size()) != sub.groups[gi].second)
            throw std::invalid_argument("embed: width mismatch on group " +
                                        sub.groups[gi].first);
        bound[gi] = it->second;
    }
    std::vector<Ref> gate_map(sub.gates.size());
    auto remap = [&](const Ref& r) {
        return r.is_input() ? bound[r.group][r.bit] : gate_map[r.gate];
    };
    for (size_t i = 0; i < sub.gates.size(); ++i) {
        const Gate& g = sub.gates[i];
        std::vector<Ref> ops;
        for (auto& r : g.operands) ops.push_back(remap(r));
        gate_map[i] = push(g.kind, std::move(ops), g.const_value);
    }
    return remap(sub.output);
}

Circuit CircuitBuilder::finish(Ref out) {
    c_.output = out;
    return std::move(c_);
}

Circuit build_equality(int n) {
    if (n < 1) throw std::invalid_argument("build_equality: width must be >= 1");
    CircuitBuilder b("eq" + std::to_string(n));
    auto x = b.add_group("x", n);
    auto y = b.add_group("y", n);
    return b.finish(b.eq(x, y));
}

Circuit build_successor(int n) {
    if (n < 1) throw std::invalid_argument("build_successor: width must be >= 1");
    CircuitBuilder b("succ" + std::to_string(n));
    auto p = b.add_group("prev", n);
    auto q = b.add_group("next", n);
    return b.finish(b.successor(p, q));
}

Circuit build_threshold_lt(int n, uint64_t k) {
    if (n < 1) throw std::invalid_argument("build_threshold_lt: width must be >= 1");
    if (n < 64 && k > (uint64_t{1} << n))
        throw std::invalid_argument("build_threshold_lt: k out of range");
    CircuitBuilder b("lt" + std::to_string(n));
    auto x = b.add_group("x", n);
    return b.finish(b.less_const(x, k));
}

Circuit substitute(const Circuit& c, const std::map<std::string, Binding>& bindings) {
    for (auto& [g, _] : bindings)
        if (c.group_index(g) < 0) throw std::invalid_argument("substitute: unknown group " + g);

    CircuitBuilder b(c.name);
    // Pass-through groups keep their order; renames apply in place.
    std::vector<std::vector<Ref>> group_refs(c.groups.size());
    std::map<std::string, std::vector<Ref>> named;  // groups of the result
    for (size_t gi = 0; gi < c.groups.size(); ++gi) {
        auto& [name, width] = c.groups[gi];
        auto it = bindings.find(name);
        if (it == bindings.end()) {
            group_refs[gi] = b.add_group(name, width);
            named[name] = group_refs[gi];
        } else if (auto* rn = std::get_if<BindRename>(&it->second)) {
            group_refs[gi] = b.add_group(rn->new_name, width);
            named[rn->new_name] = group_refs[gi];
        }
    }
    for (size_t gi = 0; gi < c.groups.size(); ++gi) {
        auto& [name, width] = c.groups[gi];
        auto it = bindings.find(name);
        if (it == bindings.end()) continue;
        if (auto* cv = std::get_if<BindConst>(&it->second)) {
            if (static_cast<int>(cv->bits.size()) != width)
                throw std::invalid_argument("substitute: constant width mismatch on " + name);
            for (uint8_t bit : cv->bits) group_refs[gi].push_back(b.constant(bit));
        } else if (auto* sp = std::get_if<BindSplice>(&it->second)) {
            if (width != 1)
                throw std::invalid_argument("substitute: splice target must have width 1");
            std::map<std::string, std::vector<Ref>> sub_inputs;
            for (auto& [iname, iwidth] : sp->inner.groups) {
                auto rit = sp->rename.find(iname);
                std::string outer = rit == sp->rename.end() ? iname : rit->second;
                auto nit = named.find(outer);
                if (nit == named.end()) {
                    named[outer] = b.add_group(outer, iwidth);
                    nit = named.find(outer);
                }
                if (static_cast<int>(nit->second.size()) != iwidth)
                    throw std::invalid_argument("substitute: splice width mismatch on " + outer);
                sub_inputs[iname] = nit->second;
            }
            group_refs[gi] = {b.embed(sp->inner, sub_inputs)};
        }
    }
    std::vector<Ref> gate_map(c.gates.size());
    auto remap = [&](const Ref& r) {
        return r.is_input() ? group_refs[r.group][r.bit] : gate_map[r.gate];
    };
    for (size_t i = 0; i < c.gates.size(); ++i) {
        const Gate& g = c.gates[i];
        std::vector<Ref> ops;
        for (auto& r : g.operands) ops.push_back(remap(r));
        switch (g.kind) {
            case GateKind::And: gate_map[i] = b.land(std::move(ops)); break;
            case GateKind::Or: gate_map[i] = b.lor(std::move(ops)); break;
            case GateKind::Not: gate_map[i] = b.lnot(ops[0]); break;
            case GateKind::Xor: gate_map[i] = b.lxor(ops[0], ops[1]); break;
            case GateKind::Const: gate_map[i] = b.constant(g.const_value); break;
        }
    }
    return b.finish(remap(c.output));
}

namespace {

std::vector<std::string> tokenize(const std::string& line) {
    std::vector<std::string> toks;
    std::istringstream is(line);
    std::string t;
    while (is >> t) {
        if (t[0] == '#') break;
        toks.push_back(t);
    }
    return toks;
}

}  // namespace

Circuit parse_circuit(const std::string& text) {
    Circuit c;
    std::map<std::string, int> gate_ids;
    bool saw_name = false, saw_output = false;
    int lineno = 0;

    auto parse_ref = [&](const std::string& tok) -> Ref {
        auto lb = tok.find('[');
        if (lb != std::string::npos) {
            if (tok.back() != ']') throw ParseError("malformed reference: " + tok, lineno);
            std::string group = tok.substr(0, lb);
            int idx;
            try {
                idx = std::stoi(tok.substr(lb + 1, tok.size() - lb - 2));
            } catch (...) {
                throw ParseError("malformed reference: " + tok, lineno);
            }
            int gi = c.group_index(group);
            if (gi < 0) throw ParseError("unknown input group: " + group, lineno);
            if (idx < 0 || idx >= c.groups[gi].second)
                throw ParseError("input index out of range: " + tok, lineno);
            return Ref::input(gi, idx);
        }
        auto it = gate_ids.find(tok);
        if (it == gate_ids.end())
            throw ParseError("dangling or cyclic reference: " + tok, lineno);
        return Ref::of_gate(it->second);
    };

    std::istringstream is(text);
    std::string line;
    while (std::getline(is, line)) {
        ++lineno;
        auto toks = tokenize(line);
        if (toks.empty()) continue;
        if (saw_output) throw ParseError("content after output line", lineno);
        if (toks[0] == "circuit") {
            if (saw_name || toks.size() != 2) throw ParseError("malformed circuit line", lineno);
            c.name = toks[1];
            saw_name = true;
        } else if (toks[0] == "inputs") {
            if (toks.size() != 3) throw ParseError("malformed inputs line", lineno);
            if (!c.gates.empty()) throw ParseError("inputs must precede gates", lineno);
            if (c.group_index(toks[1]) >= 0)
                throw ParseError("duplicate group: " + toks[1], lineno);
            int w;
            try {
                w = std::stoi(toks[2]);
            } catch (...) {
                throw ParseError("malformed group width", lineno);
            }
            if (w < 0) throw ParseError("negative group width", lineno);
            c.groups.emplace_back(toks[1], w);
        } else if (toks[0] == "gate") {
            if (toks.size() < 4 || toks[2] != "=")
                throw ParseError("malformed gate line", lineno);
            const std::string& id = toks[1];
            if (gate_ids.count(id)) throw ParseError("duplicate gate id: " + id, lineno);
            Gate g;
            g.id = id;
            const std::string& kind = toks[3];
            size_t nops = toks.size() - 4;
            if (kind == "AND" || kind == "OR") {
                g.kind = kind == "AND" ? GateKind::And : GateKind::Or;
                if (nops < 1) throw ParseError(kind + " needs at least one operand", lineno);
            } else if (kind == "NOT") {
                g.kind = GateKind::Not;
                if (nops != 1) throw ParseError("NOT takes exactly one operand", lineno);
            } else if (kind == "XOR") {
                g.kind = GateKind::Xor;
                if (nops != 2) throw ParseError("XOR takes exactly two operands", lineno);
            } else if (kind == "CONST") {
                g.kind = GateKind::Const;
                if (nops != 1 || (toks[4] != "0" && toks[4] != "1"))
                    throw ParseError("CONST takes 0 or 1", lineno);
                g.const_value = toks[4] == "1";
            } else {
                throw ParseError("unknown gate kind: " + kind, lineno);
            }
            if (g.kind != GateKind::Const)
                for (size_t i = 4; i < toks.size(); ++i) g.operands.push_back(parse_ref(toks[i]));
            gate_ids[id] = static_cast<int>(c.gates.size());
            c.gates.push_back(std::move(g));
        } else if (toks[0] == "output") {
            if (toks.size() != 2) throw ParseError("malformed output line", lineno);
            c.output = parse_ref(toks[1]);
            saw_output = true;
        } else {
            throw ParseError("unrecognized line: " + toks[0], lineno);
        }
    }
    if (!saw_name) throw ParseError("missing circuit line");
    if (!saw_output) throw ParseError("missing output line");
    return c;
}

std::string emit_circuit(const Circuit& c) {
    std::ostringstream os;
    os << "circuit " << c.name << "\n";
    for (auto& [name, w] : c.groups) os << "inputs " << name << " " << w << "\n";
    auto show = [&](const Ref& r) -> std::string {
        if (r.is_input())
            return c.groups[r.group].first + "[" + std::to_string(r.bit) + "]";
        return c.gates[r.gate].id;
    };
    for (auto& g : c.gates) {
        os << "gate " << g.id << " = ";
        switch (g.kind) {
            case GateKind::And: os << "AND"; break;
            case GateKind::Or: os << "OR"; break;
            case GateKind::Not: os << "NOT"; break;
            case GateKind::Xor: os << "XOR"; break;
            case GateKind::Const: os << "CONST " << g.const_value; break;
        }
        for (auto& r : g.operands) os << " " << show(r);
        os << "\n";
    }
    os << "output " << show(c.output) << "\n";
    return os.str();
}

}  // namespace n2d
