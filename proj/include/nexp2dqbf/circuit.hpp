#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "nexp2dqbf/common.hpp"

namespace n2d {

// Single-output boolean circuit over named input groups.
//
// Bit order convention: within a group, index 0 is the most significant bit,
// so num(group) reads the bits left to right as a binary number.
// Gates are stored in topological order; a reference may only point to an
// input bit or to an earlier gate, which makes cycles unrepresentable.

struct Ref {
    // group >= 0: input bit (group, bit).  group == -1: gates[gate].
    int32_t group = -1;
    int32_t bit = -1;
    int32_t gate = -1;

    bool is_input() const { return group >= 0; }
    bool is_gate() const { return gate >= 0; }

    static Ref input(int32_t group, int32_t bit) { return Ref{group, bit, -1}; }
    static Ref of_gate(int32_t idx) { return Ref{-1, -1, idx}; }

    bool operator==(const Ref&) const = default;
};

enum class GateKind { And, Or, Not, Xor, Const };

struct Gate {
    std::string id;
    GateKind kind = GateKind::Const;
    std::vector<Ref> operands;
    int const_value = 0;  // only for Const
};

struct Circuit {
    std::string name;
    std::vector<std::pair<std::string, int>> groups;  // (name, width)
    std::vector<Gate> gates;
    Ref output;

    int group_index(const std::string& g) const;  // -1 if absent
    int group_width(const std::string& g) const;
    int total_input_bits() const;
    // Flat input index: groups in declaration order, bits MSB first.
    int flat_index(int group, int bit) const;
};

// Total assignment of every input bit of one circuit.
class Assignment {
public:
    explicit Assignment(const Circuit& c);

    void set(int group, int bit, int v);
    uint8_t get(int group, int bit) const;
    // Writes the low `width` bits of value into the group, MSB first.
    void set_group(int group, uint64_t value);
    uint64_t get_group(int group) const;

    const std::vector<std::vector<uint8_t>>& bits() const { return bits_; }

private:
    std::vector<std::vector<uint8_t>> bits_;
};

// Builds a total Assignment from (group, index) -> bit entries.
// Throws std::invalid_argument if any bit is missing, duplicated or unknown.
Assignment assignment_from_map(const Circuit& c,
                               const std::map<std::pair<std::string, int>, int>& m);

int eval(const Circuit& c, const Assignment& a);

// Reusable evaluator over a flat input vector (see Circuit::flat_index).
// Much cheaper than eval() in enumeration loops.
class Evaluator {
public:
    explicit Evaluator(const Circuit& c);
    int run(std::span<const uint8_t> inputs);
    int input_bits() const { return n_inputs_; }

private:
    const Circuit* c_;
    int n_inputs_;
    std::vector<uint8_t> vals_;
    // Operand refs pre-flattened: idx < n_inputs_ means input, else gate.
    std::vector<std::vector<int>> ops_;
    std::vector<int> out_;
};

// Incremental construction helper.  All gadget builders below use it.
class CircuitBuilder {
public:
    explicit CircuitBuilder(std::string name);

    std::vector<Ref> add_group(const std::string& name, int width);
    Ref input(const std::string& group, int bit) const;

    Ref constant(int v);
    Ref land(std::vector<Ref> xs);
    Ref lor(std::vector<Ref> xs);
    Ref lnot(Ref x);
    Ref lxor(Ref a, Ref b);
    Ref implies(Ref a, Ref b);
    Ref iff(Ref a, Ref b);

    Ref eq(std::span<const Ref> a, std::span<const Ref> b);
    Ref neq(std::span<const Ref> a, std::span<const Ref> b);
    Ref eq_const(std::span<const Ref> a, uint64_t value);
    Ref less_const(std::span<const Ref> a, uint64_t k);  // num(a) < k
    // num(next) = num(prev) + 1 (mod 2^w)
    Ref successor(std::span<const Ref> prev, std::span<const Ref> next);

    // Inlines `sub`, feeding its input groups from the given refs.
    // Every group of `sub` must be bound with refs of matching width.
    Ref embed(const Circuit& sub, const std::map<std::string, std::vector<Ref>>& inputs);

    Circuit finish(Ref out);

private:
    Circuit c_;
    int next_id_ = 0;
    Ref push(GateKind kind, std::vector<Ref> operands, int const_value = 0);
};

// Gadget builders from the toolkit's reduction vocabulary.
Circuit build_equality(int n);      // groups x, y; 1 iff x = y
Circuit build_successor(int n);     // groups prev, next; 1 iff num(next) = num(prev)+1 mod 2^n
Circuit build_threshold_lt(int n, uint64_t k);  // group x; 1 iff num(x) < k

// Binding for substitute(): rename a group, fix it to constant bits, or
// splice another circuit's output into a width-1 group (the spliced
// circuit's groups are renamed per the map and merged into the result).
struct BindRename { std::string new_name; };
struct BindConst { std::vector<uint8_t> bits; };
struct BindSplice {
    Circuit inner;
    std::map<std::string, std::string> rename;  // inner group -> outer group
};
using Binding = std::variant<BindRename, BindConst, BindSplice>;

Circuit substitute(const Circuit& c, const std::map<std::string, Binding>& bindings);

// Text format (see README): parse/emit are inverse up to whitespace.
Circuit parse_circuit(const std::string& text);
std::string emit_circuit(const Circuit& c);

}  // namespace n2d
