#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "qcsa/gate.hpp"
#include "qcsa/rational.hpp"

namespace qcsa {

enum class RoleKind : std::uint8_t {
    Operand,   // named register bit; may be preserved or consumed by an output
    Ancilla,   // must enter 0 and exit 0
    Const0,    // constant wire, value 0 throughout
    Const1,    // constant wire, prepared to 1 by a NOT at circuit start
    Result,    // named output register bit, enters 0
    CarryOut,  // boundary carry, enters 0; optionally a named register bit
};

/// One role per wire. Operand wires carry their register name and bit.
/// A consumed operand wire ends up holding an output bit instead of its
/// input value; `into_reg`/`into_bit` say which one (e.g. the C wire of a
/// QFA slice ends as S of the same slice).
struct WireRole {
    RoleKind kind = RoleKind::Ancilla;
    std::string reg;
    std::uint32_t bit = 0;
    bool keep = true;            // operand only
    std::string into_reg;        // operand with keep == false
    std::uint32_t into_bit = 0;

    static WireRole operand(std::string reg, std::uint32_t bit) {
        return {RoleKind::Operand, std::move(reg), bit, true, "", 0};
    }
    static WireRole operand_into(std::string reg, std::uint32_t bit,
                                 std::string out_reg, std::uint32_t out_bit) {
        return {RoleKind::Operand, std::move(reg), bit, false, std::move(out_reg), out_bit};
    }
    static WireRole ancilla() { return {}; }
    static WireRole constant(bool value) {
        return {value ? RoleKind::Const1 : RoleKind::Const0, "", 0, true, "", 0};
    }
    static WireRole result(std::string reg, std::uint32_t bit) {
        return {RoleKind::Result, std::move(reg), bit, true, "", 0};
    }
    static WireRole carry_out() { return {RoleKind::CarryOut, "", 0, true, "", 0}; }
    static WireRole carry_out_in(std::string reg, std::uint32_t bit) {
        return {RoleKind::CarryOut, std::move(reg), bit, true, "", 0};
    }
};

struct Register {
    std::string name;
    std::vector<std::uint32_t> wires;  // wires[i] holds bit i (LSB first)
};

struct GateCounts {
    std::size_t nots = 0;
    std::size_t cnots = 0;
    std::size_t toffolis = 0;
    [[nodiscard]] std::size_t total() const { return nots + cnots + toffolis; }
    friend bool operator==(const GateCounts&, const GateCounts&) = default;
};

/// Per-kind depth weights. Unit weights give textbook circuit depth;
/// qfa_weights() gives depth in QFA delays (one QFA block = two Toffoli
/// delays = 1).
struct DepthWeights {
    Rational not_w{1};
    Rational cnot_w{1};
    Rational toffoli_w{1};

    static DepthWeights unit() { return {}; }
    static DepthWeights qfa() { return {Rational{0}, Rational{0}, Rational{1, 2}}; }

    [[nodiscard]] const Rational& of(GateKind k) const {
        switch (k) {
            case GateKind::X: return not_w;
            case GateKind::CX: return cnot_w;
            case GateKind::CCX: return toffoli_w;
        }
        return not_w;  // unreachable
    }
};

/// Ordered gate list over a fixed set of wires, plus the register/role
/// bookkeeping every builder emits into. Wires can be added while a
/// builder is assembling; circuits are treated as immutable afterwards.
class Circuit {
public:
    Circuit() = default;
    explicit Circuit(std::uint32_t width) : roles_(width) {}

    [[nodiscard]] std::uint32_t width() const {
        return static_cast<std::uint32_t>(roles_.size());
    }
    [[nodiscard]] const std::vector<Gate>& gates() const { return gates_; }
    [[nodiscard]] const std::vector<WireRole>& roles() const { return roles_; }
    [[nodiscard]] const std::vector<Register>& registers() const { return registers_; }
    [[nodiscard]] const std::vector<std::string>& comments() const { return comments_; }

    std::uint32_t add_wire(WireRole role = WireRole::ancilla()) {
        roles_.push_back(std::move(role));
        return width() - 1;
    }

    void set_role(std::uint32_t wire, WireRole role) {
        roles_.at(wire) = std::move(role);
    }

    /// Registers name disjoint wire groups; arithmetic meaning (weight
    /// offsets, which registers to compare) lives in the layout, not here.
    void add_register(std::string name, std::vector<std::uint32_t> wires) {
        for (const auto& r : registers_)
            if (r.name == name) throw std::invalid_argument("register redefined: " + name);
        for (std::uint32_t w : wires)
            if (w >= width()) throw std::out_of_range("register wire out of range");
        registers_.push_back({std::move(name), std::move(wires)});
    }

    [[nodiscard]] const Register* find_register(const std::string& name) const {
        for (const auto& r : registers_)
            if (r.name == name) return &r;
        return nullptr;
    }

    void add_comment(std::string text) { comments_.push_back(std::move(text)); }

    void append(const Gate& g) {
        if (g.max_wire() >= width()) throw std::out_of_range("gate wire out of range");
        gates_.push_back(g);
    }
    void x(std::uint32_t t) { append(Gate::x(t)); }
    void cx(std::uint32_t c, std::uint32_t t) { append(Gate::cx(c, t)); }
    void ccx(std::uint32_t a, std::uint32_t b, std::uint32_t t) { append(Gate::ccx(a, b, t)); }

    /// Appends the reversal of gates [first, last); this is the
    /// mirrored-block idiom used by the uncompute stages.
    void append_inverse_of_range(std::size_t first, std::size_t last) {
        if (first > last || last > gates_.size())
            throw std::out_of_range("inverse range out of bounds");
        gates_.reserve(gates_.size() + (last - first));
        for (std::size_t i = last; i > first; --i) gates_.push_back(gates_[i - 1]);
    }

    void append_inverse_of_tail(std::size_t first) {
        append_inverse_of_range(first, gates_.size());
    }

    [[nodiscard]] Circuit inverse() const {
        Circuit inv = *this;
        std::reverse(inv.gates_.begin(), inv.gates_.end());
        return inv;
    }

    [[nodiscard]] GateCounts gate_counts() const {
        GateCounts c;
        for (const auto& g : gates_) {
            switch (g.kind) {
                case GateKind::X: ++c.nots; break;
                case GateKind::CX: ++c.cnots; break;
                case GateKind::CCX: ++c.toffolis; break;
            }
        }
        return c;
    }

    /// Critical path of the dependency graph where two gates conflict iff
    /// they share a wire. No algebraic commutation: a control-control
    /// overlap still sequences the pair.
    [[nodiscard]] Rational weighted_depth(const DepthWeights& weights) const {
        std::vector<Rational> frontier(width(), Rational{0});
        Rational best{0};
        for (const auto& g : gates_) {
            Rational start = frontier[g.target];
            if (g.kind != GateKind::X && frontier[g.c0] > start) start = frontier[g.c0];
            if (g.kind == GateKind::CCX && frontier[g.c1] > start) start = frontier[g.c1];
            const Rational end = start + weights.of(g.kind);
            frontier[g.target] = end;
            if (g.kind != GateKind::X) frontier[g.c0] = end;
            if (g.kind == GateKind::CCX) frontier[g.c1] = end;
            if (end > best) best = end;
        }
        return best;
    }

    [[nodiscard]] Rational unit_depth() const { return weighted_depth(DepthWeights::unit()); }
    [[nodiscard]] Rational qfa_depth() const { return weighted_depth(DepthWeights::qfa()); }

private:
    std::vector<Gate> gates_;
    std::vector<WireRole> roles_;
    std::vector<Register> registers_;
    std::vector<std::string> comments_;
};

/// One building block of a composition: a sub-circuit and where its wires
/// land in the outer circuit (map[i] = outer wire of inner wire i).
struct Placement {
    const Circuit* circuit = nullptr;
    std::vector<std::uint32_t> map;
};

/// Concatenates placed circuits in order. Only gates are taken from the
/// placed circuits; roles and registers of the result are the caller's
/// business (blocks disagree about roles of shared wires).
inline Circuit compose(std::uint32_t outer_width, std::span<const Placement> placements) {
    Circuit out(outer_width);
    for (const auto& p : placements) {
        if (p.circuit == nullptr) throw std::invalid_argument("compose: null circuit");
        if (p.map.size() != p.circuit->width())
            throw std::invalid_argument("compose: wire map size mismatch");
        std::vector<bool> seen(outer_width, false);
        for (std::uint32_t w : p.map) {
            if (w >= outer_width) throw std::out_of_range("compose: map image out of range");
            if (seen[w]) throw std::invalid_argument("compose: wire map not injective");
            seen[w] = true;
        }
        for (const auto& g : p.circuit->gates()) {
            switch (g.kind) {
                case GateKind::X: out.x(p.map[g.target]); break;
                case GateKind::CX: out.cx(p.map[g.c0], p.map[g.target]); break;
                case GateKind::CCX: out.ccx(p.map[g.c0], p.map[g.c1], p.map[g.target]); break;
            }
        }
    }
    return out;
}

}  // namespace qcsa
