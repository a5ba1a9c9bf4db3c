#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

#include "qcsa/cells.hpp"
#include "qcsa/circuit.hpp"
#include "qcsa/layout.hpp"

namespace qcsa {

// Single-slice blocks. Wire order follows the schematic top-to-bottom:
// operands first, then the carry target.

/// Full adder slice: A, B pass through, C <- A^B^C (sum), D <- D ^ Maj(A,B,C).
inline Built build_qfa() {
    Built b;
    Circuit& c = b.circuit;
    const std::uint32_t A = c.add_wire(WireRole::operand("A", 0));
    const std::uint32_t B = c.add_wire(WireRole::operand("B", 0));
    const std::uint32_t C = c.add_wire(WireRole::operand_into("C", 0, "S", 0));
    const std::uint32_t D = c.add_wire(WireRole::operand_into("D", 0, "K", 0));
    c.add_register("A", {A});
    c.add_register("B", {B});
    c.add_register("C", {C});
    c.add_register("D", {D});
    c.ccx(B, C, D);
    c.cx(B, C);
    c.ccx(A, C, D);
    c.cx(A, C);

    b.layout.inputs = {ValueReg{"A", {A}, 0, true}, ValueReg{"B", {B}, 0, true},
                       ValueReg{"C", {C}, 0, false}, ValueReg{"D", {D}, 0, false}};
    OutputGroup s{"S"};
    s.add(0, C);
    OutputGroup k{"K"};
    k.add(0, D);
    b.layout.outputs = {s, k};
    return b;
}

/// Majority slice: A, B pass through, C is restored, D <- D ^ Maj(A,B,C).
/// Shares its first three gates with the full adder; only the final CNOT
/// differs (it undoes the sum instead of completing it).
inline Built build_qmg() {
    Built b;
    Circuit& c = b.circuit;
    const std::uint32_t A = c.add_wire(WireRole::operand("A", 0));
    const std::uint32_t B = c.add_wire(WireRole::operand("B", 0));
    const std::uint32_t C = c.add_wire(WireRole::operand("C", 0));
    const std::uint32_t D = c.add_wire(WireRole::operand_into("D", 0, "K", 0));
    c.add_register("A", {A});
    c.add_register("B", {B});
    c.add_register("C", {C});
    c.add_register("D", {D});
    c.ccx(B, C, D);
    c.cx(B, C);
    c.ccx(A, C, D);
    c.cx(B, C);

    b.layout.inputs = {ValueReg{"A", {A}, 0, true}, ValueReg{"B", {B}, 0, true},
                       ValueReg{"C", {C}, 0, true}, ValueReg{"D", {D}, 0, false}};
    OutputGroup k{"K"};
    k.add(0, D);
    b.layout.outputs = {k};
    return b;
}

/// Half adder slice: A passes through, B <- A^B, C <- C ^ (A & B).
inline Built build_qha() {
    Built b;
    Circuit& c = b.circuit;
    const std::uint32_t A = c.add_wire(WireRole::operand("A", 0));
    const std::uint32_t B = c.add_wire(WireRole::operand_into("B", 0, "S", 0));
    const std::uint32_t C = c.add_wire(WireRole::operand_into("C", 0, "K", 0));
    c.add_register("A", {A});
    c.add_register("B", {B});
    c.add_register("C", {C});
    c.ccx(A, B, C);
    c.cx(A, B);

    b.layout.inputs = {ValueReg{"A", {A}, 0, true}, ValueReg{"B", {B}, 0, false},
                       ValueReg{"C", {C}, 0, false}};
    OutputGroup s{"S"};
    s.add(0, B);
    OutputGroup k{"K"};
    k.add(0, C);
    b.layout.outputs = {s, k};
    return b;
}

/// Sum slice: two CNOTs folding both operands onto the target.
inline Built build_sum() {
    Built b;
    Circuit& c = b.circuit;
    const std::uint32_t A = c.add_wire(WireRole::operand("A", 0));
    const std::uint32_t B = c.add_wire(WireRole::operand("B", 0));
    const std::uint32_t T = c.add_wire(WireRole::operand_into("T", 0, "S", 0));
    c.add_register("A", {A});
    c.add_register("B", {B});
    c.add_register("T", {T});
    c.cx(A, T);
    c.cx(B, T);

    b.layout.inputs = {ValueReg{"A", {A}, 0, true}, ValueReg{"B", {B}, 0, true},
                       ValueReg{"T", {T}, 0, false}};
    OutputGroup s{"S"};
    s.add(0, T);
    b.layout.outputs = {s};
    return b;
}

namespace detail {

/// Majority slice gates with explicit wires (the ripple chain's building
/// block): computes carry into `out`, leaves a/b/cin unchanged.
inline void emit_qmg(Circuit& c, std::uint32_t cin, std::uint32_t a, std::uint32_t b,
                     std::uint32_t out) {
    c.ccx(a, b, out);
    c.cx(a, b);
    c.ccx(cin, b, out);
    c.cx(a, b);
}

inline void emit_sum(Circuit& c, std::uint32_t cin, std::uint32_t a, std::uint32_t b) {
    c.cx(cin, b);
    c.cx(a, b);
}

/// Ripple-carry core: B <- A + B (+ carry-out if `carry_out` is valid).
/// a[i], b[i] are the operand wires, carry[i] the per-slice ancillas
/// (carry[0] stays zero throughout and is only read).
inline void emit_ripple(Circuit& c, const std::vector<std::uint32_t>& a,
                        const std::vector<std::uint32_t>& b,
                        const std::vector<std::uint32_t>& carry, std::uint32_t carry_out,
                        bool with_carry_out) {
    const std::size_t n = a.size();
    for (std::size_t i = 0; i < n; ++i) {
        const bool last = (i + 1 == n);
        if (last && !with_carry_out) break;
        emit_qmg(c, carry[i], a[i], b[i], last ? carry_out : carry[i + 1]);
    }
    for (std::size_t i = n; i-- > 0;) {
        if (i + 1 < n) emit_qmg(c, carry[i], a[i], b[i], carry[i + 1]);
        emit_sum(c, carry[i], a[i], b[i]);
    }
}

}  // namespace detail

/// Ripple-carry adder over n-bit operands: majority chain forward, then the
/// mirrored majority/sum sweep backward. B ends holding the sum, A and the
/// carry ancillas are restored, the carry-out lands on the last wire.
/// Width is 3n+1: [c0 A0 B0 c1 A1 B1 ... CO].
inline Built build_ripple_adder(std::uint32_t n) {
    if (n == 0) throw std::invalid_argument("ripple adder needs n >= 1");
    Built b;
    Circuit& c = b.circuit;
    std::vector<std::uint32_t> aw(n), bw(n), cw(n);
    for (std::uint32_t i = 0; i < n; ++i) {
        cw[i] = c.add_wire(WireRole::ancilla());
        aw[i] = c.add_wire(WireRole::operand("A", i));
        bw[i] = c.add_wire(WireRole::operand_into("B", i, "S", i));
    }
    const std::uint32_t co = c.add_wire(WireRole::carry_out_in("CO", 0));
    c.add_register("A", aw);
    c.add_register("B", bw);

    detail::emit_ripple(c, aw, bw, cw, co, true);

    b.layout.inputs = {ValueReg{"A", aw, 0, true}, ValueReg{"B", bw, 0, false}};
    OutputGroup s{"S"};
    for (std::uint32_t i = 0; i < n; ++i) s.add(i, bw[i]);
    OutputGroup cog{"CO"};
    cog.add(0, co);
    OutputGroup total{"SUM"};
    for (std::uint32_t i = 0; i < n; ++i) total.add(i, bw[i]);
    total.add(n, co);
    b.layout.outputs = {s, cog, total};
    b.layout.ancillas = cw;
    return b;
}

/// 3:2 carry-save compressor: one full-adder slice per bit position, all
/// slices independent. C absorbs the bitwise sum, the carry row K comes out
/// one weight up. Width 4n.
inline Built build_csa_3to2(std::uint32_t n) {
    if (n == 0) throw std::invalid_argument("3:2 compressor needs n >= 1");
    Built b;
    Circuit& c = b.circuit;
    std::vector<std::uint32_t> aw(n), bw(n), sw(n), kw(n);
    for (std::uint32_t i = 0; i < n; ++i) {
        aw[i] = c.add_wire(WireRole::operand("A", i));
        bw[i] = c.add_wire(WireRole::operand("B", i));
        sw[i] = c.add_wire(WireRole::operand_into("C", i, "S", i));
        kw[i] = c.add_wire(WireRole::result("K", i));
    }
    c.add_register("A", aw);
    c.add_register("B", bw);
    c.add_register("C", sw);
    c.add_register("K", kw);
    for (std::uint32_t i = 0; i < n; ++i) {
        c.ccx(bw[i], sw[i], kw[i]);
        c.cx(bw[i], sw[i]);
        c.ccx(aw[i], sw[i], kw[i]);
        c.cx(aw[i], sw[i]);
    }

    b.layout.inputs = {ValueReg{"A", aw, 0, true}, ValueReg{"B", bw, 0, true},
                       ValueReg{"C", sw, 0, false}};
    OutputGroup s{"S"};
    OutputGroup k{"K"};
    OutputGroup sk{"SK"};
    for (std::uint32_t i = 0; i < n; ++i) {
        s.add(i, sw[i]);
        k.add(i + 1, kw[i]);
        sk.add(i, sw[i]);
        sk.add(i + 1, kw[i]);
    }
    b.layout.outputs = {s, k, sk};
    return b;
}

/// 4:2 carry-save compressor: two chained full-adder layers per slice. The
/// first layer folds A,B into C and parks its carries on an internal rail;
/// the second folds that rail and D into the sum row. The first layer is
/// then run in reverse so C and the rail come back clean. Width 6n plus one
/// boundary wire for the top sum bit.
inline Built build_csa_4to2(std::uint32_t n) {
    if (n == 0) throw std::invalid_argument("4:2 compressor needs n >= 1");
    Built b;
    Circuit& c = b.circuit;
    std::vector<std::uint32_t> aw(n), bw(n), cw(n), dw(n), rail(n), kw(n);
    for (std::uint32_t i = 0; i < n; ++i) {
        aw[i] = c.add_wire(WireRole::operand("A", i));
        bw[i] = c.add_wire(WireRole::operand("B", i));
        cw[i] = c.add_wire(WireRole::operand("C", i));
        dw[i] = c.add_wire(WireRole::operand_into("D", i, "S", i));
        rail[i] = c.add_wire(WireRole::ancilla());
        kw[i] = c.add_wire(WireRole::result("K", i));
    }
    const std::uint32_t s_top = c.add_wire(WireRole::carry_out_in("S", n));
    c.add_register("A", aw);
    c.add_register("B", bw);
    c.add_register("C", cw);
    c.add_register("D", dw);
    c.add_register("K", kw);

    const std::size_t layer1_begin = c.gates().size();
    for (std::uint32_t i = 0; i < n; ++i) {
        c.ccx(bw[i], cw[i], rail[i]);
        c.cx(bw[i], cw[i]);
        c.ccx(aw[i], cw[i], rail[i]);
        c.cx(aw[i], cw[i]);
    }
    const std::size_t layer1_end = c.gates().size();

    // slice 0 sees no incoming rail carry: half adder
    c.ccx(cw[0], dw[0], kw[0]);
    c.cx(cw[0], dw[0]);
    for (std::uint32_t i = 1; i < n; ++i) {
        c.ccx(rail[i - 1], dw[i], kw[i]);
        c.cx(rail[i - 1], dw[i]);
        c.ccx(cw[i], dw[i], kw[i]);
        c.cx(cw[i], dw[i]);
    }
    c.cx(rail[n - 1], s_top);

    c.append_inverse_of_range(layer1_begin, layer1_end);

    b.layout.inputs = {ValueReg{"A", aw, 0, true}, ValueReg{"B", bw, 0, true},
                       ValueReg{"C", cw, 0, true}, ValueReg{"D", dw, 0, false}};
    OutputGroup s{"S"};
    OutputGroup k{"K"};
    OutputGroup sk{"SK"};
    for (std::uint32_t i = 0; i < n; ++i) {
        s.add(i, dw[i]);
        k.add(i + 1, kw[i]);
        sk.add(i, dw[i]);
        sk.add(i + 1, kw[i]);
    }
    s.add(n, s_top);
    sk.add(n, s_top);
    b.layout.outputs = {s, k, sk};
    b.layout.ancillas = rail;
    for (std::uint32_t w = 0; w < 6 * n; ++w) b.layout.core_wires.push_back(w);
    b.layout.boundary_wires = {s_top};
    return b;
}

}  // namespace qcsa
