#pragma once

#include <cstdint>
#include <functional>
#include <set>
#include <vector>

#include "qcsa/circuit.hpp"
#include "qcsa/layout.hpp"

namespace qcsa::cells {

// The one compressor-layer primitive everything else is assembled from.
//
// absorb() adds up to two operand rows into a target row, slice by slice,
// emitting per-weight cells:
//   two operands onto an existing target bit  -> full adder (QFA gates)
//   one operand onto an existing target bit   -> half adder (QHA gates)
//   two operands, no target bit               -> sum onto a fresh wire plus
//                                                 an AND carry (SUM + Toffoli)
//   one operand, no target bit                -> pass the wire through by
//                                                 reference, or copy it onto
//                                                 a fresh wire (policy)
// Carries always go one weight up, onto wires handed out by the sink.

enum class LonePolicy {
    Reference,  // target row points at the operand wire; no gate
    Copy,       // CNOT onto a fresh wire from the sum sink
};

struct AbsorbResult {
    Row carries;
    // (control, target) pairs for every xor the layer wrote onto a target
    // wire it did not hand to the carry row: pre-existing target bits and
    // fresh two-operand spill wires. Replaying these as CNOTs restores the
    // former and clears the latter (the top-block restore layer).
    std::vector<std::pair<std::uint32_t, std::uint32_t>> undo;
};

using WireSink = std::function<std::uint32_t(std::uint32_t /*weight*/)>;

inline AbsorbResult absorb(Circuit& c, Row& target, const Row* op_a, const Row* op_b,
                           const WireSink& carry_sink, const WireSink& sum_sink,
                           LonePolicy lone) {
    AbsorbResult res;
    std::set<std::uint32_t> weights;
    for (const auto& [w, wire] : target.bits) weights.insert(w);
    if (op_a != nullptr)
        for (const auto& [w, wire] : op_a->bits) weights.insert(w);
    if (op_b != nullptr)
        for (const auto& [w, wire] : op_b->bits) weights.insert(w);

    for (std::uint32_t w : weights) {
        std::uint32_t ops[2];
        int n_ops = 0;
        if (op_a != nullptr && op_a->has(w)) ops[n_ops++] = op_a->wire(w);
        if (op_b != nullptr && op_b->has(w)) ops[n_ops++] = op_b->wire(w);

        if (target.has(w)) {
            const std::uint32_t t = target.wire(w);
            if (n_ops == 2) {
                const std::uint32_t carry = carry_sink(w + 1);
                c.ccx(ops[1], t, carry);
                c.cx(ops[1], t);
                c.ccx(ops[0], t, carry);
                c.cx(ops[0], t);
                res.carries.put(w + 1, carry);
                res.undo.emplace_back(ops[1], t);
                res.undo.emplace_back(ops[0], t);
            } else if (n_ops == 1) {
                const std::uint32_t carry = carry_sink(w + 1);
                c.ccx(ops[0], t, carry);
                c.cx(ops[0], t);
                res.carries.put(w + 1, carry);
                res.undo.emplace_back(ops[0], t);
            }
            // n_ops == 0: the target bit passes through untouched
        } else {
            if (n_ops == 2) {
                const std::uint32_t s = sum_sink(w);
                const std::uint32_t carry = carry_sink(w + 1);
                c.cx(ops[0], s);
                c.cx(ops[1], s);
                c.ccx(ops[0], ops[1], carry);
                target.put(w, s);
                res.carries.put(w + 1, carry);
                res.undo.emplace_back(ops[0], s);
                res.undo.emplace_back(ops[1], s);
            } else if (n_ops == 1) {
                if (lone == LonePolicy::Reference) {
                    target.put(w, ops[0]);
                } else {
                    const std::uint32_t s = sum_sink(w);
                    c.cx(ops[0], s);
                    target.put(w, s);
                }
            }
        }
    }
    return res;
}

/// Replays the recorded xors to return the target row's pre-existing wires
/// to their former values (the top-block restore layer of the tree).
inline void emit_undo(Circuit& c, const AbsorbResult& res) {
    for (auto it = res.undo.rbegin(); it != res.undo.rend(); ++it) c.cx(it->first, it->second);
}

}  // namespace qcsa::cells
