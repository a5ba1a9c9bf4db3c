#pragma once

#include <cstdint>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "qcsa/cells.hpp"
#include "qcsa/circuit.hpp"
#include "qcsa/layout.hpp"

namespace qcsa {

namespace detail {

/// A partial sum in carry-save form: the running sum row and its carry row.
struct RowPair {
    Row s;
    Row k;
};

struct TreeResult {
    Row s;
    Row k;
    std::vector<std::uint32_t> pool_wires;      // within the per-block cap
    std::vector<std::uint32_t> boundary_wires;  // carries past the cap
    std::size_t forward_begin = 0;
    std::size_t top_begin = 0;
};

/// One 4:2 node of the tree: adds the left pair into the right pair.
///
/// First layer folds left.s and left.k onto right.s in place (full-adder
/// cells where all three have the weight, thinner cells toward the edges);
/// its carries land on a fresh rail which the second layer then uses as the
/// in-place sum row while folding in right.k. Each layer draws at most
/// `cap` fresh wires from its pool; anything past that is a boundary carry.
///
/// The top node additionally gets a restore layer that un-xors right.s, so
/// the global mirror (inverse of everything below the top) can return every
/// other wire to its input state while the top's sum and carry rows survive.
inline RowPair tree_node(Circuit& c, const RowPair& left, const RowPair& right,
                         std::uint32_t cap, bool is_top, TreeResult& acc) {
    auto make_sink = [&](std::uint32_t& used) {
        return [&c, &acc, &used, cap](std::uint32_t) {
            const std::uint32_t wire = c.add_wire(WireRole::ancilla());
            if (used < cap) {
                ++used;
                acc.pool_wires.push_back(wire);
            } else {
                acc.boundary_wires.push_back(wire);
            }
            return wire;
        };
    };

    std::uint32_t used_a = 0;
    auto sink_a = make_sink(used_a);
    Row folded = right.s;
    const cells::AbsorbResult layer1 =
        cells::absorb(c, folded, &left.s, &left.k, sink_a, sink_a, cells::LonePolicy::Reference);

    std::uint32_t used_b = 0;
    auto sink_b = make_sink(used_b);
    RowPair out;
    out.s = layer1.carries;
    const cells::AbsorbResult layer2 =
        cells::absorb(c, out.s, &folded, &right.k, sink_b, sink_b, cells::LonePolicy::Copy);
    out.k = layer2.carries;

    if (is_top) cells::emit_undo(c, layer1);
    return out;
}

/// Reduces leaf pairs to a single carry-save pair, then mirrors everything
/// below the final node. The survivors are the returned s/k rows (and the
/// top node's restore layer has already cleaned up its own sum inputs).
inline TreeResult tree_reduce(Circuit& c, std::vector<RowPair> pairs, std::uint32_t cap) {
    if (pairs.empty()) throw std::invalid_argument("tree reduce needs at least one pair");
    TreeResult res;
    res.forward_begin = c.gates().size();
    res.top_begin = res.forward_begin;
    while (pairs.size() > 1) {
        std::vector<RowPair> next;
        for (std::size_t j = 0; j + 1 < pairs.size(); j += 2) {
            const bool is_top = pairs.size() == 2;
            if (is_top) res.top_begin = c.gates().size();
            next.push_back(tree_node(c, pairs[j], pairs[j + 1], cap, is_top, res));
        }
        if (pairs.size() % 2 != 0) next.push_back(pairs.back());
        pairs = std::move(next);
        if (pairs.size() == 1) break;
    }
    c.append_inverse_of_range(res.forward_begin, res.top_begin);
    res.s = pairs.front().s;
    res.k = pairs.front().k;
    return res;
}

/// Sorts a row's bits by weight and assigns output register roles: result
/// bits for pool wires, carry-out bits for boundary spills.
inline void assign_output_roles(Circuit& c, const Row& row, const std::string& reg_name,
                                const std::set<std::uint32_t>& boundary) {
    std::vector<std::uint32_t> wires;
    std::uint32_t bit = 0;
    for (const auto& [w, wire] : row.bits) {
        if (boundary.count(wire) != 0)
            c.set_role(wire, WireRole::carry_out_in(reg_name, bit));
        else
            c.set_role(wire, WireRole::result(reg_name, bit));
        wires.push_back(wire);
        ++bit;
    }
    c.add_register(reg_name, wires);
}

}  // namespace detail

/// Adder tree over N binary inputs of L bits each. Inputs pair up into
/// carry-save partial sums, 4:2 nodes halve the pair count per level, and
/// the mirror below the top node restores every input and internal rail.
/// For power-of-two N the node pools use exactly (2N-2)L wires including
/// the inputs; carries past each node's slice range go to boundary wires.
inline Built build_tree_adder(std::uint32_t n_inputs, std::uint32_t bits) {
    if (n_inputs < 3) throw std::invalid_argument("tree adder needs at least 3 inputs");
    if (bits < 1) throw std::invalid_argument("tree adder needs at least 1 bit per input");
    Built b;
    Circuit& c = b.circuit;

    std::vector<Row> rows(n_inputs);
    for (std::uint32_t i = 0; i < n_inputs; ++i) {
        const std::string name = "I" + std::to_string(i);
        std::vector<std::uint32_t> wires(bits);
        for (std::uint32_t j = 0; j < bits; ++j) {
            wires[j] = c.add_wire(WireRole::operand(name, j));
            rows[i].put(j, wires[j]);
        }
        c.add_register(name, wires);
        b.layout.inputs.push_back(ValueReg{name, wires, 0, true});
    }

    std::vector<detail::RowPair> pairs;
    for (std::uint32_t i = 0; i + 1 < n_inputs; i += 2)
        pairs.push_back({rows[i], rows[i + 1]});
    if (n_inputs % 2 != 0) pairs.push_back({rows[n_inputs - 1], Row{}});

    detail::TreeResult tr = detail::tree_reduce(c, std::move(pairs), bits);

    const std::set<std::uint32_t> boundary(tr.boundary_wires.begin(), tr.boundary_wires.end());
    detail::assign_output_roles(c, tr.s, "S", boundary);
    detail::assign_output_roles(c, tr.k, "K", boundary);

    std::set<std::uint32_t> survivors;
    for (const auto& [w, wire] : tr.s.bits) survivors.insert(wire);
    for (const auto& [w, wire] : tr.k.bits) survivors.insert(wire);

    OutputGroup s{"S"};
    s.add(tr.s);
    OutputGroup k{"K"};
    k.add(tr.k);
    OutputGroup sk{"SK"};
    sk.add(tr.s);
    sk.add(tr.k);
    b.layout.outputs = {s, k, sk};

    for (std::uint32_t w = n_inputs * bits; w < c.width(); ++w)
        if (survivors.count(w) == 0) b.layout.ancillas.push_back(w);
    for (std::uint32_t i = 0; i < n_inputs * bits; ++i) b.layout.core_wires.push_back(i);
    for (std::uint32_t w : tr.pool_wires) b.layout.core_wires.push_back(w);
    b.layout.boundary_wires = tr.boundary_wires;
    return b;
}

}  // namespace qcsa
