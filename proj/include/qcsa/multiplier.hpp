#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "qcsa/circuit.hpp"
#include "qcsa/layout.hpp"
#include "qcsa/tree.hpp"

namespace qcsa {

/// One AND term of the partial-product expansion: bit i of one x vector
/// times bit j of one y vector, landing at `weight` (offsets of the carry
/// vectors included).
struct PpTerm {
    bool x_carry = false;  // term reads XK instead of XS
    bool y_carry = false;
    std::uint32_t i = 0;
    std::uint32_t j = 0;
    std::uint32_t weight = 0;
};

/// A weight-disjoint group of terms that can share one summand row.
struct PpRow {
    std::vector<PpTerm> terms;
};

/// Expands (XS + 2 XK) * (YS + 2 YK) over n-bit vectors into 4n rows of n
/// terms: for each y bit, one row per operand-vector combination, terms
/// staggered by the x index. n = 1 gives the 4 single-term rows; n = 2
/// gives 16 terms in 8 rows.
inline std::vector<PpRow> plan_partial_products(std::uint32_t n) {
    if (n == 0) throw std::invalid_argument("partial products need n >= 1");
    std::vector<PpRow> rows;
    for (int xc = 0; xc < 2; ++xc) {
        for (int yc = 0; yc < 2; ++yc) {
            for (std::uint32_t j = 0; j < n; ++j) {
                PpRow row;
                for (std::uint32_t i = 0; i < n; ++i) {
                    PpTerm t;
                    t.x_carry = xc != 0;
                    t.y_carry = yc != 0;
                    t.i = i;
                    t.j = j;
                    t.weight = i + j + (xc != 0 ? 1 : 0) + (yc != 0 ? 1 : 0);
                    row.terms.push_back(t);
                }
                rows.push_back(std::move(row));
            }
        }
    }
    return rows;
}

/// Carry-save multiplier: Toffoli layer materializes the partial-product
/// rows, the adder tree compresses them to the product pair (PS, PK), and
/// the mirrored tree plus the inverse Toffoli layer return everything else
/// to its input state. Operand vectors are carry-save pairs; plain binary
/// operands are the encodings with the carry vectors at zero.
inline Built build_cs_multiplier(std::uint32_t n) {
    if (n == 0) throw std::invalid_argument("multiplier needs n >= 1");
    Built b;
    Circuit& c = b.circuit;

    auto add_operand = [&](const std::string& name, std::uint32_t offset) {
        std::vector<std::uint32_t> wires(n);
        for (std::uint32_t i = 0; i < n; ++i) wires[i] = c.add_wire(WireRole::operand(name, i));
        c.add_register(name, wires);
        b.layout.inputs.push_back(ValueReg{name, wires, offset, true});
        return wires;
    };
    const auto xs = add_operand("XS", 0);
    const auto xk = add_operand("XK", 1);
    const auto ys = add_operand("YS", 0);
    const auto yk = add_operand("YK", 1);

    const std::vector<PpRow> plan = plan_partial_products(n);
    std::vector<Row> rows(plan.size());
    const std::size_t create_begin = c.gates().size();
    for (std::size_t r = 0; r < plan.size(); ++r) {
        for (const PpTerm& t : plan[r].terms) {
            const std::uint32_t target = c.add_wire(WireRole::ancilla());
            rows[r].put(t.weight, target);
            c.ccx(t.x_carry ? xk[t.i] : xs[t.i], t.y_carry ? yk[t.j] : ys[t.j], target);
        }
    }
    const std::size_t create_end = c.gates().size();

    std::vector<detail::RowPair> pairs;
    for (std::size_t r = 0; r + 1 < rows.size(); r += 2) pairs.push_back({rows[r], rows[r + 1]});
    if (rows.size() % 2 != 0) pairs.push_back({rows.back(), Row{}});
    detail::TreeResult tr = detail::tree_reduce(c, std::move(pairs), n);

    c.append_inverse_of_range(create_begin, create_end);

    const std::set<std::uint32_t> boundary(tr.boundary_wires.begin(), tr.boundary_wires.end());
    detail::assign_output_roles(c, tr.s, "PS", boundary);
    detail::assign_output_roles(c, tr.k, "PK", boundary);

    std::set<std::uint32_t> survivors;
    for (const auto& [w, wire] : tr.s.bits) survivors.insert(wire);
    for (const auto& [w, wire] : tr.k.bits) survivors.insert(wire);

    OutputGroup ps{"PS"};
    ps.add(tr.s);
    OutputGroup pk{"PK"};
    pk.add(tr.k);
    OutputGroup p{"P"};
    p.add(tr.s);
    p.add(tr.k);
    b.layout.outputs = {ps, pk, p};

    for (std::uint32_t w = 4 * n; w < c.width(); ++w)
        if (survivors.count(w) == 0) b.layout.ancillas.push_back(w);
    for (std::uint32_t i = 0; i < 4 * n; ++i) b.layout.core_wires.push_back(i);
    for (std::size_t r = 0; r < rows.size(); ++r)
        for (const auto& [w, wire] : rows[r].bits) b.layout.core_wires.push_back(wire);
    for (std::uint32_t w : tr.pool_wires) b.layout.core_wires.push_back(w);
    b.layout.boundary_wires = tr.boundary_wires;
    return b;
}

}  // namespace qcsa
