#pragma once

#include <cstdint>
#include <deque>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "qcsa/cells.hpp"
#include "qcsa/circuit.hpp"
#include "qcsa/layout.hpp"
#include "qcsa/reference.hpp"

namespace qcsa {

/// Classical fold constants for a fixed data width and modulus.
struct ModulusContext {
    std::uint32_t n = 0;  // slice width in bits
    std::uint64_t m = 0;  // modulus
    std::uint64_t p = 0;  // 2^(n-1) mod m
    std::uint64_t q = 0;  // 2^n mod m
};

inline ModulusContext make_modulus_context(std::uint32_t n, std::uint64_t m) {
    if (n < 2 || n > 30) throw std::invalid_argument("data width out of supported range");
    if (m < 3 || (n >= 2 && m > (std::uint64_t{1} << (n - 2))))
        throw std::invalid_argument("modulus must satisfy 3 <= M <= 2^(N-2)");
    ModulusContext ctx;
    ctx.n = n;
    ctx.m = m;
    ctx.p = (std::uint64_t{1} << (n - 1)) % m;
    ctx.q = (std::uint64_t{1} << n) % m;
    return ctx;
}

/// One step of the classical fold: the high part re-enters at weight 0
/// scaled by Q = 2^N mod M. Congruent to x mod M by construction.
inline wide_uint mod_fold_reference(wide_uint x, const ModulusContext& ctx) {
    const wide_uint mask = (wide_uint{1} << ctx.n) - 1;
    return (x & mask) + (x >> ctx.n) * ctx.q;
}

namespace detail {

inline unsigned long long row_span(const Row& r) {
    unsigned long long s = 0;
    for (const auto& [w, wire] : r.bits) s += 1ull << w;
    return s;
}

/// Allocates `width` constant wires named `name`, prepares the set bits of
/// `value` with NOT gates, and returns the row of set-bit wires (clear bits
/// take no part in the folds).
inline Row add_constant_register(Circuit& c, Layout& layout, const std::string& name,
                                 std::uint64_t value, std::uint32_t width) {
    Row row;
    std::vector<std::uint32_t> wires(width);
    for (std::uint32_t j = 0; j < width; ++j) {
        const bool bit = ((value >> j) & 1u) != 0;
        wires[j] = c.add_wire(WireRole::constant(bit));
        layout.constants.emplace_back(wires[j], bit);
        if (bit) {
            c.x(wires[j]);
            row.put(j, wires[j]);
        }
    }
    c.add_register(name, wires);
    return row;
}

inline void collect_ancillas(Built& b) {
    b.layout.ancillas.clear();
    for (std::uint32_t w = 0; w < b.circuit.width(); ++w)
        if (b.circuit.roles()[w].kind == RoleKind::Ancilla) b.layout.ancillas.push_back(w);
}

struct ModCoreResult {
    Row s;                                // sum row, weights <= n-2
    Row k;                                // final carry row, weights 1..n-2
    std::optional<std::uint32_t> c1, c2;  // kept weight-(n-1) carries
};

/// The modular reduction engine: compresses three summand rows into a pair
/// whose total is congruent to the input sum mod M and provably below 2^N.
///
/// Shape: one full-adder layer (the plain 3->2 slice), then the boundary
/// bits of weight 2^(N-1) and 2^N are rewritten as P/Q patterns by Toffolis
/// off the constant wires, and a sequence of fold rounds absorbs those
/// patterns back into the low slices through half-adder chains. Every
/// round's own top carry is folded the same way, except the last two: their
/// carries c1 and c2 feed the S_{N-1} position, and since consecutive
/// half-adder top carries can never both fire (a carry zeroes the sum bit
/// the next round reads), plain CNOTs replace the final half adder there.
///
/// The number of rounds is fixed at build time by a bound tracker: it
/// propagates a worst-case total over the last two fold outcomes, using
/// value conservation (a fired fold shrinks the total by 2^(N-1) - P) and
/// the sum-zeroing above, and stops once the total is certified < 2^N.
inline ModCoreResult mod_csa_core(Circuit& c, const ModulusContext& ctx, const Row& in_a,
                                  const Row& in_b, Row sigma, const Row& p_bits,
                                  const Row& q_bits) {
    const std::uint32_t n = ctx.n;
    const unsigned long long limit = (1ull << n) - 1;
    const unsigned long long d_top = (1ull << (n - 1)) - ctx.p;
    auto fresh = [&c](std::uint32_t) { return c.add_wire(WireRole::ancilla()); };

    unsigned long long total = row_span(in_a) + row_span(in_b) + row_span(sigma);

    cells::AbsorbResult raw =
        cells::absorb(c, sigma, &in_a, &in_b, fresh, fresh, cells::LonePolicy::Reference);
    Row lane = raw.carries;

    // rewrite one bit of `row` as its fold pattern; returns the pattern row
    auto fold_bit = [&](Row& row, std::uint32_t weight, const Row& pattern,
                        std::uint64_t pattern_value,
                        const std::function<unsigned long long()>& others) -> Row {
        Row g;
        if (!row.has(weight)) return g;
        const std::uint32_t ctrl = row.wire(weight);
        row.bits.erase(weight);
        for (const auto& [j, pwire] : pattern.bits) {
            const std::uint32_t t = c.add_wire(WireRole::ancilla());
            c.ccx(ctrl, pwire, t);
            g.put(j, t);
        }
        const unsigned long long drop = (1ull << weight) - pattern_value;
        const unsigned long long fired = total > drop ? total - drop : 0;
        total = std::max(fired, std::min(total, others()));
        return g;
    };

    Row gq = fold_bit(lane, n, q_bits, ctx.q,
                      [&] { return row_span(sigma) + row_span(lane); });
    Row gp1 = fold_bit(lane, n - 1, p_bits, ctx.p,
                       [&] { return row_span(sigma) + row_span(lane) + row_span(gq); });
    Row gp2 = fold_bit(sigma, n - 1, p_bits, ctx.p, [&] {
        return row_span(sigma) + row_span(lane) + row_span(gq) + row_span(gp1);
    });
    for (const auto& [w, wire] : sigma.bits)
        if (w > n - 2) throw std::logic_error("reduction row exceeds slice range");
    for (const auto& [w, wire] : lane.bits)
        if (w > n - 2) throw std::logic_error("reduction carries exceed slice range");

    // squeeze the three patterns into two rows; cells stay below n-2 so no
    // top carry can appear here
    Row gs = gq;
    Row gk = cells::absorb(c, gs, &gp1, &gp2, fresh, fresh, cells::LonePolicy::Reference).carries;

    struct QueueItem {
        Row row;
        bool conditional;  // value gated on the fold that spawned it
    };
    std::deque<QueueItem> queue;
    queue.push_back({gs, false});
    queue.push_back({gk, false});

    total = std::min(total, row_span(sigma) + row_span(lane) + row_span(gs) + row_span(gk));

    // worst-case totals per (second-to-last, last) fold outcome; ~0ull
    // marks unreachable states
    constexpr unsigned long long kUnreachable = ~0ull;
    unsigned long long bound[2][2] = {{total, kUnreachable}, {kUnreachable, kUnreachable}};

    auto queue_cap = [&](const QueueItem& item, bool fired) -> unsigned long long {
        if (!item.conditional) return row_span(item.row);
        return fired ? row_span(item.row) : 0;
    };

    ModCoreResult res;
    int keep_rounds_left = -1;  // -1: still folding; 2,1: the kept rounds
    for (int round = 1;; ++round) {
        if (round > 200) throw std::logic_error("modular fold failed to converge");
        if (keep_rounds_left < 0 && round >= 3) {
            unsigned long long worst = 0;
            for (auto& row_states : bound)
                for (unsigned long long v : row_states)
                    if (v != kUnreachable && v > worst) worst = v;
            if (worst <= limit) keep_rounds_left = 2;
        }

        if (keep_rounds_left == 0) break;

        QueueItem item = queue.front();
        queue.pop_front();

        const bool full_top_cell =
            sigma.has(n - 2) && lane.has(n - 2) && item.row.has(n - 2);
        Row ops = lane;
        cells::AbsorbResult step =
            cells::absorb(c, sigma, &ops, &item.row, fresh, fresh, cells::LonePolicy::Reference);
        lane = step.carries;

        std::optional<std::uint32_t> top;
        if (lane.has(n - 1)) {
            top = lane.wire(n - 1);
            lane.bits.erase(n - 1);
        }

        if (keep_rounds_left > 0) {
            (keep_rounds_left == 2 ? res.c1 : res.c2) = top;
            --keep_rounds_left;
            continue;
        }

        // fold the round's own top carry and track the bound
        Row spawned;
        if (top) {
            for (const auto& [j, pwire] : p_bits.bits) {
                const std::uint32_t t = c.add_wire(WireRole::ancilla());
                c.ccx(*top, pwire, t);
                spawned.put(j, t);
            }
        }
        queue.push_back({spawned, true});

        const unsigned long long sigma_span = row_span(sigma);
        const unsigned long long zeroed_span =
            (!full_top_cell && sigma.has(n - 2)) ? sigma_span - (1ull << (n - 2)) : sigma_span;
        unsigned long long next[2][2] = {{kUnreachable, kUnreachable},
                                         {kUnreachable, kUnreachable}};
        for (int b = 0; b < 2; ++b) {
            for (int fired = 0; fired < 2; ++fired) {
                if (fired == 1 && !top) continue;
                unsigned long long worst = kUnreachable;
                for (int a = 0; a < 2; ++a) {
                    const unsigned long long prev = bound[a][b];
                    if (prev == kUnreachable) continue;
                    unsigned long long conserved = fired ? (prev > d_top ? prev - d_top : 0) : prev;
                    const unsigned long long spans = (fired ? zeroed_span : sigma_span) +
                                                     row_span(lane) +
                                                     queue_cap(queue[0], b != 0) +
                                                     queue_cap(queue[1], fired != 0);
                    const unsigned long long v = std::min(conserved, spans);
                    if (worst == kUnreachable || v > worst) worst = v;
                }
                if (worst != kUnreachable &&
                    (next[b][fired] == kUnreachable || worst > next[b][fired]))
                    next[b][fired] = worst;
            }
        }
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j) bound[i][j] = next[i][j];
    }

    res.s = sigma;
    res.k = lane;
    return res;
}

/// Folds a work list of summand rows down to one carry-save pair through
/// modular compressor cores. The pair comes out in register shape: the sum
/// row below 2^N with its top bit combined from the kept carries, the carry
/// row within weights 1..N-2 (one padding core runs if the tail row still
/// holds a weight-0 bit).
inline std::pair<Row, Row> reduce_rows_mod(Circuit& c, const ModulusContext& ctx,
                                           std::deque<Row> work, const Row& p_bits,
                                           const Row& q_bits) {
    auto step = [&](const Row& a, const Row& b, const Row& t) {
        ModCoreResult core = mod_csa_core(c, ctx, a, b, t, p_bits, q_bits);
        Row s = core.s;
        if (core.c1 || core.c2) {
            const std::uint32_t top = c.add_wire(WireRole::ancilla());
            if (core.c1) c.cx(*core.c1, top);
            if (core.c2) c.cx(*core.c2, top);
            s.put(ctx.n - 1, top);
        }
        work.push_back(s);
        work.push_back(core.k);
    };
    auto pop = [&] {
        Row r = work.front();
        work.pop_front();
        return r;
    };
    while (work.size() > 2) {
        Row a = pop();
        Row b = pop();
        Row t = pop();
        step(a, b, t);
    }
    if (work.size() == 2 && work.back().has(0)) {
        Row a = pop();
        Row b = pop();
        step(a, b, Row{});
    }
    Row ps = work.empty() ? Row{} : work.front();
    Row pk = work.size() > 1 ? work.back() : Row{};
    return {ps, pk};
}

}  // namespace detail

/// Modular 3:2 compressor: adds A+B+C into a carry-save pair (S, K) with
/// cs_value congruent to the sum mod M and below 2^N. A, B, C come back
/// unchanged and every internal wire is returned to zero by the mirrored
/// reduction stack; only the copied-out result registers survive. The
/// optional probe registers T1/T2 expose the two top carries feeding
/// S_{N-1} (never both set).
inline Built build_mod_csa(const ModulusContext& ctx, bool probes = false) {
    Built b;
    Circuit& c = b.circuit;
    const std::uint32_t n = ctx.n;

    Row rows[3];
    const char* names[3] = {"A", "B", "C"};
    for (int r = 0; r < 3; ++r) {
        std::vector<std::uint32_t> wires(n);
        for (std::uint32_t i = 0; i < n; ++i) {
            wires[i] = c.add_wire(WireRole::operand(names[r], i));
            rows[r].put(i, wires[i]);
        }
        c.add_register(names[r], wires);
        b.layout.inputs.push_back(ValueReg{names[r], wires, 0, true});
    }

    const Row p_bits = detail::add_constant_register(c, b.layout, "P", ctx.p, n - 2);
    const Row q_bits = detail::add_constant_register(c, b.layout, "Q", ctx.q, n - 2);
    c.add_comment("fold constants: P = " + std::to_string(ctx.p) +
                  ", Q = " + std::to_string(ctx.q) + " (M = " + std::to_string(ctx.m) + ")");

    const std::size_t stack_begin = c.gates().size();
    detail::ModCoreResult core =
        detail::mod_csa_core(c, ctx, rows[0], rows[1], rows[2], p_bits, q_bits);
    const std::size_t stack_end = c.gates().size();

    std::vector<std::uint32_t> sp(n), kp(n);
    for (std::uint32_t i = 0; i < n; ++i) sp[i] = c.add_wire(WireRole::result("S", i));
    for (std::uint32_t i = 0; i < n; ++i) kp[i] = c.add_wire(WireRole::result("K", i));
    c.add_register("S", sp);
    c.add_register("K", kp);
    for (const auto& [w, wire] : core.s.bits) c.cx(wire, sp[w]);
    if (core.c1) c.cx(*core.c1, sp[n - 1]);
    if (core.c2) c.cx(*core.c2, sp[n - 1]);
    for (const auto& [w, wire] : core.k.bits) c.cx(wire, kp[w - 1]);

    OutputGroup s{"S"};
    OutputGroup k{"K"};
    OutputGroup sk{"SK"};
    for (std::uint32_t i = 0; i < n; ++i) {
        s.add(i, sp[i]);
        k.add(i + 1, kp[i]);
        sk.add(i, sp[i]);
        sk.add(i + 1, kp[i]);
    }
    b.layout.outputs = {s, k, sk};

    if (probes) {
        const std::uint32_t t1 = c.add_wire(WireRole::result("T1", 0));
        const std::uint32_t t2 = c.add_wire(WireRole::result("T2", 0));
        c.add_register("T1", {t1});
        c.add_register("T2", {t2});
        if (core.c1) c.cx(*core.c1, t1);
        if (core.c2) c.cx(*core.c2, t2);
        OutputGroup g1{"T1"};
        g1.add(0, t1);
        OutputGroup g2{"T2"};
        g2.add(0, t2);
        b.layout.outputs.push_back(g1);
        b.layout.outputs.push_back(g2);
    }

    c.append_inverse_of_range(stack_begin, stack_end);
    detail::collect_ancillas(b);
    return b;
}

/// Modular carry-save multiplier: the partial-product plan of the plain
/// multiplier, except that any term of weight w >= N is materialized
/// directly as the bit pattern of 2^w mod M (same two controls, one Toffoli
/// per set bit), and the adder tree is replaced by a queue of modular
/// compressor cores sharing one set of P/Q constant wires.
inline Built build_mod_multiplier(const ModulusContext& ctx) {
    Built b;
    Circuit& c = b.circuit;
    const std::uint32_t n = ctx.n;

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

    const Row p_bits = detail::add_constant_register(c, b.layout, "P", ctx.p, n - 2);
    const Row q_bits = detail::add_constant_register(c, b.layout, "Q", ctx.q, n - 2);
    c.add_comment("fold constants: P = " + std::to_string(ctx.p) +
                  ", Q = " + std::to_string(ctx.q) + " (M = " + std::to_string(ctx.m) + ")");

    const std::size_t stack_begin = c.gates().size();

    // greedy first-fit packing of term bit-sets into weight-disjoint rows
    std::vector<Row> pp_rows;
    auto place_term = [&](std::uint32_t xw, std::uint32_t yw, std::uint32_t weight) {
        std::vector<std::uint32_t> bits;
        if (weight < n) {
            bits.push_back(weight);
        } else {
            const std::uint64_t pattern = (std::uint64_t{1} << weight) % ctx.m;
            for (std::uint32_t j = 0; j < n; ++j)
                if ((pattern >> j) & 1u) bits.push_back(j);
        }
        if (bits.empty()) return;
        auto fits = [&](const Row& row) {
            for (std::uint32_t w : bits)
                if (row.has(w)) return false;
            return true;
        };
        std::size_t r = 0;
        while (r < pp_rows.size() && !fits(pp_rows[r])) ++r;
        if (r == pp_rows.size()) pp_rows.emplace_back();
        for (std::uint32_t w : bits) {
            const std::uint32_t t = c.add_wire(WireRole::ancilla());
            pp_rows[r].put(w, t);
            c.ccx(xw, yw, t);
        }
    };
    for (int xc = 0; xc < 2; ++xc)
        for (int yc = 0; yc < 2; ++yc)
            for (std::uint32_t j = 0; j < n; ++j)
                for (std::uint32_t i = 0; i < n; ++i)
                    place_term(xc ? xk[i] : xs[i], yc ? yk[j] : ys[j],
                               i + j + (xc ? 1 : 0) + (yc ? 1 : 0));

    const auto [ps, pk] = detail::reduce_rows_mod(
        c, ctx, std::deque<Row>(pp_rows.begin(), pp_rows.end()), p_bits, q_bits);
    const std::size_t stack_end = c.gates().size();

    std::vector<std::uint32_t> psw(n), pkw(n);
    for (std::uint32_t i = 0; i < n; ++i) psw[i] = c.add_wire(WireRole::result("PS", i));
    for (std::uint32_t i = 0; i < n; ++i) pkw[i] = c.add_wire(WireRole::result("PK", i));
    c.add_register("PS", psw);
    c.add_register("PK", pkw);
    for (const auto& [w, wire] : ps.bits) c.cx(wire, psw[w]);
    for (const auto& [w, wire] : pk.bits) c.cx(wire, pkw[w - 1]);

    OutputGroup gs{"PS"};
    OutputGroup gk{"PK"};
    OutputGroup gp{"P"};
    for (std::uint32_t i = 0; i < n; ++i) {
        gs.add(i, psw[i]);
        gk.add(i + 1, pkw[i]);
        gp.add(i, psw[i]);
        gp.add(i + 1, pkw[i]);
    }
    b.layout.outputs = {gs, gk, gp};

    c.append_inverse_of_range(stack_begin, stack_end);
    detail::collect_ancillas(b);
    return b;
}

namespace detail {

struct NormalizerTail {
    std::vector<std::uint32_t> r;      // W = n+1 wires, residue in the low bits
    std::vector<std::uint32_t> flags;  // one sign record per trial stage
};

/// In-place ripple addition target += addend over the `r` wires, column
/// addends given sparsely. Majority chain forward, mirrored majority/sum
/// sweep backward; no carry past the top wire.
inline void emit_sparse_ripple(Circuit& c, const std::vector<std::uint32_t>& r,
                               const std::function<std::optional<std::uint32_t>(std::uint32_t)>& addend,
                               const std::vector<std::uint32_t>& carry) {
    const std::size_t w = r.size();
    auto majority = [&](std::size_t i) {
        const auto a = addend(static_cast<std::uint32_t>(i));
        if (a) {
            c.ccx(*a, r[i], carry[i + 1]);
            c.cx(*a, r[i]);
            c.ccx(carry[i], r[i], carry[i + 1]);
            c.cx(*a, r[i]);
        } else {
            c.ccx(carry[i], r[i], carry[i + 1]);
        }
    };
    for (std::size_t i = 0; i + 1 < w; ++i) majority(i);
    for (std::size_t i = w; i-- > 0;) {
        if (i + 1 < w) majority(i);
        c.cx(carry[i], r[i]);
        const auto a = addend(static_cast<std::uint32_t>(i));
        if (a) c.cx(*a, r[i]);
    }
}

/// Collapses a carry-save pair to one binary register and reduces it to the
/// residue mod M by ceil((2^N - 1)/M) trial subtractions: subtract M via
/// the complement trick, record the sign, add M back under the sign flag.
inline NormalizerTail normalize_tail(Circuit& c, Layout& layout, const ModulusContext& ctx,
                                     const Row& s_row, const Row& k_row) {
    const std::uint32_t n = ctx.n;
    const std::uint32_t w = n + 1;
    NormalizerTail tail;

    tail.r.resize(w);
    for (std::uint32_t i = 0; i < w; ++i) tail.r[i] = c.add_wire(WireRole::result("R", i));
    c.add_register("R", tail.r);

    std::vector<std::uint32_t> carry(w + 1);
    for (std::uint32_t i = 0; i <= w; ++i) carry[i] = c.add_wire(WireRole::ancilla());

    const Row cm_bits = add_constant_register(c, layout, "CM", ctx.m, w);

    // R <- S + 2K
    for (const auto& [weight, wire] : s_row.bits) c.cx(wire, tail.r[weight]);
    emit_sparse_ripple(c, tail.r,
                       [&](std::uint32_t i) -> std::optional<std::uint32_t> {
                           if (i >= 1 && k_row.has(i)) return k_row.wire(i);
                           return std::nullopt;
                       },
                       carry);

    std::vector<std::uint32_t> g(w, 0);
    std::vector<bool> g_used(w, false);
    for (const auto& [j, wire] : cm_bits.bits) {
        g[j] = c.add_wire(WireRole::ancilla());
        g_used[j] = true;
    }

    const std::uint64_t stages =
        (((std::uint64_t{1} << n) - 1) + ctx.m - 1) / ctx.m;  // ceil((2^N - 1)/M)
    auto cm_addend = [&](std::uint32_t i) -> std::optional<std::uint32_t> {
        if (cm_bits.has(i)) return cm_bits.wire(i);
        return std::nullopt;
    };
    auto g_addend = [&](std::uint32_t i) -> std::optional<std::uint32_t> {
        if (g_used[i]) return g[i];
        return std::nullopt;
    };
    for (std::uint64_t t = 0; t < stages; ++t) {
        // R <- R - M as ~(~R + M)
        for (std::uint32_t i = 0; i < w; ++i) c.x(tail.r[i]);
        emit_sparse_ripple(c, tail.r, cm_addend, carry);
        for (std::uint32_t i = 0; i < w; ++i) c.x(tail.r[i]);

        const std::uint32_t flag =
            c.add_wire(WireRole::carry_out_in("SIGNS", static_cast<std::uint32_t>(t)));
        tail.flags.push_back(flag);
        c.cx(tail.r[w - 1], flag);

        // add M back where the subtraction underflowed
        for (const auto& [j, wire] : cm_bits.bits) c.ccx(flag, wire, g[j]);
        emit_sparse_ripple(c, tail.r, g_addend, carry);
        for (const auto& [j, wire] : cm_bits.bits) c.ccx(flag, wire, g[j]);
    }
    c.add_register("SIGNS", tail.flags);
    return tail;
}

}  // namespace detail

/// Final normalizer: reads a carry-save pair (S, K) and produces the unique
/// residue of S + 2K mod M in the R register, leaving S and K untouched.
/// The per-stage sign bits stay behind in SIGNS (deterministic given the
/// input, predicted by the reference model).
inline Built build_final_normalizer(const ModulusContext& ctx) {
    Built b;
    Circuit& c = b.circuit;
    const std::uint32_t n = ctx.n;

    Row s_row, k_row;
    std::vector<std::uint32_t> sw(n), kw(n);
    for (std::uint32_t i = 0; i < n; ++i) {
        sw[i] = c.add_wire(WireRole::operand("S", i));
        s_row.put(i, sw[i]);
    }
    for (std::uint32_t i = 0; i < n; ++i) {
        kw[i] = c.add_wire(WireRole::operand("K", i));
        k_row.put(i + 1, kw[i]);
    }
    c.add_register("S", sw);
    c.add_register("K", kw);
    b.layout.inputs = {ValueReg{"S", sw, 0, true}, ValueReg{"K", kw, 1, true}};
    c.add_comment("trial subtraction stages: " +
                  std::to_string((((std::uint64_t{1} << n) - 1) + ctx.m - 1) / ctx.m) +
                  " (M = " + std::to_string(ctx.m) + ")");

    detail::NormalizerTail tail = detail::normalize_tail(c, b.layout, ctx, s_row, k_row);

    OutputGroup r{"R"};
    for (std::uint32_t i = 0; i < tail.r.size(); ++i) r.add(i, tail.r[i]);
    OutputGroup signs{"SIGNS"};
    for (std::uint32_t i = 0; i < tail.flags.size(); ++i) signs.add(i, tail.flags[i]);
    b.layout.outputs = {r, signs};
    detail::collect_ancillas(b);
    return b;
}

/// Modular exponentiation: a linear chain of modular multiplier stages, one
/// per exponent bit, each multiplying the accumulator by the classical
/// constant a^(2^i) mod M under control of exponent qubit i. Partial
/// products are three-way ANDs (x bit, constant bit, exponent bit) realized
/// as Toffoli pairs through one stage ancilla; the stage's reduction stack
/// is mirrored once its product is copied into the next accumulator.
inline Built build_modexp(const ModulusContext& ctx, std::uint64_t base, std::uint32_t exp_width,
                          bool normalize = false) {
    if (base >= ctx.m) throw std::invalid_argument("base must be below the modulus");
    if (exp_width < 1) throw std::invalid_argument("exponent width must be at least 1");
    Built b;
    Circuit& c = b.circuit;
    const std::uint32_t n = ctx.n;

    std::vector<std::uint32_t> ew(exp_width);
    for (std::uint32_t i = 0; i < exp_width; ++i) ew[i] = c.add_wire(WireRole::operand("E", i));
    c.add_register("E", ew);
    b.layout.inputs = {ValueReg{"E", ew, 0, true}};

    const Row p_bits = detail::add_constant_register(c, b.layout, "P", ctx.p, n - 2);
    const Row q_bits = detail::add_constant_register(c, b.layout, "Q", ctx.q, n - 2);
    c.add_comment("fold constants: P = " + std::to_string(ctx.p) +
                  ", Q = " + std::to_string(ctx.q) + " (M = " + std::to_string(ctx.m) + ")");

    // accumulator = 1 on constant wires
    std::vector<std::uint32_t> acc_s =
        [&] {
            std::vector<std::uint32_t> wires(n);
            for (std::uint32_t i = 0; i < n; ++i) {
                wires[i] = c.add_wire(WireRole::constant(i == 0));
                b.layout.constants.emplace_back(wires[i], i == 0);
            }
            c.x(wires[0]);
            c.add_register("A0S", wires);
            return wires;
        }();
    std::vector<std::uint32_t> acc_k(n);
    for (std::uint32_t i = 0; i < n; ++i) {
        acc_k[i] = c.add_wire(WireRole::constant(false));
        b.layout.constants.emplace_back(acc_k[i], false);
    }
    c.add_register("A0K", acc_k);

    for (std::uint32_t stage = 0; stage < exp_width; ++stage) {
        const std::uint64_t factor = classical_modexp(base, std::uint64_t{1} << stage, ctx.m);
        const std::string tag = std::to_string(stage + 1);
        detail::add_constant_register(c, b.layout, "Y" + std::to_string(stage), factor, n - 2);
        const Register* y_reg = c.find_register("Y" + std::to_string(stage));
        c.add_comment("stage " + std::to_string(stage) + " multiplies by " +
                      std::to_string(factor));

        const std::uint32_t g = c.add_wire(WireRole::ancilla());
        const std::size_t stack_begin = c.gates().size();

        std::vector<Row> pp_rows;
        auto place_term = [&](std::uint32_t xw, std::uint32_t yw, std::uint32_t weight) {
            std::vector<std::uint32_t> bits;
            if (weight < n) {
                bits.push_back(weight);
            } else {
                const std::uint64_t pattern = (std::uint64_t{1} << weight) % ctx.m;
                for (std::uint32_t j = 0; j < n; ++j)
                    if ((pattern >> j) & 1u) bits.push_back(j);
            }
            if (bits.empty()) return;
            auto fits = [&](const Row& row) {
                for (std::uint32_t w : bits)
                    if (row.has(w)) return false;
                return true;
            };
            std::size_t r = 0;
            while (r < pp_rows.size() && !fits(pp_rows[r])) ++r;
            if (r == pp_rows.size()) pp_rows.emplace_back();
            c.ccx(xw, yw, g);
            for (std::uint32_t w : bits) {
                const std::uint32_t t = c.add_wire(WireRole::ancilla());
                pp_rows[r].put(w, t);
                c.ccx(g, ew[stage], t);
            }
            c.ccx(xw, yw, g);
        };
        for (std::uint32_t j = 0; j < n - 2; ++j) {
            if (((factor >> j) & 1u) == 0) continue;
            for (std::uint32_t i = 0; i < n; ++i) place_term(acc_s[i], y_reg->wires[j], i + j);
            for (std::uint32_t i = 0; i < n; ++i)
                place_term(acc_k[i], y_reg->wires[j], i + j + 1);
        }

        const auto [ps, pk] = detail::reduce_rows_mod(
            c, ctx, std::deque<Row>(pp_rows.begin(), pp_rows.end()), p_bits, q_bits);
        const std::size_t stack_end = c.gates().size();

        std::vector<std::uint32_t> os(n), ok(n);
        for (std::uint32_t i = 0; i < n; ++i)
            os[i] = c.add_wire(WireRole::result("A" + tag + "S", i));
        for (std::uint32_t i = 0; i < n; ++i)
            ok[i] = c.add_wire(WireRole::result("A" + tag + "K", i));
        c.add_register("A" + tag + "S", os);
        c.add_register("A" + tag + "K", ok);

        for (const auto& [w, wire] : ps.bits) c.ccx(ew[stage], wire, os[w]);
        for (const auto& [w, wire] : pk.bits) c.ccx(ew[stage], wire, ok[w - 1]);
        c.x(ew[stage]);
        for (std::uint32_t i = 0; i < n; ++i) c.ccx(ew[stage], acc_s[i], os[i]);
        for (std::uint32_t i = 0; i < n; ++i) c.ccx(ew[stage], acc_k[i], ok[i]);
        c.x(ew[stage]);

        c.append_inverse_of_range(stack_begin, stack_end);
        acc_s = os;
        acc_k = ok;
    }

    OutputGroup rs{"RS"};
    OutputGroup rk{"RK"};
    OutputGroup rr{"R"};
    for (std::uint32_t i = 0; i < n; ++i) {
        rs.add(i, acc_s[i]);
        rk.add(i + 1, acc_k[i]);
        rr.add(i, acc_s[i]);
        rr.add(i + 1, acc_k[i]);
    }
    b.layout.outputs = {rs, rk, rr};

    if (normalize) {
        Row s_row, k_row;
        for (std::uint32_t i = 0; i < n; ++i) s_row.put(i, acc_s[i]);
        for (std::uint32_t i = 0; i < n; ++i) k_row.put(i + 1, acc_k[i]);
        detail::NormalizerTail tail = detail::normalize_tail(c, b.layout, ctx, s_row, k_row);
        OutputGroup res{"RES"};
        for (std::uint32_t i = 0; i < tail.r.size(); ++i) res.add(i, tail.r[i]);
        OutputGroup signs{"SIGNS"};
        for (std::uint32_t i = 0; i < tail.flags.size(); ++i) signs.add(i, tail.flags[i]);
        b.layout.outputs.push_back(res);
        b.layout.outputs.push_back(signs);
    }

    detail::collect_ancillas(b);
    return b;
}

}  // namespace qcsa
