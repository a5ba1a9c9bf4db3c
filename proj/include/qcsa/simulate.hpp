#pragma once

#include <cstdint>
#include <functional>
#include <stdexcept>
#include <vector>

#include "qcsa/circuit.hpp"

namespace qcsa {

/// Computational-basis state: one bit per wire. The whole verification
/// story rests on the gate set being a permutation of these states, so
/// nothing richer than a bit vector is ever needed.
struct BasisState {
    std::vector<std::uint8_t> bits;

    BasisState() = default;
    explicit BasisState(std::uint32_t width) : bits(width, 0) {}

    [[nodiscard]] std::uint32_t width() const {
        return static_cast<std::uint32_t>(bits.size());
    }

    [[nodiscard]] std::uint64_t to_index() const {
        if (bits.size() > 64) throw std::length_error("state too wide for an index");
        std::uint64_t v = 0;
        for (std::size_t i = 0; i < bits.size(); ++i)
            if (bits[i]) v |= (std::uint64_t{1} << i);
        return v;
    }

    static BasisState from_index(std::uint32_t width, std::uint64_t index) {
        if (width > 64) throw std::length_error("state too wide for an index");
        BasisState s(width);
        for (std::uint32_t i = 0; i < width; ++i)
            s.bits[i] = static_cast<std::uint8_t>((index >> i) & 1u);
        return s;
    }

    friend bool operator==(const BasisState&, const BasisState&) = default;
};

inline void run_in_place(const Circuit& c, BasisState& s) {
    if (s.width() != c.width()) throw std::invalid_argument("state width mismatch");
    auto& b = s.bits;
    for (const auto& g : c.gates()) {
        switch (g.kind) {
            case GateKind::X: b[g.target] ^= 1u; break;
            case GateKind::CX: b[g.target] ^= b[g.c0]; break;
            case GateKind::CCX:
                b[g.target] ^= static_cast<std::uint8_t>(b[g.c0] & b[g.c1]);
                break;
        }
    }
}

[[nodiscard]] inline BasisState run(const Circuit& c, BasisState s) {
    run_in_place(c, s);
    return s;
}

inline constexpr std::uint32_t kTruthTableWidthLimit = 20;

/// rows[i] = output index for input index i, both LSB-first over wire 0..w-1.
struct TruthTable {
    std::uint32_t width = 0;
    std::vector<std::uint64_t> rows;

    [[nodiscard]] bool is_permutation() const {
        std::vector<bool> seen(rows.size(), false);
        for (std::uint64_t v : rows) {
            if (v >= rows.size() || seen[v]) return false;
            seen[v] = true;
        }
        return true;
    }

    /// The inverse permutation; only valid if is_permutation().
    [[nodiscard]] TruthTable inverted() const {
        TruthTable inv;
        inv.width = width;
        inv.rows.assign(rows.size(), 0);
        for (std::uint64_t i = 0; i < rows.size(); ++i) inv.rows[rows[i]] = i;
        return inv;
    }

    friend bool operator==(const TruthTable&, const TruthTable&) = default;
};

inline TruthTable truth_table(const Circuit& c,
                              std::uint32_t width_limit = kTruthTableWidthLimit) {
    if (c.width() > width_limit)
        throw std::length_error("truth table: circuit wider than the configured limit");
    TruthTable t;
    t.width = c.width();
    const std::uint64_t count = std::uint64_t{1} << c.width();
    t.rows.reserve(count);
    for (std::uint64_t i = 0; i < count; ++i)
        t.rows.push_back(run(c, BasisState::from_index(c.width(), i)).to_index());
    return t;
}

struct PermutationCheck {
    bool passed = true;
    std::uint64_t trials = 0;
    // first pair of inputs mapping to the same output, when !passed
    std::uint64_t collision_a = 0;
    std::uint64_t collision_b = 0;
};

/// Injectivity sweep over the full basis. True for anything assembled from
/// the gate set; the generic evaluator hook exists so tests can feed a
/// corrupted mapping and watch the check fail.
inline PermutationCheck verify_permutation(
    std::uint32_t width, const std::function<std::uint64_t(std::uint64_t)>& eval,
    std::uint32_t width_limit = kTruthTableWidthLimit) {
    if (width > width_limit)
        throw std::length_error("permutation check: wider than the exhaustive limit");
    PermutationCheck r;
    const std::uint64_t count = std::uint64_t{1} << width;
    std::vector<std::uint64_t> owner(count, ~std::uint64_t{0});
    for (std::uint64_t i = 0; i < count; ++i) {
        ++r.trials;
        const std::uint64_t out = eval(i);
        if (out >= count || owner[out] != ~std::uint64_t{0}) {
            r.passed = false;
            r.collision_a = out < count ? owner[out] : i;
            r.collision_b = i;
            return r;
        }
        owner[out] = i;
    }
    return r;
}

inline PermutationCheck verify_permutation(const Circuit& c,
                                           std::uint32_t width_limit = kTruthTableWidthLimit) {
    return verify_permutation(
        c.width(),
        [&c](std::uint64_t i) { return run(c, BasisState::from_index(c.width(), i)).to_index(); },
        width_limit);
}

}  // namespace qcsa
