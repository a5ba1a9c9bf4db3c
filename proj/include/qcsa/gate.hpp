#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace qcsa {

/// The reversible gate set: NOT, controlled-NOT, Toffoli.
/// Every gate is its own inverse, which keeps circuit inversion trivial.
enum class GateKind : std::uint8_t { X, CX, CCX };

struct Gate {
    GateKind kind = GateKind::X;
    std::uint32_t c0 = 0;  // first control (CX, CCX)
    std::uint32_t c1 = 0;  // second control (CCX only)
    std::uint32_t target = 0;

    static Gate x(std::uint32_t t) { return {GateKind::X, 0, 0, t}; }

    static Gate cx(std::uint32_t c, std::uint32_t t) {
        if (c == t) throw std::invalid_argument("cx: control equals target");
        return {GateKind::CX, c, 0, t};
    }

    static Gate ccx(std::uint32_t a, std::uint32_t b, std::uint32_t t) {
        if (a == b || a == t || b == t)
            throw std::invalid_argument("ccx: wires must be pairwise distinct");
        return {GateKind::CCX, a, b, t};
    }

    [[nodiscard]] std::uint32_t arity() const {
        switch (kind) {
            case GateKind::X: return 1;
            case GateKind::CX: return 2;
            case GateKind::CCX: return 3;
        }
        return 0;  // unreachable
    }

    /// Highest wire index used, for width checks.
    [[nodiscard]] std::uint32_t max_wire() const {
        std::uint32_t m = target;
        if (kind != GateKind::X && c0 > m) m = c0;
        if (kind == GateKind::CCX && c1 > m) m = c1;
        return m;
    }

    [[nodiscard]] bool touches(std::uint32_t w) const {
        if (target == w) return true;
        if (kind != GateKind::X && c0 == w) return true;
        if (kind == GateKind::CCX && c1 == w) return true;
        return false;
    }

    friend bool operator==(const Gate& a, const Gate& b) {
        if (a.kind != b.kind || a.target != b.target) return false;
        switch (a.kind) {
            case GateKind::X: return true;
            case GateKind::CX: return a.c0 == b.c0;
            case GateKind::CCX:
                // controls commute
                return (a.c0 == b.c0 && a.c1 == b.c1) ||
                       (a.c0 == b.c1 && a.c1 == b.c0);
        }
        return false;
    }
};

inline std::string to_string(GateKind k) {
    switch (k) {
        case GateKind::X: return "x";
        case GateKind::CX: return "cx";
        case GateKind::CCX: return "ccx";
    }
    return "?";
}

}  // namespace qcsa
