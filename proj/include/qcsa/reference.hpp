#pragma once

#include <cstdint>
#include <stdexcept>
#include <utility>
#include <vector>

namespace qcsa {

// Classical reference models. These are the oracles the reversible
// constructions are verified against, so they must stay boring: plain
// integer arithmetic, no cleverness shared with the builders.

using wide_uint = unsigned __int128;

struct BitPair {
    std::uint8_t sum = 0;
    std::uint8_t carry = 0;
    friend bool operator==(const BitPair&, const BitPair&) = default;
};

/// sum = a xor b xor cin, carry = majority(a, b, cin).
inline BitPair classical_full_add(std::uint8_t a, std::uint8_t b, std::uint8_t cin) {
    if (a > 1 || b > 1 || cin > 1) throw std::invalid_argument("full add: non-boolean input");
    const std::uint8_t sum = a ^ b ^ cin;
    const std::uint8_t carry = static_cast<std::uint8_t>((a & b) | (a & cin) | (b & cin));
    return {sum, carry};
}

/// sum = a xor b, carry = a and b.
inline BitPair classical_half_add(std::uint8_t a, std::uint8_t b) {
    if (a > 1 || b > 1) throw std::invalid_argument("half add: non-boolean input");
    return {static_cast<std::uint8_t>(a ^ b), static_cast<std::uint8_t>(a & b)};
}

/// An integer held as sum bits plus carry bits, the carry vector shifted
/// left by `offset` (normally 1: a carry produced at slice i weighs 2^(i+1)).
struct CarrySaveNumber {
    std::vector<std::uint8_t> sum_bits;    // bit i weighs 2^i
    std::vector<std::uint8_t> carry_bits;  // bit i weighs 2^(i+offset)
    std::uint32_t offset = 1;
};

inline wide_uint cs_value(const CarrySaveNumber& x) {
    wide_uint v = 0;
    for (std::size_t i = 0; i < x.sum_bits.size(); ++i)
        if (x.sum_bits[i]) v += wide_uint{1} << i;
    for (std::size_t i = 0; i < x.carry_bits.size(); ++i)
        if (x.carry_bits[i]) v += wide_uint{1} << (i + x.offset);
    return v;
}

/// Packed-integer convenience: value of (sum, carry << offset).
inline wide_uint cs_value(wide_uint sum, wide_uint carry, std::uint32_t offset = 1) {
    return sum + (carry << offset);
}

/// a^e mod M by square-and-multiply. M = 0 is the one undefined case.
inline std::uint64_t classical_modexp(std::uint64_t a, std::uint64_t e, std::uint64_t M) {
    if (M == 0) throw std::invalid_argument("modexp: modulus zero");
    wide_uint result = 1 % M;
    wide_uint base = a % M;
    while (e > 0) {
        if (e & 1u) result = (result * base) % M;
        base = (base * base) % M;
        e >>= 1;
    }
    return static_cast<std::uint64_t>(result);
}

}  // namespace qcsa
