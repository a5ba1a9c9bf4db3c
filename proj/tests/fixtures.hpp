#pragma once

// Frozen slice-level truth tables. These were derived once from the 1-bit
// addition model below and are kept as literal data so a regression in the
// gate realizations cannot hide behind a regression in the model.

#include <array>
#include <cstdint>

#include "qcsa/simulate.hpp"

namespace fixtures {

// Full-adder slice. Packed input index A + 2B + 4C + 8D, packed output
// A + 2B + 4S + 8K where S = A^B^C and K = D ^ Maj(A,B,C).
inline constexpr std::array<std::uint64_t, 16> kFullAdderTable = {
    0, 5, 6, 11, 4, 9, 10, 15, 8, 13, 14, 3, 12, 1, 2, 7};

// Majority slice. Same packing; C stays, D <- D ^ Maj(A,B,C).
inline constexpr std::array<std::uint64_t, 16> kMajorityTable = {
    0, 1, 2, 11, 4, 13, 14, 15, 8, 9, 10, 3, 12, 5, 6, 7};

// Half-adder slice. Packed input A + 2B + 4C, packed output A + 2S + 4K
// where S = A^B and K = C ^ (A & B).
inline constexpr std::array<std::uint64_t, 8> kHalfAdderTable = {0, 3, 2, 5, 4, 7, 6, 1};

// The arithmetic these tables were frozen from.
inline std::uint64_t full_adder_model(std::uint64_t idx) {
    const std::uint64_t a = idx & 1, b = (idx >> 1) & 1, c = (idx >> 2) & 1,
                        d = (idx >> 3) & 1;
    const std::uint64_t s = (a + b + c) & 1;
    const std::uint64_t k = d ^ ((a + b + c) >> 1);
    return a | (b << 1) | (s << 2) | (k << 3);
}

inline std::uint64_t majority_model(std::uint64_t idx) {
    const std::uint64_t a = idx & 1, b = (idx >> 1) & 1, c = (idx >> 2) & 1,
                        d = (idx >> 3) & 1;
    const std::uint64_t k = d ^ ((a + b + c) >> 1);
    return a | (b << 1) | (c << 2) | (k << 3);
}

inline std::uint64_t half_adder_model(std::uint64_t idx) {
    const std::uint64_t a = idx & 1, b = (idx >> 1) & 1, c = (idx >> 2) & 1;
    const std::uint64_t s = (a + b) & 1;
    const std::uint64_t k = c ^ ((a + b) >> 1);
    return a | (s << 1) | (k << 2);
}

// One basis state through a circuit, packed index in and out.
inline std::uint64_t apply(const qcsa::Circuit& c, std::uint64_t idx) {
    return qcsa::run(c, qcsa::BasisState::from_index(c.width(), idx)).to_index();
}

}  // namespace fixtures
