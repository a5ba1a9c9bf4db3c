#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "qcsa/reference.hpp"
#include "qcsa/simulate.hpp"

namespace qcsa {

/// A sparse weighted wire set: bits[w] holds the wire whose set state
/// contributes 2^w. Builders shuffle these around; at most one wire per
/// weight within a row (that is what makes it a summand).
struct Row {
    std::map<std::uint32_t, std::uint32_t> bits;

    [[nodiscard]] bool has(std::uint32_t weight) const { return bits.count(weight) != 0; }
    [[nodiscard]] std::uint32_t wire(std::uint32_t weight) const { return bits.at(weight); }
    void put(std::uint32_t weight, std::uint32_t wire) { bits[weight] = wire; }
    [[nodiscard]] bool empty() const { return bits.empty(); }
};

/// An input register as the verification harness sees it: packed bit i of
/// the register's value lives on wires[i]. `offset` records the weight of
/// bit 0 (carry vectors sit at offset 1); oracles apply it themselves.
struct ValueReg {
    std::string name;
    std::vector<std::uint32_t> wires;
    std::uint32_t offset = 0;
    bool preserved = true;
};

/// An observable output: a bag of (weight, wire) contributions. Duplicate
/// weights are allowed (a sum row and a carry row can both own weight w);
/// the observed value is the plain weighted sum.
struct OutputGroup {
    std::string name;
    std::vector<std::pair<std::uint32_t, std::uint32_t>> bits;  // (weight, wire)

    OutputGroup() = default;
    explicit OutputGroup(std::string n) : name(std::move(n)) {}

    void add(std::uint32_t weight, std::uint32_t wire) { bits.emplace_back(weight, wire); }
    void add(const Row& row) {
        for (const auto& [w, wire] : row.bits) bits.emplace_back(w, wire);
    }
};

/// Everything the harness and the resource estimator need to know about a
/// built circuit beyond its gate list.
struct Layout {
    std::vector<ValueReg> inputs;
    std::vector<OutputGroup> outputs;
    std::vector<std::uint32_t> ancillas;                    // must exit 0
    std::vector<std::pair<std::uint32_t, bool>> constants;  // (wire, value), checked at exit

    // Wire accounting for constructions with a formula to answer to: core
    // wires are the ones the closed-form count covers, boundary wires are
    // the carry allowance past the slice width. Empty for small blocks.
    std::vector<std::uint32_t> core_wires;
    std::vector<std::uint32_t> boundary_wires;

    [[nodiscard]] const ValueReg* find_input(const std::string& name) const {
        for (const auto& r : inputs)
            if (r.name == name) return &r;
        return nullptr;
    }
    [[nodiscard]] const OutputGroup* find_output(const std::string& name) const {
        for (const auto& g : outputs)
            if (g.name == name) return &g;
        return nullptr;
    }

    [[nodiscard]] std::uint64_t total_input_bits() const {
        std::uint64_t n = 0;
        for (const auto& r : inputs) n += r.wires.size();
        return n;
    }

    void encode_input(BasisState& s, const std::string& name, wide_uint value) const {
        const ValueReg* r = find_input(name);
        if (r == nullptr) throw std::invalid_argument("no such input register: " + name);
        for (std::size_t i = 0; i < r->wires.size(); ++i)
            s.bits[r->wires[i]] = static_cast<std::uint8_t>((value >> i) & 1u);
        if ((value >> r->wires.size()) != 0)
            throw std::invalid_argument("value does not fit register " + name);
    }

    [[nodiscard]] wide_uint decode_input(const BasisState& s, const ValueReg& r) const {
        wide_uint v = 0;
        for (std::size_t i = 0; i < r.wires.size(); ++i)
            if (s.bits[r.wires[i]]) v += wide_uint{1} << i;
        return v;
    }

    [[nodiscard]] wide_uint decode_output(const BasisState& s, const OutputGroup& g) const {
        wide_uint v = 0;
        for (const auto& [w, wire] : g.bits)
            if (s.bits[wire]) v += wide_uint{1} << w;
        return v;
    }
};

/// A circuit plus its layout; what every builder returns.
struct Built {
    Circuit circuit;
    Layout layout;
};

}  // namespace qcsa
