#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <random>
#include <string>
#include <utility>

#include "qcsa/layout.hpp"
#include "qcsa/reference.hpp"
#include "qcsa/simulate.hpp"

namespace qcsa {

inline std::string wide_str(wide_uint v) {
    if (v == 0) return "0";
    std::string s;
    while (v > 0) {
        s.insert(s.begin(), static_cast<char>('0' + static_cast<int>(v % 10)));
        v /= 10;
    }
    return s;
}

using ValueMap = std::map<std::string, wide_uint>;

struct CheckFail {
    std::string what;      // which contract broke ("SK value", "ancilla 7", ...)
    std::string expected;
    std::string actual;
};

/// Functional contract of one construction: given input register values and
/// observed output group values, return a failure or nothing. Congruence
/// and range contracts (the modular family) are lambdas; plain adders use
/// expect_values below.
using OracleCheck =
    std::function<std::optional<CheckFail>(const ValueMap& in, const ValueMap& out)>;

/// The common case: a classical function from inputs to exact expected
/// output values, compared entry by entry.
inline OracleCheck expect_values(std::function<ValueMap(const ValueMap&)> model) {
    return [model = std::move(model)](const ValueMap& in,
                                      const ValueMap& out) -> std::optional<CheckFail> {
        const ValueMap want = model(in);
        for (const auto& [name, expected] : want) {
            const auto it = out.find(name);
            if (it == out.end())
                return CheckFail{name, wide_str(expected), "<no such output group>"};
            if (it->second != expected)
                return CheckFail{name, wide_str(expected), wide_str(it->second)};
        }
        return std::nullopt;
    };
}

enum class FailureKind { ValueMismatch, AncillaDirty, OperandClobbered };

inline const char* to_string(FailureKind k) {
    switch (k) {
        case FailureKind::ValueMismatch: return "value-mismatch";
        case FailureKind::AncillaDirty: return "ancilla-dirty";
        case FailureKind::OperandClobbered: return "operand-clobbered";
    }
    return "?";
}

struct Counterexample {
    ValueMap inputs;
    CheckFail fail;
    FailureKind kind = FailureKind::ValueMismatch;
};

struct VerificationReport {
    bool passed = true;
    std::uint64_t trials = 0;
    std::optional<Counterexample> counterexample;

    [[nodiscard]] std::string describe() const {
        if (passed) return "pass (" + std::to_string(trials) + " cases)";
        std::string s = "fail [";
        s += to_string(counterexample->kind);
        s += "] at";
        for (const auto& [name, v] : counterexample->inputs)
            s += " " + name + "=" + wide_str(v);
        s += ": " + counterexample->fail.what + " expected " + counterexample->fail.expected +
             ", got " + counterexample->fail.actual;
        return s;
    }
};

inline constexpr std::uint64_t kDefaultSeed = 1;
inline constexpr std::uint64_t kExhaustiveBitLimit = 20;

struct Domain {
    enum class Mode { Exhaustive, Sample } mode = Mode::Exhaustive;
    std::uint64_t samples = 10000;
    std::uint64_t seed = kDefaultSeed;

    static Domain exhaustive() { return {}; }
    static Domain sample(std::uint64_t count, std::uint64_t seed = kDefaultSeed) {
        return {Mode::Sample, count, seed};
    }
    /// Exhaustive when the input space is small enough, sampled otherwise.
    static Domain pick(std::uint64_t total_input_bits,
                       std::uint64_t bit_limit = kExhaustiveBitLimit,
                       std::uint64_t samples = 10000, std::uint64_t seed = kDefaultSeed) {
        if (total_input_bits <= bit_limit) return exhaustive();
        return sample(samples, seed);
    }
};

namespace detail {

inline wide_uint random_bits(std::mt19937_64& rng, std::size_t nbits) {
    wide_uint v = 0;
    std::size_t got = 0;
    while (got < nbits) {
        const std::size_t take = nbits - got > 32 ? 32 : nbits - got;
        const auto chunk = static_cast<std::uint32_t>(rng() & 0xffffffffu);
        v |= wide_uint{chunk & ((std::uint64_t{1} << take) - 1)} << got;
        got += take;
    }
    return v;
}

}  // namespace detail

/// Drives the circuit over a domain of operand assignments and checks, in
/// this order: oracle contract, preserved operands, ancilla and constant
/// hygiene. Points are visited in a fixed order (ascending for exhaustive,
/// seeded draw order for sampling), so the first failure is deterministic.
inline VerificationReport verify_against_oracle(const Circuit& circuit, const Layout& layout,
                                                const OracleCheck& check, Domain domain) {
    VerificationReport report;

    const std::uint64_t total_bits = layout.total_input_bits();
    if (domain.mode == Domain::Mode::Exhaustive && total_bits > kExhaustiveBitLimit + 6)
        throw std::length_error("exhaustive domain too large; use sampling");

    std::mt19937_64 rng(domain.seed);
    const std::uint64_t points = domain.mode == Domain::Mode::Exhaustive
                                     ? (std::uint64_t{1} << total_bits)
                                     : domain.samples;

    BasisState state(circuit.width());
    for (std::uint64_t point = 0; point < points; ++point) {
        ValueMap in;
        if (domain.mode == Domain::Mode::Exhaustive) {
            std::uint64_t rest = point;
            for (const auto& reg : layout.inputs) {
                const auto width = reg.wires.size();
                in[reg.name] = rest & ((width >= 64 ? ~std::uint64_t{0}
                                                    : (std::uint64_t{1} << width) - 1));
                rest = width >= 64 ? 0 : rest >> width;
            }
        } else {
            for (const auto& reg : layout.inputs)
                in[reg.name] = detail::random_bits(rng, reg.wires.size());
        }

        std::fill(state.bits.begin(), state.bits.end(), 0);
        for (const auto& reg : layout.inputs) layout.encode_input(state, reg.name, in[reg.name]);
        run_in_place(circuit, state);
        ++report.trials;

        ValueMap out;
        for (const auto& group : layout.outputs)
            out[group.name] = layout.decode_output(state, group);

        if (auto fail = check(in, out)) {
            report.passed = false;
            report.counterexample = {in, *fail, FailureKind::ValueMismatch};
            return report;
        }
        for (const auto& reg : layout.inputs) {
            if (!reg.preserved) continue;
            const wide_uint now = layout.decode_input(state, reg);
            if (now != in[reg.name]) {
                report.passed = false;
                report.counterexample = {
                    in,
                    {"operand " + reg.name, wide_str(in[reg.name]), wide_str(now)},
                    FailureKind::OperandClobbered};
                return report;
            }
        }
        for (std::uint32_t w : layout.ancillas) {
            if (state.bits[w] != 0) {
                report.passed = false;
                report.counterexample = {in,
                                         {"ancilla " + std::to_string(w), "0", "1"},
                                         FailureKind::AncillaDirty};
                return report;
            }
        }
        for (const auto& [w, value] : layout.constants) {
            if (state.bits[w] != static_cast<std::uint8_t>(value)) {
                report.passed = false;
                report.counterexample = {
                    in,
                    {"constant " + std::to_string(w), value ? "1" : "0", value ? "0" : "1"},
                    FailureKind::AncillaDirty};
                return report;
            }
        }
    }
    return report;
}

}  // namespace qcsa
