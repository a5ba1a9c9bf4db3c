#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "qcsa/adders.hpp"
#include "qcsa/modular.hpp"
#include "qcsa/multiplier.hpp"
#include "qcsa/resources.hpp"
#include "qcsa/tree.hpp"
#include "qcsa/verify.hpp"

namespace qcsa {

struct BuilderParams {
    std::uint32_t n = 0;          // -n: slice count for the small adders
    std::uint32_t inputs = 0;     // -N: number of tree summands
    std::uint32_t bits_each = 0;  // -L: bits per tree summand
    std::uint32_t bits = 0;       // --bits: modular data width
    std::uint64_t modulus = 0;    // --modulus
    std::uint64_t base = 0;       // --base
    std::uint32_t expwidth = 0;   // --expwidth: exponent register width
};

struct BuilderSpec {
    std::string name;
    std::string synopsis;
    std::vector<std::string> flags;  // parameter names this builder accepts
    BuilderParams defaults;
    std::function<Built(const BuilderParams&)> build;
    std::function<OracleCheck(const BuilderParams&)> oracle;
    std::function<void(const BuilderParams&, ResourceReport&)> attach_formulas;  // optional
};

namespace detail {

inline wide_uint bit_majority(wide_uint a, wide_uint b, wide_uint c) {
    return (a & b) | (a & c) | (b & c);
}

inline ModulusContext context_of(const BuilderParams& p) {
    return make_modulus_context(p.bits, p.modulus);
}

inline OracleCheck congruence_check(const ModulusContext& ctx, std::string group,
                                    std::function<wide_uint(const ValueMap&)> value) {
    return [ctx, group = std::move(group),
            value = std::move(value)](const ValueMap& in,
                                      const ValueMap& out) -> std::optional<CheckFail> {
        const wide_uint want = value(in) % ctx.m;
        const auto it = out.find(group);
        if (it == out.end()) return CheckFail{group, wide_str(want), "<no such output group>"};
        if (it->second % ctx.m != want)
            return CheckFail{group + " mod " + std::to_string(ctx.m), wide_str(want),
                             wide_str(it->second % ctx.m)};
        if (it->second >= (wide_uint{1} << ctx.n))
            return CheckFail{group + " range", "below " + wide_str(wide_uint{1} << ctx.n),
                             wide_str(it->second)};
        return std::nullopt;
    };
}

/// Tracks the normalizer gate for gate: collapse the pair, then for each
/// trial stage record whether the subtraction underflowed and keep the
/// smaller value when it did not.
inline wide_uint normalizer_model(const ModulusContext& ctx, wide_uint s, wide_uint k,
                                  wide_uint& signs) {
    const std::uint32_t w = ctx.n + 1;
    const wide_uint mask = (wide_uint{1} << w) - 1;
    wide_uint r = (s + 2 * k) & mask;
    const std::uint64_t stages = (((std::uint64_t{1} << ctx.n) - 1) + ctx.m - 1) / ctx.m;
    signs = 0;
    for (std::uint64_t t = 0; t < stages; ++t) {
        const wide_uint sub = (r - ctx.m) & mask;
        if (((sub >> (w - 1)) & 1) != 0)
            signs |= wide_uint{1} << t;
        else
            r = sub;
    }
    return r;
}

inline void attach_tree_formulas(const BuilderParams& p, ResourceReport& r) {
    const bool pow2 = (p.inputs & (p.inputs - 1)) == 0;
    const std::int64_t n = p.inputs;
    const std::int64_t l = p.bits_each;
    r.formulas.push_back({"tree_qubits", formula_value("tree_qubits", {{"N", n}, {"L", l}}),
                          Rational(r.core_wires), ""});
    r.formulas.back().relation =
        classify_relation(r.formulas.back().paper, r.formulas.back().measured, pow2);
    if (n >= 2) {
        r.formulas.push_back(
            {"tree_delay", formula_value("tree_delay", {{"N", n}}), r.qfa_depth, ""});
        r.formulas.back().relation =
            classify_relation(r.formulas.back().paper, r.formulas.back().measured, false);
    }
    if (n % 2 == 0) {
        r.formulas.push_back({"cs_tree_qubits",
                              formula_value("cs_tree_qubits", {{"N", n / 2}, {"L", l}}),
                              Rational(r.core_wires), ""});
        r.formulas.back().relation =
            classify_relation(r.formulas.back().paper, r.formulas.back().measured, pow2);
        if (n / 2 >= 2) {
            r.formulas.push_back({"cs_tree_delay", formula_value("cs_tree_delay", {{"N", n / 2}}),
                                  r.qfa_depth, ""});
            r.formulas.back().relation =
                classify_relation(r.formulas.back().paper, r.formulas.back().measured, false);
        }
    }
}

inline void attach_multiplier_formulas(const BuilderParams& p, ResourceReport& r) {
    const std::int64_t n = p.n;
    const std::int64_t adder_wires = static_cast<std::int64_t>(r.qubits) - 4 * n;
    r.formulas.push_back({"mul_adder_qubits", formula_value("mul_adder_qubits", {{"N", n}}),
                          Rational(adder_wires), ""});
    r.formulas.back().relation =
        classify_relation(r.formulas.back().paper, r.formulas.back().measured, false);
    r.formulas.push_back({"mul_total_qubits", formula_value("mul_total_qubits", {{"N", n}}),
                          Rational(r.qubits), ""});
    r.formulas.back().relation =
        classify_relation(r.formulas.back().paper, r.formulas.back().measured, false);
}

}  // namespace detail

inline const std::vector<BuilderSpec>& builder_registry() {
    static const std::vector<BuilderSpec> table = [] {
        std::vector<BuilderSpec> t;

        t.push_back({"qfa",
                     "single quantum full adder slice (A,B,C,D)",
                     {},
                     {},
                     [](const BuilderParams&) { return build_qfa(); },
                     [](const BuilderParams&) {
                         return expect_values([](const ValueMap& in) {
                             const wide_uint a = in.at("A"), b = in.at("B"), c = in.at("C");
                             return ValueMap{
                                 {"S", a ^ b ^ c},
                                 {"K", in.at("D") ^ detail::bit_majority(a, b, c)}};
                         });
                     },
                     nullptr});

        t.push_back({"qmg",
                     "single majority gate slice (A,B,C,D)",
                     {},
                     {},
                     [](const BuilderParams&) { return build_qmg(); },
                     [](const BuilderParams&) {
                         return expect_values([](const ValueMap& in) {
                             return ValueMap{{"K", in.at("D") ^ detail::bit_majority(
                                                                    in.at("A"), in.at("B"),
                                                                    in.at("C"))}};
                         });
                     },
                     nullptr});

        t.push_back({"qha",
                     "single quantum half adder slice (A,B,C)",
                     {},
                     {},
                     [](const BuilderParams&) { return build_qha(); },
                     [](const BuilderParams&) {
                         return expect_values([](const ValueMap& in) {
                             return ValueMap{{"S", in.at("A") ^ in.at("B")},
                                             {"K", in.at("C") ^ (in.at("A") & in.at("B"))}};
                         });
                     },
                     nullptr});

        t.push_back({"sum",
                     "three-way parity slice (A,B into T)",
                     {},
                     {},
                     [](const BuilderParams&) { return build_sum(); },
                     [](const BuilderParams&) {
                         return expect_values([](const ValueMap& in) {
                             return ValueMap{{"S", in.at("T") ^ in.at("A") ^ in.at("B")}};
                         });
                     },
                     nullptr});

        {
            BuilderSpec s;
            s.name = "ripple";
            s.synopsis = "in-place ripple-carry adder, B += A with carry out";
            s.flags = {"n"};
            s.defaults.n = 4;
            s.build = [](const BuilderParams& p) { return build_ripple_adder(p.n); };
            s.oracle = [](const BuilderParams& p) {
                const std::uint32_t n = p.n;
                return expect_values([n](const ValueMap& in) {
                    const wide_uint total = in.at("A") + in.at("B");
                    return ValueMap{{"SUM", total},
                                    {"S", total & ((wide_uint{1} << n) - 1)},
                                    {"CO", total >> n}};
                });
            };
            t.push_back(std::move(s));
        }

        {
            BuilderSpec s;
            s.name = "csa32";
            s.synopsis = "carry-save 3:2 compressor over n slices";
            s.flags = {"n"};
            s.defaults.n = 4;
            s.build = [](const BuilderParams& p) { return build_csa_3to2(p.n); };
            s.oracle = [](const BuilderParams&) {
                return expect_values([](const ValueMap& in) {
                    const wide_uint a = in.at("A"), b = in.at("B"), c = in.at("C");
                    return ValueMap{{"SK", a + b + c}, {"S", a ^ b ^ c}};
                });
            };
            t.push_back(std::move(s));
        }

        {
            BuilderSpec s;
            s.name = "csa42";
            s.synopsis = "carry-save 4:2 compressor over n slices";
            s.flags = {"n"};
            s.defaults.n = 4;
            s.build = [](const BuilderParams& p) { return build_csa_4to2(p.n); };
            s.oracle = [](const BuilderParams&) {
                return expect_values([](const ValueMap& in) {
                    return ValueMap{
                        {"SK", in.at("A") + in.at("B") + in.at("C") + in.at("D")}};
                });
            };
            t.push_back(std::move(s));
        }

        {
            BuilderSpec s;
            s.name = "tree";
            s.synopsis = "carry-save adder tree over N summands of L bits";
            s.flags = {"N", "L"};
            s.defaults.inputs = 8;
            s.defaults.bits_each = 4;
            s.build = [](const BuilderParams& p) { return build_tree_adder(p.inputs, p.bits_each); };
            s.oracle = [](const BuilderParams&) {
                return expect_values([](const ValueMap& in) {
                    wide_uint total = 0;
                    for (const auto& [name, v] : in) total += v;
                    return ValueMap{{"SK", total}};
                });
            };
            s.attach_formulas = detail::attach_tree_formulas;
            t.push_back(std::move(s));
        }

        {
            BuilderSpec s;
            s.name = "csmul";
            s.synopsis = "carry-save multiplier over two carry-save operands";
            s.flags = {"n"};
            s.defaults.n = 2;
            s.build = [](const BuilderParams& p) { return build_cs_multiplier(p.n); };
            s.oracle = [](const BuilderParams&) {
                return expect_values([](const ValueMap& in) {
                    const wide_uint x = in.at("XS") + 2 * in.at("XK");
                    const wide_uint y = in.at("YS") + 2 * in.at("YK");
                    return ValueMap{{"P", x * y}};
                });
            };
            s.attach_formulas = detail::attach_multiplier_formulas;
            t.push_back(std::move(s));
        }

        {
            BuilderSpec s;
            s.name = "modcsa";
            s.synopsis = "modular 3:2 compressor, result pair below 2^N";
            s.flags = {"bits", "modulus"};
            s.defaults.bits = 4;
            s.defaults.modulus = 3;
            s.build = [](const BuilderParams& p) { return build_mod_csa(detail::context_of(p)); };
            s.oracle = [](const BuilderParams& p) {
                return detail::congruence_check(detail::context_of(p), "SK", [](const ValueMap& in) {
                    return in.at("A") + in.at("B") + in.at("C");
                });
            };
            t.push_back(std::move(s));
        }

        {
            BuilderSpec s;
            s.name = "modmul";
            s.synopsis = "modular carry-save multiplier";
            s.flags = {"bits", "modulus"};
            s.defaults.bits = 4;
            s.defaults.modulus = 3;
            s.build = [](const BuilderParams& p) {
                return build_mod_multiplier(detail::context_of(p));
            };
            s.oracle = [](const BuilderParams& p) {
                return detail::congruence_check(detail::context_of(p), "P", [](const ValueMap& in) {
                    return (in.at("XS") + 2 * in.at("XK")) * (in.at("YS") + 2 * in.at("YK"));
                });
            };
            t.push_back(std::move(s));
        }

        {
            BuilderSpec s;
            s.name = "modexp";
            s.synopsis = "modular exponentiation of a classical base by a quantum exponent";
            s.flags = {"bits", "modulus", "base", "expwidth"};
            s.defaults.bits = 4;
            s.defaults.modulus = 3;
            s.defaults.base = 2;
            s.defaults.expwidth = 2;
            s.build = [](const BuilderParams& p) {
                return build_modexp(detail::context_of(p), p.base, p.expwidth);
            };
            s.oracle = [](const BuilderParams& p) {
                const std::uint64_t base = p.base;
                const ModulusContext ctx = detail::context_of(p);
                return detail::congruence_check(ctx, "R", [base, ctx](const ValueMap& in) {
                    return wide_uint{classical_modexp(base, static_cast<std::uint64_t>(in.at("E")),
                                                      ctx.m)};
                });
            };
            t.push_back(std::move(s));
        }

        {
            BuilderSpec s;
            s.name = "normalize";
            s.synopsis = "carry-save pair to unique residue below M";
            s.flags = {"bits", "modulus"};
            s.defaults.bits = 4;
            s.defaults.modulus = 3;
            s.build = [](const BuilderParams& p) {
                return build_final_normalizer(detail::context_of(p));
            };
            s.oracle = [](const BuilderParams& p) {
                const ModulusContext ctx = detail::context_of(p);
                return [ctx](const ValueMap& in, const ValueMap& out) -> std::optional<CheckFail> {
                    wide_uint signs = 0;
                    const wide_uint want =
                        detail::normalizer_model(ctx, in.at("S"), in.at("K"), signs);
                    if (out.at("R") != want)
                        return CheckFail{"R", wide_str(want), wide_str(out.at("R"))};
                    if (out.at("SIGNS") != signs)
                        return CheckFail{"SIGNS", wide_str(signs), wide_str(out.at("SIGNS"))};
                    const wide_uint cs = in.at("S") + 2 * in.at("K");
                    if (cs < (wide_uint{1} << ctx.n) && want != cs % ctx.m)
                        return CheckFail{"R residue", wide_str(cs % ctx.m), wide_str(want)};
                    return std::nullopt;
                };
            };
            t.push_back(std::move(s));
        }

        return t;
    }();
    return table;
}

inline const BuilderSpec* find_builder(const std::string& name) {
    for (const BuilderSpec& s : builder_registry())
        if (s.name == name) return &s;
    return nullptr;
}

/// Builds the named circuit, measures it, and attaches whatever formula
/// comparisons are registered for it.
inline ResourceReport measure_named(const BuilderSpec& spec, const BuilderParams& params) {
    const Built b = spec.build(params);
    ResourceReport r = measure(b);
    if (spec.attach_formulas) spec.attach_formulas(params, r);
    return r;
}

}  // namespace qcsa
