// Acceptance gate: one check per shipping criterion, one PASS/FAIL line
// each, nonzero exit if anything fails. Each criterion also carries a
// wall-clock budget; blowing the budget is a failure.

#include <chrono>
#include <cstdio>
#include <exception>
#include <random>
#include <string>
#include <vector>

#include "fixtures.hpp"
#include "qcsa/registry.hpp"

using namespace qcsa;

namespace {

int failures = 0;

template <typename Fn>
void criterion(int idx, const char* label, double budget_seconds, Fn body) {
    const auto t0 = std::chrono::steady_clock::now();
    bool ok = false;
    std::string note;
    try {
        ok = body(note);
    } catch (const std::exception& e) {
        ok = false;
        note = e.what();
    }
    const double elapsed =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (elapsed >= budget_seconds) {
        ok = false;
        note += (note.empty() ? "" : "; ") + std::string("over budget");
    }
    if (!ok) ++failures;
    std::printf("criterion %2d  %-58s %s  (%.2fs)\n", idx, label, ok ? "PASS" : "FAIL", elapsed);
    if (!ok && !note.empty()) std::printf("              %s\n", note.c_str());
}

bool verified(const Built& b, const OracleCheck& oracle, Domain dom, std::string& note,
              std::uint64_t expect_trials = 0) {
    const VerificationReport rep = verify_against_oracle(b.circuit, b.layout, oracle, dom);
    if (!rep.passed) {
        note = rep.describe();
        return false;
    }
    if (expect_trials != 0 && rep.trials != expect_trials) {
        note = "expected " + std::to_string(expect_trials) + " trials, ran " +
               std::to_string(rep.trials);
        return false;
    }
    return true;
}

}  // namespace

int main() {
    criterion(1, "slice truth tables (16 + 16 + 8 rows)", 1.0, [](std::string& note) {
        const Built qfa = build_qfa();
        const Built qmg = build_qmg();
        const Built qha = build_qha();
        for (std::uint64_t i = 0; i < 16; ++i) {
            if (fixtures::apply(qfa.circuit, i) != fixtures::kFullAdderTable[i]) {
                note = "full adder row " + std::to_string(i);
                return false;
            }
            if (fixtures::apply(qmg.circuit, i) != fixtures::kMajorityTable[i]) {
                note = "majority row " + std::to_string(i);
                return false;
            }
        }
        for (std::uint64_t i = 0; i < 8; ++i)
            if (fixtures::apply(qha.circuit, i) != fixtures::kHalfAdderTable[i]) {
                note = "half adder row " + std::to_string(i);
                return false;
            }
        return true;
    });

    criterion(2, "ripple adder exhaustive, n = 1..5", 5.0, [](std::string& note) {
        for (std::uint32_t n = 1; n <= 5; ++n) {
            const Built b = build_ripple_adder(n);
            const auto oracle = expect_values([n](const ValueMap& in) {
                const wide_uint total = in.at("A") + in.at("B");
                return ValueMap{{"SUM", total},
                                {"S", total & ((wide_uint{1} << n) - 1)},
                                {"CO", total >> n}};
            });
            if (!verified(b, oracle, Domain::exhaustive(), note,
                          std::uint64_t{1} << (2 * n))) {
                note = "n=" + std::to_string(n) + ": " + note;
                return false;
            }
        }
        return true;
    });

    criterion(3, "3:2 compressor exhaustive, n <= 4", 5.0, [](std::string& note) {
        for (std::uint32_t n = 1; n <= 4; ++n) {
            const Built b = build_csa_3to2(n);
            const auto oracle = expect_values([](const ValueMap& in) {
                const wide_uint a = in.at("A"), bb = in.at("B"), c = in.at("C");
                return ValueMap{{"SK", a + bb + c}, {"S", a ^ bb ^ c}};
            });
            if (!verified(b, oracle, Domain::exhaustive(), note,
                          std::uint64_t{1} << (3 * n))) {
                note = "n=" + std::to_string(n) + ": " + note;
                return false;
            }
        }
        return true;
    });

    criterion(4, "4:2 compressor and 8-input tree", 30.0, [](std::string& note) {
        for (std::uint32_t n = 1; n <= 4; ++n) {
            const Built b = build_csa_4to2(n);
            const auto oracle = expect_values([](const ValueMap& in) {
                return ValueMap{{"SK", in.at("A") + in.at("B") + in.at("C") + in.at("D")}};
            });
            if (!verified(b, oracle, Domain::exhaustive(), note)) {
                note = "4:2 n=" + std::to_string(n) + ": " + note;
                return false;
            }
        }
        const auto tree_oracle = expect_values([](const ValueMap& in) {
            wide_uint total = 0;
            for (const auto& [name, v] : in) total += v;
            return ValueMap{{"SK", total}};
        });
        const Built narrow = build_tree_adder(8, 2);  // 16 input bits, exhaustive
        if (!verified(narrow, tree_oracle, Domain::exhaustive(), note, 65536)) {
            note = "tree(8,2): " + note;
            return false;
        }
        const Built wide = build_tree_adder(8, 4);  // 32 input bits, sampled
        if (!verified(wide, tree_oracle, Domain::sample(10000, 1), note, 10000)) {
            note = "tree(8,4): " + note;
            return false;
        }
        return true;
    });

    criterion(5, "closed-form counts and the depth-growth law", 1.0, [](std::string& note) {
        const bool exact =
            formula_value("tree_qubits", {{"N", 8}, {"L", 4}}) == 56 &&
            formula_value("tree_delay", {{"N", 8}}) == 7 &&
            formula_value("cs_tree_qubits", {{"N", 4}, {"L", 4}}) == 56 &&
            formula_value("cs_tree_delay", {{"N", 4}}) == 7 &&
            formula_value("mul_adder_qubits", {{"N", 2}}) == 24 &&
            formula_value("mul_total_qubits", {{"N", 2}}) == 32;
        if (!exact) {
            note = "formula evaluation drifted";
            return false;
        }
        for (std::uint32_t n : {4u, 8u}) {
            for (std::uint32_t l = 1; l <= 4; ++l) {
                const ResourceReport r = measure(build_tree_adder(n, l));
                if (r.core_wires != (2 * n - 2) * l) {
                    note = "tree core wires at N=" + std::to_string(n) +
                           " L=" + std::to_string(l) + ": " + std::to_string(r.core_wires);
                    return false;
                }
            }
        }
        const Rational d4 = build_tree_adder(4, 4).circuit.qfa_depth();
        const Rational d8 = build_tree_adder(8, 4).circuit.qfa_depth();
        const Rational d16 = build_tree_adder(16, 4).circuit.qfa_depth();
        if (!(d8 - d4 == Rational{4}) || !(d16 - d8 == Rational{4})) {
            note = "depth growth per doubling is not 4";
            return false;
        }
        return true;
    });

    criterion(6, "carry-save multiplier", 60.0, [](std::string& note) {
        const auto oracle = expect_values([](const ValueMap& in) {
            const wide_uint x = in.at("XS") + 2 * in.at("XK");
            const wide_uint y = in.at("YS") + 2 * in.at("YK");
            return ValueMap{{"P", x * y}};
        });
        for (std::uint32_t n : {1u, 2u}) {
            const Built b = build_cs_multiplier(n);
            if (!verified(b, oracle, Domain::exhaustive(), note,
                          std::uint64_t{1} << (4 * n))) {
                note = "n=" + std::to_string(n) + ": " + note;
                return false;
            }
        }
        const Built b3 = build_cs_multiplier(3);
        if (!verified(b3, oracle, Domain::sample(10000, 1), note, 10000)) {
            note = "n=3: " + note;
            return false;
        }
        return true;
    });

    criterion(7, "classical fold keeps residues, 45 included", 5.0, [](std::string& note) {
        struct Case {
            std::uint32_t n;
            std::uint64_t m;
        };
        for (const Case c : {Case{4, 3}, Case{5, 3}, Case{5, 5}, Case{5, 7}}) {
            const ModulusContext ctx = make_modulus_context(c.n, c.m);
            for (wide_uint x = 0; x < (wide_uint{1} << (2 * c.n)); ++x)
                if (mod_fold_reference(x, ctx) % c.m != x % c.m) {
                    note = "residue broke at n=" + std::to_string(c.n) +
                           " m=" + std::to_string(c.m);
                    return false;
                }
        }
        const ModulusContext c43 = make_modulus_context(4, 3);
        if (mod_fold_reference(45, c43) % 3 != 0) {
            note = "all-ones worst case is not divisible by 3 after folding";
            return false;
        }
        return true;
    });

    criterion(8, "modular compressor, probes never collide", 30.0, [](std::string& note) {
        const ModulusContext ctx = make_modulus_context(4, 3);
        const Built b = build_mod_csa(ctx, true);
        const auto oracle = [ctx](const ValueMap& in,
                                  const ValueMap& out) -> std::optional<CheckFail> {
            const wide_uint want = (in.at("A") + in.at("B") + in.at("C")) % ctx.m;
            const wide_uint sk = out.at("SK");
            if (sk % ctx.m != want)
                return CheckFail{"SK residue", wide_str(want), wide_str(sk % ctx.m)};
            if (sk >= (wide_uint{1} << ctx.n))
                return CheckFail{"SK range", "< 16", wide_str(sk)};
            if (out.at("T1") == 1 && out.at("T2") == 1)
                return CheckFail{"top carries", "at most one", "both"};
            return std::nullopt;
        };
        return verified(b, oracle, Domain::exhaustive(), note, 4096);
    });

    criterion(9, "normalized exponentiation equals the classical value", 300.0,
              [](std::string& note) {
                  const ModulusContext ctx = make_modulus_context(4, 3);
                  for (std::uint64_t a = 0; a < 3; ++a) {
                      const Built b = build_modexp(ctx, a, 3, true);
                      const auto oracle = expect_values([a, ctx](const ValueMap& in) {
                          return ValueMap{
                              {"RES", wide_uint{classical_modexp(
                                          a, static_cast<std::uint64_t>(in.at("E")), ctx.m)}}};
                      });
                      if (!verified(b, oracle, Domain::exhaustive(), note, 8)) {
                          note = "base " + std::to_string(a) + ": " + note;
                          return false;
                      }
                  }
                  return true;
              });

    criterion(10, "scaling ratios at N = 1000", 1.0, [](std::string& note) {
        const ScalingReport rep = scaling_report({1000});
        const ScalingRow& row = rep.rows.at(0);
        if (row.delay_ratio != 100000.0) {
            note = "delay ratio " + std::to_string(row.delay_ratio);
            return false;
        }
        if (row.qubit_factor != 1000.0) {
            note = "qubit factor " + std::to_string(row.qubit_factor);
            return false;
        }
        return true;
    });

    criterion(11, "inverse-composition identity per construction", 60.0,
              [](std::string& note) {
                  struct Smallest {
                      const char* name;
                      BuilderParams params;
                  };
                  std::vector<Smallest> picks;
                  for (const BuilderSpec& spec : builder_registry()) {
                      BuilderParams p = spec.defaults;
                      // shrink to the smallest the builder accepts
                      if (p.n != 0) p.n = 1;
                      if (p.inputs != 0) {
                          p.inputs = 3;
                          p.bits_each = 1;
                      }
                      if (spec.name == "modexp") {
                          p.base = 0;
                          p.expwidth = 1;
                      }
                      picks.push_back({spec.name.c_str(), p});
                  }
                  for (const auto& [name, params] : picks) {
                      const Built b = find_builder(name)->build(params);
                      Circuit undo = b.circuit;
                      undo.append_inverse_of_tail(0);
                      const std::uint32_t w = undo.width();
                      if (w <= 12) {
                          for (std::uint64_t v = 0; v < (std::uint64_t{1} << w); ++v) {
                              const BasisState s = BasisState::from_index(w, v);
                              if (run(undo, s) != s) {
                                  note = std::string(name) + " not identity at " +
                                         std::to_string(v);
                                  return false;
                              }
                          }
                      } else {
                          std::mt19937_64 rng(1);
                          for (int i = 0; i < 1000; ++i) {
                              BasisState s(w);
                              for (auto& bit : s.bits)
                                  bit = static_cast<std::uint8_t>(rng() & 1u);
                              if (run(undo, s) != s) {
                                  note = std::string(name) + " not identity on a sampled state";
                                  return false;
                              }
                          }
                      }
                  }
                  return true;
              });

    if (failures == 0) {
        std::printf("all criteria passed\n");
        return 0;
    }
    std::printf("%d criterion(s) failed\n", failures);
    return 1;
}
