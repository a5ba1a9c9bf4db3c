#include <catch2/catch_amalgamated.hpp>

#include "qcsa/resources.hpp"
#include "qcsa/tree.hpp"
#include "qcsa/verify.hpp"

using namespace qcsa;

namespace {

OracleCheck sum_of_all_inputs() {
    return expect_values([](const ValueMap& in) {
        wide_uint total = 0;
        for (const auto& [name, v] : in) total += v;
        return ValueMap{{"SK", total}};
    });
}

}  // namespace

TEST_CASE("tree adder sums exhaustively at small shapes", "[tree]") {
    struct Shape {
        std::uint32_t inputs, bits;
    };
    for (const Shape s : {Shape{3, 2}, Shape{4, 2}, Shape{4, 3}, Shape{5, 2}, Shape{6, 2},
                          Shape{7, 2}, Shape{8, 2}}) {
        INFO("inputs=" << s.inputs << " bits=" << s.bits);
        const Built b = build_tree_adder(s.inputs, s.bits);
        const VerificationReport rep = verify_against_oracle(b.circuit, b.layout,
                                                             sum_of_all_inputs(),
                                                             Domain::exhaustive());
        INFO(rep.describe());
        REQUIRE(rep.passed);
        CHECK(rep.trials == (std::uint64_t{1} << (s.inputs * s.bits)));
    }
}

TEST_CASE("tree adder sums under sampling at the reference shape", "[tree]") {
    const Built b = build_tree_adder(8, 4);
    const VerificationReport rep = verify_against_oracle(b.circuit, b.layout,
                                                         sum_of_all_inputs(),
                                                         Domain::sample(10000));
    INFO(rep.describe());
    REQUIRE(rep.passed);
    CHECK(rep.trials == 10000);
}

TEST_CASE("tree adder rejects degenerate shapes", "[tree]") {
    CHECK_THROWS_AS(build_tree_adder(1, 4), std::invalid_argument);
    CHECK_THROWS_AS(build_tree_adder(8, 0), std::invalid_argument);
}

TEST_CASE("tree core wires hit (2N-2)L at powers of two", "[tree][resources]") {
    for (std::uint32_t n : {4u, 8u}) {
        for (std::uint32_t l = 1; l <= 4; ++l) {
            INFO("N=" << n << " L=" << l);
            const Built b = build_tree_adder(n, l);
            const ResourceReport r = measure(b);
            CHECK(r.core_wires == (2 * n - 2) * l);
            CHECK(r.core_wires + r.boundary_wires == r.qubits);
        }
    }
}

TEST_CASE("tree block depth grows by four per doubling", "[tree][resources]") {
    // the law behind the 4*ceil(log2 N) - 5 delay count, measured at L=4
    // where every level is wide enough to overlap the way the count assumes
    const Rational d4 = build_tree_adder(4, 4).circuit.qfa_depth();
    const Rational d8 = build_tree_adder(8, 4).circuit.qfa_depth();
    const Rational d16 = build_tree_adder(16, 4).circuit.qfa_depth();
    CHECK(d8 - d4 == Rational{4});
    CHECK(d16 - d8 == Rational{4});
    // and the measured path never beats the closed form
    CHECK(!(Rational{4 * 2 - 5} < d4));
    CHECK(!(Rational{4 * 3 - 5} < d8));
    CHECK(!(Rational{4 * 4 - 5} < d16));
}

TEST_CASE("tree roles partition its width", "[tree][resources]") {
    const Built b = build_tree_adder(8, 4);
    const ResourceReport r = measure(b);
    CHECK(r.qubits == b.circuit.width());
    CHECK(r.operand_wires + r.ancilla_wires + r.constant_wires + r.result_wires +
              r.carry_wires ==
          r.qubits);
    CHECK(r.operand_wires == 32);  // eight four-bit summands
}
