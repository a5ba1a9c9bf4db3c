#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "qcsa/adders.hpp"
#include "qcsa/simulate.hpp"

using namespace qcsa;

TEST_CASE("basis state round-trips through its index", "[simulate]") {
    for (std::uint64_t v = 0; v < 32; ++v)
        CHECK(BasisState::from_index(5, v).to_index() == v);
    CHECK_THROWS_AS(BasisState::from_index(70, 0), std::length_error);
}

TEST_CASE("running a circuit needs a matching width", "[simulate]") {
    Circuit c(3);
    BasisState narrow(2);
    CHECK_THROWS_AS(run_in_place(c, narrow), std::invalid_argument);
}

TEST_CASE("gate semantics on basis states", "[simulate]") {
    Circuit c(3);
    c.x(0);
    CHECK(run(c, BasisState::from_index(3, 0)).to_index() == 1);

    Circuit d(3);
    d.cx(0, 1);
    CHECK(run(d, BasisState::from_index(3, 1)).to_index() == 3);
    CHECK(run(d, BasisState::from_index(3, 2)).to_index() == 2);

    Circuit e(3);
    e.ccx(0, 1, 2);
    CHECK(run(e, BasisState::from_index(3, 3)).to_index() == 7);
    CHECK(run(e, BasisState::from_index(3, 1)).to_index() == 1);
}

TEST_CASE("truth tables of this gate set are permutations", "[simulate][property]") {
    std::mt19937_64 rng(3);
    for (int trial = 0; trial < 20; ++trial) {
        Circuit c(5);
        for (int i = 0; i < 25; ++i) {
            const auto t = static_cast<std::uint32_t>(rng() % 5);
            const auto a = static_cast<std::uint32_t>(rng() % 5);
            if (rng() % 2 == 0)
                c.x(t);
            else if (a != t)
                c.cx(a, t);
        }
        const TruthTable t = truth_table(c);
        REQUIRE(t.is_permutation());
        // composing with the inverse permutation is the identity
        const TruthTable inv = truth_table(c.inverse());
        for (std::uint64_t v = 0; v < t.rows.size(); ++v) CHECK(inv.rows[t.rows[v]] == v);
    }
}

TEST_CASE("truth table respects the width limit", "[simulate]") {
    CHECK_THROWS_AS(truth_table(Circuit(24)), std::length_error);
    CHECK(truth_table(Circuit(21), 21).rows.size() == std::uint64_t{1} << 21);
}

TEST_CASE("verify_permutation passes real circuits and catches collisions", "[simulate]") {
    const Built qfa = build_qfa();
    const PermutationCheck ok = verify_permutation(qfa.circuit);
    CHECK(ok.passed);
    CHECK(ok.trials == 16);

    // a mapping that merges two inputs must be flagged with the pair
    const PermutationCheck bad =
        verify_permutation(2, [](std::uint64_t i) { return i & ~std::uint64_t{1}; });
    REQUIRE(!bad.passed);
    CHECK(bad.collision_a == 0);
    CHECK(bad.collision_b == 1);

    // out-of-range images are also not permutations
    const PermutationCheck wide = verify_permutation(2, [](std::uint64_t) { return 9; });
    CHECK(!wide.passed);

    CHECK_THROWS_AS(verify_permutation(Circuit(25)), std::length_error);
}
