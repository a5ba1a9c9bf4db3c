#include <catch2/catch_amalgamated.hpp>

#include "qcsa/modular.hpp"
#include "qcsa/reference.hpp"

using namespace qcsa;

TEST_CASE("bit-level adders recover integer addition", "[reference]") {
    for (std::uint8_t a = 0; a < 2; ++a)
        for (std::uint8_t b = 0; b < 2; ++b) {
            for (std::uint8_t c = 0; c < 2; ++c) {
                const BitPair r = classical_full_add(a, b, c);
                CHECK(r.sum + 2 * r.carry == a + b + c);
            }
            const BitPair h = classical_half_add(a, b);
            CHECK(h.sum + 2 * h.carry == a + b);
        }
    CHECK_THROWS_AS(classical_full_add(2, 0, 0), std::invalid_argument);
    CHECK_THROWS_AS(classical_half_add(0, 3), std::invalid_argument);
}

TEST_CASE("carry-save value respects the offset", "[reference]") {
    CarrySaveNumber x;
    x.sum_bits = {1, 0, 1};    // 5
    x.carry_bits = {1, 1, 0};  // 3 shifted by one = 6
    CHECK(cs_value(x) == 11);
    x.offset = 0;
    CHECK(cs_value(x) == 8);
    CHECK(cs_value(5, 3) == 11);
    CHECK(cs_value(5, 3, 0) == 8);
    CHECK(cs_value(5, 3, 2) == 17);
}

TEST_CASE("classical_modexp agrees with direct exponentiation", "[reference]") {
    for (std::uint64_t m : {3ULL, 5ULL, 7ULL, 13ULL, 21ULL}) {
        for (std::uint64_t a = 0; a < m; ++a) {
            wide_uint direct = 1 % m;
            for (std::uint64_t e = 0; e < 12; ++e) {
                CHECK(classical_modexp(a, e, m) == static_cast<std::uint64_t>(direct));
                direct = (direct * a) % m;
            }
        }
    }
    CHECK(classical_modexp(0, 0, 7) == 1);  // empty product
    CHECK(classical_modexp(5, 3, 1) == 0);
    CHECK_THROWS_AS(classical_modexp(2, 2, 0), std::invalid_argument);
}

TEST_CASE("modulus context computes the two fold constants", "[reference][modular]") {
    const ModulusContext c43 = make_modulus_context(4, 3);
    CHECK(c43.p == 2);  // 2^3 mod 3
    CHECK(c43.q == 1);  // 2^4 mod 3
    const ModulusContext c57 = make_modulus_context(5, 7);
    CHECK(c57.p == 2);  // 2^4 mod 7
    CHECK(c57.q == 4);  // 2^5 mod 7

    CHECK_THROWS_AS(make_modulus_context(4, 5), std::invalid_argument);   // above 2^(N-2)
    CHECK_THROWS_AS(make_modulus_context(4, 2), std::invalid_argument);   // below 3
    CHECK_THROWS_AS(make_modulus_context(1, 3), std::invalid_argument);   // width too small
    CHECK_THROWS_AS(make_modulus_context(40, 3), std::invalid_argument);  // width too large
}

TEST_CASE("one fold step keeps the residue and shrinks the value", "[reference][modular]") {
    const ModulusContext ctx = make_modulus_context(4, 3);

    // the worked case: 45 = 0b101101 folds to 13 + ovf*q
    CHECK(mod_fold_reference(45, ctx) == 15);
    CHECK(mod_fold_reference(45, ctx) % 3 == 45 % 3);

    // already in range: untouched
    CHECK(mod_fold_reference(7, ctx) == 7);
    // exactly one overflow bit: collapses to q
    CHECK(mod_fold_reference(16, ctx) == 1);

    for (std::uint32_t n : {4u, 5u, 6u, 8u}) {
        for (std::uint64_t m = 3; m <= (std::uint64_t{1} << (n - 2)); m += 2) {
            const ModulusContext ctx2 = make_modulus_context(n, m);
            std::uint64_t bad = 0;
            for (wide_uint x = 0; x < (wide_uint{1} << (2 * n)); ++x) {
                const wide_uint folded = mod_fold_reference(x, ctx2);
                if (folded % m != x % m || folded > x) ++bad;
            }
            INFO("n=" << n << " m=" << m);
            CHECK(bad == 0);  // residue kept, value never grows
        }
    }
}
