#include <catch2/catch_amalgamated.hpp>

#include "qcsa/modular.hpp"
#include "qcsa/verify.hpp"

using namespace qcsa;

namespace {

OracleCheck residue_in_range(const ModulusContext& ctx, const std::string& group,
                             std::function<wide_uint(const ValueMap&)> value) {
    return [ctx, group, value = std::move(value)](
               const ValueMap& in, const ValueMap& out) -> std::optional<CheckFail> {
        const wide_uint got = out.at(group);
        const wide_uint want = value(in) % ctx.m;
        if (got % ctx.m != want)
            return CheckFail{group + " residue", wide_str(want), wide_str(got % ctx.m)};
        if (got >= (wide_uint{1} << ctx.n))
            return CheckFail{group + " range", "< 2^" + std::to_string(ctx.n), wide_str(got)};
        return std::nullopt;
    };
}

wide_uint three_way(const ValueMap& in) { return in.at("A") + in.at("B") + in.at("C"); }

}  // namespace

TEST_CASE("modular compressor folds three operands into range", "[modular]") {
    struct Case {
        std::uint32_t n;
        std::uint64_t m;
    };
    for (const Case c : {Case{4, 3}, Case{5, 7}, Case{5, 8}, Case{6, 5}, Case{6, 13},
                         Case{6, 16}, Case{8, 43}, Case{8, 63}}) {
        INFO("n=" << c.n << " m=" << c.m);
        const ModulusContext ctx = make_modulus_context(c.n, c.m);
        const Built b = build_mod_csa(ctx);
        const Domain dom = Domain::pick(b.layout.total_input_bits(), 14, 3000);
        const VerificationReport rep = verify_against_oracle(
            b.circuit, b.layout, residue_in_range(ctx, "SK", three_way), dom);
        INFO(rep.describe());
        REQUIRE(rep.passed);
    }
}

TEST_CASE("probed compressor never fires both top carries", "[modular][property]") {
    // the final half adder of the raw cascade is replaced by two cnots;
    // that is sound only if the two kept top carries are never both one.
    // the probe wires expose them.
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
        const wide_uint t1 = out.at("T1"), t2 = out.at("T2");
        if (t1 == 1 && t2 == 1) return CheckFail{"top carries", "at most one set", "both set"};
        const wide_uint s_top = (out.at("S") >> (ctx.n - 1)) & 1;
        if (s_top != (t1 ^ t2))
            return CheckFail{"S top bit", wide_str(t1 ^ t2), wide_str(s_top)};
        return std::nullopt;
    };
    const VerificationReport rep =
        verify_against_oracle(b.circuit, b.layout, oracle, Domain::exhaustive());
    INFO(rep.describe());
    REQUIRE(rep.passed);
    CHECK(rep.trials == 4096);
}

TEST_CASE("modular compressor certifies every admissible modulus", "[modular][sweep]") {
    // the fold cascade stops once its tracked bound proves the output pair
    // fits the width; every (N, M) the context accepts must reach that
    // certificate, and the built circuit must still be correct
    std::mt19937_64 rng(5);
    for (std::uint32_t n = 4; n <= 9; ++n) {
        for (std::uint64_t m = 3; m <= (std::uint64_t{1} << (n - 2)); ++m) {
            INFO("n=" << n << " m=" << m);
            const ModulusContext ctx = make_modulus_context(n, m);
            Built b;
            REQUIRE_NOTHROW(b = build_mod_csa(ctx));
            const VerificationReport rep =
                verify_against_oracle(b.circuit, b.layout, residue_in_range(ctx, "SK", three_way),
                                      Domain::sample(150, rng()));
            INFO(rep.describe());
            REQUIRE(rep.passed);
        }
    }
}

TEST_CASE("modular multiplier multiplies carry-save pairs", "[modular]") {
    const auto product = [](const ValueMap& in) {
        return (in.at("XS") + 2 * in.at("XK")) * (in.at("YS") + 2 * in.at("YK"));
    };

    SECTION("exhaustive at the smallest context") {
        const ModulusContext ctx = make_modulus_context(4, 3);
        const Built b = build_mod_multiplier(ctx);
        const VerificationReport rep = verify_against_oracle(
            b.circuit, b.layout, residue_in_range(ctx, "P", product), Domain::exhaustive());
        INFO(rep.describe());
        REQUIRE(rep.passed);
        CHECK(rep.trials == 65536);
    }
    SECTION("sampled at a wider context") {
        const ModulusContext ctx = make_modulus_context(5, 7);
        const Built b = build_mod_multiplier(ctx);
        const VerificationReport rep = verify_against_oracle(
            b.circuit, b.layout, residue_in_range(ctx, "P", product), Domain::sample(1500));
        INFO(rep.describe());
        REQUIRE(rep.passed);
    }
}

TEST_CASE("modular exponentiation matches the classical model", "[modular]") {
    const ModulusContext ctx = make_modulus_context(4, 3);
    for (std::uint64_t base : {0ULL, 1ULL, 2ULL}) {
        INFO("base=" << base);
        const Built b = build_modexp(ctx, base, 3);
        const auto oracle = residue_in_range(ctx, "R", [base, ctx](const ValueMap& in) {
            return wide_uint{
                classical_modexp(base, static_cast<std::uint64_t>(in.at("E")), ctx.m)};
        });
        const VerificationReport rep =
            verify_against_oracle(b.circuit, b.layout, oracle, Domain::exhaustive());
        INFO(rep.describe());
        REQUIRE(rep.passed);
        CHECK(rep.trials == 8);
    }
}

TEST_CASE("normalized exponentiation lands on the exact residue", "[modular]") {
    const ModulusContext ctx = make_modulus_context(4, 3);
    const Built b = build_modexp(ctx, 2, 2, true);
    const auto oracle = [ctx](const ValueMap& in,
                              const ValueMap& out) -> std::optional<CheckFail> {
        const wide_uint want = classical_modexp(2, static_cast<std::uint64_t>(in.at("E")), ctx.m);
        if (out.at("RES") != want)
            return CheckFail{"RES", wide_str(want), wide_str(out.at("RES"))};
        return std::nullopt;
    };
    const VerificationReport rep =
        verify_against_oracle(b.circuit, b.layout, oracle, Domain::exhaustive());
    INFO(rep.describe());
    REQUIRE(rep.passed);
    CHECK(rep.trials == 4);
}

TEST_CASE("exponentiation rejects bad parameters", "[modular]") {
    const ModulusContext ctx = make_modulus_context(4, 3);
    CHECK_THROWS_AS(build_modexp(ctx, 3, 2), std::invalid_argument);  // base >= modulus
    CHECK_THROWS_AS(build_modexp(ctx, 2, 0), std::invalid_argument);  // empty exponent
}

namespace {

// the normalizer's classical mirror: collapse the pair mod 2^(n+1), then
// one trial subtraction per stage, keeping the result when it stays
// non-negative and recording each skip in the sign word
wide_uint normalizer_model(const ModulusContext& ctx, wide_uint s, wide_uint k,
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

}  // namespace

TEST_CASE("standalone normalizer matches its trial-subtraction model", "[modular]") {
    for (const auto& [n, m] : std::vector<std::pair<std::uint32_t, std::uint64_t>>{
             {4, 3}, {5, 5}, {5, 7}}) {
        INFO("n=" << n << " m=" << m);
        const ModulusContext ctx = make_modulus_context(n, m);
        const Built b = build_final_normalizer(ctx);
        const auto oracle = [ctx](const ValueMap& in,
                                  const ValueMap& out) -> std::optional<CheckFail> {
            wide_uint signs = 0;
            const wide_uint want = normalizer_model(ctx, in.at("S"), in.at("K"), signs);
            if (out.at("R") != want) return CheckFail{"R", wide_str(want), wide_str(out.at("R"))};
            if (out.at("SIGNS") != signs)
                return CheckFail{"SIGNS", wide_str(signs), wide_str(out.at("SIGNS"))};
            // inside the compressor contract the result is the residue itself
            const wide_uint cs = in.at("S") + 2 * in.at("K");
            if (cs < (wide_uint{1} << ctx.n) && want != cs % ctx.m)
                return CheckFail{"R residue", wide_str(cs % ctx.m), wide_str(want)};
            return std::nullopt;
        };
        const VerificationReport rep =
            verify_against_oracle(b.circuit, b.layout, oracle, Domain::exhaustive());
        INFO(rep.describe());
        REQUIRE(rep.passed);
    }
}

TEST_CASE("compressor output feeds the normalizer directly", "[modular][property]") {
    // chain check at the value level: S,K out of the compressor are in the
    // normalizer's contract, and the normalizer finishes the reduction
    const ModulusContext ctx = make_modulus_context(4, 3);
    const Built comp = build_mod_csa(ctx);
    const Built norm = build_final_normalizer(ctx);
    for (std::uint64_t a = 0; a < 16; ++a)
        for (std::uint64_t bb = 0; bb < 16; ++bb)
            for (std::uint64_t c = 0; c < 16; ++c) {
                BasisState s1(comp.circuit.width());
                comp.layout.encode_input(s1, "A", a);
                comp.layout.encode_input(s1, "B", bb);
                comp.layout.encode_input(s1, "C", c);
                run_in_place(comp.circuit, s1);
                const wide_uint sv =
                    comp.layout.decode_output(s1, *comp.layout.find_output("S"));
                const wide_uint kv =
                    comp.layout.decode_output(s1, *comp.layout.find_output("K"));

                BasisState s2(norm.circuit.width());
                norm.layout.encode_input(s2, "S", sv);
                norm.layout.encode_input(s2, "K", kv >> 1);  // K group reads at weight 1
                run_in_place(norm.circuit, s2);
                const wide_uint r = norm.layout.decode_output(s2, *norm.layout.find_output("R"));
                REQUIRE(r == (a + bb + c) % 3);
            }
}
