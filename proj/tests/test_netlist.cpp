#include <catch2/catch_amalgamated.hpp>

#include "qcsa/netlist.hpp"
#include "qcsa/registry.hpp"

using namespace qcsa;

TEST_CASE("netlist round-trips byte for byte across all builders", "[netlist]") {
    for (const BuilderSpec& spec : builder_registry()) {
        INFO(spec.name);
        const Built b = spec.build(spec.defaults);
        const std::string once = emit_netlist(b.circuit);
        const Circuit parsed = parse_netlist(once);
        CHECK(emit_netlist(parsed) == once);
    }
}

TEST_CASE("parsed circuits keep gates, roles, and registers", "[netlist]") {
    const Built b = build_mod_csa(make_modulus_context(4, 3));
    const Circuit parsed = parse_netlist(emit_netlist(b.circuit));
    REQUIRE(parsed.width() == b.circuit.width());
    REQUIRE(parsed.gates().size() == b.circuit.gates().size());
    for (std::size_t i = 0; i < parsed.gates().size(); ++i)
        CHECK(parsed.gates()[i] == b.circuit.gates()[i]);
    REQUIRE(parsed.registers().size() == b.circuit.registers().size());
    CHECK(parsed.find_register("P") != nullptr);
    CHECK(parsed.find_register("Q") != nullptr);
    for (std::uint32_t w = 0; w < parsed.width(); ++w)
        CHECK(parsed.roles()[w].kind == b.circuit.roles()[w].kind);
}

TEST_CASE("modular netlists echo their fold constants", "[netlist]") {
    const Built b = build_mod_csa(make_modulus_context(5, 7));
    const std::string text = emit_netlist(b.circuit);
    CHECK(text.find("P = 2") != std::string::npos);
    CHECK(text.find("Q = 4") != std::string::npos);
    CHECK(text.find("M = 7") != std::string::npos);
}

TEST_CASE("parse errors carry the offending line number", "[netlist]") {
    const auto line_of = [](const std::string& text) -> std::size_t {
        try {
            parse_netlist(text);
        } catch (const NetlistError& e) {
            return e.line();
        }
        return 0;
    };
    CHECK(line_of("qubits 2\ncx 0 1\ncx 9 1\n") == 3);
    CHECK(line_of("qubits 2\nfrobnicate\n") == 2);
    CHECK(line_of("qubits 2\ncx 0\n") == 2);
    CHECK(line_of("cx 0 1\n") == 1);             // gates before the width
    CHECK(line_of("qubits 2\nqubits 2\n") == 2);  // duplicate header
    CHECK(line_of("qubits 2\nrole 0 operand\n") == 2);
    CHECK(line_of("qubits 2\nrole 5 ancilla\n") == 2);
    CHECK(line_of("qubits 2\nrole 0 ancilla\nrole 0 ancilla\n") == 3);
    CHECK(line_of("qubits 2\nreg A 0 7\n") == 2);
    CHECK(line_of("qubits 2\nreg A 0\nreg A 1\n") == 3);
    CHECK(line_of("qubits 2\nccx 0 0 1\n") == 2);  // repeated control
    CHECK(line_of("qubits 2\ncx 0 99999999999999999999\n") == 2);
}

TEST_CASE("comments and blank lines are tolerated", "[netlist]") {
    const Circuit c = parse_netlist("# a note\n\nqubits 2\n\n# more\ncx 0 1\n");
    CHECK(c.width() == 2);
    CHECK(c.gates().size() == 1);
    REQUIRE(c.comments().size() == 2);
    CHECK(c.comments()[0] == "a note");
}

TEST_CASE("empty input is rejected", "[netlist]") {
    CHECK_THROWS_AS(parse_netlist(""), NetlistError);
    CHECK_THROWS_AS(parse_netlist("# only a comment\n"), NetlistError);
}

TEST_CASE("qasm export maps gates one to one", "[netlist]") {
    for (const char* name : {"qfa", "ripple", "csmul"}) {
        INFO(name);
        const BuilderSpec* spec = find_builder(name);
        REQUIRE(spec != nullptr);
        const Built b = spec->build(spec->defaults);
        const std::string qasm = emit_qasm(b.circuit);
        std::size_t statements = 0;
        for (std::size_t at = 0; (at = qasm.find(";\n", at)) != std::string::npos; ++at)
            ++statements;
        // OPENQASM line, include line, one qreg, then the gates
        CHECK(statements == 3 + b.circuit.gate_counts().total());
    }
}

TEST_CASE("qasm export of an empty circuit is just the header", "[netlist]") {
    CHECK(emit_qasm(Circuit{}) == "OPENQASM 2.0;\ninclude \"qelib1.inc\";\n");
}
