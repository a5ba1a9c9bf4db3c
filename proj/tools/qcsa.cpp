// Command-line surface for the carry-save arithmetic circuit kit: build
// netlists, simulate basis states, dump truth tables, verify against the
// registered oracles, report resource counts, and export to OPENQASM.
//
// Exit codes: 0 success, 1 verification failure, 2 usage or parse error.

#include <algorithm>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "qcsa/netlist.hpp"
#include "qcsa/registry.hpp"

namespace {

using namespace qcsa;

constexpr int kOk = 0;
constexpr int kVerifyFail = 1;
constexpr int kUsage = 2;

struct ParamOpts {
    std::uint64_t n = 0;
    std::uint64_t inputs = 0;
    std::uint64_t bits_each = 0;
    std::uint64_t bits = 0;
    std::uint64_t modulus = 0;
    std::uint64_t base = 0;
    std::uint64_t expwidth = 0;
    std::map<std::string, CLI::Option*> given;  // flag key -> option handle
};

void add_param_options(CLI::App& cmd, ParamOpts& p) {
    p.given["n"] = cmd.add_option("-n", p.n, "slice count");
    p.given["N"] = cmd.add_option("-N", p.inputs, "tree summand count");
    p.given["L"] = cmd.add_option("-L", p.bits_each, "bits per tree summand");
    p.given["bits"] = cmd.add_option("--bits", p.bits, "modular data width");
    p.given["modulus"] = cmd.add_option("--modulus", p.modulus, "odd modulus, at least 3");
    p.given["base"] = cmd.add_option("--base", p.base, "classical base to exponentiate");
    p.given["expwidth"] = cmd.add_option("--expwidth", p.expwidth, "exponent register width");
}

std::uint32_t narrow(std::uint64_t v, const std::string& flag) {
    if (v > 0xffffffffULL) throw std::invalid_argument(flag + " out of range");
    return static_cast<std::uint32_t>(v);
}

/// Merge defaults with the flags the user actually passed; reject flags the
/// construction does not take.
BuilderParams resolve_params(const BuilderSpec& spec, const ParamOpts& p) {
    for (const auto& [flag, opt] : p.given) {
        if (opt->count() == 0) continue;
        if (std::find(spec.flags.begin(), spec.flags.end(), flag) == spec.flags.end())
            throw std::invalid_argument("'" + spec.name + "' does not take " + opt->get_name());
    }
    const auto has = [&](const char* f) { return p.given.at(f)->count() > 0; };
    BuilderParams out = spec.defaults;
    if (has("n")) out.n = narrow(p.n, "-n");
    if (has("N")) out.inputs = narrow(p.inputs, "-N");
    if (has("L")) out.bits_each = narrow(p.bits_each, "-L");
    if (has("bits")) out.bits = narrow(p.bits, "--bits");
    if (has("modulus")) out.modulus = p.modulus;
    if (has("base")) out.base = p.base;
    if (has("expwidth")) out.expwidth = narrow(p.expwidth, "--expwidth");

    // Builders take any modulus the fold bound admits; the command line is
    // for the Shor-style use case, so it insists on odd.
    const bool modular =
        std::find(spec.flags.begin(), spec.flags.end(), "modulus") != spec.flags.end();
    if (modular && (out.modulus < 3 || out.modulus % 2 == 0))
        throw std::invalid_argument("modulus must be odd and at least 3");
    return out;
}

const BuilderSpec& lookup(const std::string& name) {
    const BuilderSpec* spec = find_builder(name);
    if (spec == nullptr) {
        std::string known;
        for (const BuilderSpec& s : builder_registry()) known += " " + s.name;
        throw std::invalid_argument("unknown construction '" + name + "' (have:" + known + ")");
    }
    return *spec;
}

/// Reconstruct enough layout from a parsed netlist's role lines to drive a
/// simulation: operand registers, ancilla and constant hygiene. Output
/// weights are a builder-side notion and do not survive the file format.
Layout derive_layout(const Circuit& c) {
    Layout l;
    std::map<std::string, std::map<std::uint32_t, std::uint32_t>> operands;
    std::map<std::string, bool> kept;
    for (std::uint32_t w = 0; w < c.width(); ++w) {
        const WireRole& r = c.roles()[w];
        switch (r.kind) {
            case RoleKind::Operand: {
                operands[r.reg][r.bit] = w;
                auto [it, fresh] = kept.try_emplace(r.reg, true);
                it->second = it->second && r.keep;
                break;
            }
            case RoleKind::Ancilla: l.ancillas.push_back(w); break;
            case RoleKind::Const0: l.constants.emplace_back(w, false); break;
            case RoleKind::Const1: l.constants.emplace_back(w, true); break;
            default: break;
        }
    }
    for (const auto& [name, bits] : operands) {
        ValueReg reg{name, {}, 0, kept[name]};
        for (const auto& [bit, wire] : bits) reg.wires.push_back(wire);
        l.inputs.push_back(std::move(reg));
    }
    return l;
}

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::invalid_argument("cannot open '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

void write_out(const std::string& path, const std::string& text) {
    if (path.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::invalid_argument("cannot write '" + path + "'");
    out << text;
}

/// Either a fresh build (construction name) or a parsed netlist (-f).
Built load_circuit(const std::string& name, const std::string& file, const ParamOpts& p) {
    if (!file.empty()) {
        Built b;
        b.circuit = parse_netlist(slurp(file));
        b.layout = derive_layout(b.circuit);
        return b;
    }
    const BuilderSpec& spec = lookup(name);
    return spec.build(resolve_params(spec, p));
}

std::pair<std::string, std::uint64_t> parse_assignment(const std::string& s) {
    const auto eq = s.find('=');
    if (eq == std::string::npos || eq == 0)
        throw std::invalid_argument("--set wants NAME=VALUE, got '" + s + "'");
    const std::string name = s.substr(0, eq);
    const std::string value = s.substr(eq + 1);
    if (value.empty() || value.find_first_not_of("0123456789") != std::string::npos)
        throw std::invalid_argument("--set " + name + ": value must be a decimal integer");
    try {
        return {name, std::stoull(value)};
    } catch (const std::exception&) {
        throw std::invalid_argument("--set " + name + ": value out of range");
    }
}

void print_hygiene(const Layout& layout, const BasisState& state) {
    std::vector<std::uint32_t> dirty;
    for (std::uint32_t w : layout.ancillas)
        if (state.bits[w] != 0) dirty.push_back(w);
    if (dirty.empty()) {
        std::cout << "ancillas: " << layout.ancillas.size() << " clean\n";
    } else {
        std::cout << "ancillas: DIRTY at";
        for (std::uint32_t w : dirty) std::cout << " " << w;
        std::cout << "\n";
    }
    std::vector<std::uint32_t> moved;
    for (const auto& [w, value] : layout.constants)
        if (state.bits[w] != static_cast<std::uint8_t>(value)) moved.push_back(w);
    if (moved.empty()) {
        std::cout << "constants: " << layout.constants.size() << " held\n";
    } else {
        std::cout << "constants: DISTURBED at";
        for (std::uint32_t w : moved) std::cout << " " << w;
        std::cout << "\n";
    }
}

int cmd_simulate(const std::string& name, const std::string& file, const ParamOpts& p,
                 const std::vector<std::string>& sets) {
    const Built b = load_circuit(name, file, p);

    std::map<std::string, std::uint64_t> values;
    for (const std::string& s : sets) {
        auto [reg, value] = parse_assignment(s);
        if (!values.emplace(reg, value).second)
            throw std::invalid_argument("--set " + reg + " given twice");
    }
    for (const auto& [reg, value] : values)
        if (b.layout.find_input(reg) == nullptr)
            throw std::invalid_argument("no operand register named '" + reg + "'");
    for (const ValueReg& reg : b.layout.inputs)
        if (values.find(reg.name) == values.end())
            throw std::invalid_argument("missing value for operand register " + reg.name +
                                        " (pass --set " + reg.name + "=...)");

    BasisState state(b.circuit.width());
    for (const auto& [reg, value] : values) b.layout.encode_input(state, reg, value);
    run_in_place(b.circuit, state);

    std::cout << "wires: " << b.circuit.width() << ", gates: " << b.circuit.gates().size()
              << "\n";
    for (const ValueReg& reg : b.layout.inputs)
        std::cout << reg.name << " = " << wide_str(b.layout.decode_input(state, reg)) << "\n";
    if (!b.layout.outputs.empty()) {
        for (const OutputGroup& g : b.layout.outputs)
            std::cout << g.name << " = " << wide_str(b.layout.decode_output(state, g)) << "\n";
    } else {
        // parsed netlist: no weighted outputs, show raw register contents
        for (const Register& r : b.circuit.registers()) {
            if (b.layout.find_input(r.name) != nullptr) continue;
            std::uint64_t v = 0;
            for (std::size_t i = 0; i < r.wires.size(); ++i)
                if (state.bits[r.wires[i]]) v |= std::uint64_t{1} << i;
            std::cout << r.name << " = " << v << "\n";
        }
    }
    print_hygiene(b.layout, state);
    return kOk;
}

std::string bits_msb(std::uint64_t v, std::uint32_t width) {
    std::string s(width, '0');
    for (std::uint32_t i = 0; i < width; ++i)
        if ((v >> i) & 1u) s[width - 1 - i] = '1';
    return s;
}

int cmd_truthtable(const std::string& name, const std::string& file, const ParamOpts& p) {
    const Built b = load_circuit(name, file, p);
    const TruthTable t = truth_table(b.circuit);
    std::cout << "# " << (file.empty() ? name : file) << ": " << t.width
              << " wires, bit order msb..lsb (wire " << (t.width ? t.width - 1 : 0)
              << "..0)\n";
    for (std::uint64_t i = 0; i < t.rows.size(); ++i)
        std::cout << bits_msb(i, t.width) << " -> " << bits_msb(t.rows[i], t.width) << "\n";
    return kOk;
}

int cmd_verify(const std::string& name, const ParamOpts& p, std::uint64_t seed) {
    const BuilderSpec& spec = lookup(name);
    const BuilderParams params = resolve_params(spec, p);
    const Built b = spec.build(params);
    const std::uint64_t input_bits = b.layout.total_input_bits();
    const Domain dom = Domain::pick(input_bits, 16, 10000, seed);

    std::cout << "verify " << spec.name << ": ";
    if (dom.mode == Domain::Mode::Exhaustive)
        std::cout << "exhaustive over " << input_bits << " input bits\n";
    else
        std::cout << dom.samples << " sampled assignments over " << input_bits
                  << " input bits, seed " << seed << "\n";

    const VerificationReport rep =
        verify_against_oracle(b.circuit, b.layout, spec.oracle(params), dom);
    if (rep.passed) {
        std::cout << "pass " << rep.trials << "/" << rep.trials << "\n";
        return kOk;
    }
    std::cout << rep.describe() << "\n";
    return kVerifyFail;
}

std::string rational_str(const Rational& r) { return r.str(); }

void print_resources_human(const std::string& label, const ResourceReport& r) {
    std::cout << label << "\n";
    std::cout << "qubits          " << r.qubits << "\n";
    std::cout << "  operand       " << r.operand_wires << "\n";
    std::cout << "  ancilla       " << r.ancilla_wires << "\n";
    std::cout << "  constant      " << r.constant_wires << "\n";
    std::cout << "  result        " << r.result_wires << "\n";
    std::cout << "  carry         " << r.carry_wires << "\n";
    std::cout << "core wires      " << r.core_wires << "\n";
    std::cout << "boundary wires  " << r.boundary_wires << "\n";
    std::cout << "gates           " << r.gates.total() << " (x " << r.gates.nots << ", cx "
              << r.gates.cnots << ", ccx " << r.gates.toffolis << ")\n";
    std::cout << "unit depth      " << rational_str(r.unit_depth) << "\n";
    std::cout << "qfa depth       " << rational_str(r.qfa_depth) << "\n";
    if (!r.formulas.empty()) {
        std::cout << "formula                 claimed    measured  relation\n";
        for (const FormulaEntry& f : r.formulas) {
            std::ostringstream line;
            line << f.name;
            line << std::string(f.name.size() < 20 ? 20 - f.name.size() : 1, ' ');
            std::ostringstream claimed;
            claimed << f.paper;
            line << std::string(claimed.str().size() < 11 ? 11 - claimed.str().size() : 1, ' ')
                 << claimed.str();
            const std::string meas = rational_str(f.measured);
            line << std::string(meas.size() < 12 ? 12 - meas.size() : 1, ' ') << meas;
            line << "  " << f.relation;
            std::cout << line.str() << "\n";
        }
    }
}

void print_resources_kv(const std::string& name, const ResourceReport& r) {
    std::cout << "name=" << name << "\n";
    std::cout << "qubits=" << r.qubits << "\n";
    std::cout << "operand_wires=" << r.operand_wires << "\n";
    std::cout << "ancilla_wires=" << r.ancilla_wires << "\n";
    std::cout << "constant_wires=" << r.constant_wires << "\n";
    std::cout << "result_wires=" << r.result_wires << "\n";
    std::cout << "carry_wires=" << r.carry_wires << "\n";
    std::cout << "core_wires=" << r.core_wires << "\n";
    std::cout << "boundary_wires=" << r.boundary_wires << "\n";
    std::cout << "gates_total=" << r.gates.total() << "\n";
    std::cout << "gates_x=" << r.gates.nots << "\n";
    std::cout << "gates_cx=" << r.gates.cnots << "\n";
    std::cout << "gates_ccx=" << r.gates.toffolis << "\n";
    std::cout << "unit_depth=" << rational_str(r.unit_depth) << "\n";
    std::cout << "qfa_depth=" << rational_str(r.qfa_depth) << "\n";
    for (const FormulaEntry& f : r.formulas) {
        std::cout << "formula." << f.name << ".claimed=" << f.paper << "\n";
        std::cout << "formula." << f.name << ".measured=" << rational_str(f.measured) << "\n";
        std::cout << "formula." << f.name << ".relation=" << f.relation << "\n";
    }
}

int cmd_resources(const std::string& name, const ParamOpts& p, bool kv) {
    if (name == "scaling") {
        std::vector<std::uint32_t> ns;
        if (p.given.at("N")->count() > 0)
            ns.push_back(narrow(p.inputs, "-N"));
        else
            ns = {8, 64, 1000};
        const ScalingReport rep = scaling_report(ns);
        if (kv) {
            for (const ScalingRow& row : rep.rows) {
                const std::string k = "n." + std::to_string(row.n) + ".";
                std::cout << k << "ripple_delay=" << row.ripple_delay << "\n";
                std::cout << k << "cs_delay=" << row.cs_delay << "\n";
                std::cout << k << "delay_ratio=" << row.delay_ratio << "\n";
                std::cout << k << "cs_qubits=" << row.cs_qubits << "\n";
                std::cout << k << "ripple_qubits=" << row.ripple_qubits << "\n";
                std::cout << k << "qubit_factor=" << row.qubit_factor << "\n";
            }
        } else {
            std::cout << "carry-save vs ripple scaling\n";
            std::cout << "N       ripple_delay  cs_delay  delay_ratio  cs_qubits  "
                         "ripple_qubits  qubit_factor\n";
            for (const ScalingRow& row : rep.rows) {
                std::ostringstream line;
                line << row.n << "\t" << row.ripple_delay << "\t" << row.cs_delay << "\t"
                     << row.delay_ratio << "\t" << row.cs_qubits << "\t" << row.ripple_qubits
                     << "\t" << row.qubit_factor;
                std::cout << line.str() << "\n";
            }
        }
        std::cout << "note: " << rep.note << "\n";
        return kOk;
    }

    const BuilderSpec& spec = lookup(name);
    const BuilderParams params = resolve_params(spec, p);
    const ResourceReport r = measure_named(spec, params);
    if (kv)
        print_resources_kv(spec.name, r);
    else
        print_resources_human(spec.name, r);
    return kOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"carry-save quantum arithmetic circuits"};
    app.require_subcommand(1);

    std::string name, file, out;
    std::vector<std::string> sets;
    std::uint64_t seed = kDefaultSeed;
    bool kv = false;

    CLI::App* build = app.add_subcommand("build", "emit a construction as a netlist");
    ParamOpts build_p;
    build->add_option("name", name, "construction name")->required();
    add_param_options(*build, build_p);
    build->add_option("-o,--out", out, "output file (default stdout)");

    CLI::App* simulate = app.add_subcommand("simulate", "run one basis state through a circuit");
    ParamOpts sim_p;
    simulate->add_option("name", name, "construction name");
    simulate->add_option("-f,--file", file, "netlist file instead of a construction");
    add_param_options(*simulate, sim_p);
    simulate->add_option("--set", sets, "operand assignment NAME=VALUE (repeatable)");

    CLI::App* tt = app.add_subcommand("truthtable", "dump the full permutation");
    ParamOpts tt_p;
    tt->add_option("name", name, "construction name");
    tt->add_option("-f,--file", file, "netlist file instead of a construction");
    add_param_options(*tt, tt_p);

    CLI::App* verify = app.add_subcommand("verify", "check a construction against its oracle");
    ParamOpts verify_p;
    verify->add_option("name", name, "construction name")->required();
    add_param_options(*verify, verify_p);
    verify->add_option("--seed", seed, "sampling seed");

    CLI::App* resources = app.add_subcommand("resources", "qubit/gate/depth report");
    ParamOpts res_p;
    resources->add_option("name", name, "construction name, or 'scaling'")->required();
    add_param_options(*resources, res_p);
    resources->add_flag("--kv", kv, "machine-readable key/value output");

    CLI::App* exp = app.add_subcommand("export", "emit OPENQASM 2.0");
    ParamOpts exp_p;
    exp->add_option("name", name, "construction name");
    exp->add_option("-f,--file", file, "netlist file instead of a construction");
    add_param_options(*exp, exp_p);
    exp->add_option("-o,--out", out, "output file (default stdout)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kUsage;
    }

    try {
        if (build->parsed()) {
            const BuilderSpec& spec = lookup(name);
            const Built b = spec.build(resolve_params(spec, build_p));
            write_out(out, emit_netlist(b.circuit));
            return kOk;
        }
        if (simulate->parsed()) {
            if (name.empty() == file.empty())
                throw std::invalid_argument("simulate wants a construction name or -f FILE");
            return cmd_simulate(name, file, sim_p, sets);
        }
        if (tt->parsed()) {
            if (name.empty() == file.empty())
                throw std::invalid_argument("truthtable wants a construction name or -f FILE");
            return cmd_truthtable(name, file, tt_p);
        }
        if (verify->parsed()) return cmd_verify(name, verify_p, seed);
        if (resources->parsed()) return cmd_resources(name, res_p, kv);
        if (exp->parsed()) {
            if (name.empty() == file.empty())
                throw std::invalid_argument("export wants a construction name or -f FILE");
            const Built b = load_circuit(name, file, exp_p);
            write_out(out, emit_qasm(b.circuit));
            return kOk;
        }
    } catch (const NetlistError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kUsage;
    }
    return kUsage;
}
