#pragma once

#include <cstdint>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "qcsa/circuit.hpp"

namespace qcsa {

/// Parse failure with the offending 1-based line number.
class NetlistError : public std::runtime_error {
public:
    NetlistError(std::size_t line, const std::string& what)
        : std::runtime_error("netlist line " + std::to_string(line) + ": " + what),
          line_(line) {}
    [[nodiscard]] std::size_t line() const { return line_; }

private:
    std::size_t line_;
};

namespace detail {

inline std::vector<std::string> split_ws(const std::string& s) {
    std::vector<std::string> out;
    std::istringstream in(s);
    std::string tok;
    while (in >> tok) out.push_back(tok);
    return out;
}

inline std::uint32_t parse_u32(const std::string& tok, std::size_t line) {
    if (tok.empty() || tok.find_first_not_of("0123456789") != std::string::npos)
        throw NetlistError(line, "expected a decimal index, got '" + tok + "'");
    unsigned long long v = 0;
    try {
        v = std::stoull(tok);
    } catch (const std::exception&) {
        throw NetlistError(line, "index out of range: '" + tok + "'");
    }
    if (v > 0xffffffffULL) throw NetlistError(line, "index out of range: '" + tok + "'");
    return static_cast<std::uint32_t>(v);
}

}  // namespace detail

/// Canonical text form. Emission order is fixed (comments, qubits, reg,
/// role, gates) so that building the same construction twice gives
/// byte-identical files.
inline std::string emit_netlist(const Circuit& c) {
    std::ostringstream out;
    for (const auto& line : c.comments()) out << "# " << line << "\n";
    out << "qubits " << c.width() << "\n";
    for (const auto& r : c.registers()) {
        out << "reg " << r.name;
        for (std::uint32_t w : r.wires) out << " " << w;
        out << "\n";
    }
    for (std::uint32_t w = 0; w < c.width(); ++w) {
        const WireRole& role = c.roles()[w];
        out << "role " << w << " ";
        switch (role.kind) {
            case RoleKind::Operand:
                out << "operand " << role.reg << " " << role.bit;
                if (role.keep)
                    out << " keep";
                else
                    out << " consume " << role.into_reg << " " << role.into_bit;
                break;
            case RoleKind::Ancilla: out << "ancilla"; break;
            case RoleKind::Const0: out << "const0"; break;
            case RoleKind::Const1: out << "const1"; break;
            case RoleKind::Result: out << "result " << role.reg << " " << role.bit; break;
            case RoleKind::CarryOut:
                out << "carryout";
                if (!role.reg.empty()) out << " " << role.reg << " " << role.bit;
                break;
        }
        out << "\n";
    }
    for (const auto& g : c.gates()) {
        switch (g.kind) {
            case GateKind::X: out << "x " << g.target << "\n"; break;
            case GateKind::CX: out << "cx " << g.c0 << " " << g.target << "\n"; break;
            case GateKind::CCX:
                out << "ccx " << g.c0 << " " << g.c1 << " " << g.target << "\n";
                break;
        }
    }
    return out.str();
}

inline Circuit parse_netlist(const std::string& text) {
    std::istringstream in(text);
    std::string raw;
    std::size_t line_no = 0;

    bool saw_qubits = false;
    Circuit c;
    std::vector<bool> role_set;

    while (std::getline(in, raw)) {
        ++line_no;
        if (!raw.empty() && raw.back() == '\r') raw.pop_back();
        std::string body = raw;
        if (const auto hash = body.find('#'); hash != std::string::npos) {
            if (hash == 0 || body.find_first_not_of(" \t") == hash) {
                // full-line comment; keep the text (emit puts comments first)
                std::string note = body.substr(hash + 1);
                if (!note.empty() && note.front() == ' ') note.erase(0, 1);
                c.add_comment(note);
                continue;
            }
            body = body.substr(0, hash);
        }
        const auto toks = detail::split_ws(body);
        if (toks.empty()) continue;
        const std::string& kw = toks[0];

        if (kw == "qubits") {
            if (saw_qubits) throw NetlistError(line_no, "duplicate qubits line");
            if (toks.size() != 2) throw NetlistError(line_no, "usage: qubits <count>");
            const std::uint32_t n = detail::parse_u32(toks[1], line_no);
            Circuit fresh(n);
            for (const auto& note : c.comments()) fresh.add_comment(note);
            c = std::move(fresh);
            role_set.assign(n, false);
            saw_qubits = true;
            continue;
        }
        if (!saw_qubits) throw NetlistError(line_no, "first directive must be 'qubits'");

        if (kw == "reg") {
            if (toks.size() < 2) throw NetlistError(line_no, "usage: reg <name> <wires...>");
            std::vector<std::uint32_t> wires;
            for (std::size_t i = 2; i < toks.size(); ++i) {
                const std::uint32_t w = detail::parse_u32(toks[i], line_no);
                if (w >= c.width()) throw NetlistError(line_no, "register wire out of range");
                wires.push_back(w);
            }
            try {
                c.add_register(toks[1], std::move(wires));
            } catch (const std::exception& e) {
                throw NetlistError(line_no, e.what());
            }
        } else if (kw == "role") {
            if (toks.size() < 3) throw NetlistError(line_no, "usage: role <wire> <kind> [meta]");
            const std::uint32_t w = detail::parse_u32(toks[1], line_no);
            if (w >= c.width()) throw NetlistError(line_no, "role wire out of range");
            if (role_set[w]) throw NetlistError(line_no, "duplicate role for wire " + toks[1]);
            const std::string& kind = toks[2];
            WireRole role;
            if (kind == "ancilla" && toks.size() == 3) {
                role = WireRole::ancilla();
            } else if (kind == "const0" && toks.size() == 3) {
                role = WireRole::constant(false);
            } else if (kind == "const1" && toks.size() == 3) {
                role = WireRole::constant(true);
            } else if (kind == "operand" && toks.size() == 6 && toks[5] == "keep") {
                role = WireRole::operand(toks[3], detail::parse_u32(toks[4], line_no));
            } else if (kind == "operand" && toks.size() == 8 && toks[5] == "consume") {
                role = WireRole::operand_into(toks[3], detail::parse_u32(toks[4], line_no),
                                              toks[6], detail::parse_u32(toks[7], line_no));
            } else if (kind == "result" && toks.size() == 5) {
                role = WireRole::result(toks[3], detail::parse_u32(toks[4], line_no));
            } else if (kind == "carryout" && toks.size() == 3) {
                role = WireRole::carry_out();
            } else if (kind == "carryout" && toks.size() == 5) {
                role = WireRole::carry_out_in(toks[3], detail::parse_u32(toks[4], line_no));
            } else {
                throw NetlistError(line_no, "malformed role line");
            }
            c.set_role(w, std::move(role));
            role_set[w] = true;
        } else if (kw == "x" || kw == "cx" || kw == "ccx") {
            try {
                if (kw == "x" && toks.size() == 2) {
                    c.x(detail::parse_u32(toks[1], line_no));
                } else if (kw == "cx" && toks.size() == 3) {
                    c.cx(detail::parse_u32(toks[1], line_no),
                         detail::parse_u32(toks[2], line_no));
                } else if (kw == "ccx" && toks.size() == 4) {
                    c.ccx(detail::parse_u32(toks[1], line_no),
                          detail::parse_u32(toks[2], line_no),
                          detail::parse_u32(toks[3], line_no));
                } else {
                    throw NetlistError(line_no, "malformed gate line");
                }
            } catch (const NetlistError&) {
                throw;
            } catch (const std::exception& e) {
                throw NetlistError(line_no, e.what());
            }
        } else {
            throw NetlistError(line_no, "unknown directive '" + kw + "'");
        }
    }
    if (!saw_qubits) throw NetlistError(line_no, "missing qubits line");
    return c;
}

/// OPENQASM 2.0 text; the gate set maps 1:1 onto x/cx/ccx statements.
inline std::string emit_qasm(const Circuit& c) {
    std::ostringstream out;
    out << "OPENQASM 2.0;\n";
    out << "include \"qelib1.inc\";\n";
    if (c.width() > 0) out << "qreg q[" << c.width() << "];\n";
    for (const auto& g : c.gates()) {
        switch (g.kind) {
            case GateKind::X: out << "x q[" << g.target << "];\n"; break;
            case GateKind::CX:
                out << "cx q[" << g.c0 << "],q[" << g.target << "];\n";
                break;
            case GateKind::CCX:
                out << "ccx q[" << g.c0 << "],q[" << g.c1 << "],q[" << g.target << "];\n";
                break;
        }
    }
    return out.str();
}

}  // namespace qcsa
