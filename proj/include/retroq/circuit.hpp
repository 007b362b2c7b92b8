#pragma once

#include <cctype>
#include <cmath>
#include <cstdio>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "retroq/gates.hpp"
#include "retroq/state.hpp"

namespace retroq {

/// Input text (circuit or protocol file) violates the grammar.  Messages
/// carry "line N:" prefixes.
struct ParseError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct Circuit {
    int qubit_count = 0;
    std::vector<Gate> gates;
};

/// Applies one gate at its wire positions; qubit 0 is the slowest index bit.
inline StateVector apply_gate(const Gate& g, const StateVector& in, int qubit_count) {
    const int dim = in.dim();
    if (dim != (1 << qubit_count))
        throw std::invalid_argument("apply_gate: state dimension must be 2^qubits");
    if (g.control < 0 || g.control >= qubit_count)
        throw std::invalid_argument("apply_gate: wire index out of range");
    if (gate_is_two_qubit(g.kind)) {
        if (g.target < 0 || g.target >= qubit_count)
            throw std::invalid_argument("apply_gate: wire index out of range");
        if (g.target == g.control)
            throw std::invalid_argument("apply_gate: control and target must differ");
    }
    const Operator op = gate_matrix(g);
    StateVector out = in;
    const int cbit = 1 << (qubit_count - 1 - g.control);
    if (!gate_is_two_qubit(g.kind)) {
        for (int i = 0; i < dim; ++i) {
            if (i & cbit) continue;
            const int j = i | cbit;
            const ComplexScalar a0 = in.amps[static_cast<std::size_t>(i)];
            const ComplexScalar a1 = in.amps[static_cast<std::size_t>(j)];
            out.amps[static_cast<std::size_t>(i)] = op.at(0, 0) * a0 + op.at(0, 1) * a1;
            out.amps[static_cast<std::size_t>(j)] = op.at(1, 0) * a0 + op.at(1, 1) * a1;
        }
        return out;
    }
    const int tbit = 1 << (qubit_count - 1 - g.target);
    for (int i = 0; i < dim; ++i) {
        if ((i & cbit) || (i & tbit)) continue;
        int idx[4];  // |control target> in {00, 01, 10, 11}
        idx[0] = i;
        idx[1] = i | tbit;
        idx[2] = i | cbit;
        idx[3] = i | cbit | tbit;
        ComplexScalar a[4];
        for (int k = 0; k < 4; ++k) a[k] = in.amps[static_cast<std::size_t>(idx[k])];
        for (int rr = 0; rr < 4; ++rr) {
            ComplexScalar acc{};
            for (int cc = 0; cc < 4; ++cc) acc += op.at(rr, cc) * a[cc];
            out.amps[static_cast<std::size_t>(idx[rr])] = acc;
        }
    }
    return out;
}

/// Left-to-right execution of the whole gate list.
inline StateVector apply(const Circuit& circuit, const StateVector& in) {
    if (in.dim() != (1 << circuit.qubit_count))
        throw std::invalid_argument("apply: state dimension must be 2^qubits");
    StateVector state = in;
    for (const Gate& g : circuit.gates) state = apply_gate(g, state, circuit.qubit_count);
    return state;
}

inline StateVector zero_register(int qubit_count) {
    if (qubit_count < 1)
        throw std::invalid_argument("zero_register: need at least one qubit");
    return StateVector::basis_state(1 << (qubit_count - 1), 0);
}

namespace detail {

/// Angle token: decimal, or an exact multiple of pi such as "pi/4", "-3pi/4".
inline double parse_angle(const std::string& token, const std::string& where) {
    const std::size_t pi_pos = token.find("pi");
    if (pi_pos == std::string::npos) {
        try {
            std::size_t used = 0;
            const double v = std::stod(token, &used);
            if (used != token.size()) throw std::invalid_argument("");
            return v;
        } catch (const std::exception&) {
            throw ParseError(where + "malformed angle '" + token + "'");
        }
    }
    std::string head = token.substr(0, pi_pos);
    std::string tail = token.substr(pi_pos + 2);
    long p = 1;
    if (head == "-") {
        p = -1;
    } else if (!head.empty()) {
        try {
            std::size_t used = 0;
            p = std::stol(head, &used);
            if (used != head.size()) throw std::invalid_argument("");
        } catch (const std::exception&) {
            throw ParseError(where + "malformed angle '" + token + "'");
        }
    }
    long q = 1;
    if (!tail.empty()) {
        if (tail.front() != '/')
            throw ParseError(where + "malformed angle '" + token + "'");
        try {
            std::size_t used = 0;
            q = std::stol(tail.substr(1), &used);
            if (used != tail.size() - 1 || q == 0) throw std::invalid_argument("");
        } catch (const std::exception&) {
            throw ParseError(where + "malformed angle '" + token + "'");
        }
    }
    return (static_cast<double>(p) * M_PI) / static_cast<double>(q);
}

inline std::string format_angle(double angle) {
    if (angle == 0.0) return "0";
    for (long q : {1L, 2L, 3L, 4L, 6L, 8L, 12L}) {
        const double scaled = angle * static_cast<double>(q) / M_PI;
        const long p = std::lround(scaled);
        if (p == 0) continue;
        if ((static_cast<double>(p) * M_PI) / static_cast<double>(q) != angle) continue;
        std::string head;
        if (p == -1)
            head = "-";
        else if (p != 1)
            head = std::to_string(p);
        return q == 1 ? head + "pi" : head + "pi/" + std::to_string(q);
    }
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", angle);
    return buf;
}

inline int parse_index(const std::string& token, const std::string& where) {
    try {
        std::size_t used = 0;
        const int v = std::stoi(token, &used);
        if (used != token.size() || v < 0) throw std::invalid_argument("");
        return v;
    } catch (const std::exception&) {
        throw ParseError(where + "bad qubit index '" + token + "'");
    }
}

inline std::vector<std::string> tokenize(const std::string& line) {
    std::vector<std::string> tokens;
    std::istringstream in(line.substr(0, line.find('#')));
    std::string t;
    while (in >> t) tokens.push_back(t);
    return tokens;
}

}  // namespace detail

/// Grammar: a `qubits N` header, then one gate per line; `#` starts a
/// comment.  Canonical text from emit_circuit parses back identically.
inline Circuit parse_circuit(const std::string& text) {
    Circuit circuit;
    bool have_header = false;
    int line_no = 0;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        ++line_no;
        const std::string where = "line " + std::to_string(line_no) + ": ";
        const std::vector<std::string> tokens = detail::tokenize(line);
        if (tokens.empty()) continue;
        if (!have_header) {
            if (tokens[0] != "qubits")
                throw ParseError(where + "missing 'qubits N' header");
            if (tokens.size() != 2)
                throw ParseError(where + "header must be 'qubits N'");
            circuit.qubit_count = detail::parse_index(tokens[1], where);
            if (circuit.qubit_count < 1)
                throw ParseError(where + "need at least one qubit");
            have_header = true;
            continue;
        }
        Gate g;
        std::size_t wires = 1, angles = 0;
        if (tokens[0] == "P") {
            g.kind = GateKind::PhaseShift;
            angles = 1;
        } else if (tokens[0] == "H") {
            g.kind = GateKind::Hadamard;
        } else if (tokens[0] == "NOT") {
            g.kind = GateKind::Not;
        } else if (tokens[0] == "CNOT") {
            g.kind = GateKind::CNot;
            wires = 2;
        } else if (tokens[0] == "CP") {
            g.kind = GateKind::CPhase;
            wires = 2;
            angles = 1;
        } else if (tokens[0] == "CU") {
            g.kind = GateKind::CU;
            wires = 2;
        } else if (tokens[0] == "CH") {
            g.kind = GateKind::CH;
            wires = 2;
        } else {
            throw ParseError(where + "unknown gate '" + tokens[0] + "'");
        }
        if (tokens.size() != 1 + wires + angles)
            throw ParseError(where + "expected " + std::to_string(wires + angles) +
                             " arguments after '" + tokens[0] + "'");
        g.control = detail::parse_index(tokens[1], where);
        if (wires == 2) g.target = detail::parse_index(tokens[2], where);
        if (angles == 1) g.angle = detail::parse_angle(tokens[1 + wires], where);
        if (g.control >= circuit.qubit_count ||
            (wires == 2 && g.target >= circuit.qubit_count))
            throw ParseError(where + "index out of range");
        if (wires == 2 && g.control == g.target)
            throw ParseError(where + "control and target must differ");
        circuit.gates.push_back(g);
    }
    if (!have_header) throw ParseError("line 1: missing 'qubits N' header");
    return circuit;
}

inline std::string emit_circuit(const Circuit& circuit) {
    std::string out = "qubits " + std::to_string(circuit.qubit_count) + "\n";
    for (const Gate& g : circuit.gates) {
        out += gate_name(g.kind);
        out += " " + std::to_string(g.control);
        if (gate_is_two_qubit(g.kind)) out += " " + std::to_string(g.target);
        if (gate_has_angle(g.kind)) out += " " + detail::format_angle(g.angle);
        out += "\n";
    }
    return out;
}

}  // namespace retroq
