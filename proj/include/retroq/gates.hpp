#pragma once

#include <cmath>
#include <complex>
#include <stdexcept>
#include <string>

#include "retroq/state.hpp"

namespace retroq {

enum class GateKind { PhaseShift, Hadamard, Not, CNot, CPhase, CU, CH };

inline bool gate_is_two_qubit(GateKind kind) {
    return kind == GateKind::CNot || kind == GateKind::CPhase || kind == GateKind::CU ||
           kind == GateKind::CH;
}

inline bool gate_has_angle(GateKind kind) {
    return kind == GateKind::PhaseShift || kind == GateKind::CPhase;
}

/// One parameterized gate.  Two-qubit kinds store (control, target); single
/// qubit kinds use control only.  Angles are radians.
struct Gate {
    GateKind kind = GateKind::Hadamard;
    int control = 0;
    int target = -1;
    double angle = 0.0;

    static Gate phase(int q, double angle) { return {GateKind::PhaseShift, q, -1, angle}; }
    static Gate hadamard(int q) { return {GateKind::Hadamard, q, -1, 0.0}; }
    static Gate not_gate(int q) { return {GateKind::Not, q, -1, 0.0}; }
    static Gate cnot(int c, int t) { return {GateKind::CNot, c, t, 0.0}; }
    static Gate cphase(int c, int t, double angle) { return {GateKind::CPhase, c, t, angle}; }
    static Gate cu(int c, int t) { return {GateKind::CU, c, t, 0.0}; }
    static Gate ch(int c, int t) { return {GateKind::CH, c, t, 0.0}; }
};

inline std::string gate_name(GateKind kind) {
    switch (kind) {
        case GateKind::PhaseShift: return "P";
        case GateKind::Hadamard: return "H";
        case GateKind::Not: return "NOT";
        case GateKind::CNot: return "CNOT";
        case GateKind::CPhase: return "CP";
        case GateKind::CU: return "CU";
        case GateKind::CH: return "CH";
    }
    throw std::invalid_argument("gate_name: unknown kind");
}

/// Unitary of the gate on its own wires: 2x2, or 4x4 ordered |control,target>.
inline Operator gate_matrix(const Gate& g) {
    const ComplexScalar i1(0.0, 1.0);
    const double r = 1.0 / std::sqrt(2.0);
    switch (g.kind) {
        case GateKind::PhaseShift: {
            Operator op(2);
            op.at(0, 0) = 1.0;
            op.at(1, 1) = std::polar(1.0, g.angle);
            return op;
        }
        case GateKind::Hadamard: {
            Operator op(2);
            op.at(0, 0) = r;
            op.at(0, 1) = r;
            op.at(1, 0) = r;
            op.at(1, 1) = -r;
            return op;
        }
        case GateKind::Not: {
            Operator op(2);
            op.at(0, 1) = 1.0;
            op.at(1, 0) = 1.0;
            return op;
        }
        case GateKind::CNot: {
            Operator op = Operator::identity(4);
            op.at(2, 2) = 0.0;
            op.at(3, 3) = 0.0;
            op.at(2, 3) = 1.0;
            op.at(3, 2) = 1.0;
            return op;
        }
        case GateKind::CPhase: {
            Operator op = Operator::identity(4);
            op.at(3, 3) = std::polar(1.0, g.angle);
            return op;
        }
        case GateKind::CU: {
            // identity on control 0; on control 1 the target block is
            // (e^{-i 3 pi / 4} / sqrt(2)) [[1, i], [i, 1]]
            Operator op = Operator::identity(4);
            const ComplexScalar w = std::polar(r, -3.0 * M_PI / 4.0);
            op.at(2, 2) = w;
            op.at(2, 3) = w * i1;
            op.at(3, 2) = w * i1;
            op.at(3, 3) = w;
            return op;
        }
        case GateKind::CH: {
            Operator op = Operator::identity(4);
            op.at(2, 2) = r;
            op.at(2, 3) = r;
            op.at(3, 2) = r;
            op.at(3, 3) = -r;
            return op;
        }
    }
    throw std::invalid_argument("gate_matrix: unknown kind");
}

}  // namespace retroq
