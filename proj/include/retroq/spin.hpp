#pragma once

#include <cmath>
#include <stdexcept>

#include "retroq/state.hpp"

namespace retroq {

inline Operator pauli_x() {
    Operator m(2);
    m.at(0, 1) = 1.0;
    m.at(1, 0) = 1.0;
    return m;
}

inline Operator pauli_y() {
    Operator m(2);
    m.at(0, 1) = ComplexScalar{0.0, -1.0};
    m.at(1, 0) = ComplexScalar{0.0, 1.0};
    return m;
}

inline Operator pauli_z() {
    Operator m(2);
    m.at(0, 0) = 1.0;
    m.at(1, 1) = -1.0;
    return m;
}

/// sigma . n; hermitian with eigenvalues +1 and -1.
inline Operator pauli_along(const UnitAxis& n) {
    Operator m(2);
    m.at(0, 0) = n.z;
    m.at(0, 1) = ComplexScalar{n.x, -n.y};
    m.at(1, 0) = ComplexScalar{n.x, n.y};
    m.at(1, 1) = -n.z;
    return m;
}

/// 1_A (x) op, acting only on the B qubit.
inline Operator lift_B(const Operator& op, int dim_a) {
    if (op.dim != 2)
        throw std::invalid_argument("lift_B: operator must act on a single qubit");
    if (dim_a < 1)
        throw std::invalid_argument("lift_B: dim_a must be positive");
    return tensor(Operator::identity(dim_a), op);
}

/// Unnormalized projection of Bob's qubit onto the eta eigenstate of sigma . n.
/// Squared norm equals the Born probability; the two outcomes sum to the input.
inline StateVector project_spin(const StateVector& state, const UnitAxis& n, int eta) {
    if (eta != 1 && eta != -1)
        throw std::invalid_argument("project_spin: eta must be +1 or -1");
    const Operator sn = pauli_along(n);
    StateVector out = state;
    for (int a = 0; a < state.dim_a; ++a) {
        const ComplexScalar up = state.at(a, 0);
        const ComplexScalar dn = state.at(a, 1);
        const double e = static_cast<double>(eta);
        out.at(a, 0) = 0.5 * (up + e * (sn.at(0, 0) * up + sn.at(0, 1) * dn));
        out.at(a, 1) = 0.5 * (dn + e * (sn.at(1, 0) * up + sn.at(1, 1) * dn));
    }
    return out;
}

enum class PauliBasis { x, y, z };

namespace detail {

/// Columns are the up and down eigenvectors of the named Pauli axis in z components.
inline void basis_columns(PauliBasis b, ComplexScalar col[2][2]) {
    const double r = 1.0 / std::sqrt(2.0);
    switch (b) {
        case PauliBasis::x:
            col[0][0] = r;
            col[1][0] = r;
            col[0][1] = r;
            col[1][1] = -r;
            break;
        case PauliBasis::y:
            col[0][0] = r;
            col[1][0] = ComplexScalar{0.0, r};
            col[0][1] = r;
            col[1][1] = ComplexScalar{0.0, -r};
            break;
        case PauliBasis::z:
            col[0][0] = 1.0;
            col[1][0] = 0.0;
            col[0][1] = 0.0;
            col[1][1] = 1.0;
            break;
    }
}

}  // namespace detail

/// Re-expresses one qubit's amplitude pairs as coefficients in the target
/// eigenbasis: out_k = <k_target|pair>.  Qubits are indexed with 0 as the
/// slowest (first) tensor factor; the B qubit is the last index.  Norm is
/// preserved; target z is the identity.
inline StateVector basis_convert(const StateVector& state, int which_qubit, PauliBasis target) {
    const int d = state.dim();
    int qubits = 0;
    while ((1 << qubits) < d) ++qubits;
    if ((1 << qubits) != d)
        throw std::invalid_argument("basis_convert: state dimension is not a power of two");
    if (which_qubit < 0 || which_qubit >= qubits)
        throw std::out_of_range("basis_convert: qubit index out of range");
    ComplexScalar col[2][2];
    detail::basis_columns(target, col);
    const int stride = 1 << (qubits - 1 - which_qubit);
    StateVector out = state;
    for (int base = 0; base < d; ++base) {
        if (base & stride) continue;
        const ComplexScalar up = state.amps[static_cast<std::size_t>(base)];
        const ComplexScalar dn = state.amps[static_cast<std::size_t>(base + stride)];
        out.amps[static_cast<std::size_t>(base)] =
            std::conj(col[0][0]) * up + std::conj(col[1][0]) * dn;
        out.amps[static_cast<std::size_t>(base + stride)] =
            std::conj(col[0][1]) * up + std::conj(col[1][1]) * dn;
    }
    return out;
}

/// Inverse of basis_convert: interprets one qubit's pairs as coefficients in
/// the source eigenbasis and rewrites them into z amplitudes.
inline StateVector basis_embed(const StateVector& state, int which_qubit, PauliBasis source) {
    const int d = state.dim();
    int qubits = 0;
    while ((1 << qubits) < d) ++qubits;
    if ((1 << qubits) != d)
        throw std::invalid_argument("basis_embed: state dimension is not a power of two");
    if (which_qubit < 0 || which_qubit >= qubits)
        throw std::out_of_range("basis_embed: qubit index out of range");
    ComplexScalar col[2][2];
    detail::basis_columns(source, col);
    const int stride = 1 << (qubits - 1 - which_qubit);
    StateVector out = state;
    for (int base = 0; base < d; ++base) {
        if (base & stride) continue;
        const ComplexScalar cu = state.amps[static_cast<std::size_t>(base)];
        const ComplexScalar cd = state.amps[static_cast<std::size_t>(base + stride)];
        out.amps[static_cast<std::size_t>(base)] = col[0][0] * cu + col[0][1] * cd;
        out.amps[static_cast<std::size_t>(base + stride)] = col[1][0] * cu + col[1][1] * cd;
    }
    return out;
}

}  // namespace retroq
