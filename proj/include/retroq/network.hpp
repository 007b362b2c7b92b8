#pragma once

#include <cmath>
#include <complex>
#include <stdexcept>
#include <string>
#include <vector>

#include "retroq/builtins.hpp"
#include "retroq/circuit.hpp"
#include "retroq/protocol.hpp"
#include "retroq/spin.hpp"
#include "retroq/state.hpp"

namespace retroq {

/// A two-segment network realizing a protocol: the preparation segment
/// builds the entangled state from |0..0>, the measurement segment rotates
/// Alice's basis onto the computational one.  expected_image[j] is the
/// computational amplitude index outcome j maps to.
struct NetworkProtocolBinding {
    std::string name;
    std::string protocol_name;
    Circuit preparation;
    Circuit measurement;
    StateVector expected_state;
    std::vector<int> expected_image;

    Circuit full_circuit() const {
        Circuit c = preparation;
        c.gates.insert(c.gates.end(), measurement.gates.begin(), measurement.gates.end());
        return c;
    }
};

inline std::vector<std::string> builtin_network_names() {
    return {"vaa-network", "singlet-network"};
}

inline NetworkProtocolBinding builtin_network(const std::string& name) {
    NetworkProtocolBinding binding;
    binding.name = name;
    const std::vector<Gate> common_measurement = {
        Gate::phase(0, M_PI),
        Gate::cnot(1, 0),
        Gate::cu(0, 1),
        Gate::hadamard(0),
    };
    if (name == "vaa-network") {
        binding.protocol_name = "vaa";
        binding.preparation = {2, {Gate::hadamard(0), Gate::cnot(0, 1)}};
        binding.measurement = {2, common_measurement};
        binding.expected_state = vaa_state();
    } else if (name == "singlet-network") {
        binding.protocol_name = "singlet";
        binding.preparation = {2,
                               {Gate::not_gate(1), Gate::cnot(1, 0), Gate::hadamard(1),
                                Gate::cnot(1, 0)}};
        // Basis conversion onto the partner protocol's basis, then its
        // measurement segment.
        binding.measurement = {2,
                               {Gate::cphase(0, 1, M_PI), Gate::not_gate(1),
                                Gate::phase(0, M_PI / 2.0), Gate::phase(1, -M_PI / 2.0)}};
        binding.measurement.gates.insert(binding.measurement.gates.end(),
                                         common_measurement.begin(), common_measurement.end());
        binding.expected_state = singlet_state();
    } else {
        throw std::invalid_argument("builtin_network: unknown network '" + name + "'");
    }
    binding.expected_image = {0, 2, 1, 3};
    return binding;
}

struct PreparationReport {
    double overlap_modulus = 0.0;
    ComplexScalar phase{1.0, 0.0};  // expected = phase * prepared
    bool passed = false;
};

/// Runs the preparation segment on |0..0> and compares against the expected
/// state up to a global phase.
inline PreparationReport verify_preparation(const NetworkProtocolBinding& binding,
                                            double tol = default_tolerances().pipeline) {
    const StateVector prepared = apply(binding.preparation, zero_register(binding.preparation.qubit_count));
    PreparationReport report;
    const ComplexScalar ov = inner(prepared, binding.expected_state);
    report.overlap_modulus = std::abs(ov);
    if (report.overlap_modulus > 0.0) report.phase = ov / report.overlap_modulus;
    report.passed = report.overlap_modulus >= 1.0 - tol;
    return report;
}

struct MappingEntry {
    int outcome = 0;           // 1-based Alice outcome
    int image_index = -1;      // computational amplitude index of the image
    ComplexScalar phase{};     // amplitude at the image index
    double off_mass = 0.0;     // probability left outside the image index
    bool clean = false;
};

struct MappingReport {
    std::vector<MappingEntry> entries;
    bool injective = false;
    bool all_clean = false;

    bool passed() const { return injective && all_clean; }
};

/// Sends each basis vector through the measurement segment and checks the
/// images are computational basis states (up to phase) hit injectively.
inline MappingReport verify_measurement_mapping(const NetworkProtocolBinding& binding,
                                                const std::vector<StateVector>& basis,
                                                double tol = default_tolerances().pipeline) {
    MappingReport report;
    std::vector<int> hit(static_cast<std::size_t>(1) << binding.measurement.qubit_count, 0);
    report.injective = true;
    report.all_clean = true;
    for (std::size_t j = 0; j < basis.size(); ++j) {
        const StateVector image = apply(binding.measurement, basis[j]);
        MappingEntry entry;
        entry.outcome = static_cast<int>(j) + 1;
        double best = 0.0;
        for (std::size_t i = 0; i < image.amps.size(); ++i)
            if (std::abs(image.amps[i]) > best) {
                best = std::abs(image.amps[i]);
                entry.image_index = static_cast<int>(i);
            }
        entry.phase = image.amps[static_cast<std::size_t>(entry.image_index)];
        entry.off_mass = norm2(image) - std::norm(entry.phase);
        entry.clean = std::abs(entry.phase) >= 1.0 - tol;
        if (!entry.clean) report.all_clean = false;
        if (++hit[static_cast<std::size_t>(entry.image_index)] > 1) report.injective = false;
        report.entries.push_back(entry);
    }
    return report;
}

/// Alice outcome (1-based) encoded by a computational amplitude index.
inline int readout_outcome(const NetworkProtocolBinding& binding, int amp_index) {
    for (std::size_t j = 0; j < binding.expected_image.size(); ++j)
        if (binding.expected_image[j] == amp_index) return static_cast<int>(j) + 1;
    throw std::out_of_range("readout_outcome: amplitude index encodes no outcome");
}

struct ConsistencyReport {
    VerifyReport network_view;    // protocol re-read entirely from the circuits
    VerifyReport reference_view;  // the companion protocol as stored
    bool agree = false;
};

/// Pulls the protocol back out of the circuits: the prepared state replaces
/// the stored one and the basis is recovered by sending computational states
/// backwards through the measurement segment.  Both protocols must earn the
/// same verdict from the same verifier.
inline ConsistencyReport network_protocol_consistency(const NetworkProtocolBinding& binding) {
    const RetrodictionProtocol reference = builtin_protocol(binding.protocol_name);
    const int qubits = binding.measurement.qubit_count;
    const int dim = 1 << qubits;

    // Columns of the measurement unitary.
    std::vector<StateVector> columns;
    for (int c = 0; c < dim; ++c)
        columns.push_back(apply(binding.measurement, StateVector::basis_state(dim / 2, c)));

    RetrodictionProtocol from_network;
    from_network.initial = apply(binding.preparation, zero_register(qubits));
    from_network.axes = reference.axes;
    from_network.table = reference.table;
    std::vector<StateVector> recovered;
    for (std::size_t j = 0; j < binding.expected_image.size(); ++j) {
        // U^dagger e_idx: amplitudes conj(U[idx, c]) over columns c.
        StateVector phi(dim / 2);
        for (int c = 0; c < dim; ++c)
            phi.amps[static_cast<std::size_t>(c)] = std::conj(
                columns[static_cast<std::size_t>(c)].amps[static_cast<std::size_t>(binding.expected_image[j])]);
        recovered.push_back(std::move(phi));
    }
    from_network.measurement = ProjectiveMeasurement(std::move(recovered));

    ConsistencyReport report;
    report.network_view = verify_protocol(from_network);
    report.reference_view = verify_protocol(reference);
    report.agree = report.network_view.passed() == report.reference_view.passed();
    return report;
}

}  // namespace retroq
