// Acceptance gate: one line per criterion, nonzero exit if any fails.
// Tolerances are pinned here rather than shared so a library change cannot
// quietly relax them.

#include <sys/wait.h>

#include <cmath>
#include <complex>
#include <cstdio>
#include <cstdlib>
#include <string>
#include <vector>

#include "helpers.hpp"
#include "retroq/builtins.hpp"
#include "retroq/circuit.hpp"
#include "retroq/constraints.hpp"
#include "retroq/construct.hpp"
#include "retroq/network.hpp"
#include "retroq/protocol.hpp"
#include "retroq/protocol_io.hpp"
#include "retroq/spin.hpp"

using namespace retroq;

namespace {

constexpr double kExact = 1e-12;
constexpr double kPipeline = 1e-10;

int failures = 0;

void report(int n, const char* what, bool ok) {
    std::printf("%s criterion %d: %s\n", ok ? "PASS" : "FAIL", n, what);
    if (!ok) ++failures;
}

bool verified_and_perfect(const std::string& name, std::uint64_t trials, std::uint64_t seed) {
    const RetrodictionProtocol protocol = builtin_protocol(name);
    const VerifyReport verdict = verify_protocol(protocol, kPipeline, kExact);
    if (!verdict.violations.empty() || !verdict.passed()) return false;
    const TrialStatistics stats = run_trials(protocol, trials, seed, TrialOptions{});
    return stats.trials == trials && stats.successes == trials;
}

// Overlap of each outcome vector with every projection branch its table row
// rules out.
double worst_contradicting_overlap(const RetrodictionProtocol& protocol) {
    double worst = 0.0;
    for (std::size_t l = 0; l < protocol.axes.size(); ++l)
        for (int j = 0; j < protocol.table.num_outcomes; ++j) {
            const int eta = -protocol.table.sign(j, static_cast<int>(l));
            const StateVector branch = project_spin(protocol.initial, protocol.axes[l], eta);
            const double ov =
                std::abs(inner(protocol.measurement.basis[static_cast<std::size_t>(j)], branch));
            worst = std::max(worst, ov);
        }
    return worst;
}

bool criterion1() { return verified_and_perfect("vaa", 10000, 7); }

bool criterion2() {
    if (!verified_and_perfect("singlet", 10000, 11)) return false;
    return worst_contradicting_overlap(builtin_protocol("singlet")) <= kExact;
}

bool criterion3() {
    const StateVector psi = vaa_state();
    const auto [r1, r2] = projection_relation_residuals(psi);
    bool ok = r1 <= kExact && r2 <= kExact;
    const OutcomeBoundWitness witness = min_outcomes_lower_bound(psi);
    ok = ok && witness.full_rank == 4;
    ok = ok && witness.triple_third_singular.size() == 8;
    ok = ok && witness.certified;
    ok = ok && witness.min_third_singular > 0.4;
    const OutcomeBoundWitness partner = min_outcomes_lower_bound(singlet_state());
    ok = ok && partner.certified && partner.full_rank == 4;
    return ok;
}

bool criterion4() {
    const RetrodictionProtocol reference = builtin_protocol("m4-symmetric");
    bool ok = true;

    const AxisGram gram = AxisGram::from_axes(reference.axes);
    for (int i = 0; i < gram.m; ++i)
        for (int k = 0; k < gram.m; ++k)
            if (i != k) ok = ok && std::abs(gram.at(i, k) + 1.0 / 3.0) <= kExact;
    double sx = 0.0, sy = 0.0, sz = 0.0;
    for (const UnitAxis& n : reference.axes) {
        sx += n.x;
        sy += n.y;
        sz += n.z;
    }
    ok = ok && std::sqrt(sx * sx + sy * sy + sz * sz) < kPipeline;

    const CoefficientVector coeff = solve_coefficients(reference.table, gram);
    const double b6 = 1.0 / std::sqrt(6.0);
    for (double b : coeff.b) ok = ok && std::abs(b - b6) <= kExact;

    const ConstructionResult result = construct_basis(reference.table, coeff, reference.axes);
    ok = ok && ProjectiveMeasurement(result.basis).orthonormality_residual() <= kPipeline;

    RetrodictionProtocol built;
    built.axes = reference.axes;
    built.table = reference.table;
    built.initial = StateVector(result.basis[0].dim_a);
    for (std::size_t j = 0; j < result.basis.size(); ++j)
        built.initial = add(built.initial, scale(coeff.b[j], result.basis[j]));
    built.measurement = ProjectiveMeasurement(result.basis);
    const VerifyReport verdict = verify_protocol(built, kPipeline, kExact);
    ok = ok && verdict.passed() && verdict.worst_decomposition <= kPipeline;

    // The tabulated form differs from the consistent one, and every
    // discrepancy points at the sixth row.
    const ErrataReport errata = errata_check("m4-symmetric");
    ok = ok && !errata.entries.empty();
    bool amplitude_at_6_2 = false;
    for (const ErrataEntry& e : errata.entries) {
        bool touches_row6 = false;
        for (int v : e.location) touches_row6 = touches_row6 || v == 6;
        ok = ok && touches_row6;
        if (e.kind == "amplitude" && e.location.size() >= 2 && e.location[0] == 6 &&
            e.location[1] == 2)
            amplitude_at_6_2 = true;
    }
    return ok && amplitude_at_6_2;
}

bool criterion5() {
    bool ok = true;
    for (const char* name : {"vaa", "m4-symmetric"}) {
        const RetrodictionProtocol p = builtin_protocol(name);
        const AxisGram gram = AxisGram::from_axes(p.axes);
        const CoefficientVector coeff = solve_coefficients(p.table, gram);
        const double expected = p.table.num_outcomes == 4 ? 0.25 : 1.0 / 6.0;
        for (double b : coeff.b) ok = ok && std::abs(b * b - expected) <= kExact;
        ok = ok && check_constraints(p.table, coeff, p.axes).worst_enforced() <= kExact;
    }

    const AxisDependenceReport dep =
        check_axis_dependence(m4_table(), {{{-1.0, -1.0, -1.0}}});
    ok = ok && dep.worst <= kExact;

    const UnitAxis x = UnitAxis::normalized(1, 0, 0);
    const UnitAxis y = UnitAxis::normalized(0, 1, 0);
    const UnitAxis z = UnitAxis::normalized(0, 0, 1);
    const UnitAxis d = UnitAxis::normalized(1, 1, 1);
    ok = ok && !feasibility({x, y, z, d, z}).feasible;
    ok = ok && !feasibility({x, y, z, d}).feasible;
    ok = ok && feasibility(m4_axes()).feasible;
    return ok;
}

bool criterion6() {
    bool ok = true;
    for (const std::string& name : builtin_network_names()) {
        const NetworkProtocolBinding binding = builtin_network(name);
        const PreparationReport prep = verify_preparation(binding, kPipeline);
        ok = ok && prep.passed && prep.overlap_modulus >= 1.0 - kPipeline;
        const RetrodictionProtocol protocol = builtin_protocol(binding.protocol_name);
        ok = ok && verify_measurement_mapping(binding, protocol.measurement.basis).passed();
        ok = ok && network_protocol_consistency(binding).agree;
    }

    const Operator lift_p =
        tensor(gate_matrix(Gate::phase(0, -3.0 * M_PI / 4.0)), Operator::identity(2));
    const Operator composed =
        multiply(lift_p, multiply(gate_matrix(Gate::cphase(0, 1, M_PI / 2.0)),
                                  multiply(gate_matrix(Gate::ch(0, 1)),
                                           gate_matrix(Gate::cphase(0, 1, M_PI / 2.0)))));
    ok = ok && max_abs_diff(composed, gate_matrix(Gate::cu(0, 1))) <= kExact;

    const Operator flip = gate_matrix(Gate::not_gate(0));
    ok = ok && flip.at(0, 1) == ComplexScalar{1.0, 0.0};
    ok = ok && flip.at(1, 0) == ComplexScalar{1.0, 0.0};
    ok = ok && flip.at(0, 0) == ComplexScalar{0.0, 0.0};
    ok = ok && flip.at(1, 1) == ComplexScalar{0.0, 0.0};
    return ok;
}

bool criterion7() {
    const ErrataReport errata = errata_check("m3-nonorthogonal");
    bool coeff_deficit = false, duplicate = false, gram_offender = false;
    for (const ErrataEntry& e : errata.entries) {
        if (e.kind == "coefficient-normalization" && std::abs(e.magnitude - 0.125) <= 1e-9)
            coeff_deficit = true;
        if (e.kind == "duplicate-row" && e.location == std::vector<int>{7, 8}) duplicate = true;
        if (e.kind == "orthogonality") gram_offender = true;
    }
    bool ok = coeff_deficit && duplicate && gram_offender && !errata.clean;

    // The stored protocol stays verbatim: the verifier must still reject it.
    const VerifyReport verdict = verify_protocol(builtin_protocol("m3-nonorthogonal"));
    ok = ok && !verdict.passed() && !verdict.violations.empty();

    const std::string cmd =
        std::string("\"") + RETROQ_CLI_PATH + "\" verify --builtin m3-nonorthogonal >/dev/null 2>&1";
    const int rc = std::system(cmd.c_str());
    ok = ok && rc != -1 && WIFEXITED(rc) && WEXITSTATUS(rc) == 1;
    return ok;
}

bool criterion8() {
    bool ok = true;
    SplitMix64 rng(2718);

    for (int rep = 0; rep < 100; ++rep) {
        const int dim_a = 2 + static_cast<int>(rng.next_below(3));
        const StateVector s = testutil::random_state(rng, dim_a);
        const UnitAxis n = testutil::random_axis(rng);
        const StateVector up = project_spin(s, n, +1);
        const StateVector down = project_spin(s, n, -1);
        ok = ok && max_abs_diff(add(up, down), s) <= kExact;
        const Operator sigma = lift_B(pauli_along(n), dim_a);
        ok = ok && max_abs_diff(apply(sigma, up), up) <= kExact;
        ok = ok && max_abs_diff(apply(sigma, down), scale(-1.0, down)) <= kExact;
    }

    for (int rep = 0; rep < 20; ++rep) {
        Circuit circuit;
        circuit.qubit_count = 2 + static_cast<int>(rng.next_below(2));
        const int gates = 1 + static_cast<int>(rng.next_below(6));
        for (int i = 0; i < gates; ++i) {
            const int c = static_cast<int>(rng.next_below(static_cast<std::uint64_t>(circuit.qubit_count)));
            const int t = (c + 1) % circuit.qubit_count;
            switch (rng.next_below(5)) {
                case 0: circuit.gates.push_back(Gate::phase(c, rng.next_double() * 6.0 - 3.0)); break;
                case 1: circuit.gates.push_back(Gate::hadamard(c)); break;
                case 2: circuit.gates.push_back(Gate::cnot(c, t)); break;
                case 3: circuit.gates.push_back(Gate::cphase(c, t, (3.0 * M_PI) / 4.0)); break;
                default: circuit.gates.push_back(Gate::cu(c, t)); break;
            }
        }
        const std::string text = emit_circuit(circuit);
        ok = ok && emit_circuit(parse_circuit(text)) == text;
    }

    const RetrodictionProtocol p = builtin_protocol("vaa");
    const TrialStatistics a = run_trials(p, 500, 42, TrialOptions{});
    const TrialStatistics b = run_trials(p, 500, 42, TrialOptions{});
    ok = ok && a.successes == b.successes && a.axis_chosen == b.axis_chosen &&
         a.axis_successes == b.axis_successes && a.outcome_counts == b.outcome_counts;

    for (const std::string& name : builtin_protocol_names()) {
        const std::string text = save_protocol(name, builtin_protocol(name));
        const LoadedProtocol loaded = load_protocol(text);
        ok = ok && save_protocol(loaded.name, loaded.protocol) == text;
    }
    return ok;
}

}  // namespace

int main() {
    report(1, "four-outcome protocol verifies cleanly and retrodicts 10000/10000 rounds",
           criterion1());
    report(2, "antisymmetric protocol verifies, simulates perfectly, and kills ruled-out branches",
           criterion2());
    report(3, "coordinate projections span rank four, obey both scaling relations, and every "
              "sign triple keeps rank three",
           criterion3());
    report(4, "six-outcome geometry solves to uniform coefficients and a verified basis, with "
              "tabulated-data discrepancies pinned to the sixth row",
           criterion4());
    report(5, "coefficient constraints hold exactly and axis-count feasibility matches the "
              "zero-sum rule",
           criterion5());
    report(6, "gate networks prepare both states, map both bases bijectively, and the fixed "
              "two-qubit unitary decomposes exactly",
           criterion6());
    report(7, "eight-outcome data is audited with exit code 1 and never silently corrected",
           criterion7());
    report(8, "random-state projection identities, circuit text round trips, and fixed-seed "
              "reruns are all stable",
           criterion8());
    if (failures != 0) {
        std::printf("%d criterion(s) failed\n", failures);
        return 1;
    }
    std::printf("all 8 criteria passed\n");
    return 0;
}
