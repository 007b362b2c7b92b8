#pragma once

#include <cmath>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "retroq/lookup.hpp"
#include "retroq/rng.hpp"
#include "retroq/spin.hpp"
#include "retroq/state.hpp"

namespace retroq {

/// Alice's projective measurement: an orthonormal basis with opaque,
/// pairwise distinct eigenvalue labels.
struct ProjectiveMeasurement {
    std::vector<StateVector> basis;
    std::vector<std::string> labels;

    ProjectiveMeasurement() = default;

    explicit ProjectiveMeasurement(std::vector<StateVector> b, std::vector<std::string> tags = {})
        : basis(std::move(b)), labels(std::move(tags)) {
        if (basis.empty())
            throw std::invalid_argument("ProjectiveMeasurement: basis must be nonempty");
        if (labels.empty()) {
            for (std::size_t j = 0; j < basis.size(); ++j)
                labels.push_back(std::to_string(j + 1));
        }
        if (labels.size() != basis.size())
            throw std::invalid_argument("ProjectiveMeasurement: one label per basis vector");
        for (std::size_t i = 0; i < labels.size(); ++i)
            for (std::size_t k = i + 1; k < labels.size(); ++k)
                if (labels[i] == labels[k])
                    throw std::invalid_argument("ProjectiveMeasurement: labels must be distinct");
        for (std::size_t i = 1; i < basis.size(); ++i)
            if (basis[i].dim() != basis[0].dim())
                throw std::invalid_argument("ProjectiveMeasurement: mixed basis dimensions");
    }

    int outcomes() const { return static_cast<int>(basis.size()); }
    int dim() const { return basis.empty() ? 0 : basis[0].dim(); }

    /// Largest deviation of the basis Gram matrix from the identity.
    double orthonormality_residual() const {
        double worst = 0.0;
        for (std::size_t i = 0; i < basis.size(); ++i)
            for (std::size_t k = 0; k < basis.size(); ++k) {
                const double target = (i == k) ? 1.0 : 0.0;
                worst = std::max(worst, std::abs(inner(basis[i], basis[k]) - target));
            }
        return worst;
    }

    bool is_orthonormal(double tol = default_tolerances().pipeline) const {
        return orthonormality_residual() <= tol;
    }
};

/// The complete artifact: initial state, Bob's axis set, Alice's measurement,
/// and the look-up table tying them together.
struct RetrodictionProtocol {
    StateVector initial;
    std::vector<UnitAxis> axes;
    ProjectiveMeasurement measurement;
    LookupTable table;

    void validate_shape() const {
        if (axes.empty())
            throw std::invalid_argument("RetrodictionProtocol: need at least one axis");
        if (table.num_axes != static_cast<int>(axes.size()))
            throw std::invalid_argument("RetrodictionProtocol: table axis count mismatch");
        if (table.num_outcomes != measurement.outcomes())
            throw std::invalid_argument("RetrodictionProtocol: table outcome count mismatch");
        if (measurement.dim() != initial.dim())
            throw std::invalid_argument("RetrodictionProtocol: state and basis dimensions differ");
    }
};

struct TrialRecord {
    int chosen_axis = 0;
    int bob_outcome = 0;
    int alice_outcome = 0;
    std::vector<int> retrodictions;  // answers for every axis query
    bool correct = false;
};

/// Bob's projective spin measurement along axes[axis_index].
/// One rng draw; returns the outcome and the normalized post state.
inline std::pair<int, StateVector> bob_measure(const RetrodictionProtocol& protocol,
                                               int axis_index, SplitMix64& rng) {
    if (axis_index < 0 || axis_index >= static_cast<int>(protocol.axes.size()))
        throw std::out_of_range("bob_measure: axis index out of range");
    const UnitAxis& n = protocol.axes[static_cast<std::size_t>(axis_index)];
    const StateVector plus = project_spin(protocol.initial, n, 1);
    const double p_plus = norm2(plus);
    const int eta = (rng.next_double() < p_plus) ? 1 : -1;
    const StateVector raw = (eta == 1) ? plus : project_spin(protocol.initial, n, -1);
    return {eta, normalized(raw)};
}

/// Alice's measurement: samples j with probability |<phi_j|state>|^2.
/// One rng draw.  The state must lie in the span of the basis.
inline int alice_measure(const StateVector& state, const ProjectiveMeasurement& meas,
                         SplitMix64& rng, double tol = default_tolerances().pipeline) {
    if (meas.dim() != state.dim())
        throw std::invalid_argument("alice_measure: state and basis dimensions differ");
    std::vector<double> probs(static_cast<std::size_t>(meas.outcomes()));
    double total = 0.0;
    for (int j = 0; j < meas.outcomes(); ++j) {
        probs[static_cast<std::size_t>(j)] = std::norm(inner(meas.basis[static_cast<std::size_t>(j)], state));
        total += probs[static_cast<std::size_t>(j)];
    }
    if (std::abs(total - norm2(state)) > tol)
        throw std::invalid_argument("alice_measure: basis incomplete for state");
    const double draw = rng.next_double() * total;
    double acc = 0.0;
    for (int j = 0; j < meas.outcomes(); ++j) {
        acc += probs[static_cast<std::size_t>(j)];
        if (draw < acc) return j;
    }
    return meas.outcomes() - 1;
}

/// One exhaustive-check finding: outcome j kept support on a projection whose
/// outcome contradicts the table, or a structural residual.
struct VerifyFinding {
    enum class Kind {
        support_contradiction,   // |<phi_j|P_eta psi>|^2 above floor with eps != eta
        decomposition_residual,  // P_eta psi != sum over S_eta of b_j phi_j
        orthonormality,          // basis Gram deviates from identity
    };
    Kind kind = Kind::support_contradiction;
    int axis = -1;
    int eta = 0;
    int outcome = -1;
    double magnitude = 0.0;
};

struct VerifyReport {
    std::vector<VerifyFinding> violations;
    std::vector<VerifyFinding> warnings;  // magnitudes between the warn floor and the floor
    double worst_overlap = 0.0;           // largest contradicting |<phi_j|P_eta psi>|^2
    double worst_decomposition = 0.0;
    double orthonormality = 0.0;

    bool passed() const { return violations.empty(); }
};

/// Exhaustive verification over every axis, outcome sign, and Alice outcome.
/// floor separates structural support from numerical noise; magnitudes in
/// [warn_floor, floor) are reported as warnings, not violations.
inline VerifyReport verify_protocol(const RetrodictionProtocol& protocol,
                                    double floor = 1e-10, double warn_floor = 1e-12) {
    protocol.validate_shape();
    VerifyReport report;

    report.orthonormality = protocol.measurement.orthonormality_residual();
    if (report.orthonormality > floor) {
        VerifyFinding f;
        f.kind = VerifyFinding::Kind::orthonormality;
        f.magnitude = report.orthonormality;
        report.violations.push_back(f);
    } else if (report.orthonormality > warn_floor) {
        VerifyFinding f;
        f.kind = VerifyFinding::Kind::orthonormality;
        f.magnitude = report.orthonormality;
        report.warnings.push_back(f);
    }

    const int m = static_cast<int>(protocol.axes.size());
    const int K = protocol.measurement.outcomes();
    for (int l = 0; l < m; ++l) {
        for (int eta : {1, -1}) {
            const StateVector proj = project_spin(protocol.initial, protocol.axes[static_cast<std::size_t>(l)], eta);
            // support check
            for (int j = 0; j < K; ++j) {
                if (protocol.table.sign(j, l) == eta) continue;
                const double overlap = std::norm(inner(protocol.measurement.basis[static_cast<std::size_t>(j)], proj));
                if (overlap <= warn_floor) continue;
                VerifyFinding f;
                f.kind = VerifyFinding::Kind::support_contradiction;
                f.axis = l;
                f.eta = eta;
                f.outcome = j;
                f.magnitude = overlap;
                if (overlap > floor) {
                    report.violations.push_back(f);
                    report.worst_overlap = std::max(report.worst_overlap, overlap);
                } else {
                    report.warnings.push_back(f);
                }
            }
            // decomposition check: P_eta psi = sum_{j in S_eta} <phi_j|psi> phi_j
            StateVector recon(protocol.initial.dim_a,
                              std::vector<ComplexScalar>(static_cast<std::size_t>(protocol.initial.dim())));
            for (int j : protocol.table.support(l, eta)) {
                const ComplexScalar bj = inner(protocol.measurement.basis[static_cast<std::size_t>(j)], protocol.initial);
                recon = add(recon, scale(bj, protocol.measurement.basis[static_cast<std::size_t>(j)]));
            }
            const double resid = max_abs_diff(recon, proj);
            report.worst_decomposition = std::max(report.worst_decomposition, resid);
            if (resid > floor) {
                VerifyFinding f;
                f.kind = VerifyFinding::Kind::decomposition_residual;
                f.axis = l;
                f.eta = eta;
                f.magnitude = resid;
                report.violations.push_back(f);
            } else if (resid > warn_floor) {
                VerifyFinding f;
                f.kind = VerifyFinding::Kind::decomposition_residual;
                f.axis = l;
                f.eta = eta;
                f.magnitude = resid;
                report.warnings.push_back(f);
            }
        }
    }
    return report;
}

struct TrialStatistics {
    std::uint64_t trials = 0;
    std::uint64_t successes = 0;
    std::vector<std::uint64_t> axis_chosen;             // per axis
    std::vector<std::uint64_t> axis_successes;          // per axis
    std::vector<std::uint64_t> outcome_counts;          // per Alice outcome
    std::vector<TrialRecord> records;                   // filled only on request

    double success_rate() const {
        return trials == 0 ? 0.0 : static_cast<double>(successes) / static_cast<double>(trials);
    }
};

struct TrialOptions {
    bool collect_records = false;
    std::vector<double> axis_weights;  // empty means uniform
};

/// N independent rounds, each derived from (seed, trial index) alone.
/// Per-trial draws, in order: axis, Bob outcome, Alice outcome.
inline TrialStatistics run_trials(const RetrodictionProtocol& protocol, std::uint64_t n,
                                  std::uint64_t seed, const TrialOptions& options = {}) {
    protocol.validate_shape();
    const int m = static_cast<int>(protocol.axes.size());
    if (!options.axis_weights.empty() &&
        options.axis_weights.size() != static_cast<std::size_t>(m))
        throw std::invalid_argument("run_trials: one weight per axis");

    TrialStatistics stats;
    stats.axis_chosen.assign(static_cast<std::size_t>(m), 0);
    stats.axis_successes.assign(static_cast<std::size_t>(m), 0);
    stats.outcome_counts.assign(static_cast<std::size_t>(protocol.measurement.outcomes()), 0);

    double weight_total = 0.0;
    for (double w : options.axis_weights) {
        if (w < 0.0) throw std::invalid_argument("run_trials: weights must be nonnegative");
        weight_total += w;
    }
    if (!options.axis_weights.empty() && weight_total <= 0.0)
        throw std::invalid_argument("run_trials: weights must not all vanish");

    for (std::uint64_t t = 0; t < n; ++t) {
        SplitMix64 rng = trial_rng(seed, t);
        int l;
        if (options.axis_weights.empty()) {
            l = static_cast<int>(rng.next_below(static_cast<std::uint64_t>(m)));
        } else {
            const double draw = rng.next_double() * weight_total;
            double acc = 0.0;
            l = m - 1;
            for (int i = 0; i < m; ++i) {
                acc += options.axis_weights[static_cast<std::size_t>(i)];
                if (draw < acc) {
                    l = i;
                    break;
                }
            }
        }
        auto [eta, post] = bob_measure(protocol, l, rng);
        const int j = alice_measure(post, protocol.measurement, rng);

        TrialRecord rec;
        rec.chosen_axis = l;
        rec.bob_outcome = eta;
        rec.alice_outcome = j;
        rec.retrodictions.resize(static_cast<std::size_t>(m));
        for (int q = 0; q < m; ++q)
            rec.retrodictions[static_cast<std::size_t>(q)] = retrodict(protocol.table, j, q);
        rec.correct = rec.retrodictions[static_cast<std::size_t>(l)] == eta;

        stats.trials += 1;
        stats.axis_chosen[static_cast<std::size_t>(l)] += 1;
        stats.outcome_counts[static_cast<std::size_t>(j)] += 1;
        if (rec.correct) {
            stats.successes += 1;
            stats.axis_successes[static_cast<std::size_t>(l)] += 1;
        }
        if (options.collect_records) stats.records.push_back(std::move(rec));
    }
    return stats;
}

/// Exact joint distribution P(l, eta, j) with the axis drawn uniformly.
struct JointDistribution {
    int num_axes = 0;
    int num_outcomes = 0;
    std::vector<double> p;  // index ((l * 2) + (eta==-1)) * K + j

    double joint(int l, int eta, int j) const {
        return p[static_cast<std::size_t>((l * 2 + (eta == -1 ? 1 : 0)) * num_outcomes + j)];
    }
    double total() const {
        double s = 0.0;
        for (double v : p) s += v;
        return s;
    }
    /// P(j | l): eta marginalized out.
    double outcome_given_axis(int j, int l) const {
        return (joint(l, 1, j) + joint(l, -1, j)) * num_axes;
    }
    /// P(j | l, eta).
    double outcome_given_axis_sign(int j, int l, int eta) const {
        double denom = 0.0;
        for (int k = 0; k < num_outcomes; ++k) denom += joint(l, eta, k);
        return denom == 0.0 ? 0.0 : joint(l, eta, j) / denom;
    }
    /// P(l, eta | j).
    double axis_sign_given_outcome(int l, int eta, int j) const {
        double denom = 0.0;
        for (int q = 0; q < num_axes; ++q)
            for (int s : {1, -1}) denom += joint(q, s, j);
        return denom == 0.0 ? 0.0 : joint(l, eta, j) / denom;
    }
};

inline JointDistribution enumerate_outcomes(const RetrodictionProtocol& protocol) {
    protocol.validate_shape();
    const int m = static_cast<int>(protocol.axes.size());
    const int K = protocol.measurement.outcomes();
    JointDistribution dist;
    dist.num_axes = m;
    dist.num_outcomes = K;
    dist.p.assign(static_cast<std::size_t>(m) * 2 * K, 0.0);
    for (int l = 0; l < m; ++l)
        for (int eta : {1, -1})
            for (int j = 0; j < K; ++j) {
                const StateVector proj = project_spin(protocol.initial, protocol.axes[static_cast<std::size_t>(l)], eta);
                const double overlap = std::norm(inner(protocol.measurement.basis[static_cast<std::size_t>(j)], proj));
                dist.p[static_cast<std::size_t>((l * 2 + (eta == -1 ? 1 : 0)) * K + j)] =
                    overlap / static_cast<double>(m);
            }
    return dist;
}

/// Largest deviation of P(j | l) across axes for any fixed outcome; zero for
/// a leak-free protocol.
inline double leakage_residual(const RetrodictionProtocol& protocol) {
    const JointDistribution dist = enumerate_outcomes(protocol);
    double worst = 0.0;
    for (int j = 0; j < dist.num_outcomes; ++j) {
        double lo = 1.0, hi = 0.0;
        for (int l = 0; l < dist.num_axes; ++l) {
            const double v = dist.outcome_given_axis(j, l);
            lo = std::min(lo, v);
            hi = std::max(hi, v);
        }
        worst = std::max(worst, hi - lo);
    }
    return worst;
}

}  // namespace retroq
