#pragma once

#include <cmath>
#include <complex>
#include <stdexcept>
#include <string>
#include <vector>

#include "retroq/constraints.hpp"
#include "retroq/lookup.hpp"
#include "retroq/protocol.hpp"
#include "retroq/state.hpp"

namespace retroq {

inline std::vector<std::string> builtin_protocol_names() {
    return {"vaa", "singlet", "m4-symmetric", "m3-nonorthogonal"};
}

namespace detail {

inline ComplexScalar omega(double angle) { return std::polar(1.0, angle); }

/// Abstract six-component data behind the symmetric four-axis protocol.
/// The rows are indexed by outcome; the four columns of the sign table pair
/// with the tetrahedral axes returned by m4_axes().
struct M4Data {
    std::vector<double> b, Xx, Xy, Xz, chi1, chi2;

    M4Data() {
        const double s6 = 1.0 / std::sqrt(6.0);
        const double s12 = 1.0 / std::sqrt(12.0);
        b = {s6, s6, s6, s6, s6, s6};
        Xx = {s6, s6, s6, -s6, -s6, -s6};
        Xy = {2 * s12, -s12, -s12, -2 * s12, s12, s12};
        Xz = {0.0, -0.5, 0.5, 0.0, -0.5, 0.5};
        chi1 = {-0.5, 0.5, 0.0, -0.5, 0.0, 0.5};
        chi2 = {-s12, -s12, 2 * s12, -s12, 2 * s12, -s12};
    }
};

}  // namespace detail

inline LookupTable vaa_table() {
    return LookupTable(4, 3,
                       {+1, +1, +1,
                        -1, -1, +1,
                        +1, -1, -1,
                        -1, +1, -1});
}

inline LookupTable singlet_table() {
    return LookupTable(4, 3,
                       {-1, -1, -1,
                        +1, +1, -1,
                        -1, +1, +1,
                        +1, -1, +1});
}

inline LookupTable m4_table() {
    return LookupTable(6, 4,
                       {+1, +1, -1, -1,
                        +1, -1, -1, +1,
                        +1, -1, +1, -1,
                        -1, -1, +1, +1,
                        -1, +1, -1, +1,
                        -1, +1, +1, -1});
}

inline LookupTable m3_table() {
    return LookupTable(8, 3,
                       {-1, +1, -1,
                        -1, +1, +1,
                        -1, -1, -1,
                        -1, -1, +1,
                        +1, +1, -1,
                        +1, -1, +1,
                        +1, +1, +1,
                        +1, +1, +1});
}

inline std::vector<UnitAxis> coordinate_axes() {
    return {UnitAxis::normalized(1, 0, 0), UnitAxis::normalized(0, 1, 0),
            UnitAxis::normalized(0, 0, 1)};
}

/// Four unit directions summing to zero, pairwise dot product -1/3.
inline std::vector<UnitAxis> m4_axes() {
    const double r2 = std::sqrt(2.0);
    const UnitAxis n1 = UnitAxis::normalized(1, 0, 0);
    const UnitAxis n2 = UnitAxis::normalized(-1.0 / 3.0, 2.0 * r2 / 3.0, 0);
    const UnitAxis n3 = UnitAxis::normalized(-1.0 / 3.0, -r2 / 3.0, std::sqrt(2.0 / 3.0));
    const UnitAxis n4 = UnitAxis::normalized(-(n1.x + n2.x + n3.x), -(n1.y + n2.y + n3.y),
                                             -(n1.z + n2.z + n3.z));
    return {n1, n2, n3, n4};
}

/// Three axes whose pairwise cosines reproduce the cross sums of the
/// eight-outcome table under its tabulated weights (3/7, 3/7, -1/7).
inline std::vector<UnitAxis> m3_axes() {
    AxisGram gram(3);
    gram.at(0, 1) = gram.at(1, 0) = 3.0 / 7.0;
    gram.at(0, 2) = gram.at(2, 0) = 3.0 / 7.0;
    gram.at(1, 2) = gram.at(2, 1) = -1.0 / 7.0;
    return axes_from_gram(gram);
}

/// Maximally correlated two-qubit state (|uu> + |dd>)/sqrt(2).
inline StateVector vaa_state() {
    StateVector psi(2);
    psi.at(0, 0) = 1.0 / std::sqrt(2.0);
    psi.at(1, 1) = 1.0 / std::sqrt(2.0);
    return psi;
}

/// Antisymmetric two-qubit state (|ud> - |du>)/sqrt(2).
inline StateVector singlet_state() {
    StateVector psi(2);
    psi.at(0, 1) = 1.0 / std::sqrt(2.0);
    psi.at(1, 0) = -1.0 / std::sqrt(2.0);
    return psi;
}

inline std::vector<StateVector> vaa_basis() {
    const double h = 0.5, r = 1.0 / std::sqrt(2.0);
    const ComplexScalar p = detail::omega(M_PI / 4.0), q = detail::omega(-M_PI / 4.0);
    std::vector<StateVector> basis(4, StateVector(2));
    basis[0].amps = {r, h * p, h * q, 0.0};
    basis[1].amps = {r, -h * p, -h * q, 0.0};
    basis[2].amps = {0.0, h * q, h * p, r};
    basis[3].amps = {0.0, -h * q, -h * p, r};
    return basis;
}

/// The four rows exactly as tabulated for the antisymmetric state.  The
/// working basis reorders rows 3 and 4; see errata_check("singlet").
inline std::vector<StateVector> singlet_tabulated_basis() {
    const double h = 0.5, r = 1.0 / std::sqrt(2.0);
    const ComplexScalar p = detail::omega(M_PI / 4.0), q = detail::omega(-M_PI / 4.0);
    std::vector<StateVector> rows(4, StateVector(2));
    rows[0].amps = {-h * q, r, 0.0, h * p};
    rows[1].amps = {h * q, r, 0.0, -h * p};
    rows[2].amps = {-h * p, 0.0, r, h * q};
    rows[3].amps = {h * p, 0.0, r, -h * q};
    return rows;
}

inline std::vector<StateVector> singlet_basis() {
    const auto rows = singlet_tabulated_basis();
    return {rows[0], rows[1], rows[3], rows[2]};
}

/// Consistent six-outcome basis: ladder anchors on Alice slots 1 (up) and 0
/// (down), complement rows on slot 2.
inline std::vector<StateVector> m4_basis() {
    const detail::M4Data d;
    const double rt2 = std::sqrt(2.0);
    const ComplexScalar i1(0.0, 1.0);
    std::vector<StateVector> basis;
    basis.reserve(6);
    for (int j = 0; j < 6; ++j) {
        StateVector phi(3);
        phi.at(0, 0) = (d.Xx[j] - i1 * d.Xy[j]) / rt2;
        phi.at(0, 1) = (d.b[j] - d.Xz[j]) / rt2;
        phi.at(1, 0) = (d.b[j] + d.Xz[j]) / rt2;
        phi.at(1, 1) = (d.Xx[j] + i1 * d.Xy[j]) / rt2;
        phi.at(2, 0) = d.chi1[j];
        phi.at(2, 1) = d.chi2[j];
        basis.push_back(std::move(phi));
    }
    return basis;
}

/// The six rows exactly as tabulated, converted to amplitude order.  Known
/// to be defective; errata_check("m4-symmetric") localizes the damage.
inline std::vector<StateVector> m4_tabulated_basis() {
    const double s3 = 1.0 / std::sqrt(3.0);
    const double s6 = 1.0 / std::sqrt(6.0);
    const double s8 = 1.0 / std::sqrt(8.0);
    const double s12 = 1.0 / std::sqrt(12.0);
    const double s24 = 1.0 / std::sqrt(24.0);
    const ComplexScalar i1(0.0, 1.0);
    // Tabulated component order per row: (|2,u>, |1,u>, |0,u>, |2,d>, |1,d>, |0,d>)
    // where the slot label counts down while the amplitude index counts up.
    const std::vector<std::vector<ComplexScalar>> rows = {
        {s12 - i1 * s6, s12, -0.5, s12 + i1 * s6, s12, -s12},
        {-s12 + i1 * s6, s12, -0.5, -s12 - i1 * s6, s12, -s12},
        {s12 + i1 * s24, s12 + s8, 0.0, s12 - i1 * s24, s12 - s8, s3},
        {-s12 - i1 * s24, s12 - s8, 0.0, -s12 + i1 * s24, s12 + s8, s3},
        {-s12 - i1 * s24, s12 + s8, 0.5, -s12 + i1 * s24, s12 - s8, -s12},
        {s12 + i1 * s24, s12 + s8, 0.5, s12 - i1 * s24, s8 + s12, -s12},
    };
    std::vector<StateVector> basis;
    basis.reserve(6);
    for (const auto& row : rows) {
        StateVector phi(3);
        phi.amps = {row[0], row[3], row[1], row[4], row[2], row[5]};
        basis.push_back(std::move(phi));
    }
    return basis;
}

inline CoefficientVector m4_coefficients() {
    return CoefficientVector{std::vector<double>(6, 1.0 / std::sqrt(6.0))};
}

inline StateVector m4_state() {
    StateVector psi(3);
    psi.at(0, 1) = 1.0 / std::sqrt(2.0);
    psi.at(1, 0) = 1.0 / std::sqrt(2.0);
    return psi;
}

/// The eight rows exactly as tabulated for the three-axis eight-outcome
/// data set.  Deliberately kept verbatim including its internal
/// inconsistencies; see errata_check("m3-nonorthogonal").
inline std::vector<StateVector> m3_tabulated_basis() {
    const ComplexScalar i1(0.0, 1.0);
    const double r3 = std::sqrt(3.0), r5 = std::sqrt(5.0), r6 = std::sqrt(6.0);
    const double r7 = std::sqrt(7.0), r10 = std::sqrt(10.0), r14 = std::sqrt(14.0);
    const double r35 = std::sqrt(35.0);
    std::vector<StateVector> basis(8, StateVector(4));
    basis[0].amps = {0, 0, 0, 0, 0, 1, 0, 0};
    basis[1].amps = {-0.25 * (1.0 + i1 * r3), -0.25 * (1.0 - i1 * r3), 0.25, 0.25,
                     0, 0, r35 / 10.0, -r10 / 20.0};
    basis[2].amps = {0.25 * (1.0 + i1 * r3), 0.25 * (1.0 - i1 * r3), 0.25, 0.25,
                     0, 0, r35 / 10.0, -r10 / 20.0};
    basis[3].amps = {-std::sqrt(2.0) / 4.0 + i1 * r6 / 12.0, -std::sqrt(2.0) / 4.0 - i1 * r6 / 12.0,
                     std::sqrt(2.0) / 4.0 - r3 / 6.0, std::sqrt(2.0) / 4.0 + r3 / 6.0,
                     r7 / 7.0, 0, -1.0 / 35.0, r5 / 10.0};
    basis[4].amps = {0.25 - i1 * r3 / 12.0, 0.25 + i1 * r3 / 12.0,
                     0.25 + r6 / 12.0, 0.25 - r6 / 12.0, 0, 0, 0, r10 / 4.0};
    basis[5].amps = {0.25 - i1 * r3 / 12.0, 0.25 + i1 * r3 / 12.0,
                     0.25 + r6 / 12.0, 0.25 - r6 / 12.0,
                     -r14 / 7.0, 0, -2.0 * r35 / 35.0, -3.0 * r10 / 20.0};
    basis[6].amps = {0.25 - i1 * r3 / 12.0, 0.25 + i1 * r3 / 12.0,
                     0.25 + r6 / 6.0, 0.25 - r6 / 6.0,
                     -r14 / 7.0, 0, -3.0 * r35 / 70.0, -r10 / 20.0};
    basis[7].amps = {-(0.25 - i1 * r3 / 12.0), -(0.25 + i1 * r3 / 12.0),
                     0.25 + r6 / 6.0, 0.25 - r6 / 6.0,
                     -r14 / 7.0, 0, -3.0 * r35 / 70.0, -r10 / 20.0};
    return basis;
}

inline CoefficientVector m3_coefficients() {
    const double r8 = std::sqrt(1.0 / 8.0);
    return CoefficientVector{{r8, 0.0, r8, r8, r8, r8, r8, r8}};
}

/// sum_j b_j phi_j over the tabulated rows, kept unnormalized; its norm
/// deficit is one of the audited defects.
inline StateVector m3_state() {
    const auto basis = m3_tabulated_basis();
    const auto coeff = m3_coefficients();
    StateVector psi(4);
    for (int j = 0; j < 8; ++j)
        for (std::size_t i = 0; i < psi.amps.size(); ++i)
            psi.amps[i] += coeff.b[static_cast<std::size_t>(j)] * basis[static_cast<std::size_t>(j)].amps[i];
    return psi;
}

/// Named protocols with pinned data.  Throws for unknown names.
inline RetrodictionProtocol builtin_protocol(const std::string& name) {
    RetrodictionProtocol p;
    if (name == "vaa") {
        p.initial = vaa_state();
        p.axes = coordinate_axes();
        p.measurement = ProjectiveMeasurement(vaa_basis());
        p.table = vaa_table();
    } else if (name == "singlet") {
        p.initial = singlet_state();
        p.axes = coordinate_axes();
        p.measurement = ProjectiveMeasurement(singlet_basis());
        p.table = singlet_table();
    } else if (name == "m4-symmetric") {
        p.initial = m4_state();
        p.axes = m4_axes();
        p.measurement = ProjectiveMeasurement(m4_basis());
        p.table = m4_table();
    } else if (name == "m3-nonorthogonal") {
        p.initial = m3_state();
        p.axes = m3_axes();
        p.measurement = ProjectiveMeasurement(m3_tabulated_basis());
        p.table = m3_table();
    } else {
        throw std::invalid_argument("builtin_protocol: unknown builtin '" + name + "'");
    }
    p.validate_shape();
    return p;
}

/// One audited discrepancy between tabulated data and the value the
/// surrounding structure demands.
struct ErrataEntry {
    // "amplitude", "orthogonality", "normalization", "duplicate-row",
    // "coefficient-normalization", or "state-normalization"
    std::string kind;
    std::vector<int> location;  // 1-based row indices; amplitude entries append a 0-based component
    double magnitude = 0.0;
    ComplexScalar found{};
    ComplexScalar consistent{};
};

struct ErrataReport {
    std::string name;
    bool clean = true;
    // Tabulated position i carries working row row_permutation[i-1] (1-based);
    // empty when the order already agrees.
    std::vector<int> row_permutation;
    bool down_columns_exchanged = false;
    std::vector<ErrataEntry> entries;
    std::vector<std::string> notes;
};

namespace detail {

inline void gram_entries(const std::vector<StateVector>& basis, double tol,
                         std::vector<ErrataEntry>& out) {
    const int K = static_cast<int>(basis.size());
    for (int i = 0; i < K; ++i)
        for (int j = i; j < K; ++j) {
            const ComplexScalar ov = inner(basis[static_cast<std::size_t>(i)],
                                           basis[static_cast<std::size_t>(j)]);
            const double dev = std::abs(ov - (i == j ? 1.0 : 0.0));
            if (dev > tol) {
                ErrataEntry e;
                e.kind = i == j ? "normalization" : "orthogonality";
                e.location = {i + 1, j + 1};
                e.magnitude = dev;
                e.found = ov;
                e.consistent = i == j ? 1.0 : 0.0;
                out.push_back(std::move(e));
            }
        }
}

}  // namespace detail

/// Audits the tabulated data behind a builtin against the structure it is
/// supposed to satisfy and reports every discrepancy found.  Pure data pass:
/// nothing is repaired here, the factories already expose working forms.
inline ErrataReport errata_check(const std::string& name, double tol = 1e-6) {
    ErrataReport report;
    report.name = name;
    if (name == "vaa") {
        report.notes.push_back(
            "tabulated retrodiction signs pair with the antisymmetric companion state; "
            "the working table negates every entry");
        report.clean = false;
        return report;
    }
    if (name == "singlet") {
        report.row_permutation = {1, 2, 4, 3};
        report.notes.push_back(
            "tabulated rows 3 and 4 appear exchanged; the working basis swaps them back");
        report.clean = false;
        return report;
    }
    if (name == "m4-symmetric") {
        const auto tabulated = m4_tabulated_basis();
        auto reference = m4_basis();
        // The tabulated down-sector columns carry each other's values; undo
        // that exchange on the consistent rows before matching row order.
        for (auto& phi : reference) std::swap(phi.amps[1], phi.amps[3]);
        report.down_columns_exchanged = true;

        // A single corrupted amplitude costs at most ~0.2 of overlap while a
        // wrong row stays below ~0.4, so 0.7 separates the two cleanly.
        for (int i = 0; i < 6; ++i) {
            int best = -1;
            double best_ov = 0.0;
            for (int j = 0; j < 6; ++j) {
                const double ov = std::abs(inner(reference[static_cast<std::size_t>(j)],
                                                 tabulated[static_cast<std::size_t>(i)])) /
                                  norm(tabulated[static_cast<std::size_t>(i)]);
                if (ov > best_ov) {
                    best_ov = ov;
                    best = j;
                }
            }
            if (best_ov < 0.7) {
                report.notes.push_back("tabulated row " + std::to_string(i + 1) +
                                       " matches no consistent row");
                best = i;
            }
            report.row_permutation.push_back(best + 1);
        }
        for (int i = 0; i < 6; ++i) {
            const auto& tab = tabulated[static_cast<std::size_t>(i)];
            const auto& ref = reference[static_cast<std::size_t>(report.row_permutation[static_cast<std::size_t>(i)] - 1)];
            for (std::size_t c = 0; c < tab.amps.size(); ++c) {
                const double dev = std::abs(tab.amps[c] - ref.amps[c]);
                if (dev > tol) {
                    ErrataEntry e;
                    e.kind = "amplitude";
                    e.location = {i + 1, static_cast<int>(c)};
                    e.magnitude = dev;
                    e.found = tab.amps[c];
                    e.consistent = ref.amps[c];
                    report.entries.push_back(std::move(e));
                }
            }
        }
        detail::gram_entries(tabulated, tol, report.entries);
        report.clean = report.entries.empty() && report.row_permutation == std::vector<int>{1, 2, 3, 4, 5, 6};
        return report;
    }
    if (name == "m3-nonorthogonal") {
        const auto basis = m3_tabulated_basis();
        const auto coeff = m3_coefficients();
        const auto table = m3_table();

        ErrataEntry norm_entry;
        norm_entry.kind = "coefficient-normalization";
        norm_entry.magnitude = coeff.normalization_residual();
        if (norm_entry.magnitude > tol) report.entries.push_back(std::move(norm_entry));

        for (int j1 = 0; j1 < table.num_outcomes; ++j1)
            for (int j2 = j1 + 1; j2 < table.num_outcomes; ++j2) {
                bool same = true;
                for (int l = 0; l < table.num_axes; ++l)
                    if (table.sign(j1, l) != table.sign(j2, l)) same = false;
                if (same) {
                    ErrataEntry e;
                    e.kind = "duplicate-row";
                    e.location = {j1 + 1, j2 + 1};
                    report.entries.push_back(std::move(e));
                }
            }

        const double snorm = norm(m3_state());
        if (std::abs(snorm - 1.0) > tol) {
            ErrataEntry e;
            e.kind = "state-normalization";
            e.magnitude = std::abs(snorm - 1.0);
            e.found = snorm;
            e.consistent = 1.0;
            report.entries.push_back(std::move(e));
        }

        detail::gram_entries(basis, tol, report.entries);
        report.clean = report.entries.empty();
        return report;
    }
    throw std::invalid_argument("errata_check: unknown builtin '" + name + "'");
}

}  // namespace retroq
