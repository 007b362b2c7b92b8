#pragma once

#include <Eigen/Dense>
#include <array>
#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "retroq/lookup.hpp"
#include "retroq/state.hpp"

namespace retroq {

/// Geometry or table admits no protocol.
struct InfeasibleError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Amplitudes of psi in Alice's basis, kept nonnegative real; any residual
/// sign freedom lives in the phi_j phases.
struct CoefficientVector {
    std::vector<double> b;

    int size() const { return static_cast<int>(b.size()); }

    double normalization_residual() const {
        double s = 0.0;
        for (double v : b) s += v * v;
        return std::abs(s - 1.0);
    }
};

/// Pairwise axis dot products.
struct AxisGram {
    int m = 0;
    std::vector<double> g;  // row major, m * m

    AxisGram() = default;

    explicit AxisGram(int m_) : m(m_), g(static_cast<std::size_t>(m_) * m_, 0.0) {
        if (m < 1) throw std::invalid_argument("AxisGram: need at least one axis");
        for (int i = 0; i < m; ++i) at(i, i) = 1.0;
    }

    static AxisGram from_axes(const std::vector<UnitAxis>& axes) {
        AxisGram G(static_cast<int>(axes.size()));
        for (int i = 0; i < G.m; ++i)
            for (int k = 0; k < G.m; ++k)
                G.at(i, k) = axes[static_cast<std::size_t>(i)].dot(axes[static_cast<std::size_t>(k)]);
        return G;
    }

    double& at(int i, int k) { return g[static_cast<std::size_t>(i) * m + k]; }
    double at(int i, int k) const { return g[static_cast<std::size_t>(i) * m + k]; }
};

/// Residuals of the coupled table/coefficient/geometry conditions.  The
/// squared-sign condition is the enforced one; the unsquared variant is
/// computed alongside for comparison.
struct ConstraintReport {
    double normalization = 0.0;                    // |sum b_j^2 - 1|
    std::vector<double> signed_sums_squared;       // per axis: |sum_j eps b_j^2|
    std::vector<double> signed_sums_unsquared;     // per axis: |sum_j eps b_j|
    std::vector<double> half_sums;                 // per axis: |sum_{S+} b_j^2 - 1/2|
    std::vector<double> gram_residuals;            // per pair (l<k): |n_l.n_k - sum eps eps b^2|

    double worst_enforced() const {
        double w = normalization;
        for (double v : signed_sums_squared) w = std::max(w, v);
        for (double v : half_sums) w = std::max(w, v);
        for (double v : gram_residuals) w = std::max(w, v);
        return w;
    }
};

inline ConstraintReport check_constraints(const LookupTable& table, const CoefficientVector& coeff,
                                          const std::vector<UnitAxis>& axes) {
    const int K = table.num_outcomes;
    const int m = table.num_axes;
    if (coeff.size() != K)
        throw std::invalid_argument("check_constraints: coefficient count must equal K");
    if (static_cast<int>(axes.size()) != m)
        throw std::invalid_argument("check_constraints: axis count must equal m");

    ConstraintReport report;
    double total = 0.0;
    for (double v : coeff.b) total += v * v;
    report.normalization = std::abs(total - 1.0);

    for (int l = 0; l < m; ++l) {
        double sq = 0.0, unsq = 0.0, plus = 0.0;
        for (int j = 0; j < K; ++j) {
            const double s = static_cast<double>(table.sign(j, l));
            const double bj = coeff.b[static_cast<std::size_t>(j)];
            sq += s * bj * bj;
            unsq += s * bj;
            if (s > 0) plus += bj * bj;
        }
        report.signed_sums_squared.push_back(std::abs(sq));
        report.signed_sums_unsquared.push_back(std::abs(unsq));
        report.half_sums.push_back(std::abs(plus - 0.5));
    }

    for (int l = 0; l < m; ++l)
        for (int k = l + 1; k < m; ++k) {
            double s = 0.0;
            for (int j = 0; j < K; ++j)
                s += static_cast<double>(table.sign(j, l) * table.sign(j, k)) *
                     coeff.b[static_cast<std::size_t>(j)] * coeff.b[static_cast<std::size_t>(j)];
            report.gram_residuals.push_back(
                std::abs(axes[static_cast<std::size_t>(l)].dot(axes[static_cast<std::size_t>(k)]) - s));
        }
    return report;
}

/// Solves for b_j^2 from normalization, per-axis half sums, and the Gram
/// relations, then takes positive roots.  The system is solved least-squares;
/// an inconsistent system or a negative square is infeasible.
inline CoefficientVector solve_coefficients(const LookupTable& table, const AxisGram& gram,
                                            double tol = default_tolerances().pipeline) {
    const int K = table.num_outcomes;
    const int m = table.num_axes;
    if (gram.m != m)
        throw std::invalid_argument("solve_coefficients: gram size must equal m");

    const int pair_rows = m * (m - 1) / 2;
    Eigen::MatrixXd A(1 + m + pair_rows, K);
    Eigen::VectorXd y(1 + m + pair_rows);
    int r = 0;
    A.row(r).setOnes();
    y(r) = 1.0;
    ++r;
    for (int l = 0; l < m; ++l, ++r) {
        for (int j = 0; j < K; ++j) A(r, j) = table.sign(j, l) > 0 ? 1.0 : 0.0;
        y(r) = 0.5;
    }
    for (int l = 0; l < m; ++l)
        for (int k = l + 1; k < m; ++k, ++r) {
            for (int j = 0; j < K; ++j)
                A(r, j) = static_cast<double>(table.sign(j, l) * table.sign(j, k));
            y(r) = gram.at(l, k);
        }

    const Eigen::VectorXd u = A.colPivHouseholderQr().solve(y);
    const double residual = (A * u - y).cwiseAbs().maxCoeff();
    if (residual > tol)
        throw InfeasibleError("no retrodiction protocol for this table/geometry: "
                              "constraint system inconsistent, residual " + std::to_string(residual));

    CoefficientVector coeff;
    coeff.b.reserve(static_cast<std::size_t>(K));
    for (int j = 0; j < K; ++j) {
        double v = u(j);
        if (v < -1e-12)
            throw InfeasibleError("no retrodiction protocol for this table/geometry: "
                                  "negative squared coefficient b[" + std::to_string(j + 1) + "]^2 = " +
                                  std::to_string(v));
        if (v < 0.0) v = 0.0;
        coeff.b.push_back(std::sqrt(v));
    }
    return coeff;
}

/// Unit 3-vectors with the prescribed pairwise dot products, via symmetric
/// eigendecomposition (eigenvalues clamped at -1e-12).  Deterministic: axes
/// are built from eigenvectors in descending eigenvalue order with the sign
/// fixed by the first nonvanishing component.
inline std::vector<UnitAxis> axes_from_gram(const AxisGram& gram,
                                            double tol = default_tolerances().pipeline) {
    const int m = gram.m;
    Eigen::MatrixXd G(m, m);
    for (int i = 0; i < m; ++i)
        for (int k = 0; k < m; ++k) G(i, k) = gram.at(i, k);
    if ((G - G.transpose()).cwiseAbs().maxCoeff() > tol)
        throw std::invalid_argument("axes_from_gram: gram matrix must be symmetric");

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(G);
    const Eigen::VectorXd ev = es.eigenvalues();  // ascending
    for (int i = 0; i < m; ++i)
        if (ev(i) < -1e-12)
            throw InfeasibleError("axes_from_gram: gram matrix is not positive semidefinite "
                                  "(eigenvalue " + std::to_string(ev(i)) + ")");
    int rank = 0;
    for (int i = 0; i < m; ++i)
        if (ev(i) > 1e-10) ++rank;
    if (rank > 3)
        throw InfeasibleError("axes_from_gram: gram matrix has rank above three; "
                              "no embedding into directions exists");

    std::vector<UnitAxis> axes;
    axes.reserve(static_cast<std::size_t>(m));
    for (int l = 0; l < m; ++l) {
        double comp[3] = {0.0, 0.0, 0.0};
        int out = 0;
        for (int i = m - 1; i >= 0 && out < 3; --i) {  // descending eigenvalues
            if (ev(i) <= 1e-10) break;
            Eigen::VectorXd v = es.eigenvectors().col(i);
            for (int s = 0; s < m; ++s) {
                if (std::abs(v(s)) > 1e-9) {
                    if (v(s) < 0.0) v = -v;
                    break;
                }
            }
            comp[out] = std::sqrt(std::max(ev(i), 0.0)) * v(l);
            ++out;
        }
        axes.push_back(UnitAxis::normalized(comp[0], comp[1], comp[2]));
        const double n2 = comp[0] * comp[0] + comp[1] * comp[1] + comp[2] * comp[2];
        if (std::abs(n2 - 1.0) > tol)
            throw InfeasibleError("axes_from_gram: diagonal entry embeds with norm " +
                                  std::to_string(std::sqrt(n2)) + ", expected a unit direction");
    }
    return axes;
}

/// Residuals of eps^(extra) = sum_l c_l eps^(l) over the first three axes.
struct AxisDependenceReport {
    std::vector<std::vector<double>> row_residuals;  // one list per extra axis
    double worst = 0.0;
};

inline AxisDependenceReport check_axis_dependence(const LookupTable& table,
                                                  const std::vector<std::array<double, 3>>& coeffs) {
    const int m = table.num_axes;
    if (m <= 3)
        throw std::invalid_argument("check_axis_dependence: not applicable for m <= 3");
    if (static_cast<int>(coeffs.size()) != m - 3)
        throw std::invalid_argument("check_axis_dependence: one coefficient triple per extra axis");

    AxisDependenceReport report;
    for (int extra = 0; extra < m - 3; ++extra) {
        std::vector<double> rows;
        for (int j = 0; j < table.num_outcomes; ++j) {
            double pred = 0.0;
            for (int l = 0; l < 3; ++l)
                pred += coeffs[static_cast<std::size_t>(extra)][static_cast<std::size_t>(l)] *
                        static_cast<double>(table.sign(j, l));
            const double resid = std::abs(pred - static_cast<double>(table.sign(j, 3 + extra)));
            rows.push_back(resid);
            report.worst = std::max(report.worst, resid);
        }
        report.row_residuals.push_back(std::move(rows));
    }
    return report;
}

struct FeasibilityVerdict {
    bool feasible = false;
    std::string reason;
};

/// m <= 3 always admits protocols; m = 4 only for directions summing to zero;
/// m >= 5 never does.
inline FeasibilityVerdict feasibility(const std::vector<UnitAxis>& axes) {
    const int m = static_cast<int>(axes.size());
    if (m < 1) throw std::invalid_argument("feasibility: need at least one axis");
    if (m <= 2) return {true, "protocols with one or two axes are always realizable"};
    if (m == 3) return {true, "three axes are always realizable"};
    if (m == 4) {
        double sx = 0.0, sy = 0.0, sz = 0.0;
        for (const auto& n : axes) {
            sx += n.x;
            sy += n.y;
            sz += n.z;
        }
        const double s = std::sqrt(sx * sx + sy * sy + sz * sz);
        if (s < 1e-10) return {true, "four directions sum to zero"};
        return {false, "four directions must sum to zero; the sum has norm " + std::to_string(s)};
    }
    return {false, "no protocol exists for five or more axes"};
}

}  // namespace retroq
