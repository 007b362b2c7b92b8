#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <complex>
#include <limits>
#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

#include "retroq/constraints.hpp"
#include "retroq/lookup.hpp"
#include "retroq/spin.hpp"
#include "retroq/state.hpp"

namespace retroq {

namespace detail {

using CMatrix = Eigen::Matrix<ComplexScalar, Eigen::Dynamic, Eigen::Dynamic>;
using CVector = Eigen::Matrix<ComplexScalar, Eigen::Dynamic, 1>;

/// Traceless hermitian generator basis: Pauli matrices for d = 2, Gell-Mann
/// matrices in their conventional order for d = 3, and the same
/// pair-symmetric / pair-antisymmetric / diagonal pattern for larger d.
inline std::vector<CMatrix> su_generators(int d) {
    if (d < 2) throw std::invalid_argument("su_generators: dimension must be at least 2");
    const ComplexScalar I(0.0, 1.0);
    std::vector<CMatrix> gens;
    auto sym = [&](int a, int b) {
        CMatrix g = CMatrix::Zero(d, d);
        g(a, b) = 1.0;
        g(b, a) = 1.0;
        return g;
    };
    auto antisym = [&](int a, int b) {
        CMatrix g = CMatrix::Zero(d, d);
        g(a, b) = -I;
        g(b, a) = I;
        return g;
    };
    auto diag = [&](int k) {
        // diag(1,..,1,-k,0,..,0) / sqrt(k(k+1)/2), with k ones
        CMatrix g = CMatrix::Zero(d, d);
        const double scale = std::sqrt(2.0 / (k * (k + 1.0)));
        for (int i = 0; i < k; ++i) g(i, i) = scale;
        g(k, k) = -k * scale;
        return g;
    };
    if (d == 2) {
        gens = {sym(0, 1), antisym(0, 1), diag(1)};
        return gens;
    }
    if (d == 3) {
        gens = {sym(0, 1), antisym(0, 1), diag(1), sym(0, 2),
                antisym(0, 2), sym(1, 2), antisym(1, 2), diag(2)};
        return gens;
    }
    for (int a = 0; a < d; ++a)
        for (int b = a + 1; b < d; ++b) {
            gens.push_back(sym(a, b));
            gens.push_back(antisym(a, b));
        }
    for (int k = 1; k < d; ++k) gens.push_back(diag(k));
    return gens;
}

/// exp(iH) for hermitian H.
inline CMatrix unitary_exp(const CMatrix& H) {
    Eigen::SelfAdjointEigenSolver<CMatrix> es(H);
    const int d = static_cast<int>(H.rows());
    CMatrix D = CMatrix::Zero(d, d);
    for (int i = 0; i < d; ++i)
        D(i, i) = std::exp(ComplexScalar(0.0, es.eigenvalues()(i)));
    return es.eigenvectors() * D * es.eigenvectors().adjoint();
}

inline CMatrix eigenspace_unitary(const std::vector<double>& theta, double lambda, int d) {
    const auto gens = su_generators(d);
    if (theta.size() > gens.size())
        throw std::invalid_argument("construct_basis: too many rotation parameters for eigenspace dimension");
    CMatrix H = CMatrix::Identity(d, d) * ComplexScalar(lambda, 0.0);
    for (std::size_t i = 0; i < theta.size(); ++i) H += theta[i] * gens[i];
    return unitary_exp(H);
}

}  // namespace detail

/// Rotation parameters for the two spin eigenspaces plus the anchor slots
/// that receive psi's support.  chi_abstract overrides the default
/// Gram-Schmidt completion of the abstract frame (first half joins the up
/// sector, second half the down sector).
struct ConstructOptions {
    std::vector<double> theta_plus;
    double lambda_plus = 0.0;
    std::vector<double> theta_minus;
    double lambda_minus = 0.0;
    int slot_up = 0;
    int slot_down = 1;
    std::optional<std::vector<std::vector<ComplexScalar>>> chi_abstract;
};

struct ConstructionResult {
    std::vector<StateVector> basis;
    CoefficientVector coefficients;
    std::vector<double> theta_plus;
    double lambda_plus = 0.0;
    std::vector<double> theta_minus;
    double lambda_minus = 0.0;
};

/// Builds an orthonormal K-outcome basis realizing the table for
/// psi = sum_j b_j phi_j, with the three spin components acting as ladder
/// maps between the sectors.  The up/down sectors each carry K/2 Alice
/// slots; the identity rotation places psi on (slot_up, up) + (slot_down,
/// down).  Requires the axes to span all three directions.
inline ConstructionResult construct_basis(const LookupTable& table, const CoefficientVector& coeff,
                                          const std::vector<UnitAxis>& axes,
                                          const ConstructOptions& options = {},
                                          double tol = default_tolerances().pipeline) {
    using detail::CMatrix;
    using detail::CVector;
    const int K = table.num_outcomes;
    const int m = table.num_axes;
    if (coeff.size() != K)
        throw std::invalid_argument("construct_basis: coefficient count must equal K");
    if (static_cast<int>(axes.size()) != m)
        throw std::invalid_argument("construct_basis: axis count must equal m");
    if (K % 2 != 0)
        throw std::invalid_argument("construct_basis: outcome count must be even");
    const int d = K / 2;  // Alice slots per spin sector
    if (d < 2)
        throw std::invalid_argument("construct_basis: need at least four outcomes");
    if (options.slot_up == options.slot_down || options.slot_up < 0 || options.slot_down < 0 ||
        options.slot_up >= d || options.slot_down >= d)
        throw std::invalid_argument("construct_basis: anchor slots must be distinct and within range");

    const ConstraintReport constraints = check_constraints(table, coeff, axes);
    if (constraints.worst_enforced() > tol)
        throw InfeasibleError("construct_basis: constraints violated, worst residual " +
                              std::to_string(constraints.worst_enforced()));

    // Signed-coefficient images of the three coordinate directions.
    Eigen::MatrixXd axes_mat(m, 3);
    for (int l = 0; l < m; ++l) {
        axes_mat(l, 0) = axes[static_cast<std::size_t>(l)].x;
        axes_mat(l, 1) = axes[static_cast<std::size_t>(l)].y;
        axes_mat(l, 2) = axes[static_cast<std::size_t>(l)].z;
    }
    Eigen::MatrixXd X(K, 3);
    for (int u = 0; u < 3; ++u) {
        Eigen::Vector3d e = Eigen::Vector3d::Zero();
        e(u) = 1.0;
        const Eigen::VectorXd c = axes_mat.transpose().colPivHouseholderQr().solve(e);
        if ((axes_mat.transpose() * c - e).cwiseAbs().maxCoeff() > tol)
            throw std::invalid_argument("construct_basis: axes must span all three directions");
        for (int j = 0; j < K; ++j) {
            double v = 0.0;
            for (int l = 0; l < m; ++l)
                v += c(l) * static_cast<double>(table.sign(j, l)) * coeff.b[static_cast<std::size_t>(j)];
            X(j, u) = v;
        }
    }

    CVector bvec(K);
    for (int j = 0; j < K; ++j) bvec(j) = coeff.b[static_cast<std::size_t>(j)];
    const ComplexScalar i1(0.0, 1.0);
    const double rt2 = std::sqrt(2.0);
    const CVector u1p = (X.col(0) + i1 * X.col(1)).cast<ComplexScalar>() / rt2;
    const CVector u1m = (X.col(0) - i1 * X.col(1)).cast<ComplexScalar>() / rt2;
    const CVector u2p = (bvec + X.col(2).cast<ComplexScalar>()) / rt2;
    const CVector u2m = (bvec - X.col(2).cast<ComplexScalar>()) / rt2;

    // Complete the four anchors to an orthonormal frame of C^K.
    std::vector<CVector> frame = {u1p, u2p, u1m, u2m};
    for (auto& f : frame) {
        const double n = f.norm();
        if (std::abs(n - 1.0) > 0.5)  // anchors of a valid protocol have unit norm
            throw InfeasibleError("construct_basis: ladder anchors are not normalizable");
        f /= n;
    }
    for (int a = 1; a < 4; ++a)
        for (int b0 = 0; b0 < a; ++b0)
            if (std::abs(frame[static_cast<std::size_t>(b0)].dot(frame[static_cast<std::size_t>(a)])) > 1e-8)
                throw InfeasibleError("construct_basis: ladder anchors are not orthogonal");

    const int nchi = K - 4;
    std::vector<CVector> chis;
    if (options.chi_abstract) {
        if (static_cast<int>(options.chi_abstract->size()) != nchi)
            throw std::invalid_argument("construct_basis: need K - 4 complement vectors");
        for (const auto& raw : *options.chi_abstract) {
            if (static_cast<int>(raw.size()) != K)
                throw std::invalid_argument("construct_basis: complement vectors must have length K");
            CVector v(K);
            for (int j = 0; j < K; ++j) v(j) = raw[static_cast<std::size_t>(j)];
            chis.push_back(v);
        }
    } else {
        // Deterministic completion: coordinate vectors in index order,
        // orthogonalized (twice, for stability) against everything kept.
        for (int e = 0; e < K && static_cast<int>(chis.size()) < nchi; ++e) {
            CVector v = CVector::Zero(K);
            v(e) = 1.0;
            for (int pass = 0; pass < 2; ++pass) {
                for (const auto& f : frame) v -= f.dot(v) * f;
                for (const auto& c : chis) v -= c.dot(v) * c;
            }
            if (v.norm() > 1e-6) chis.push_back(v.normalized());
        }
        if (static_cast<int>(chis.size()) != nchi)
            throw InfeasibleError("construct_basis: failed to complete the abstract frame");
    }
    for (const auto& c : chis) {
        if (std::abs(c.norm() - 1.0) > tol)
            throw std::invalid_argument("construct_basis: complement vectors must be unit norm");
        for (const auto& f : frame)
            if (std::abs(f.dot(c)) > tol)
                throw std::invalid_argument("construct_basis: complement vectors must be orthogonal to the anchors");
    }
    for (std::size_t a = 0; a < chis.size(); ++a)
        for (std::size_t b0 = 0; b0 < a; ++b0)
            if (std::abs(chis[b0].dot(chis[a])) > tol)
                throw std::invalid_argument("construct_basis: complement vectors must be mutually orthogonal");
    if (nchi % 2 != 0)
        throw std::invalid_argument("construct_basis: outcome count must split evenly between sectors");
    const int half = nchi / 2;

    // Abstract frames per sector.  The first two rows are the ladder
    // anchors; the sector unitaries must agree there because sigma_x/sigma_y
    // map one sector's anchors onto the other's.
    std::vector<CVector> abs_p = {u2p, u1p};
    std::vector<CVector> abs_m = {u1m, u2m};
    for (int c = 0; c < half; ++c) abs_p.push_back(chis[static_cast<std::size_t>(c)]);
    for (int c = half; c < nchi; ++c) abs_m.push_back(chis[static_cast<std::size_t>(c)]);

    const CMatrix Up = detail::eigenspace_unitary(options.theta_plus, options.lambda_plus, d);
    const CMatrix Um_seed = detail::eigenspace_unitary(options.theta_minus, options.lambda_minus, d);
    CMatrix Um = CMatrix::Zero(d, d);
    Um.row(0) = Up.row(0);
    Um.row(1) = Up.row(1);
    for (int r = 2; r < d; ++r) {
        CVector row = Um_seed.row(r).transpose();
        for (int pass = 0; pass < 2; ++pass)
            for (int prev = 0; prev < r; ++prev) {
                const CVector p = Um.row(prev).transpose();
                row -= p.dot(row) * p;
            }
        if (row.norm() < 1e-8)
            throw InfeasibleError("construct_basis: down-sector rotation seed is degenerate");
        Um.row(r) = row.normalized().transpose();
    }

    // Alice slot order, identical in both sectors.
    std::vector<int> slots = {options.slot_up, options.slot_down};
    for (int a = 0; a < d; ++a)
        if (a != options.slot_up && a != options.slot_down) slots.push_back(a);

    // phi_j amplitude at (slot_c, spin beta) = sum_r U[r,c] * conj(abs_r[j]).
    std::vector<StateVector> basis;
    basis.reserve(static_cast<std::size_t>(K));
    for (int j = 0; j < K; ++j) {
        StateVector phi(d);
        for (int c = 0; c < d; ++c) {
            ComplexScalar up_amp = 0.0, down_amp = 0.0;
            for (int r = 0; r < d; ++r) {
                up_amp += Up(r, c) * std::conj(abs_p[static_cast<std::size_t>(r)](j));
                down_amp += Um(r, c) * std::conj(abs_m[static_cast<std::size_t>(r)](j));
            }
            phi.at(slots[static_cast<std::size_t>(c)], 0) = up_amp;
            phi.at(slots[static_cast<std::size_t>(c)], 1) = down_amp;
        }
        basis.push_back(std::move(phi));
    }

    ConstructionResult result;
    result.basis = std::move(basis);
    result.coefficients = coeff;
    result.theta_plus = options.theta_plus;
    result.lambda_plus = options.lambda_plus;
    result.theta_minus = options.theta_minus;
    result.lambda_minus = options.lambda_minus;
    return result;
}

/// psi reconstructed from a construction: sum_j b_j phi_j.
inline StateVector constructed_state(const ConstructionResult& result) {
    if (result.basis.empty()) throw std::invalid_argument("constructed_state: empty basis");
    StateVector psi(result.basis.front().dim_a);
    for (std::size_t j = 0; j < result.basis.size(); ++j) {
        const double bj = result.coefficients.b[j];
        for (std::size_t i = 0; i < psi.amps.size(); ++i)
            psi.amps[i] += bj * result.basis[j].amps[i];
    }
    return psi;
}

/// Number of independent states among the spin projections of psi along the
/// given axes (both signs), counting singular values above 1e-10.
inline int postmeasurement_rank(const StateVector& psi, const std::vector<UnitAxis>& axes) {
    using detail::CMatrix;
    const int dim = psi.dim();
    CMatrix M(2 * static_cast<int>(axes.size()), dim);
    int r = 0;
    for (const auto& n : axes)
        for (int eta : {+1, -1}) {
            const StateVector proj = project_spin(psi, n, eta);
            for (int c = 0; c < dim; ++c) M(r, c) = proj.amps[static_cast<std::size_t>(c)];
            ++r;
        }
    Eigen::JacobiSVD<CMatrix> svd(M);
    int rank = 0;
    for (int i = 0; i < svd.singularValues().size(); ++i)
        if (svd.singularValues()(i) > 1e-10) ++rank;
    return rank;
}

/// Residuals of the two linear relations among the six coordinate-axis
/// projections, in the scaling that carries sqrt(2) on the transverse pairs:
///   f_-(y) = sqrt(2) f_+(z) + sqrt(2) f_-(z) - f_+(y)
///   f_-(x) = sqrt(2) f_+(z) + sqrt(2) f_-(z) - f_+(x)
inline std::pair<double, double> projection_relation_residuals(const StateVector& psi) {
    const double rt2 = std::sqrt(2.0);
    const UnitAxis x = UnitAxis::normalized(1, 0, 0);
    const UnitAxis y = UnitAxis::normalized(0, 1, 0);
    const UnitAxis z = UnitAxis::normalized(0, 0, 1);
    auto scaled = [&](const UnitAxis& n, int eta, double s) {
        StateVector v = project_spin(psi, n, eta);
        for (auto& a : v.amps) a *= s;
        return v;
    };
    const StateVector zp = scaled(z, +1, 1.0), zm = scaled(z, -1, 1.0);
    const StateVector yp = scaled(y, +1, rt2), ym = scaled(y, -1, rt2);
    const StateVector xp = scaled(x, +1, rt2), xm = scaled(x, -1, rt2);
    auto resid = [&](const StateVector& lhs, const StateVector& a, const StateVector& b,
                     const StateVector& c) {
        double worst = 0.0;
        for (std::size_t i = 0; i < lhs.amps.size(); ++i)
            worst = std::max(worst, std::abs(lhs.amps[i] -
                                             (rt2 * a.amps[i] + rt2 * b.amps[i] - c.amps[i])));
        return worst;
    };
    return {resid(ym, zp, zm, yp), resid(xm, zp, zm, xp)};
}

struct OutcomeBoundWitness {
    int full_rank = 0;                 // rank over all six projections
    std::vector<double> triple_third_singular;  // per sign assignment, 8 entries
    double min_third_singular = 0.0;
    bool certified = false;            // every triple keeps rank three
};

/// Certifies that fewer than four outcomes cannot reproduce the coordinate
/// protocols: any one-sign-per-axis selection of projections already spans
/// three dimensions, while the full set spans four.
inline OutcomeBoundWitness min_outcomes_lower_bound(const StateVector& psi) {
    using detail::CMatrix;
    const std::vector<UnitAxis> axes = {UnitAxis::normalized(1, 0, 0),
                                        UnitAxis::normalized(0, 1, 0),
                                        UnitAxis::normalized(0, 0, 1)};
    OutcomeBoundWitness witness;
    witness.full_rank = postmeasurement_rank(psi, axes);
    if (witness.full_rank != 4)
        throw std::invalid_argument("min_outcomes_lower_bound: state does not have four "
                                    "independent projections along the coordinate axes");

    std::vector<std::vector<StateVector>> by_axis;
    for (const auto& n : axes)
        by_axis.push_back({project_spin(psi, n, +1), project_spin(psi, n, -1)});

    const int dim = psi.dim();
    witness.min_third_singular = std::numeric_limits<double>::infinity();
    for (int mask = 0; mask < 8; ++mask) {
        CMatrix M(3, dim);
        for (int l = 0; l < 3; ++l) {
            const StateVector& v = by_axis[static_cast<std::size_t>(l)][(mask >> l) & 1];
            for (int c = 0; c < dim; ++c) M(l, c) = v.amps[static_cast<std::size_t>(c)];
        }
        Eigen::JacobiSVD<CMatrix> svd(M);
        const double s3 = svd.singularValues()(2);
        witness.triple_third_singular.push_back(s3);
        witness.min_third_singular = std::min(witness.min_third_singular, s3);
    }
    witness.certified = witness.min_third_singular > 1e-10;
    return witness;
}

}  // namespace retroq
