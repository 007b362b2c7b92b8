#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace retroq {

using ComplexScalar = std::complex<double>;

struct Tolerances {
    double exact = 1e-12;     // single algebraic identities
    double pipeline = 1e-10;  // composed multi-step computations
};

inline Tolerances& default_tolerances() {
    static Tolerances tol;
    return tol;
}

/// Pure state of H_A (x) H_B with dim_B = 2.
/// Amplitude index = a * 2 + beta, B fastest; beta 0 is up_z, 1 is down_z.
/// Post-measurement states may carry norm below 1.
struct StateVector {
    int dim_a = 1;
    std::vector<ComplexScalar> amps;

    StateVector() : amps(2, ComplexScalar{0.0, 0.0}) {}

    /// Zero state of the given A dimension.
    explicit StateVector(int dim_a_) : dim_a(dim_a_) {
        if (dim_a < 1)
            throw std::invalid_argument("StateVector: dim_a must be positive");
        amps.assign(static_cast<std::size_t>(2 * dim_a), ComplexScalar{});
    }

    StateVector(int dim_a_, std::vector<ComplexScalar> amplitudes)
        : dim_a(dim_a_), amps(std::move(amplitudes)) {
        if (dim_a < 1)
            throw std::invalid_argument("StateVector: dim_a must be positive");
        if (amps.size() != static_cast<std::size_t>(2 * dim_a))
            throw std::invalid_argument("StateVector: amplitude count must equal 2 * dim_a");
    }

    int dim() const { return 2 * dim_a; }

    ComplexScalar& at(int a, int beta) { return amps[static_cast<std::size_t>(a * 2 + beta)]; }
    const ComplexScalar& at(int a, int beta) const {
        return amps[static_cast<std::size_t>(a * 2 + beta)];
    }

    static StateVector basis_state(int dim_a, int index) {
        if (index < 0 || index >= 2 * dim_a)
            throw std::out_of_range("StateVector::basis_state: index out of range");
        std::vector<ComplexScalar> v(static_cast<std::size_t>(2 * dim_a), ComplexScalar{});
        v[static_cast<std::size_t>(index)] = 1.0;
        return StateVector(dim_a, std::move(v));
    }
};

/// Dense square operator on a 2*dim_a dimensional space, row major.
struct Operator {
    int dim = 0;
    std::vector<ComplexScalar> entries;

    Operator() = default;

    explicit Operator(int dim_) : dim(dim_) {
        if (dim < 1)
            throw std::invalid_argument("Operator: dim must be positive");
        entries.assign(static_cast<std::size_t>(dim) * dim, ComplexScalar{});
    }

    Operator(int dim_, std::vector<ComplexScalar> e) : dim(dim_), entries(std::move(e)) {
        if (dim < 1)
            throw std::invalid_argument("Operator: dim must be positive");
        if (entries.size() != static_cast<std::size_t>(dim) * dim)
            throw std::invalid_argument("Operator: entry count must equal dim * dim");
    }

    ComplexScalar& at(int r, int c) { return entries[static_cast<std::size_t>(r) * dim + c]; }
    const ComplexScalar& at(int r, int c) const {
        return entries[static_cast<std::size_t>(r) * dim + c];
    }

    static Operator identity(int dim) {
        Operator op(dim);
        for (int i = 0; i < dim; ++i) op.at(i, i) = 1.0;
        return op;
    }

    Operator adjoint() const {
        Operator out(dim);
        for (int r = 0; r < dim; ++r)
            for (int c = 0; c < dim; ++c) out.at(r, c) = std::conj(at(c, r));
        return out;
    }
};

/// Real direction of unit norm.
struct UnitAxis {
    double x = 0.0, y = 0.0, z = 1.0;

    UnitAxis() = default;

    UnitAxis(double x_, double y_, double z_) : x(x_), y(y_), z(z_) {
        const double n2 = x * x + y * y + z * z;
        if (std::abs(n2 - 1.0) > default_tolerances().exact)
            throw std::invalid_argument("UnitAxis: direction must have unit norm");
    }

    /// Builds a unit axis from an arbitrary nonzero vector.
    static UnitAxis normalized(double x, double y, double z) {
        const double n = std::sqrt(x * x + y * y + z * z);
        if (n == 0.0)
            throw std::invalid_argument("UnitAxis::normalized: zero vector has no direction");
        UnitAxis a;
        a.x = x / n;
        a.y = y / n;
        a.z = z / n;
        return a;
    }

    double dot(const UnitAxis& o) const { return x * o.x + y * o.y + z * o.z; }
};

inline ComplexScalar inner(const StateVector& a, const StateVector& b) {
    if (a.dim() != b.dim())
        throw std::invalid_argument("inner: dimension mismatch");
    ComplexScalar s{};
    for (std::size_t i = 0; i < a.amps.size(); ++i) s += std::conj(a.amps[i]) * b.amps[i];
    return s;
}

inline double norm2(const StateVector& a) { return inner(a, a).real(); }

inline double norm(const StateVector& a) { return std::sqrt(norm2(a)); }

inline bool is_normalized(const StateVector& a, double tol = default_tolerances().exact) {
    return std::abs(norm2(a) - 1.0) <= tol;
}

inline StateVector tensor(const StateVector& a, const StateVector& b) {
    std::vector<ComplexScalar> out;
    out.reserve(a.amps.size() * b.amps.size());
    for (const auto& x : a.amps)
        for (const auto& y : b.amps) out.push_back(x * y);
    // the combined space keeps B = the last factor's B qubit
    const int dim_a = static_cast<int>(out.size()) / 2;
    return StateVector(dim_a, std::move(out));
}

inline Operator tensor(const Operator& a, const Operator& b) {
    Operator out(a.dim * b.dim);
    for (int ra = 0; ra < a.dim; ++ra)
        for (int ca = 0; ca < a.dim; ++ca)
            for (int rb = 0; rb < b.dim; ++rb)
                for (int cb = 0; cb < b.dim; ++cb)
                    out.at(ra * b.dim + rb, ca * b.dim + cb) = a.at(ra, ca) * b.at(rb, cb);
    return out;
}

inline StateVector apply(const Operator& op, const StateVector& s) {
    if (op.dim != s.dim())
        throw std::invalid_argument("apply: operator and state dimensions differ");
    std::vector<ComplexScalar> out(static_cast<std::size_t>(op.dim), ComplexScalar{});
    for (int r = 0; r < op.dim; ++r) {
        ComplexScalar acc{};
        for (int c = 0; c < op.dim; ++c) acc += op.at(r, c) * s.amps[static_cast<std::size_t>(c)];
        out[static_cast<std::size_t>(r)] = acc;
    }
    return StateVector(s.dim_a, std::move(out));
}

inline Operator multiply(const Operator& a, const Operator& b) {
    if (a.dim != b.dim)
        throw std::invalid_argument("multiply: operator dimensions differ");
    Operator out(a.dim);
    for (int r = 0; r < a.dim; ++r)
        for (int k = 0; k < a.dim; ++k) {
            const ComplexScalar v = a.at(r, k);
            if (v == ComplexScalar{}) continue;
            for (int c = 0; c < a.dim; ++c) out.at(r, c) += v * b.at(k, c);
        }
    return out;
}

inline StateVector add(const StateVector& a, const StateVector& b) {
    if (a.dim() != b.dim())
        throw std::invalid_argument("add: dimension mismatch");
    StateVector out = a;
    for (std::size_t i = 0; i < out.amps.size(); ++i) out.amps[i] += b.amps[i];
    return out;
}

inline StateVector scale(const ComplexScalar& c, const StateVector& a) {
    StateVector out = a;
    for (auto& v : out.amps) v *= c;
    return out;
}

inline StateVector normalized(const StateVector& a) {
    const double n = norm(a);
    if (n == 0.0)
        throw std::invalid_argument("normalized: zero state cannot be normalized");
    return scale(1.0 / n, a);
}

inline double max_abs_diff(const StateVector& a, const StateVector& b) {
    if (a.dim() != b.dim())
        throw std::invalid_argument("max_abs_diff: dimension mismatch");
    double m = 0.0;
    for (std::size_t i = 0; i < a.amps.size(); ++i)
        m = std::max(m, std::abs(a.amps[i] - b.amps[i]));
    return m;
}

inline double max_abs_diff(const Operator& a, const Operator& b) {
    if (a.dim != b.dim)
        throw std::invalid_argument("max_abs_diff: dimension mismatch");
    double m = 0.0;
    for (std::size_t i = 0; i < a.entries.size(); ++i)
        m = std::max(m, std::abs(a.entries[i] - b.entries[i]));
    return m;
}

/// Exact entrywise equality within tol.
inline bool approx_equal(const StateVector& a, const StateVector& b,
                         double tol = default_tolerances().exact) {
    return a.dim() == b.dim() && max_abs_diff(a, b) <= tol;
}

/// Equality up to a global phase: the overlap is maximized over the phase of b.
inline bool approx_equal_up_to_phase(const StateVector& a, const StateVector& b,
                                     double tol = default_tolerances().exact) {
    if (a.dim() != b.dim()) return false;
    const ComplexScalar ov = inner(a, b);
    if (std::abs(ov) <= tol) return max_abs_diff(a, b) <= tol;  // only near-zero states match
    const ComplexScalar phase = std::abs(ov) / ov;
    return max_abs_diff(a, scale(phase, b)) <= tol;
}

/// The phase that best aligns b with a; requires a nonvanishing overlap.
inline ComplexScalar alignment_phase(const StateVector& a, const StateVector& b) {
    const ComplexScalar ov = inner(a, b);
    if (std::abs(ov) == 0.0)
        throw std::invalid_argument("alignment_phase: states are orthogonal");
    return std::abs(ov) / ov;
}

inline bool is_hermitian(const Operator& m, double tol = default_tolerances().exact) {
    return max_abs_diff(m, m.adjoint()) <= tol;
}

inline bool is_unitary(const Operator& m, double tol = default_tolerances().exact) {
    return max_abs_diff(multiply(m.adjoint(), m), Operator::identity(m.dim)) <= tol;
}

inline bool is_projector(const Operator& m, double tol = default_tolerances().exact) {
    return is_hermitian(m, tol) && max_abs_diff(multiply(m, m), m) <= tol;
}

}  // namespace retroq
