#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <complex>
#include <stdexcept>
#include <vector>

#include "retroq/builtins.hpp"
#include "retroq/protocol.hpp"

using namespace retroq;
using Catch::Matchers::WithinAbs;

namespace {
const double kR = 1.0 / std::sqrt(2.0);
const double kS6 = 1.0 / std::sqrt(6.0);

const ErrataEntry* find_entry(const ErrataReport& report, const std::string& kind,
                              const std::vector<int>& location) {
    for (const auto& e : report.entries)
        if (e.kind == kind && e.location == location) return &e;
    return nullptr;
}

int count_kind(const ErrataReport& report, const std::string& kind) {
    int n = 0;
    for (const auto& e : report.entries)
        if (e.kind == kind) ++n;
    return n;
}
}  // namespace

TEST_CASE("builtin names enumerate the catalog") {
    REQUIRE(builtin_protocol_names() ==
            std::vector<std::string>{"vaa", "singlet", "m4-symmetric", "m3-nonorthogonal"});
    for (const auto& name : builtin_protocol_names()) REQUIRE_NOTHROW(builtin_protocol(name));
    REQUIRE_THROWS_WITH(builtin_protocol("nope"), "builtin_protocol: unknown builtin 'nope'");
    REQUIRE_THROWS_WITH(errata_check("nope"), "errata_check: unknown builtin 'nope'");
}

TEST_CASE("the two four-outcome tables negate each other") {
    const LookupTable a = vaa_table();
    const LookupTable s = singlet_table();
    REQUIRE(a.num_outcomes == 4);
    REQUIRE(a.num_axes == 3);
    for (int j = 0; j < 4; ++j)
        for (int l = 0; l < 3; ++l) REQUIRE(a.sign(j, l) == -s.sign(j, l));
    // First outcome answers up everywhere for the correlated state.
    REQUIRE(a.sign(0, 0) == 1);
    REQUIRE(a.sign(0, 1) == 1);
    REQUIRE(a.sign(0, 2) == 1);
}

TEST_CASE("reference states have the advertised amplitudes") {
    REQUIRE_THAT(max_abs_diff(vaa_state(), StateVector(2, {kR, 0.0, 0.0, kR})),
                 WithinAbs(0.0, 1e-15));
    REQUIRE_THAT(max_abs_diff(singlet_state(), StateVector(2, {0.0, kR, -kR, 0.0})),
                 WithinAbs(0.0, 1e-15));
    REQUIRE_THAT(max_abs_diff(m4_state(), StateVector(3, {0.0, kR, kR, 0.0, 0.0, 0.0})),
                 WithinAbs(0.0, 1e-15));
    // The eight-outcome data does not even normalize.
    REQUIRE_THAT(norm(m3_state()), WithinAbs(1.120178, 1e-5));
}

TEST_CASE("four-outcome reference basis amplitudes") {
    const auto basis = vaa_basis();
    REQUIRE(basis.size() == 4);
    const ComplexScalar q = 0.5 * std::polar(1.0, M_PI / 4.0);
    REQUIRE_THAT(std::abs(basis[0].amps[0] - ComplexScalar{kR, 0.0}), WithinAbs(0.0, 1e-15));
    REQUIRE_THAT(std::abs(basis[0].amps[1] - q), WithinAbs(0.0, 1e-15));
    REQUIRE_THAT(std::abs(basis[0].amps[2] - std::conj(q)), WithinAbs(0.0, 1e-15));
    REQUIRE_THAT(std::abs(basis[0].amps[3]), WithinAbs(0.0, 1e-15));

    REQUIRE(ProjectiveMeasurement(basis).is_orthonormal(1e-12));
    // Expansion coefficients of the initial state are 1/2, real and positive.
    for (const auto& phi : basis) {
        const ComplexScalar b = inner(phi, vaa_state());
        REQUIRE_THAT(b.real(), WithinAbs(0.5, 1e-12));
        REQUIRE_THAT(b.imag(), WithinAbs(0.0, 1e-12));
    }
}

TEST_CASE("antisymmetric basis reorders two tabulated rows") {
    const auto tabulated = singlet_tabulated_basis();
    const auto working = singlet_basis();
    REQUIRE(tabulated.size() == 4);
    REQUIRE_THAT(max_abs_diff(working[0], tabulated[0]), WithinAbs(0.0, 1e-15));
    REQUIRE_THAT(max_abs_diff(working[1], tabulated[1]), WithinAbs(0.0, 1e-15));
    REQUIRE_THAT(max_abs_diff(working[2], tabulated[3]), WithinAbs(0.0, 1e-15));
    REQUIRE_THAT(max_abs_diff(working[3], tabulated[2]), WithinAbs(0.0, 1e-15));

    REQUIRE(ProjectiveMeasurement(working).is_orthonormal(1e-12));
    // The expansion is real with magnitude 1/2 throughout; the last two
    // outcomes enter with a minus sign.
    const double signs[4] = {0.5, 0.5, -0.5, -0.5};
    for (std::size_t j = 0; j < working.size(); ++j) {
        const ComplexScalar b = inner(working[j], singlet_state());
        REQUIRE_THAT(b.real(), WithinAbs(signs[j], 1e-12));
        REQUIRE_THAT(b.imag(), WithinAbs(0.0, 1e-12));
    }

    // As tabulated, rows 3 and 4 sit on the wrong supports and verification fails.
    RetrodictionProtocol p = builtin_protocol("singlet");
    p.measurement = ProjectiveMeasurement(tabulated);
    REQUIRE_FALSE(verify_protocol(p).passed());
}

TEST_CASE("six-outcome basis carries the abstract frame") {
    const detail::M4Data data;
    const auto basis = m4_basis();
    REQUIRE(basis.size() == 6);
    REQUIRE(ProjectiveMeasurement(basis).is_orthonormal(1e-12));
    for (int j = 0; j < 6; ++j) {
        const auto& phi = basis[static_cast<std::size_t>(j)];
        // Slot 2 holds the complement rows verbatim.
        REQUIRE_THAT(std::abs(phi.at(2, 0) - ComplexScalar{data.chi1[static_cast<std::size_t>(j)], 0.0}),
                     WithinAbs(0.0, 1e-12));
        REQUIRE_THAT(std::abs(phi.at(2, 1) - ComplexScalar{data.chi2[static_cast<std::size_t>(j)], 0.0}),
                     WithinAbs(0.0, 1e-12));
        // Anchor slots: (1, up) and (0, down) combine b with the z component.
        REQUIRE_THAT(std::abs(phi.at(1, 0) -
                              ComplexScalar{(data.b[static_cast<std::size_t>(j)] +
                                             data.Xz[static_cast<std::size_t>(j)]) / std::sqrt(2.0),
                                            0.0}),
                     WithinAbs(0.0, 1e-12));
        const ComplexScalar b = inner(phi, m4_state());
        REQUIRE_THAT(b.real(), WithinAbs(kS6, 1e-12));
        REQUIRE_THAT(b.imag(), WithinAbs(0.0, 1e-12));
    }
}

TEST_CASE("coefficient factories") {
    const auto c4 = m4_coefficients();
    REQUIRE(c4.size() == 6);
    for (double v : c4.b) REQUIRE_THAT(v, WithinAbs(kS6, 1e-15));
    REQUIRE_THAT(c4.normalization_residual(), WithinAbs(0.0, 1e-12));

    const auto c3 = m3_coefficients();
    REQUIRE(c3.size() == 8);
    REQUIRE_THAT(c3.b[1], WithinAbs(0.0, 1e-15));
    for (int j : {0, 2, 3, 4, 5, 6, 7})
        REQUIRE_THAT(c3.b[static_cast<std::size_t>(j)], WithinAbs(std::sqrt(0.125), 1e-15));
    REQUIRE_THAT(c3.normalization_residual(), WithinAbs(0.125, 1e-12));
}

TEST_CASE("tetrahedral geometry") {
    const auto axes = m4_axes();
    REQUIRE(axes.size() == 4);
    double sx = 0.0, sy = 0.0, sz = 0.0;
    for (const auto& n : axes) {
        sx += n.x;
        sy += n.y;
        sz += n.z;
    }
    REQUIRE_THAT(std::sqrt(sx * sx + sy * sy + sz * sz), WithinAbs(0.0, 1e-12));
    for (int l = 0; l < 4; ++l)
        for (int k = l + 1; k < 4; ++k)
            REQUIRE_THAT(axes[static_cast<std::size_t>(l)].dot(axes[static_cast<std::size_t>(k)]),
                         WithinAbs(-1.0 / 3.0, 1e-12));
    REQUIRE_THAT(axes[0].x, WithinAbs(1.0, 1e-15));
    REQUIRE_THAT(axes[0].y, WithinAbs(0.0, 1e-15));
}

TEST_CASE("errata: correlated four-outcome table notes the sign pairing") {
    const ErrataReport report = errata_check("vaa");
    REQUIRE_FALSE(report.clean);
    REQUIRE(report.entries.empty());
    REQUIRE(report.row_permutation.empty());
    REQUIRE(report.notes.size() == 1);
}

TEST_CASE("errata: antisymmetric basis rows 3 and 4 are exchanged") {
    const ErrataReport report = errata_check("singlet");
    REQUIRE_FALSE(report.clean);
    REQUIRE(report.row_permutation == std::vector<int>{1, 2, 4, 3});
    REQUIRE(report.entries.empty());
}

TEST_CASE("errata: six-outcome tabulation has three separable defects") {
    const ErrataReport report = errata_check("m4-symmetric");
    REQUIRE_FALSE(report.clean);
    REQUIRE(report.down_columns_exchanged);
    REQUIRE(report.row_permutation == std::vector<int>{1, 4, 3, 5, 6, 2});
    REQUIRE(report.notes.empty());

    // Exactly one amplitude survives the exchange and the reordering.
    REQUIRE(count_kind(report, "amplitude") == 1);
    const ErrataEntry* amp = find_entry(report, "amplitude", {6, 2});
    REQUIRE(amp != nullptr);
    REQUIRE_THAT(amp->magnitude, WithinAbs(0.707107, 1e-5));
    REQUIRE_THAT(amp->found.real(), WithinAbs(0.642229, 1e-5));
    REQUIRE_THAT(amp->consistent.real(), WithinAbs(-0.064878, 1e-5));

    // The damage concentrates on tabulated row 6: five lost orthogonalities
    // and its own normalization.
    REQUIRE(count_kind(report, "orthogonality") == 5);
    REQUIRE(count_kind(report, "normalization") == 1);
    struct Expect {
        int i, j;
        double magnitude;
    };
    const Expect gram[] = {{1, 6, 0.204124}, {2, 6, 0.204124}, {3, 6, 0.454124},
                           {4, 6, 0.045876}, {5, 6, 0.454124}};
    for (const auto& g : gram) {
        const ErrataEntry* e = find_entry(report, "orthogonality", {g.i, g.j});
        REQUIRE(e != nullptr);
        REQUIRE_THAT(e->magnitude, WithinAbs(g.magnitude, 1e-5));
    }
    const ErrataEntry* n6 = find_entry(report, "normalization", {6, 6});
    REQUIRE(n6 != nullptr);
    REQUIRE_THAT(n6->magnitude, WithinAbs(0.408248, 1e-5));
    REQUIRE_THAT(n6->found.real(), WithinAbs(1.408248, 1e-5));
}

TEST_CASE("errata: eight-outcome data is internally inconsistent") {
    const ErrataReport report = errata_check("m3-nonorthogonal");
    REQUIRE_FALSE(report.clean);
    REQUIRE(report.row_permutation.empty());
    REQUIRE_FALSE(report.down_columns_exchanged);

    const ErrataEntry* cn = find_entry(report, "coefficient-normalization", {});
    REQUIRE(cn != nullptr);
    REQUIRE_THAT(cn->magnitude, WithinAbs(0.125, 1e-12));

    REQUIRE(count_kind(report, "duplicate-row") == 1);
    REQUIRE(find_entry(report, "duplicate-row", {7, 8}) != nullptr);

    const ErrataEntry* sn = find_entry(report, "state-normalization", {});
    REQUIRE(sn != nullptr);
    REQUIRE_THAT(sn->magnitude, WithinAbs(0.120178, 1e-5));
    REQUIRE_THAT(sn->found.real(), WithinAbs(1.120178, 1e-5));

    struct Expect {
        int i, j;
        double magnitude;
    };
    const Expect gram[] = {{2, 4, 0.124518}, {3, 4, 0.124518}, {4, 4, 0.056327},
                           {4, 6, 0.475214}, {4, 7, 0.524769}, {4, 8, 0.053365},
                           {5, 7, 0.333333}, {6, 7, 0.904762}, {6, 8, 0.571429},
                           {7, 8, 0.666667}};
    int gram_found = 0;
    for (const auto& g : gram) {
        const ErrataEntry* e = find_entry(report, g.i == g.j ? "normalization" : "orthogonality",
                                          {g.i, g.j});
        REQUIRE(e != nullptr);
        REQUIRE_THAT(e->magnitude, WithinAbs(g.magnitude, 1e-5));
        ++gram_found;
    }
    REQUIRE(gram_found == 10);
    REQUIRE(count_kind(report, "orthogonality") + count_kind(report, "normalization") == 10);
    REQUIRE(report.entries.size() == 13);
}

TEST_CASE("tabulated eight-outcome rows are stored verbatim") {
    const auto basis = m3_tabulated_basis();
    REQUIRE(basis.size() == 8);
    REQUIRE(basis[0].dim_a == 4);
    // Row 1 is the bare (2, up) slot state.
    REQUIRE_THAT(max_abs_diff(basis[0], StateVector::basis_state(4, 5)), WithinAbs(0.0, 1e-15));
    // Rows 7 and 8 differ only in the sign of their first two amplitudes.
    for (std::size_t c = 0; c < 8; ++c) {
        const ComplexScalar expected = c < 2 ? -basis[6].amps[c] : basis[6].amps[c];
        REQUIRE_THAT(std::abs(basis[7].amps[c] - expected), WithinAbs(0.0, 1e-15));
    }
}
