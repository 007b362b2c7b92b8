// From a sign table and axis geometry to a working measurement basis: solve
// the coefficient system, build the basis, and print what came out.

#include <cstdio>

#include "retroq/builtins.hpp"
#include "retroq/constraints.hpp"
#include "retroq/construct.hpp"
#include "retroq/protocol.hpp"

int main() {
    const retroq::LookupTable table = retroq::m4_table();
    const std::vector<retroq::UnitAxis> axes = retroq::m4_axes();

    const retroq::FeasibilityVerdict verdict = retroq::feasibility(axes);
    std::printf("feasibility: %s (%s)\n", verdict.feasible ? "yes" : "no",
                verdict.reason.c_str());
    if (!verdict.feasible) return 1;

    const retroq::AxisGram gram = retroq::AxisGram::from_axes(axes);
    const retroq::CoefficientVector coeff = retroq::solve_coefficients(table, gram);
    for (int j = 0; j < coeff.size(); ++j)
        std::printf("b[%d] = %.12f\n", j + 1, coeff.b[static_cast<std::size_t>(j)]);

    const retroq::ConstructionResult result = retroq::construct_basis(table, coeff, axes);
    const double residual =
        retroq::ProjectiveMeasurement(result.basis).orthonormality_residual();
    std::printf("constructed %zu basis vectors, orthonormality residual %.3e\n",
                result.basis.size(), residual);

    for (std::size_t j = 0; j < result.basis.size(); ++j) {
        std::printf("phi[%zu] =", j + 1);
        for (const auto& a : result.basis[j].amps)
            std::printf(" %+.6f%+.6fi", a.real(), a.imag());
        std::printf("\n");
    }
    return 0;
}
