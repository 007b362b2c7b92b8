#pragma once

#include <cmath>
#include <utility>
#include <vector>

#include "retroq/rng.hpp"
#include "retroq/state.hpp"

namespace testutil {

/// Haar-ish random normalized state; good enough for property checks.
inline retroq::StateVector random_state(retroq::SplitMix64& rng, int dim_a) {
    std::vector<retroq::ComplexScalar> amps;
    amps.reserve(static_cast<std::size_t>(2 * dim_a));
    for (int i = 0; i < 2 * dim_a; ++i)
        amps.emplace_back(2.0 * rng.next_double() - 1.0, 2.0 * rng.next_double() - 1.0);
    return retroq::normalized(retroq::StateVector(dim_a, std::move(amps)));
}

/// Uniform random direction on the sphere.
inline retroq::UnitAxis random_axis(retroq::SplitMix64& rng) {
    const double z = 2.0 * rng.next_double() - 1.0;
    const double phi = 2.0 * M_PI * rng.next_double();
    const double r = std::sqrt(std::max(0.0, 1.0 - z * z));
    return retroq::UnitAxis{r * std::cos(phi), r * std::sin(phi), z};
}

}  // namespace testutil
