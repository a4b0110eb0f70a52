#pragma once

#include <cstdint>

#include "vperc/geometry.hpp"
#include "vperc/random.hpp"

namespace vperc {

/// Poisson process of the given intensity on the domain's site rectangle.
/// Exact coincidences are rejected and redrawn.
PointSet sample_poisson(const Domain& domain, double intensity, std::uint64_t seed);

/// Same, drawing from a caller-owned generator.
PointSet sample_poisson(const Domain& domain, double intensity, Rng& rng, std::uint64_t seed_tag);

}  // namespace vperc
