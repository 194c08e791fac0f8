#pragma once

#include "chaosrng/density.hpp"
#include "chaosrng/map.hpp"

namespace chaosrng {

// lambda = integral of ln|M'(x)| f(x) dx, midpoint rule on the density grid
// (nats). Throws ConfigError if f is not normalized.
double lyapunov(const PiecewiseMap& map, const DensityGrid& f);

}  // namespace chaosrng
