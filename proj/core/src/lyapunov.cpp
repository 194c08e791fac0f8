#include "chaosrng/lyapunov.hpp"

#include <algorithm>
#include <cmath>

namespace chaosrng {

double lyapunov(const PiecewiseMap& map, const DensityGrid& f) {
  f.require_normalized("lyapunov");
  // Midpoint rule on each (bin ∩ branch) piece, so affine maps are exact.
  double total = 0.0;
  for (const auto& b : map.branches()) {
    const auto& d = b.domain();
    const double w = f.bin_width();
    const auto first = static_cast<std::size_t>(d.lo / w);
    const auto last = std::min(f.n_bins() - 1, static_cast<std::size_t>(d.hi / w));
    for (std::size_t i = first; i <= last; ++i) {
      if (f[i] == 0.0) continue;
      const double lo = std::max(d.lo, f.bin_left(i));
      const double hi = std::min(d.hi, f.bin_left(i) + w);
      if (hi <= lo) continue;
      total += f[i] * (hi - lo) * std::log(std::abs(b.derivative(0.5 * (lo + hi))));
    }
  }
  return total;
}

}  // namespace chaosrng
