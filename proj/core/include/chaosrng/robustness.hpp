#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "chaosrng/density.hpp"
#include "chaosrng/map.hpp"

namespace chaosrng {

// Gaussian parametric jitter applied to a map, one independent draw per
// trial.
struct PerturbationSpec {
  double sigma_slope = 0.01;   // relative, multiplicative on affine slopes
  double sigma_break = 0.01;   // absolute, on interior breakpoints
  double sigma_offset = 0.01;  // absolute, on affine intercepts
  std::size_t trials = 1000;
  std::uint64_t seed = 1;

  void validate() const;
};

struct PerturbOutcome {
  std::optional<PiecewiseMap> map;
  // Non-empty when the perturbed map is invalid.
  std::string failure;
  // Branches shifted (or squeezed) back inside [0,1].
  std::size_t clipped_branches = 0;

  bool ok() const noexcept { return map.has_value(); }
};

// Deterministic in (spec.seed, trial_index). Breakpoints move first and
// branch domains are re-derived from them; each affine branch keeps its line
// equation up to the slope/intercept jitter. A branch whose image leaves
// [0,1] is translated back inside (and its slope reduced if the image is
// longer than 1).
PerturbOutcome perturb(const PiecewiseMap& map, const PerturbationSpec& spec,
                       std::size_t trial_index);

enum class TrialStatus { ok, invalid_map, no_convergence };
const char* to_string(TrialStatus status) noexcept;

struct TrialResult {
  std::size_t index = 0;
  TrialStatus status = TrialStatus::ok;
  double entropy_rate = 0.0;
  std::size_t clipped_branches = 0;
};

struct Histogram {
  std::vector<double> edges;  // counts.size() + 1
  std::vector<std::size_t> counts;
};

struct MCProfile {
  std::vector<TrialResult> trials;
  std::vector<double> entropy_rates;  // successful trials, in trial order
  double mean = 0.0;
  double stddev = 0.0;
  double min = 0.0;
  double max = 0.0;
  Histogram histogram;
  std::size_t failures = 0;
};

struct MonteCarloOptions {
  std::size_t n_entropy = 10;
  UlamOptions ulam{};
  SteadyStateOptions solver{};
  std::size_t histogram_bins = 20;
  // Abort (NumericError) once more than this fraction of trials fail.
  double max_failure_fraction = 0.10;
};

MCProfile mc_profile(const PiecewiseMap& map, const BitGen& gen, const PerturbationSpec& spec,
                     const MonteCarloOptions& options = {});

Histogram make_histogram(const std::vector<double>& values, std::size_t bins);

// CSV: trial,entropy_rate,status
std::string mc_profile_to_csv(const MCProfile& profile);
// {"edges":[...],"counts":[...],"mean":..,"std":..,"min":..,"max":..,"failures":..}
std::string histogram_to_json(const MCProfile& profile);

}  // namespace chaosrng
