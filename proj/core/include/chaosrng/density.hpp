#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "chaosrng/interval_set.hpp"
#include "chaosrng/map.hpp"
#include "chaosrng/random.hpp"

namespace chaosrng {

// Piecewise-constant density on a uniform partition of (0,1). values() are
// heights (probability per unit length). Normalization is not enforced on
// construction; consumers that need a probability density call
// require_normalized().
class DensityGrid {
 public:
  static constexpr double kMassTolerance = 1e-9;

  explicit DensityGrid(std::vector<double> values);
  static DensityGrid uniform(std::size_t n_bins);

  std::size_t n_bins() const noexcept { return values_.size(); }
  double bin_width() const noexcept { return 1.0 / static_cast<double>(values_.size()); }
  double bin_left(std::size_t i) const noexcept { return static_cast<double>(i) * bin_width(); }
  std::span<const double> values() const noexcept { return values_; }
  double operator[](std::size_t i) const noexcept { return values_[i]; }

  double mass() const noexcept { return cdf_.back(); }
  bool is_normalized() const noexcept;
  void require_normalized(const char* context) const;
  DensityGrid normalized() const;

  // Integral of the density over (0, x).
  double cdf(double x) const noexcept;

 private:
  std::vector<double> values_;
  std::vector<double> cdf_;  // n_bins + 1 cumulative masses at bin edges
};

double l1_distance(const DensityGrid& a, const DensityGrid& b);

// Column-stochastic Ulam discretization of the Frobenius-Perron operator,
// stored column-wise (sparse). Entry (i,j) is the fraction of bin j's mass
// mapped into bin i.
class TransferOperator {
 public:
  struct Entry {
    std::uint32_t row;
    double weight;
  };

  TransferOperator(std::size_t n_bins, std::vector<std::vector<Entry>> columns);

  std::size_t n_bins() const noexcept { return n_bins_; }
  std::span<const Entry> column(std::size_t j) const noexcept {
    return {entries_.data() + offsets_[j], entries_.data() + offsets_[j + 1]};
  }
  double at(std::size_t i, std::size_t j) const noexcept;
  double column_sum(std::size_t j) const noexcept;
  std::size_t nonzeros() const noexcept { return entries_.size(); }

 private:
  std::size_t n_bins_;
  std::vector<std::size_t> offsets_;
  std::vector<Entry> entries_;
};

enum class UlamScheme {
  // Bin-to-bin fractions from exact branch inverses.
  exact,
  // Stratified forward sampling, samples_per_bin points per source bin.
  stratified,
};

struct UlamOptions {
  std::size_t n_bins = 4096;
  std::size_t samples_per_bin = 64;
  UlamScheme scheme = UlamScheme::exact;
};

TransferOperator ulam_matrix(const PiecewiseMap& map, const UlamOptions& options = {});

// One application of the operator, renormalized to unit mass.
DensityGrid apply(const TransferOperator& op, const DensityGrid& f);

struct SteadyStateOptions {
  double tol = 1e-10;
  std::size_t max_iters = 100000;
  // Plain iterations before switching to the lazy operator (I + P) / 2.
  std::size_t lazy_after = 2000;
};

struct SteadyState {
  DensityGrid density;
  std::size_t iterations = 0;
  // ||P f - f||_1 of the returned density.
  double residual = 0.0;
};

// Power iteration from the uniform density until ||P f - f||_1 drops below
// tol. Throws NumericError otherwise.
SteadyState steady_state(const TransferOperator& op, const SteadyStateOptions& options = {});

// Exact integral of f over s (partial bins prorated linearly).
double integrate(const DensityGrid& f, const IntervalSet& s);

// Inverse-CDF draw from f.
double sample(const DensityGrid& f, Rng& rng);

// CSV with header bin_left,bin_right,density.
std::string density_to_csv(const DensityGrid& f);

}  // namespace chaosrng

namespace chaosrng {

// Invariant density of a map plus how it was obtained. Maps carrying the
// uniform certificate skip the Ulam solve and report the exact uniform
// density.
struct InvariantDensity {
  DensityGrid density;
  bool certified_uniform = false;
  std::size_t iterations = 0;
  double residual = 0.0;
};

InvariantDensity invariant_density(const PiecewiseMap& map, const UlamOptions& ulam = {},
                                   const SteadyStateOptions& solver = {});

}  // namespace chaosrng
