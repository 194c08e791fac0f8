#include "chaosrng/density.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <string>

#include "chaosrng/error.hpp"
#include "format.hpp"

namespace chaosrng {

// ---------------------------------------------------------------------------
// DensityGrid

DensityGrid::DensityGrid(std::vector<double> values) : values_(std::move(values)) {
  if (values_.empty() || !std::has_single_bit(values_.size())) {
    throw ConfigError("density grid: bin count must be a power of two, got " +
                      std::to_string(values_.size()));
  }
  cdf_.resize(values_.size() + 1);
  cdf_[0] = 0.0;
  const double w = bin_width();
  for (std::size_t i = 0; i < values_.size(); ++i) {
    if (!(values_[i] >= 0.0) || !std::isfinite(values_[i])) {
      throw ConfigError("density grid: bin " + std::to_string(i) + " has invalid height");
    }
    cdf_[i + 1] = cdf_[i] + values_[i] * w;
  }
}

DensityGrid DensityGrid::uniform(std::size_t n_bins) {
  return DensityGrid(std::vector<double>(n_bins, 1.0));
}

bool DensityGrid::is_normalized() const noexcept {
  return std::abs(mass() - 1.0) <= kMassTolerance;
}

void DensityGrid::require_normalized(const char* context) const {
  if (!is_normalized()) {
    throw ConfigError(std::string(context) + ": density is not normalized (mass " +
                      detail::fmt_double(mass()) + ")");
  }
}

DensityGrid DensityGrid::normalized() const {
  if (!(mass() > 0.0)) throw ConfigError("density grid: cannot normalize zero mass");
  std::vector<double> v(values_);
  const double scale = 1.0 / mass();
  for (auto& x : v) x *= scale;
  return DensityGrid(std::move(v));
}

double DensityGrid::cdf(double x) const noexcept {
  if (x <= 0.0) return 0.0;
  if (x >= 1.0) return cdf_.back();
  const double pos = x * static_cast<double>(values_.size());
  const auto i = std::min(static_cast<std::size_t>(pos), values_.size() - 1);
  return cdf_[i] + values_[i] * (x - bin_left(i));
}

double l1_distance(const DensityGrid& a, const DensityGrid& b) {
  if (a.n_bins() != b.n_bins()) throw ConfigError("l1_distance: bin counts differ");
  double d = 0.0;
  for (std::size_t i = 0; i < a.n_bins(); ++i) d += std::abs(a[i] - b[i]);
  return d * a.bin_width();
}

// ---------------------------------------------------------------------------
// TransferOperator

TransferOperator::TransferOperator(std::size_t n_bins, std::vector<std::vector<Entry>> columns)
    : n_bins_(n_bins) {
  if (columns.size() != n_bins) throw ConfigError("transfer operator: column count mismatch");
  offsets_.reserve(n_bins + 1);
  offsets_.push_back(0);
  for (auto& col : columns) {
    std::sort(col.begin(), col.end(), [](const Entry& a, const Entry& b) { return a.row < b.row; });
    for (const auto& e : col) {
      if (e.row >= n_bins) throw ConfigError("transfer operator: row index out of range");
      if (!entries_.empty() && entries_.size() > offsets_.back() && entries_.back().row == e.row) {
        entries_.back().weight += e.weight;
      } else {
        entries_.push_back(e);
      }
    }
    offsets_.push_back(entries_.size());
  }
}

double TransferOperator::at(std::size_t i, std::size_t j) const noexcept {
  for (const auto& e : column(j)) {
    if (e.row == i) return e.weight;
  }
  return 0.0;
}

double TransferOperator::column_sum(std::size_t j) const noexcept {
  double s = 0.0;
  for (const auto& e : column(j)) s += e.weight;
  return s;
}

namespace {

std::size_t bin_of(double y, std::size_t n) {
  const double pos = y * static_cast<double>(n);
  if (pos <= 0.0) return 0;
  return std::min(static_cast<std::size_t>(pos), n - 1);
}

void exact_column(const PiecewiseMap& map, std::size_t j, std::size_t n,
                  std::vector<TransferOperator::Entry>& col) {
  const double w = 1.0 / static_cast<double>(n);
  const double x_lo = static_cast<double>(j) * w;
  const double x_hi = static_cast<double>(j + 1) * w;
  for (const auto& b : map.branches()) {
    const double a = std::max(x_lo, b.domain().lo);
    const double c = std::min(x_hi, b.domain().hi);
    if (!(c > a)) continue;
    double ya = std::clamp(b.forward(a), 0.0, 1.0);
    double yc = std::clamp(b.forward(c), 0.0, 1.0);
    if (ya > yc) std::swap(ya, yc);
    const std::size_t first = bin_of(ya, n);
    const std::size_t last = bin_of(yc, n);
    for (std::size_t i = first; i <= last; ++i) {
      const double lo = std::max(ya, static_cast<double>(i) * w);
      const double hi = std::min(yc, static_cast<double>(i + 1) * w);
      if (!(hi > lo)) continue;
      // Length of the source sub-interval landing in target bin i.
      const double u0 = std::clamp(b.inverse(lo), a, c);
      const double u1 = std::clamp(b.inverse(hi), a, c);
      const double len = std::abs(u1 - u0);
      if (len > 0.0) col.push_back({static_cast<std::uint32_t>(i), len * static_cast<double>(n)});
    }
  }
}

void stratified_column(const PiecewiseMap& map, std::size_t j, std::size_t n, std::size_t samples,
                       std::vector<TransferOperator::Entry>& col) {
  const double weight = 1.0 / static_cast<double>(samples);
  for (std::size_t s = 0; s < samples; ++s) {
    double x = (static_cast<double>(j) + (static_cast<double>(s) + 0.5) / static_cast<double>(samples)) /
               static_cast<double>(n);
    nudge_off_breakpoints(map, x);
    const double y = map.branches()[map.branch_index(x)].forward(x);
    col.push_back({static_cast<std::uint32_t>(bin_of(y, n)), weight});
  }
}

}  // namespace

TransferOperator ulam_matrix(const PiecewiseMap& map, const UlamOptions& options) {
  const std::size_t n = options.n_bins;
  if (n < 64 || !std::has_single_bit(n)) {
    throw ConfigError("ulam_matrix: n_bins must be a power of two >= 64, got " + std::to_string(n));
  }
  if (options.scheme == UlamScheme::stratified && options.samples_per_bin < 16) {
    throw ConfigError("ulam_matrix: samples_per_bin must be >= 16");
  }
  std::vector<std::vector<TransferOperator::Entry>> columns(n);
  for (std::size_t j = 0; j < n; ++j) {
    auto& col = columns[j];
    if (options.scheme == UlamScheme::exact) {
      exact_column(map, j, n, col);
    } else {
      stratified_column(map, j, n, options.samples_per_bin, col);
    }
    double sum = 0.0;
    for (const auto& e : col) sum += e.weight;
    for (auto& e : col) e.weight /= sum;
  }
  return TransferOperator(n, std::move(columns));
}

namespace {

void apply_into(const TransferOperator& op, std::span<const double> f, std::vector<double>& out) {
  std::fill(out.begin(), out.end(), 0.0);
  for (std::size_t j = 0; j < op.n_bins(); ++j) {
    const double fj = f[j];
    if (fj == 0.0) continue;
    for (const auto& e : op.column(j)) out[e.row] += e.weight * fj;
  }
  double mass = 0.0;
  for (double v : out) mass += v;
  mass /= static_cast<double>(out.size());
  const double scale = 1.0 / mass;
  for (auto& v : out) v *= scale;
}

double l1(std::span<const double> a, std::span<const double> b) {
  double d = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) d += std::abs(a[i] - b[i]);
  return d / static_cast<double>(a.size());
}

}  // namespace

DensityGrid apply(const TransferOperator& op, const DensityGrid& f) {
  if (op.n_bins() != f.n_bins()) {
    throw ConfigError("apply: operator has " + std::to_string(op.n_bins()) +
                      " bins, density has " + std::to_string(f.n_bins()));
  }
  std::vector<double> out(op.n_bins());
  apply_into(op, f.values(), out);
  return DensityGrid(std::move(out));
}

SteadyState steady_state(const TransferOperator& op, const SteadyStateOptions& options) {
  if (!(options.tol > 0.0)) throw ConfigError("steady_state: tol must be positive");
  const std::size_t n = op.n_bins();
  std::vector<double> f(n, 1.0);
  std::vector<double> g(n);
  double diff = 0.0;
  for (std::size_t it = 1; it <= options.max_iters; ++it) {
    apply_into(op, f, g);
    diff = l1(f, g);
    if (diff < options.tol) {
      f.swap(g);
      apply_into(op, f, g);
      const double residual = l1(f, g);
      return SteadyState{DensityGrid(std::move(f)), it, residual};
    }
    if (it > options.lazy_after) {
      // Lazy step f <- (f + P f) / 2: same fixed points, but a cyclic
      // component (eigenvalue -1) no longer keeps the iterate oscillating.
      for (std::size_t i = 0; i < n; ++i) f[i] = 0.5 * (f[i] + g[i]);
    } else {
      f.swap(g);
    }
  }
  throw NumericError("steady_state: no convergence after " + std::to_string(options.max_iters) +
                         " iterations (last L1 change " + detail::fmt_double(diff) + ")",
                     diff);
}

double integrate(const DensityGrid& f, const IntervalSet& s) {
  double total = 0.0;
  for (const auto& iv : s.intervals()) total += f.cdf(iv.hi) - f.cdf(iv.lo);
  return std::clamp(total, 0.0, 1.0);
}

double sample(const DensityGrid& f, Rng& rng) {
  const double u = uniform_open01(rng) * f.mass();
  // Locate bin i with F(left_i) <= u < F(right_i); skip empty bins.
  std::size_t lo = 0;
  std::size_t hi = f.n_bins();
  while (hi - lo > 1) {
    const std::size_t mid = (lo + hi) / 2;
    if (f.cdf(f.bin_left(mid)) <= u) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  while (f[lo] == 0.0 && lo > 0) --lo;
  const double base = f.cdf(f.bin_left(lo));
  double x = f.bin_left(lo) + (u - base) / f[lo];
  const double right = f.bin_left(lo) + f.bin_width();
  x = std::clamp(x, f.bin_left(lo), right);
  if (!(x > 0.0)) x = std::nextafter(0.0, 1.0);
  if (!(x < 1.0)) x = std::nextafter(1.0, 0.0);
  return x;
}

std::string density_to_csv(const DensityGrid& f) {
  std::string out = "bin_left,bin_right,density\n";
  for (std::size_t i = 0; i < f.n_bins(); ++i) {
    out += detail::fmt_double(f.bin_left(i));
    out += ',';
    out += detail::fmt_double(f.bin_left(i) + f.bin_width());
    out += ',';
    out += detail::fmt_double(f[i]);
    out += '\n';
  }
  return out;
}

}  // namespace chaosrng

namespace chaosrng {

InvariantDensity invariant_density(const PiecewiseMap& map, const UlamOptions& ulam,
                                   const SteadyStateOptions& solver) {
  if (has_uniform_certificate(map)) {
    return InvariantDensity{DensityGrid::uniform(ulam.n_bins), true, 0, 0.0};
  }
  auto ss = steady_state(ulam_matrix(map, ulam), solver);
  return InvariantDensity{std::move(ss.density), false, ss.iterations, ss.residual};
}

}  // namespace chaosrng
