#include "chaosrng/robustness.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include <json.hpp>

#include "chaosrng/diagnostics.hpp"
#include "chaosrng/entropy.hpp"
#include "chaosrng/error.hpp"
#include "chaosrng/random.hpp"
#include "format.hpp"

namespace chaosrng {

void PerturbationSpec::validate() const {
  if (!(sigma_slope >= 0.0) || !(sigma_break >= 0.0) || !(sigma_offset >= 0.0)) {
    throw ConfigError("perturbation: sigmas must be non-negative");
  }
  if (trials == 0) throw ConfigError("perturbation: trials must be at least 1");
}

namespace {

constexpr double kMinBranchWidth = 1e-9;

// Shift a branch so its image fits [0,1]. Returns the adjusted branch and
// whether anything changed.
std::pair<Branch, bool> fit_into_unit(const Branch& b) {
  const auto& img = b.image();
  const double width = b.domain().length();
  if (img.lo >= 0.0 && img.hi <= 1.0) return {b, false};
  if (const auto* a = std::get_if<AffineForm>(&b.form())) {
    double slope = a->slope;
    double intercept = a->intercept;
    if (std::abs(slope) * width > 1.0) slope = std::copysign(1.0 / width, slope);
    const Branch scaled = Branch::affine(b.domain(), slope, intercept);
    const double lo = scaled.image().lo;
    const double hi = scaled.image().hi;
    if (lo < 0.0) intercept -= lo;
    if (hi > 1.0) intercept -= hi - 1.0;
    return {Branch::affine(b.domain(), slope, intercept), true};
  }
  auto l = std::get<Log2AffineForm>(b.form());
  if (img.hi - img.lo > 1.0) throw ConfigError("log2-affine branch image longer than 1");
  if (img.lo < 0.0) l.offset += img.lo;
  if (img.hi > 1.0) l.offset += img.hi - 1.0;
  return {Branch(b.domain(), l), true};
}

}  // namespace

PerturbOutcome perturb(const PiecewiseMap& map, const PerturbationSpec& spec,
                       std::size_t trial_index) {
  spec.validate();
  Rng rng = derive_rng(spec.seed, trial_index);
  std::normal_distribution<double> normal(0.0, 1.0);

  PerturbOutcome outcome;
  std::vector<double> edges{0.0};
  for (double bp : map.breakpoints()) edges.push_back(bp + spec.sigma_break * normal(rng));
  edges.push_back(1.0);
  for (std::size_t i = 1; i < edges.size(); ++i) {
    if (!(edges[i] - edges[i - 1] > kMinBranchWidth)) {
      outcome.failure = "breakpoint jitter produced an empty branch";
      return outcome;
    }
  }

  std::vector<Branch> branches;
  const auto& original = map.branches();
  for (std::size_t i = 0; i < original.size(); ++i) {
    const auto& b = original[i];
    const double slope_draw = normal(rng);
    const double offset_draw = normal(rng);
    const Interval domain{edges[i], edges[i + 1]};
    try {
      Branch moved = [&] {
        if (const auto* a = std::get_if<AffineForm>(&b.form())) {
          const double slope = a->slope * (1.0 + spec.sigma_slope * slope_draw);
          if (!(slope * a->slope > 0.0)) throw ConfigError("slope jitter flipped monotonicity");
          return Branch::affine(domain, slope, a->intercept + spec.sigma_offset * offset_draw);
        }
        return Branch(domain, b.form());
      }();
      auto [fitted, clipped] = fit_into_unit(moved);
      if (clipped) ++outcome.clipped_branches;
      branches.push_back(std::move(fitted));
    } catch (const ConfigError& e) {
      outcome.failure = e.what();
      return outcome;
    }
  }
  try {
    outcome.map.emplace(map.label(), std::move(branches), map.params());
  } catch (const ConfigError& e) {
    outcome.failure = e.what();
  }
  if (outcome.clipped_branches > 0) {
    diag::warn("perturb: trial " + std::to_string(trial_index) + " clipped " +
               std::to_string(outcome.clipped_branches) + " branch(es) into [0,1]");
  }
  return outcome;
}

const char* to_string(TrialStatus status) noexcept {
  switch (status) {
    case TrialStatus::ok:
      return "ok";
    case TrialStatus::invalid_map:
      return "invalid_map";
    case TrialStatus::no_convergence:
      return "no_convergence";
  }
  return "unknown";
}

Histogram make_histogram(const std::vector<double>& values, std::size_t bins) {
  Histogram h;
  if (bins == 0) bins = 1;
  h.counts.assign(bins, 0);
  if (values.empty()) {
    for (std::size_t i = 0; i <= bins; ++i) h.edges.push_back(static_cast<double>(i) / bins);
    return h;
  }
  const auto [mn, mx] = std::minmax_element(values.begin(), values.end());
  double lo = std::floor(*mn * 100.0) / 100.0;
  double hi = std::max(1.0, *mx);
  if (!(hi > lo)) lo = hi - 0.01;
  const double w = (hi - lo) / static_cast<double>(bins);
  for (std::size_t i = 0; i <= bins; ++i) h.edges.push_back(lo + w * static_cast<double>(i));
  h.edges.back() = hi;
  for (double v : values) {
    auto idx = static_cast<std::size_t>((v - lo) / w);
    h.counts[std::min(idx, bins - 1)]++;
  }
  return h;
}

MCProfile mc_profile(const PiecewiseMap& map, const BitGen& gen, const PerturbationSpec& spec,
                     const MonteCarloOptions& options) {
  spec.validate();
  MCProfile p;
  const auto allowed = static_cast<std::size_t>(
      std::floor(options.max_failure_fraction * static_cast<double>(spec.trials)));
  for (std::size_t t = 0; t < spec.trials; ++t) {
    TrialResult r;
    r.index = t;
    auto outcome = perturb(map, spec, t);
    r.clipped_branches = outcome.clipped_branches;
    if (!outcome.ok()) {
      r.status = TrialStatus::invalid_map;
    } else {
      try {
        const auto inv = invariant_density(*outcome.map, options.ulam, options.solver);
        r.entropy_rate = entropy_rate(*outcome.map, gen, inv, options.n_entropy).entropy_rate;
      } catch (const NumericError&) {
        r.status = TrialStatus::no_convergence;
      }
    }
    if (r.status != TrialStatus::ok) {
      ++p.failures;
      if (p.failures > allowed) {
        throw NumericError("montecarlo: " + std::to_string(p.failures) + " of " +
                               std::to_string(t + 1) + " trials failed (limit " +
                               std::to_string(allowed) + " of " + std::to_string(spec.trials) +
                               "); check the perturbation scales",
                           static_cast<double>(p.failures) / static_cast<double>(spec.trials));
      }
    } else {
      p.entropy_rates.push_back(r.entropy_rate);
    }
    p.trials.push_back(r);
  }

  const auto& v = p.entropy_rates;
  if (!v.empty()) {
    double sum = 0.0;
    for (double x : v) sum += x;
    p.mean = sum / static_cast<double>(v.size());
    double ss = 0.0;
    for (double x : v) ss += (x - p.mean) * (x - p.mean);
    p.stddev = v.size() > 1 ? std::sqrt(ss / static_cast<double>(v.size() - 1)) : 0.0;
    p.min = *std::min_element(v.begin(), v.end());
    p.max = *std::max_element(v.begin(), v.end());
  }
  p.histogram = make_histogram(v, options.histogram_bins);
  return p;
}

std::string mc_profile_to_csv(const MCProfile& profile) {
  std::string out = "trial,entropy_rate,status\n";
  for (const auto& t : profile.trials) {
    out += std::to_string(t.index) + ',';
    out += t.status == TrialStatus::ok ? detail::fmt_double(t.entropy_rate) : std::string();
    out += ',';
    out += to_string(t.status);
    out += '\n';
  }
  return out;
}

std::string histogram_to_json(const MCProfile& profile) {
  nlohmann::ordered_json doc;
  doc["edges"] = profile.histogram.edges;
  doc["counts"] = profile.histogram.counts;
  doc["mean"] = profile.mean;
  doc["std"] = profile.stddev;
  doc["min"] = profile.min;
  doc["max"] = profile.max;
  doc["trials"] = profile.trials.size();
  doc["failures"] = profile.failures;
  return doc.dump(2) + "\n";
}

}  // namespace chaosrng
