#include "chaosrng/map.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "chaosrng/error.hpp"

namespace chaosrng {
namespace {

std::string coord(double x) {
  std::ostringstream os;
  os.precision(17);
  os << x;
  return os.str();
}

double param_or(const std::map<std::string, double>& params, const std::string& key,
                double fallback) {
  auto it = params.find(key);
  return it == params.end() ? fallback : it->second;
}

void reject_unknown_params(std::string_view name, const std::map<std::string, double>& params,
                           std::initializer_list<std::string_view> allowed) {
  for (const auto& [key, value] : params) {
    if (std::find(allowed.begin(), allowed.end(), key) == allowed.end()) {
      throw ConfigError("map '" + std::string(name) + "' has no parameter '" + key + "'");
    }
  }
}

}  // namespace

// ---------------------------------------------------------------------------
// Branch

Branch::Branch(Interval domain, BranchForm form) : domain_(domain), form_(form) {
  if (!(domain.lo < domain.hi)) {
    throw ConfigError("branch domain (" + coord(domain.lo) + ", " + coord(domain.hi) +
                      ") is empty");
  }
  if (const auto* a = std::get_if<AffineForm>(&form_)) {
    if (!(a->slope != 0.0) || !std::isfinite(a->slope) || !std::isfinite(a->intercept)) {
      throw ConfigError("affine branch needs a finite non-zero slope");
    }
    increasing_ = a->slope > 0.0;
  } else {
    const auto& l = std::get<Log2AffineForm>(form_);
    if (!(l.scale != 0.0) || !std::isfinite(l.scale) || !std::isfinite(l.shift) ||
        !std::isfinite(l.offset)) {
      throw ConfigError("log2-affine branch needs a finite non-zero scale");
    }
    // log argument must stay positive on the closed domain.
    if (!(l.scale * domain.lo + l.shift > 0.0) || !(l.scale * domain.hi + l.shift > 0.0)) {
      throw ConfigError("log2-affine branch argument is not positive on its domain");
    }
    increasing_ = l.scale > 0.0;
  }
  const double y0 = forward(domain.lo);
  const double y1 = forward(domain.hi);
  image_ = {std::min(y0, y1), std::max(y0, y1)};
}

double Branch::forward(double x) const noexcept {
  if (const auto* a = std::get_if<AffineForm>(&form_)) return a->slope * x + a->intercept;
  const auto& l = std::get<Log2AffineForm>(form_);
  return std::log2(l.scale * x + l.shift) - l.offset;
}

double Branch::derivative(double x) const noexcept {
  if (const auto* a = std::get_if<AffineForm>(&form_)) return a->slope;
  const auto& l = std::get<Log2AffineForm>(form_);
  return l.scale / ((l.scale * x + l.shift) * std::numbers::ln2);
}

double Branch::inverse(double y) const noexcept {
  if (const auto* a = std::get_if<AffineForm>(&form_)) return (y - a->intercept) / a->slope;
  const auto& l = std::get<Log2AffineForm>(form_);
  return (std::exp2(y + l.offset) - l.shift) / l.scale;
}

// ---------------------------------------------------------------------------
// PiecewiseMap

PiecewiseMap::PiecewiseMap(std::string label, std::vector<Branch> branches,
                           std::map<std::string, double> params)
    : label_(std::move(label)), branches_(std::move(branches)), params_(std::move(params)) {
  if (branches_.empty()) throw ConfigError("map '" + label_ + "' has no branches");
  if (branches_.size() > kMaxBranches) {
    throw ConfigError("map '" + label_ + "' exceeds " + std::to_string(kMaxBranches) +
                      " branches");
  }
  std::sort(branches_.begin(), branches_.end(),
            [](const Branch& a, const Branch& b) { return a.domain().lo < b.domain().lo; });

  if (branches_.front().domain().lo != 0.0 || branches_.back().domain().hi != 1.0) {
    throw ConfigError("branch domains of '" + label_ + "' must cover [0,1]");
  }
  for (std::size_t i = 0; i + 1 < branches_.size(); ++i) {
    const double end = branches_[i].domain().hi;
    const double next = branches_[i + 1].domain().lo;
    if (end != next) {
      throw ConfigError("branch domains of '" + label_ + "' are not contiguous at " + coord(end));
    }
    breakpoints_.push_back(end);
  }
  for (const auto& b : branches_) {
    if (b.image().lo < -kImageSlack || b.image().hi > 1.0 + kImageSlack) {
      throw ConfigError("branch on (" + coord(b.domain().lo) + ", " + coord(b.domain().hi) +
                        ") of '" + label_ + "' maps outside [0,1]");
    }
  }
}

std::size_t PiecewiseMap::branch_index(double x) const noexcept {
  auto it = std::upper_bound(branches_.begin(), branches_.end(), x,
                             [](double v, const Branch& b) { return v < b.domain().lo; });
  if (it == branches_.begin()) return npos;
  --it;
  return it->domain().contains(x) ? static_cast<std::size_t>(it - branches_.begin()) : npos;
}

// ---------------------------------------------------------------------------
// BitGen

BitGen::BitGen(std::vector<double> cuts) : cuts_(std::move(cuts)) {
  if (cuts_.empty()) throw ConfigError("bit generator needs at least one cut point");
  std::sort(cuts_.begin(), cuts_.end());
  for (std::size_t i = 0; i < cuts_.size(); ++i) {
    if (!(cuts_[i] > 0.0 && cuts_[i] < 1.0)) {
      throw ConfigError("bit generator cut " + coord(cuts_[i]) + " is outside (0,1)");
    }
    if (i > 0 && cuts_[i] == cuts_[i - 1]) {
      throw ConfigError("bit generator cut " + coord(cuts_[i]) + " is repeated");
    }
  }
}

int BitGen::bit(double x) const noexcept {
  const auto passed = std::upper_bound(cuts_.begin(), cuts_.end(), x) - cuts_.begin();
  return static_cast<int>(passed & 1);
}

IntervalSet BitGen::cell(int bit) const {
  std::vector<Interval> out;
  double lo = 0.0;
  for (std::size_t i = 0; i <= cuts_.size(); ++i) {
    const double hi = i < cuts_.size() ? cuts_[i] : 1.0;
    if (static_cast<int>(i & 1) == bit) out.push_back({lo, hi});
    lo = hi;
  }
  return IntervalSet(std::move(out));
}

// ---------------------------------------------------------------------------
// Operations

double evaluate(const PiecewiseMap& map, double x) {
  if (!(x > 0.0 && x < 1.0)) {
    throw DomainError("evaluate: x = " + coord(x) + " is outside (0,1)", x);
  }
  const auto idx = map.branch_index(x);
  if (idx == PiecewiseMap::npos) {
    throw DomainError("evaluate: x = " + coord(x) + " is a breakpoint of '" + map.label() + "'",
                      x);
  }
  return std::clamp(map.branches()[idx].forward(x), 0.0, 1.0);
}

bool nudge_off_breakpoints(const PiecewiseMap& map, double& x) noexcept {
  if (x < kBreakpointNudge) {
    x = kBreakpointNudge;
    return true;
  }
  if (x > 1.0 - kBreakpointNudge) {
    x = 1.0 - kBreakpointNudge;
    return true;
  }
  const auto& bps = map.breakpoints();
  auto it = std::lower_bound(bps.begin(), bps.end(), x - kBreakpointNudge);
  if (it != bps.end() && std::abs(*it - x) < kBreakpointNudge) {
    x = *it + kBreakpointNudge;
    return true;
  }
  return false;
}

Trajectory iterate(const PiecewiseMap& map, double x0, std::size_t steps) {
  if (steps == 0) throw ConfigError("iterate: steps must be at least 1");
  Trajectory t;
  t.values.reserve(steps);
  double x = x0;
  if (!(x > 0.0 && x < 1.0)) throw DomainError("iterate: x0 = " + coord(x0) + " is outside (0,1)", x0);
  if (nudge_off_breakpoints(map, x)) ++t.nudges;
  for (std::size_t i = 0; i < steps; ++i) {
    x = map.branches()[map.branch_index(x)].forward(x);
    if (nudge_off_breakpoints(map, x)) ++t.nudges;
    t.values.push_back(x);
  }
  return t;
}

std::vector<Preimage> preimages(const PiecewiseMap& map, double y) {
  if (!(y > 0.0 && y < 1.0)) {
    throw DomainError("preimages: y = " + coord(y) + " is outside (0,1)", y);
  }
  std::vector<Preimage> out;
  const auto& branches = map.branches();
  for (std::size_t i = 0; i < branches.size(); ++i) {
    const auto& b = branches[i];
    const auto& img = b.image();
    if (y < img.lo || y > img.hi) continue;
    Preimage p;
    p.branch = i;
    p.boundary = (y == img.lo || y == img.hi);
    p.u = std::clamp(b.inverse(y), b.domain().lo, b.domain().hi);
    p.slope_magnitude = std::abs(b.derivative(p.u));
    out.push_back(p);
  }
  return out;
}

bool has_uniform_certificate(const PiecewiseMap& map, std::size_t samples, double tol) {
  for (std::size_t s = 0; s < samples; ++s) {
    // Irrational stride keeps samples off dyadic breakpoints.
    const double y = std::fmod((s + 0.5) * std::numbers::sqrt2 / 1.7, 1.0);
    if (!(y > 0.0 && y < 1.0)) continue;
    double sum = 0.0;
    for (const auto& p : preimages(map, y)) {
      if (p.boundary) {
        sum = -1.0;
        break;
      }
      sum += 1.0 / p.slope_magnitude;
    }
    if (sum >= 0.0 && std::abs(sum - 1.0) > tol) return false;
  }
  return true;
}

// ---------------------------------------------------------------------------
// Builtins

double tailed_tent_lyapunov(double tail) {
  return (1.0 - tail) * std::log(2.0 / (1.0 - tail)) + tail * std::log(1.0 / tail);
}

double tailed_tent_matched_tail(double target) {
  // lambda(t) decreases monotonically on (1/2, 1) from ~1.04 to 0.
  double lo = 0.5;
  double hi = 1.0 - 1e-12;
  if (!(tailed_tent_lyapunov(lo) >= target && tailed_tent_lyapunov(hi) <= target)) {
    throw ConfigError("tailed-tent: no tail parameter in (1/2,1) gives lambda = " +
                      coord(target));
  }
  for (int i = 0; i < 200 && hi - lo > 1e-15; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (tailed_tent_lyapunov(mid) > target) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

PiecewiseMap builtin(std::string_view name, const std::map<std::string, double>& params) {
  if (name == "bernoulli") {
    reject_unknown_params(name, params, {});
    return PiecewiseMap("bernoulli", {Branch::affine({0.0, 0.5}, 2.0, 0.0),
                                      Branch::affine({0.5, 1.0}, 2.0, -1.0)});
  }
  if (name == "tent") {
    reject_unknown_params(name, params, {});
    return PiecewiseMap("tent", {Branch::affine({0.0, 0.5}, 2.0, 0.0),
                                 Branch::affine({0.5, 1.0}, -2.0, 2.0)});
  }
  if (name == "example") {
    reject_unknown_params(name, params, {});
    // log2(1+3x) - floor(log2(1+3x)); the floor steps at x = 1/3.
    return PiecewiseMap("example", {Branch::log2_affine({0.0, 1.0 / 3.0}, 3.0, 1.0, 0.0),
                                    Branch::log2_affine({1.0 / 3.0, 1.0}, 3.0, 1.0, 1.0)});
  }
  if (name == "dec-bernoulli") {
    reject_unknown_params(name, params, {"slope"});
    const double s = param_or(params, "slope", 1.5);
    if (!(s > 1.0 && s <= 2.0)) {
      throw ConfigError("dec-bernoulli: slope must lie in (1,2], got " + coord(s));
    }
    // Two parallel branches, centred so the map commutes with x -> 1-x.
    const double offset = (2.0 - s) / 4.0;
    return PiecewiseMap("dec-bernoulli",
                        {Branch::affine({0.0, 0.5}, s, offset),
                         Branch::affine({0.5, 1.0}, s, offset - 0.5 * s)},
                        {{"slope", s}});
  }
  if (name == "tailed-tent") {
    reject_unknown_params(name, params, {"tail"});
    const double t = param_or(params, "tail", tailed_tent_matched_tail(std::log(1.5)));
    if (!(t > 0.0 && t < 1.0)) {
      throw ConfigError("tailed-tent: tail must lie in (0,1), got " + coord(t));
    }
    // Tent of slope 2/(1-t) on (0,1-t), then a full-range tail of slope 1/t.
    const double peak = 0.5 * (1.0 - t);
    const double s = 2.0 / (1.0 - t);
    return PiecewiseMap("tailed-tent",
                        {Branch::affine({0.0, peak}, s, 0.0),
                         Branch::affine({peak, 1.0 - t}, -s, 2.0),
                         Branch::affine({1.0 - t, 1.0}, 1.0 / t, -(1.0 - t) / t)},
                        {{"tail", t}});
  }
  if (name == "zigzag") {
    reject_unknown_params(name, params, {});
    return PiecewiseMap("zigzag", {Branch::affine({0.0, 0.25}, 2.0, 0.5),
                                   Branch::affine({0.25, 0.75}, -2.0, 1.5),
                                   Branch::affine({0.75, 1.0}, 2.0, -1.5)});
  }
  throw ConfigError("unknown builtin map '" + std::string(name) + "'");
}

std::vector<std::string> builtin_names() {
  return {"bernoulli", "tent", "example", "dec-bernoulli", "tailed-tent", "zigzag"};
}

BitGen builtin_bitgen(std::string_view name) {
  if (name == "example") return BitGen::threshold(1.0 / 3.0);
  // A threshold at 1/2 makes the zigzag output strictly alternate; its
  // middle branch is the cell that yields fair bits.
  if (name == "zigzag") return BitGen::window(0.25, 0.75);
  return BitGen::threshold(0.5);
}

}  // namespace chaosrng
