#pragma once

#include <cstddef>
#include <map>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "chaosrng/interval_set.hpp"

namespace chaosrng {

// y = slope * x + intercept
struct AffineForm {
  double slope = 0.0;
  double intercept = 0.0;
};

// y = log2(scale * x + shift) - offset
struct Log2AffineForm {
  double scale = 1.0;
  double shift = 1.0;
  double offset = 0.0;
};

using BranchForm = std::variant<AffineForm, Log2AffineForm>;

// One strictly monotone, differentiable piece of an interval map, with a
// closed-form inverse.
class Branch {
 public:
  Branch(Interval domain, BranchForm form);

  static Branch affine(Interval domain, double slope, double intercept) {
    return Branch(domain, AffineForm{slope, intercept});
  }
  static Branch log2_affine(Interval domain, double scale, double shift, double offset) {
    return Branch(domain, Log2AffineForm{scale, shift, offset});
  }

  const Interval& domain() const noexcept { return domain_; }
  // (inf, sup) of the forward image of the open domain.
  const Interval& image() const noexcept { return image_; }
  const BranchForm& form() const noexcept { return form_; }
  bool increasing() const noexcept { return increasing_; }
  bool is_affine() const noexcept { return std::holds_alternative<AffineForm>(form_); }

  double forward(double x) const noexcept;
  double derivative(double x) const noexcept;
  double inverse(double y) const noexcept;

 private:
  Interval domain_;
  BranchForm form_;
  Interval image_;
  bool increasing_;
};

// Piecewise-monotone map of (0,1) into [0,1]. Branch domains are contiguous
// open intervals whose closures tile [0,1]. Immutable once constructed.
class PiecewiseMap {
 public:
  static constexpr std::size_t kMaxBranches = 256;
  // Tolerance for a branch image poking outside [0,1] by rounding.
  static constexpr double kImageSlack = 1e-12;

  PiecewiseMap(std::string label, std::vector<Branch> branches,
               std::map<std::string, double> params = {});

  const std::string& label() const noexcept { return label_; }
  const std::map<std::string, double>& params() const noexcept { return params_; }
  const std::vector<Branch>& branches() const noexcept { return branches_; }
  // Interior breakpoints, sorted.
  const std::vector<double>& breakpoints() const noexcept { return breakpoints_; }

  // Index of the branch whose open domain contains x, or npos.
  std::size_t branch_index(double x) const noexcept;
  static constexpr std::size_t npos = static_cast<std::size_t>(-1);

 private:
  std::string label_;
  std::vector<Branch> branches_;
  std::map<std::string, double> params_;
  std::vector<double> breakpoints_;
};

// Bit-generation function. The cut points split (0,1) into cells that emit
// 0,1,0,1,... from left to right; a single cut gives the usual threshold rule
// (bit 0 iff x < threshold). A state exactly on a cut takes the cell to its
// right.
class BitGen {
 public:
  explicit BitGen(std::vector<double> cuts);

  static BitGen threshold(double t) { return BitGen({t}); }
  // 1 on (a,b), 0 elsewhere.
  static BitGen window(double a, double b) { return BitGen({a, b}); }

  const std::vector<double>& cuts() const noexcept { return cuts_; }
  int bit(double x) const noexcept;
  // S_1(bit): the set of states emitting the given bit.
  IntervalSet cell(int bit) const;

 private:
  std::vector<double> cuts_;
};

struct Preimage {
  double u = 0.0;
  double slope_magnitude = 0.0;
  std::size_t branch = 0;
  // y sits on the closure boundary of this branch's image.
  bool boundary = false;
};

struct Trajectory {
  std::vector<double> values;
  // Number of iterates moved off a breakpoint or the domain boundary.
  std::size_t nudges = 0;
};

inline constexpr double kBreakpointNudge = 1e-12;

double evaluate(const PiecewiseMap& map, double x);
Trajectory iterate(const PiecewiseMap& map, double x0, std::size_t steps);
std::vector<Preimage> preimages(const PiecewiseMap& map, double y);

// Moves x off breakpoints and the domain ends (within kBreakpointNudge).
// Returns true when x was changed.
bool nudge_off_breakpoints(const PiecewiseMap& map, double& x) noexcept;

// True when sum_i 1/|M'(u_i)| == 1 at every sampled y, which makes the
// uniform density invariant.
bool has_uniform_certificate(const PiecewiseMap& map, std::size_t samples = 1024,
                             double tol = 1e-12);

// Builtin maps: bernoulli, tent, example, dec-bernoulli (param "slope",
// default 1.5), tailed-tent (param "tail", default: matched to
// lambda = ln 1.5), zigzag.
PiecewiseMap builtin(std::string_view name, const std::map<std::string, double>& params = {});
std::vector<std::string> builtin_names();
// Bit generator conventionally paired with a builtin map.
BitGen builtin_bitgen(std::string_view name);

// Lyapunov exponent of the tailed-tent family, ln-based, closed form.
double tailed_tent_lyapunov(double tail);
// Tail parameter in (1/2, 1) whose Lyapunov exponent equals target.
double tailed_tent_matched_tail(double target_lyapunov);

}  // namespace chaosrng
