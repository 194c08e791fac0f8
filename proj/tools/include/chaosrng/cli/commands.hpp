#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "chaosrng/density.hpp"
#include "chaosrng/map.hpp"

namespace chaosrng::cli {

enum ExitCode : int {
  kOk = 0,
  kInternal = 1,
  kConfig = 2,
  kNumeric = 3,
  kInsufficientData = 4,
  kResource = 5,
};

enum class OutputFormat { csv, json };

struct MapSelection {
  std::string name = "example";
  std::map<std::string, double> params;
  // JSON map definition; overrides name/params when set.
  std::optional<std::filesystem::path> map_file;
  // Bit-generator cut points; the builtin's default when empty.
  std::vector<double> cuts;

  PiecewiseMap build() const;
  BitGen bitgen() const;
};

struct AnalysisConfig {
  MapSelection map;
  std::size_t n_bins = 4096;
  std::size_t depth = 10;
  std::uint64_t seed = 1;
  std::filesystem::path out_dir = ".";
  OutputFormat format = OutputFormat::csv;

  // Throws ConfigError.
  void validate() const;
  UlamOptions ulam() const { return {.n_bins = n_bins}; }
};

struct RunOutputs {
  // Written files, relative to out_dir.
  std::vector<std::string> files;
  // Human-readable result lines for stdout.
  std::string summary;
};

RunOutputs cmd_analyze(const AnalysisConfig& config);

struct GenerateArgs {
  std::size_t count = 1'000'000;
  std::filesystem::path output;  // default: out_dir/stream.bin
};
RunOutputs cmd_generate(const AnalysisConfig& config, const GenerateArgs& args);

struct PostprocessArgs {
  std::filesystem::path input;
  std::filesystem::path output;  // default: out_dir/postprocessed.bin
  std::string algo = "von-neumann";
  std::size_t block = 10;
  double epsilon = 0.1;
  // Source map given explicitly; required for typical-set.
  bool have_map = false;
};
RunOutputs cmd_postprocess(const AnalysisConfig& config, const PostprocessArgs& args);

struct MonteCarloArgs {
  std::size_t trials = 1000;
  double sigma_slope = 0.01;
  double sigma_break = 0.01;
  double sigma_offset = 0.01;
  std::size_t bins = 20;
};
RunOutputs cmd_montecarlo(const AnalysisConfig& config, const MonteCarloArgs& args);

struct TestArgs {
  std::filesystem::path input;
  std::vector<std::string> tests;  // empty = all
  double alpha = 0.01;
};
RunOutputs cmd_test(const AnalysisConfig& config, const TestArgs& args);

// Full command-line entry point; returns the process exit code.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace chaosrng::cli
