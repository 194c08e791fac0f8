#include "chaosrng/cli/commands.hpp"

#include <bit>
#include <chrono>
#include <cmath>
#include <ctime>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "chaosrng/bitstream.hpp"
#include "chaosrng/diagnostics.hpp"
#include "chaosrng/entropy.hpp"
#include "chaosrng/error.hpp"
#include "chaosrng/lyapunov.hpp"
#include "chaosrng/map_json.hpp"
#include "chaosrng/postproc.hpp"
#include "chaosrng/robustness.hpp"
#include "chaosrng/stat_tests.hpp"
#include "chaosrng/symbolic.hpp"

#ifndef CHAOSRNG_VERSION
#define CHAOSRNG_VERSION "unknown"
#endif

namespace chaosrng::cli {
namespace {

using ordered_json = nlohmann::ordered_json;
namespace fs = std::filesystem;

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_output(const AnalysisConfig& cfg, RunOutputs& outputs, const std::string& name,
                  const std::string& content) {
  fs::create_directories(cfg.out_dir);
  const auto path = cfg.out_dir / name;
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot write " + path.string());
  out << content;
  if (!out) throw ConfigError("write failed for " + path.string());
  outputs.files.push_back(name);
}

std::string relative_name(const AnalysisConfig& cfg, const fs::path& path) {
  const auto rel = path.lexically_relative(cfg.out_dir);
  if (!rel.empty() && *rel.begin() != "..") return rel.generic_string();
  return path.generic_string();
}

std::string density_to_json(const DensityGrid& f) {
  ordered_json j;
  j["n_bins"] = f.n_bins();
  j["bin_width"] = f.bin_width();
  j["density"] = std::vector<double>(f.values().begin(), f.values().end());
  return j.dump(2) + "\n";
}

std::string sequence_table_to_json(const SequenceTable& t) {
  auto rows = ordered_json::array();
  for (std::size_t m = 1; m <= t.depth(); ++m) {
    for (Word w = 0; w < (Word{1} << m); ++w) {
      rows.push_back({{"word", word_to_string(w, m)},
                      {"interval_count", t.interval_count(w, m)},
                      {"probability", t.probability(w, m)}});
    }
  }
  return rows.dump(2) + "\n";
}

std::vector<std::uint8_t> read_stream(const fs::path& path) {
  if (!fs::exists(path)) throw ConfigError("input stream " + path.string() + " does not exist");
  return format_for(path) == StreamFormat::text ? read_text(path) : read_packed(path);
}

void write_stream(const fs::path& path, std::span<const std::uint8_t> bits) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  if (format_for(path) == StreamFormat::text) {
    write_text(path, bits);
  } else {
    write_packed(path, bits);
  }
}

std::string fmt(double v, int precision = 6) {
  std::ostringstream ss;
  ss << std::fixed << std::setprecision(precision) << v;
  return ss.str();
}

std::string utc_timestamp() {
  const auto now = std::chrono::system_clock::now();
  const std::time_t t = std::chrono::system_clock::to_time_t(now);
  std::tm tm{};
  gmtime_r(&t, &tm);
  std::ostringstream ss;
  ss << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
  return ss.str();
}

void write_manifest(const AnalysisConfig& cfg, const std::string& command,
                    const std::vector<std::string>& argv, const RunOutputs& outputs) {
  ordered_json j;
  j["tool"] = "chaosrng";
  j["version"] = CHAOSRNG_VERSION;
  j["command"] = command;
  j["argv"] = argv;
  j["seed"] = cfg.seed;
  j["map"] = cfg.map.map_file ? cfg.map.map_file->string() : cfg.map.name;
  j["timestamp"] = utc_timestamp();
  j["outputs"] = outputs.files;
  RunOutputs ignored;
  write_output(cfg, ignored, "manifest.json", j.dump(2) + "\n");
}

}  // namespace

// ---------------------------------------------------------------------------
// Config

PiecewiseMap MapSelection::build() const {
  if (map_file) {
    if (!params.empty()) throw ConfigError("--param cannot be combined with --map-file");
    return map_from_json(read_file(*map_file));
  }
  return builtin(name, params);
}

BitGen MapSelection::bitgen() const {
  if (!cuts.empty()) return BitGen(cuts);
  if (map_file) return BitGen::threshold(0.5);
  return builtin_bitgen(name);
}

void AnalysisConfig::validate() const {
  if (n_bins < 64 || !std::has_single_bit(n_bins)) {
    throw ConfigError("--n-bins must be a power of two >= 64, got " + std::to_string(n_bins));
  }
  if (depth < 1 || depth > SequenceTable::kMaxDepth) {
    throw ConfigError("--depth must lie in [1, " + std::to_string(SequenceTable::kMaxDepth) +
                      "], got " + std::to_string(depth));
  }
  if (map.map_file && !fs::exists(*map.map_file)) {
    throw ConfigError("map file " + map.map_file->string() + " does not exist");
  }
}

// ---------------------------------------------------------------------------
// Commands

RunOutputs cmd_analyze(const AnalysisConfig& cfg) {
  cfg.validate();
  const auto map = cfg.map.build();
  const auto gen = cfg.map.bitgen();
  const auto inv = invariant_density(map, cfg.ulam());
  const auto table = refine(map, gen, cfg.depth, StateMeasure::from_invariant(inv));
  const auto report = entropy_report(table, lyapunov(map, inv.density));

  RunOutputs out;
  if (cfg.format == OutputFormat::csv) {
    write_output(cfg, out, "density.csv", density_to_csv(inv.density));
    write_output(cfg, out, "sequence_table.csv", sequence_table_to_csv(table));
    write_output(cfg, out, "entropy_report.csv", entropy_report_to_csv(report));
  } else {
    write_output(cfg, out, "density.json", density_to_json(inv.density));
    write_output(cfg, out, "sequence_table.json", sequence_table_to_json(table));
  }
  write_output(cfg, out, "entropy_report.json", entropy_report_to_json(report));

  std::ostringstream s;
  s << "map            " << map.label() << "\n"
    << "density        " << (inv.certified_uniform ? "uniform (certified)" : "ulam") << ", "
    << inv.density.n_bins() << " bins\n"
    << "P[0]           " << fmt(table.probability(0, 1)) << "\n"
    << "bias           " << fmt(report.bias) << "\n"
    << "lyapunov       " << fmt(report.lyapunov) << " nats\n"
    << "entropy rate   " << fmt(report.entropy_rate) << " bits/symbol (n=" << cfg.depth << ")\n"
    << "pesin bound    " << fmt(report.pesin_bound()) << "\n";
  out.summary = s.str();
  return out;
}

RunOutputs cmd_generate(const AnalysisConfig& cfg, const GenerateArgs& args) {
  cfg.validate();
  const auto map = cfg.map.build();
  const auto gen = cfg.map.bitgen();
  const auto inv = invariant_density(map, cfg.ulam());
  const auto bits = generate_bits(map, gen, inv.density, args.count, cfg.seed);
  const auto path = args.output.empty() ? cfg.out_dir / "stream.bin" : args.output;
  write_stream(path, bits.view());

  RunOutputs out;
  out.files.push_back(relative_name(cfg, path));
  out.summary = "wrote " + std::to_string(bits.size()) + " bits to " + path.string() +
                " (fraction of ones " + fmt(bits.fraction_of_ones()) + ")\n";
  return out;
}

RunOutputs cmd_postprocess(const AnalysisConfig& cfg, const PostprocessArgs& args) {
  cfg.validate();
  if (args.input.empty()) throw ConfigError("postprocess: --input is required");
  BitStream input{read_stream(args.input), {}};
  input.origin.length = input.size();

  ordered_json report;
  report["algo"] = args.algo;
  report["input_bits"] = input.size();

  BitStream output;
  double entropy = 0.0;
  std::string entropy_source;
  if (args.algo == "von-neumann") {
    auto r = von_neumann(input);
    output = std::move(r.output);
    if (args.have_map) {
      const auto map = cfg.map.build();
      const auto inv = invariant_density(map, cfg.ulam());
      const auto table =
          refine(map, cfg.map.bitgen(), cfg.depth, StateMeasure::from_invariant(inv));
      entropy = conditional_entropy(table, cfg.depth);
      entropy_source = "exact";
      report["exact_rate"] = vn_rate_exact(table);
    } else {
      // Deepest plug-in block length the stream supports, up to 10.
      std::size_t m = 1;
      while (m < 10 && input.size() >= 100 * (std::size_t{1} << (m + 1))) ++m;
      entropy = empirical_entropy(input.view(), m);
      entropy_source = "empirical(m=" + std::to_string(m) + ")";
    }
  } else if (args.algo == "typical-set") {
    if (!args.have_map) throw ConfigError("postprocess: typical-set needs the source --map");
    if (args.block < 1 || args.block > SequenceTable::kMaxDepth) {
      throw ConfigError("postprocess: --n must lie in [1, 20]");
    }
    const auto map = cfg.map.build();
    const auto inv = invariant_density(map, cfg.ulam());
    const std::size_t depth = std::max(cfg.depth, args.block);
    const auto table = refine(map, cfg.map.bitgen(), depth, StateMeasure::from_invariant(inv));
    entropy = conditional_entropy(table, cfg.depth);
    entropy_source = "exact";
    const auto coder = build_typical_coder(table, args.block, args.epsilon, entropy);
    output = encode(coder, input);
    report["coder"] = {{"n", coder.block_length()},
                       {"epsilon", coder.epsilon()},
                       {"label_bits", coder.label_bits()},
                       {"typical_size", coder.typical_size()},
                       {"coverage", coder.coverage()},
                       {"exact_output_entropy", exact_output_entropy(coder, table)}};
  } else {
    throw ConfigError("postprocess: unknown --algo '" + args.algo +
                      "' (expected von-neumann or typical-set)");
  }

  const double rate = input.size() == 0
                          ? 0.0
                          : static_cast<double>(output.size()) / static_cast<double>(input.size());
  const auto verdict = check_rate_bound(entropy, rate);
  report["output_bits"] = output.size();
  report["rate"] = rate;
  report["entropy_rate"] = entropy;
  report["entropy_source"] = entropy_source;
  report["rate_bound"] = {{"pass", verdict.pass}, {"margin", verdict.margin}};

  const auto path = args.output.empty() ? cfg.out_dir / "postprocessed.bin" : args.output;
  write_stream(path, output.view());
  RunOutputs out;
  out.files.push_back(relative_name(cfg, path));
  write_output(cfg, out, "rate_report.json", report.dump(2) + "\n");
  out.summary = args.algo + ": " + std::to_string(input.size()) + " -> " +
                std::to_string(output.size()) + " bits, rate " + fmt(rate) + ", entropy rate " +
                fmt(entropy) + " (" + entropy_source + "), rate bound " +
                (verdict.pass ? "PASS" : "FAIL") + "\n";
  return out;
}

RunOutputs cmd_montecarlo(const AnalysisConfig& cfg, const MonteCarloArgs& args) {
  cfg.validate();
  const auto map = cfg.map.build();
  const PerturbationSpec spec{.sigma_slope = args.sigma_slope,
                              .sigma_break = args.sigma_break,
                              .sigma_offset = args.sigma_offset,
                              .trials = args.trials,
                              .seed = cfg.seed};
  const MonteCarloOptions opts{.n_entropy = cfg.depth, .ulam = cfg.ulam(), .histogram_bins = args.bins};
  const auto profile = mc_profile(map, cfg.map.bitgen(), spec, opts);

  RunOutputs out;
  if (cfg.format == OutputFormat::csv) {
    write_output(cfg, out, "montecarlo.csv", mc_profile_to_csv(profile));
  } else {
    auto rows = ordered_json::array();
    for (const auto& t : profile.trials) {
      rows.push_back({{"trial", t.index},
                      {"entropy_rate", t.status == TrialStatus::ok ? ordered_json(t.entropy_rate)
                                                                   : ordered_json(nullptr)},
                      {"status", to_string(t.status)}});
    }
    write_output(cfg, out, "montecarlo.json", rows.dump(2) + "\n");
  }
  write_output(cfg, out, "histogram.json", histogram_to_json(profile));

  std::size_t above = 0;
  for (double h : profile.entropy_rates) above += h >= 0.9;
  std::ostringstream s;
  s << "trials         " << profile.trials.size() << " (" << profile.failures << " failed)\n"
    << "mean           " << fmt(profile.mean) << "\n"
    << "std            " << fmt(profile.stddev) << "\n"
    << "min / max      " << fmt(profile.min) << " / " << fmt(profile.max) << "\n"
    << "H >= 0.90      " << above << " of " << profile.entropy_rates.size() << "\n";
  out.summary = s.str();
  return out;
}

RunOutputs cmd_test(const AnalysisConfig& cfg, const TestArgs& args) {
  if (args.input.empty()) throw ConfigError("test: --input is required");
  if (!(args.alpha > 0.0 && args.alpha < 1.0)) throw ConfigError("test: --alpha must lie in (0,1)");
  const auto bits = read_stream(args.input);
  auto names = args.tests;
  if (names.empty() || (names.size() == 1 && names[0] == "all")) names = stat::test_names();

  std::vector<stat::TestResult> results;
  for (const auto& name : names) results.push_back(stat::run_test(name, bits, args.alpha));

  RunOutputs out;
  write_output(cfg, out, "results.json", stat::results_to_json(results));
  std::ostringstream s;
  for (const auto& r : results) {
    s << std::left << std::setw(16) << r.test_name << " p=" << std::setw(12)
      << std::setprecision(6) << r.p_value << (r.pass ? "pass" : "FAIL") << "\n";
  }
  out.summary = s.str();
  return out;
}

// ---------------------------------------------------------------------------
// Entry point

namespace {

constexpr const char* kExitCodes =
    "Exit codes:\n"
    "  0  success\n"
    "  1  unexpected internal error\n"
    "  2  invalid configuration, arguments or input files\n"
    "  3  numerical failure (solver did not converge, too many failed trials)\n"
    "  4  insufficient data (stream too short for the requested statistic)\n"
    "  5  resource limit exceeded\n";

std::map<std::string, double> parse_params(const std::vector<std::string>& raw) {
  std::map<std::string, double> out;
  for (const auto& kv : raw) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos || eq == 0) {
      throw ConfigError("--param expects key=value, got '" + kv + "'");
    }
    const std::string value = kv.substr(eq + 1);
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(value, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != value.size() || value.empty()) {
      throw ConfigError("--param " + kv.substr(0, eq) + ": '" + value + "' is not a number");
    }
    out[kv.substr(0, eq)] = v;
  }
  return out;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Entropy analysis and post-processing for chaotic-map random bit generators",
               "chaosrng"};
  app.footer(kExitCodes);
  app.require_subcommand(1);
  app.fallthrough();
  app.set_version_flag("--version", CHAOSRNG_VERSION);

  AnalysisConfig cfg;
  std::string format = "csv";
  std::vector<std::string> raw_params;
  std::string map_file;
  double threshold = -1.0;
  bool verbose = false;

  app.add_option("--seed", cfg.seed, "Random seed")->capture_default_str();
  app.add_option("--out-dir", cfg.out_dir, "Directory for reports and the run manifest")
      ->capture_default_str();
  app.add_option("--format", format, "Tabular output format")
      ->check(CLI::IsMember({"csv", "json"}))
      ->capture_default_str();
  app.add_flag("-v,--verbose", verbose, "Print diagnostics to stderr");

  const auto add_map_options = [&](CLI::App* sub) {
    sub->add_option("--map", cfg.map.name, "Builtin map: " + [] {
      std::string s;
      for (const auto& n : builtin_names()) s += (s.empty() ? "" : ", ") + n;
      return s;
    }())->capture_default_str();
    sub->add_option("--param", raw_params, "Map parameter key=value (repeatable)");
    sub->add_option("--map-file", map_file, "JSON map definition")->check(CLI::ExistingFile);
    auto* th = sub->add_option("--threshold", threshold, "Bit threshold (single cut point)");
    sub->add_option("--cuts", cfg.map.cuts, "Bit-generator cut points, comma separated")
        ->delimiter(',')
        ->excludes(th);
    sub->add_option("--n-bins", cfg.n_bins, "Ulam grid size (power of two)")
        ->capture_default_str();
    sub->add_option("--depth", cfg.depth, "Word length n_max for the entropy rate")
        ->capture_default_str();
  };

  auto* analyze = app.add_subcommand("analyze", "Invariant density, sequence table, entropy rate");
  add_map_options(analyze);

  GenerateArgs gen_args;
  auto* generate = app.add_subcommand("generate", "Generate a raw bit stream from a map");
  add_map_options(generate);
  generate->add_option("--count", gen_args.count, "Number of bits")->capture_default_str();
  generate->add_option("--output,-o", gen_args.output,
                       "Stream file (.txt for ASCII, packed otherwise)");

  PostprocessArgs pp_args;
  auto* post = app.add_subcommand("postprocess", "Apply a post-processor to a stream");
  add_map_options(post);
  post->add_option("--input,-i", pp_args.input, "Input stream")->required();
  post->add_option("--output,-o", pp_args.output, "Output stream");
  post->add_option("--algo", pp_args.algo, "Post-processor")
      ->check(CLI::IsMember({"von-neumann", "typical-set"}))
      ->capture_default_str();
  post->add_option("--n", pp_args.block, "Typical-set block length")->capture_default_str();
  post->add_option("--epsilon", pp_args.epsilon, "Typical-set epsilon")->capture_default_str();

  MonteCarloArgs mc_args;
  double sigma = -1.0;
  auto* mc = app.add_subcommand("montecarlo", "Entropy-rate profile under parameter jitter");
  add_map_options(mc);
  mc->add_option("--trials", mc_args.trials, "Number of perturbed maps")->capture_default_str();
  mc->add_option("--sigma", sigma, "Set all three jitter scales");
  mc->add_option("--sigma-slope", mc_args.sigma_slope, "Relative slope jitter")
      ->capture_default_str();
  mc->add_option("--sigma-break", mc_args.sigma_break, "Absolute breakpoint jitter")
      ->capture_default_str();
  mc->add_option("--sigma-offset", mc_args.sigma_offset, "Absolute intercept jitter")
      ->capture_default_str();
  mc->add_option("--bins", mc_args.bins, "Histogram bins")->capture_default_str();

  TestArgs test_args;
  std::string test_list = "all";
  auto* test = app.add_subcommand("test", "Run the statistical test battery on a stream");
  test->add_option("--input,-i", test_args.input, "Input stream")->required();
  test->add_option("--tests", test_list,
                   "Comma-separated subset of monobit, runs, serial, approx-entropy, or all")
      ->capture_default_str();
  test->add_option("--alpha", test_args.alpha, "Significance level")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e, out, err);
    err << "chaosrng: " << e.what() << "\n";
    if (dynamic_cast<const CLI::RequiredError*>(&e) == nullptr) {
      err << "Run with --help for usage.\n";
    }
    return kConfig;
  }

  if (verbose) diag::set_sink(diag::stderr_sink());
  std::vector<std::string> args(argv, argv + argc);
  std::string command;
  try {
    cfg.format = format == "json" ? OutputFormat::json : OutputFormat::csv;
    cfg.map.params = parse_params(raw_params);
    if (!map_file.empty()) cfg.map.map_file = map_file;
    if (threshold >= 0.0) cfg.map.cuts = {threshold};

    RunOutputs result;
    if (analyze->parsed()) {
      command = "analyze";
      result = cmd_analyze(cfg);
    } else if (generate->parsed()) {
      command = "generate";
      result = cmd_generate(cfg, gen_args);
    } else if (post->parsed()) {
      command = "postprocess";
      pp_args.have_map = post->count("--map") > 0 || !map_file.empty();
      result = cmd_postprocess(cfg, pp_args);
    } else if (mc->parsed()) {
      command = "montecarlo";
      if (sigma >= 0.0) mc_args.sigma_slope = mc_args.sigma_break = mc_args.sigma_offset = sigma;
      result = cmd_montecarlo(cfg, mc_args);
    } else {
      command = "test";
      if (test_list != "all") {
        std::stringstream ss(test_list);
        for (std::string t; std::getline(ss, t, ',');) test_args.tests.push_back(t);
      }
      result = cmd_test(cfg, test_args);
    }
    write_manifest(cfg, command, args, result);
    out << result.summary;
    return kOk;
  } catch (const ConfigError& e) {
    err << "chaosrng: " << e.what() << "\n";
    return kConfig;
  } catch (const DomainError& e) {
    err << "chaosrng: " << e.what() << "\n";
    return kConfig;
  } catch (const NumericError& e) {
    err << "chaosrng: " << e.what() << "\n";
    return kNumeric;
  } catch (const InsufficientDataError& e) {
    err << "chaosrng: " << e.what() << "\n";
    return kInsufficientData;
  } catch (const ResourceError& e) {
    err << "chaosrng: " << e.what() << "\n";
    return kResource;
  } catch (const fs::filesystem_error& e) {
    err << "chaosrng: " << e.what() << "\n";
    return kConfig;
  } catch (const std::exception& e) {
    err << "chaosrng: internal error: " << e.what() << "\n";
    return kInternal;
  }
}

}  // namespace chaosrng::cli
