// Command-line front end: sample, pml, estimate, test-uniformity, bench.
//
// Exit codes: 0 success, 1 usage error (bad flags or argument values),
// 2 runtime failure (I/O, malformed input files, size guards).

#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include "pmllab/bench.hpp"
#include "pmllab/distributions.hpp"
#include "pmllab/io.hpp"
#include "pmllab/parallel.hpp"
#include "pmllab/pml_em.hpp"
#include "pmllab/properties.hpp"
#include "pmllab/uniformity.hpp"

namespace {

using namespace pmllab;

constexpr int kUsageError = 1;
constexpr int kRuntimeError = 2;

struct EmFlags {
  std::size_t max_support = 10000;
  std::size_t em_iters = 30;
  std::size_t mcmc_sweeps = 60;
  double tau_multiplier = 1.5;

  void add_to(CLI::App* cmd) {
    cmd->add_option("--max-support", max_support, "Cap on the estimated support size")->capture_default_str();
    cmd->add_option("--em-iters", em_iters, "EM iterations")->capture_default_str()->check(CLI::PositiveNumber);
    cmd->add_option("--mcmc-sweeps", mcmc_sweeps, "MCMC sweeps per E-step")->capture_default_str();
    cmd->add_option("--tau-multiplier", tau_multiplier, "Large-multiplicity threshold factor on (ln n)^2")
        ->capture_default_str();
  }

  EmConfig config(std::uint64_t seed) const {
    EmConfig cfg;
    cfg.max_support = max_support;
    cfg.em_iterations = em_iters;
    cfg.mcmc_sweeps_per_estep = mcmc_sweeps;
    cfg.tau_multiplier = tau_multiplier;
    cfg.seed = RngSeed{seed};
    return cfg;
  }
};

void emit(const std::string& text, const std::string& out) {
  if (out.empty() || out == "-") {
    std::cout << text;
  } else {
    write_text_file(out, text);
  }
}

Sample load_sample(const std::string& sample_path, const std::string& profile_path) {
  if (!sample_path.empty() && !profile_path.empty())
    throw InvalidArgument("give either --sample or --profile, not both");
  if (!sample_path.empty()) return read_sample_file(sample_path);
  if (!profile_path.empty()) return sample_from_profile(read_profile_file(profile_path));
  throw InvalidArgument("one of --sample or --profile is required");
}

std::string format_value(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

int main(int argc, char** argv) {
  apply_thread_cap();

  CLI::App app{"Profile maximum likelihood toolkit"};
  app.require_subcommand(1);

  // sample
  std::string dist_name = "uniform", out_path, format = "sample";
  std::size_t k = 0;
  std::uint64_t n = 0, seed = 0;
  auto* sample_cmd = app.add_subcommand("sample", "Draw a seeded sample and save it");
  sample_cmd->add_option("--distribution", dist_name, "Distribution family")
      ->check(CLI::IsMember(distribution_names()))
      ->capture_default_str();
  sample_cmd->add_option("--k", k, "Alphabet size")->required()->check(CLI::PositiveNumber);
  sample_cmd->add_option("--n", n, "Number of draws")->required()->check(CLI::PositiveNumber);
  sample_cmd->add_option("--seed", seed, "RNG seed")->capture_default_str();
  sample_cmd->add_option("--format", format, "sample (symbol count lines) or profile")
      ->check(CLI::IsMember({"sample", "profile"}))
      ->capture_default_str();
  sample_cmd->add_option("--out", out_path, "Output file (stdout when omitted)");

  // pml
  std::string profile_path, sample_path;
  std::optional<std::size_t> k_hint;
  EmFlags em_flags;
  auto* pml_cmd = app.add_subcommand("pml", "Approximate PML distribution of a profile file");
  pml_cmd->add_option("profile", profile_path, "Profile file")->required()->check(CLI::ExistingFile);
  pml_cmd->add_option("--k", k_hint, "Alphabet size, when known");
  pml_cmd->add_option("--seed", seed, "RNG seed")->capture_default_str();
  pml_cmd->add_option("--out", out_path, "Output PML file (stdout when omitted)");
  em_flags.add_to(pml_cmd);

  // estimate
  std::string property = "entropy", estimator = "pml";
  std::optional<double> param;
  auto* est_cmd = app.add_subcommand("estimate", "Plug-in property estimate from a sample or profile");
  est_cmd->add_option("--sample", sample_path, "Sample file (symbol count lines)")->check(CLI::ExistingFile);
  est_cmd->add_option("--profile", profile_path, "Profile file")->check(CLI::ExistingFile);
  est_cmd->add_option("--property", property, "entropy, renyi, power_sum, support, coverage, uniformity_distance")
      ->capture_default_str();
  est_cmd->add_option("--estimator", estimator, "pml, tpml or empirical")->capture_default_str();
  est_cmd->add_option("--param", param, "Property parameter (Renyi/power-sum order, coverage size m)");
  est_cmd->add_option("--k", k_hint, "Alphabet size, when known");
  est_cmd->add_option("--seed", seed, "RNG seed")->capture_default_str();
  em_flags.add_to(est_cmd);

  // test-uniformity
  double epsilon = 0.4;
  std::optional<std::uint64_t> n_opt;
  auto* uni_cmd = app.add_subcommand("test-uniformity", "PML-based uniformity test on a seeded sample");
  uni_cmd->add_option("--k", k, "Alphabet size")->required()->check(CLI::Range(std::size_t{2}, std::size_t{1} << 40));
  uni_cmd->add_option("--epsilon", epsilon, "l1 distance to detect")->capture_default_str();
  uni_cmd->add_option("--n", n_opt, "Sample size (default ceil(8 sqrt(k ln k) / epsilon^2))");
  uni_cmd->add_option("--distribution", dist_name, "Distribution to draw from")
      ->check(CLI::IsMember(distribution_names()))
      ->capture_default_str();
  uni_cmd->add_option("--sample", sample_path, "Test this sample file instead of drawing one")
      ->check(CLI::ExistingFile);
  uni_cmd->add_option("--seed", seed, "RNG seed")->capture_default_str();
  em_flags.add_to(uni_cmd);

  // bench
  std::string config_path, out_dir = ".";
  bool svg = false;
  std::optional<double> max_seconds;
  auto* bench_cmd = app.add_subcommand("bench", "Run an experiment grid and write CSV (and SVG) results");
  bench_cmd->add_option("--config", config_path, "Experiment config (key = value lines)")
      ->required()
      ->check(CLI::ExistingFile);
  bench_cmd->add_option("--out", out_dir, "Output directory")->capture_default_str();
  bench_cmd->add_flag("--svg", svg, "Also write one SVG chart per distribution");
  bench_cmd->add_option("--max-seconds", max_seconds, "Per-cell time budget; overruns become sentinel rows")
      ->check(CLI::PositiveNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kUsageError;
  }

  try {
    if (*sample_cmd) {
      const Sample s = draw_sample(make_named(dist_name, k), n, RngSeed{seed});
      emit(format == "sample" ? format_sample(s) : format_profile(profile_of(s)), out_path);
    } else if (*pml_cmd) {
      const Profile profile = read_profile_file(profile_path);
      const Distribution d = approximate_pml(profile, k_hint, em_flags.config(seed));
      emit(format_pml(d), out_path);
    } else if (*est_cmd) {
      const Sample s = load_sample(sample_path, profile_path);
      PlugInOptions opts{k_hint, em_flags.config(seed)};
      const double v = plug_in(s, parse_property(property), parse_estimator(estimator), param, opts);
      std::cout << format_value(v) << '\n';
    } else if (*uni_cmd) {
      Sample s;
      if (!sample_path.empty()) {
        s = read_sample_file(sample_path);
      } else {
        const std::uint64_t size = n_opt.value_or(uniformity_sample_size(k, epsilon));
        s = draw_sample(make_named(dist_name, k), size, RngSeed{seed});
      }
      const UniformityVerdict v = t_pml_test(s, k, epsilon, em_flags.config(seed));
      static const char* branch_names[] = {"max_multiplicity", "l2_distance", "accept", "support_exceeds_k"};
      std::cout << (v.reject ? "reject" : "accept") << " branch=" << branch_names[static_cast<int>(v.branch)]
                << " n=" << s.n() << " l2=" << format_value(v.l2_distance)
                << " l2_threshold=" << format_value(v.l2_threshold) << '\n';
    } else if (*bench_cmd) {
      const ExperimentConfig cfg = load_experiment_config(config_path);
      RunOptions opts;
      opts.max_seconds = max_seconds;
      const auto rows = run_experiment(cfg, opts);
      std::filesystem::create_directories(out_dir);
      const std::filesystem::path dir(out_dir);
      write_text_file(dir / "results.csv", format_csv(rows));
      if (svg) {
        for (const auto& d : cfg.distributions) {
          const std::string title = std::string(bench_task_name(cfg.task)) + " error, " + d + ", k=" +
                                    std::to_string(cfg.k);
          write_text_file(dir / (d + ".svg"), render_svg(rows, d, title));
        }
      }
      std::size_t aborted = 0;
      for (const auto& r : rows) aborted += r.trials == 0;
      if (aborted != 0) std::cerr << "warning: " << aborted << " rows hit the time budget\n";
    }
  } catch (const InvalidArgument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsageError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kRuntimeError;
  }
  return 0;
}
