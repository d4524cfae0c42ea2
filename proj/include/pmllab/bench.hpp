#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "pmllab/parallel.hpp"
#include "pmllab/pml_em.hpp"
#include "pmllab/rng.hpp"

namespace pmllab {

enum class BenchTask { kL1, kSortedL1, kEntropy, kRenyi, kSupport, kCoverage, kUniformity };

BenchTask parse_bench_task(std::string_view name);
std::string_view bench_task_name(BenchTask task);

struct ExperimentConfig {
  BenchTask task = BenchTask::kEntropy;
  std::vector<std::string> distributions;
  std::size_t k = 0;
  std::vector<std::uint64_t> n_grid;
  std::size_t trials = 30;
  std::optional<double> alpha;  // Renyi order
  RngSeed seed{0};
  /// Subset of pml, empirical, empirical_nlogn, tpml.
  std::vector<std::string> estimators;
  /// Whether PML gets the alphabet size. Unset means: yes for l1, sorted_l1
  /// and uniformity, no for the property tasks.
  std::optional<bool> known_k;
  double epsilon = 0.4;          // uniformity task only
  double coverage_factor = 2.0;  // coverage task: m = coverage_factor * n
  EmConfig em;

  bool pml_knows_k() const;
  /// Throws InvalidArgument describing the first bad field.
  void validate() const;
};

/// Parses `key = value` lines; '#' starts a comment, lists are comma-separated.
ExperimentConfig parse_experiment_config(const std::string& text);
ExperimentConfig load_experiment_config(const std::string& path);

struct ResultRow {
  std::string distribution;
  std::uint64_t n = 0;
  std::string estimator;
  double mean_error = 0.0;
  double std_error = 0.0;  // standard error of the mean
  std::size_t trials = 0;  // 0 marks a cell aborted by the time budget
};

struct RunOptions {
  Execution exec = Execution::kParallel;
  /// Per-cell wall-clock budget; trials not started before it expires are
  /// skipped and the cell is reported as a sentinel row (NaN errors, 0 trials).
  std::optional<double> max_seconds;
};

/// One row per (distribution, n, estimator), sorted by those three keys.
/// Every trial reuses one sample across estimators (paired comparison);
/// empirical_nlogn draws its own ceil(n ln n) sample.
std::vector<ResultRow> run_experiment(const ExperimentConfig& cfg, const RunOptions& options = {});

/// Error of a single trial for every configured estimator, in cfg.estimators
/// order. Exposed for tests and the kernel benchmark.
std::vector<double> run_trial(const ExperimentConfig& cfg, std::size_t dist_index, std::uint64_t n, std::size_t trial);

std::string format_csv(const std::vector<ResultRow>& rows);
/// Line chart of mean_error against n (log x axis) for one distribution.
std::string render_svg(const std::vector<ResultRow>& rows, std::string_view distribution, std::string_view title);

}  // namespace pmllab
