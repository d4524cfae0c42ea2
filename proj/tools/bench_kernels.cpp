// Times the serial reference against the OpenMP path for the two parallel
// kernels (oracle grid search, experiment trial runner) and checks that both
// produce the same bits. Exit status 2 on any mismatch.

#include <CLI11.hpp>
#include <chrono>
#include <cstdio>
#include <algorithm>
#include <vector>

#include "pmllab/bench.hpp"
#include "pmllab/likelihood.hpp"
#include "pmllab/parallel.hpp"

using namespace pmllab;

namespace {

template <class Fn>
double best_of(int reps, Fn&& fn) {
  double best = 1e300;
  for (int r = 0; r < reps; ++r) {
    const auto t0 = std::chrono::steady_clock::now();
    fn();
    best = std::min(best, std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count());
  }
  return best;
}

void report(const char* name, double serial, double parallel, bool same) {
  std::printf("%-28s serial %8.3f s  parallel %8.3f s  speedup %5.2fx  %s\n", name, serial, parallel,
              serial / parallel, same ? "identical" : "MISMATCH");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"serial vs OpenMP kernel timings"};
  int reps = 3;
  std::size_t grid = 120;
  std::size_t trials = 16;
  app.add_option("--reps", reps, "repetitions per timing (best is reported)")->check(CLI::PositiveNumber);
  app.add_option("--grid", grid, "oracle grid steps")->check(CLI::PositiveNumber);
  app.add_option("--trials", trials, "trials per experiment cell")->check(CLI::PositiveNumber);
  CLI11_PARSE(app, argc, argv);
  apply_thread_cap();
#ifdef _OPENMP
  std::printf("OpenMP threads: %d\n", omp_get_max_threads());
#else
  std::printf("built without OpenMP; both paths are serial\n");
#endif

  bool all_same = true;

  const auto phi = Profile::from_dense(std::vector<std::uint64_t>{2, 1, 1});
  OracleResult ser_o{Distribution({1.0}), 0.0}, par_o = ser_o;
  const double ts = best_of(reps, [&] { ser_o = oracle_grid_search(phi, 4, grid, SimplexClass::kFull, Execution::kSerial); });
  const double tp = best_of(reps, [&] { par_o = oracle_grid_search(phi, 4, grid, SimplexClass::kFull, Execution::kParallel); });
  const bool same_o = ser_o.probability == par_o.probability && std::ranges::equal(ser_o.dist.probs(), par_o.dist.probs());
  report("oracle_grid_search k=4", ts, tp, same_o);
  all_same = all_same && same_o;

  ExperimentConfig cfg;
  cfg.task = BenchTask::kSortedL1;
  cfg.distributions = {"uniform", "zipf"};
  cfg.k = 300;
  cfg.n_grid = {1000, 5000};
  cfg.trials = trials;
  cfg.seed = RngSeed{11};
  cfg.estimators = {"pml", "empirical"};
  std::string ser_csv, par_csv;
  const double es = best_of(reps, [&] { ser_csv = format_csv(run_experiment(cfg, {Execution::kSerial, std::nullopt})); });
  const double ep = best_of(reps, [&] { par_csv = format_csv(run_experiment(cfg, {Execution::kParallel, std::nullopt})); });
  report("run_experiment sorted_l1", es, ep, ser_csv == par_csv);
  all_same = all_same && ser_csv == par_csv;

  return all_same ? 0 : 2;
}
