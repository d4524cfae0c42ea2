#include "pmllab/bench.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <limits>
#include <map>
#include <sstream>

#include "pmllab/dist_est.hpp"
#include "pmllab/distributions.hpp"
#include "pmllab/io.hpp"
#include "pmllab/properties.hpp"
#include "pmllab/uniformity.hpp"

namespace pmllab {

namespace {

const std::vector<std::pair<std::string_view, BenchTask>>& task_table() {
  static const std::vector<std::pair<std::string_view, BenchTask>> table = {
      {"l1", BenchTask::kL1},           {"sorted_l1", BenchTask::kSortedL1}, {"entropy", BenchTask::kEntropy},
      {"renyi", BenchTask::kRenyi},     {"support", BenchTask::kSupport},    {"coverage", BenchTask::kCoverage},
      {"uniformity", BenchTask::kUniformity},
  };
  return table;
}

const std::vector<std::string>& estimator_names() {
  static const std::vector<std::string> names = {"pml", "empirical", "empirical_nlogn", "tpml"};
  return names;
}

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

std::vector<std::string> split_list(std::string_view value) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (start <= value.size()) {
    const auto comma = value.find(',', start);
    const auto end = comma == std::string_view::npos ? value.size() : comma;
    auto item = trim(value.substr(start, end - start));
    if (!item.empty()) out.push_back(std::move(item));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

std::uint64_t to_uint(const std::string& key, const std::string& value) {
  std::size_t used = 0;
  unsigned long long v = 0;
  try {
    v = std::stoull(value, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != value.size() || value.empty() || value[0] == '-')
    throw InvalidArgument(key + ": expected a non-negative integer, got '" + value + "'");
  return v;
}

double to_double(const std::string& key, const std::string& value) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(value, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != value.size() || value.empty()) throw InvalidArgument(key + ": expected a number, got '" + value + "'");
  return v;
}

bool to_bool(const std::string& key, const std::string& value) {
  if (value == "true" || value == "1" || value == "yes") return true;
  if (value == "false" || value == "0" || value == "no") return false;
  throw InvalidArgument(key + ": expected true or false, got '" + value + "'");
}

PropertyTag property_for(BenchTask task) {
  switch (task) {
    case BenchTask::kEntropy:
      return PropertyTag::kEntropy;
    case BenchTask::kRenyi:
      return PropertyTag::kRenyi;
    case BenchTask::kSupport:
      return PropertyTag::kSupportSize;
    case BenchTask::kCoverage:
      return PropertyTag::kSupportCoverage;
    default:
      throw InvalidArgument("task has no associated property");
  }
}

std::uint64_t nlogn_size(std::uint64_t n) {
  const double nd = static_cast<double>(n);
  return std::max<std::uint64_t>(n, static_cast<std::uint64_t>(std::ceil(nd * std::log(nd))));
}

// Seeds: cell = (distribution, n), then trial, then stream within the trial.
RngSeed trial_seed(const ExperimentConfig& cfg, std::size_t dist_index, std::uint64_t n, std::size_t trial) {
  return derive_seed(derive_seed(derive_seed(cfg.seed, dist_index), n), trial);
}

// Empirical frequencies indexed by symbol id (draw_sample labels 0..k-1).
Distribution labelled_empirical(const Sample& sample, std::size_t k) {
  std::vector<double> probs(k, 0.0);
  const double n = static_cast<double>(sample.n());
  for (const auto& [symbol, mult] : sample.counts()) probs.at(symbol) = static_cast<double>(mult) / n;
  return Distribution(std::move(probs));
}

enum Stream : std::uint64_t { kSampleStream = 0, kNlognStream = 1, kEmStream = 2 };

double estimator_error(const ExperimentConfig& cfg, const Distribution& truth, const std::string& estimator,
                       const Sample& sample, const Sample& big_sample, const EmConfig& em) {
  const bool nlogn = estimator == "empirical_nlogn";
  const Sample& s = nlogn ? big_sample : sample;
  const std::optional<std::size_t> k_hint =
      cfg.pml_knows_k() ? std::optional<std::size_t>(cfg.k) : std::nullopt;
  const EstimatorKind kind = nlogn ? EstimatorKind::kEmpirical : parse_estimator(estimator);

  switch (cfg.task) {
    case BenchTask::kL1: {
      Distribution est = kind == EstimatorKind::kEmpirical
                             ? labelled_empirical(s, cfg.k)
                             : estimate_unsorted_l1(s, cfg.k, UnsortedL1Config{em, std::nullopt});
      return lp_distance(est, truth, 1);
    }
    case BenchTask::kSortedL1: {
      Distribution est = [&] {
        switch (kind) {
          case EstimatorKind::kEmpirical:
            return empirical_distribution(s);
          case EstimatorKind::kPml:
            return approximate_pml(s, k_hint, em);
          case EstimatorKind::kTpml:
            return tpml_distribution(s, default_tpml_thresholds(s.n()), em);
        }
        throw InvalidArgument("unknown estimator");
      }();
      return sorted_l1(est, truth);
    }
    case BenchTask::kUniformity: {
      const bool should_reject = lp_distance(truth, Distribution::uniform(cfg.k), 1) >= cfg.epsilon;
      UniformityVerdict verdict;
      switch (kind) {
        case EstimatorKind::kPml:
          verdict = t_pml_test(s, cfg.k, cfg.epsilon, em);
          break;
        case EstimatorKind::kEmpirical:
          verdict = t_pml_test(s, cfg.k, cfg.epsilon, empirical_distribution(s, cfg.k));
          break;
        case EstimatorKind::kTpml:
          verdict = t_pml_test(s, cfg.k, cfg.epsilon, tpml_distribution(s, default_tpml_thresholds(s.n()), em));
          break;
      }
      return verdict.reject == should_reject ? 0.0 : 1.0;
    }
    default: {
      const PropertyTag tag = property_for(cfg.task);
      std::optional<double> param;
      if (cfg.task == BenchTask::kRenyi) param = cfg.alpha;
      if (cfg.task == BenchTask::kCoverage) param = cfg.coverage_factor * static_cast<double>(sample.n());
      const double truth_value = property_value(truth, tag, param);
      const double estimate = plug_in(s, tag, kind, param, PlugInOptions{k_hint, em});
      return std::abs(estimate - truth_value);
    }
  }
}

std::string fmt(double v) {
  if (std::isnan(v)) return "nan";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

std::string fixed(double v, int digits) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

std::string escape_xml(std::string_view s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&':
        out += "&amp;";
        break;
      case '<':
        out += "&lt;";
        break;
      case '>':
        out += "&gt;";
        break;
      case '"':
        out += "&quot;";
        break;
      default:
        out += c;
    }
  }
  return out;
}

}  // namespace

BenchTask parse_bench_task(std::string_view name) {
  for (const auto& [n, t] : task_table())
    if (n == name) return t;
  throw InvalidArgument("unknown task '" + std::string(name) + "'");
}

std::string_view bench_task_name(BenchTask task) {
  for (const auto& [n, t] : task_table())
    if (t == task) return n;
  return "?";
}

bool ExperimentConfig::pml_knows_k() const {
  if (known_k) return *known_k;
  return task == BenchTask::kL1 || task == BenchTask::kSortedL1 || task == BenchTask::kUniformity;
}

void ExperimentConfig::validate() const {
  if (distributions.empty()) throw InvalidArgument("distributions: at least one is required");
  if (k < 2) throw InvalidArgument("k: must be at least 2");
  for (const auto& d : distributions) make_named(d, k);  // throws on bad name or k
  if (n_grid.empty()) throw InvalidArgument("n_grid: at least one sample size is required");
  for (std::size_t i = 0; i < n_grid.size(); ++i) {
    if (n_grid[i] < 3) throw InvalidArgument("n_grid: sample sizes must be at least 3");
    if (i > 0 && n_grid[i] <= n_grid[i - 1]) throw InvalidArgument("n_grid: must be strictly ascending");
  }
  if (trials < 1) throw InvalidArgument("trials: must be at least 1");
  if (estimators.empty()) throw InvalidArgument("estimators: at least one is required");
  for (const auto& e : estimators) {
    if (std::find(estimator_names().begin(), estimator_names().end(), e) == estimator_names().end())
      throw InvalidArgument("estimators: unknown estimator '" + e + "'");
    if (task == BenchTask::kL1 && e == "tpml") throw InvalidArgument("estimators: tpml has no labelled l1 variant");
  }
  if (task == BenchTask::kRenyi && (!alpha || !(*alpha >= 0.0) || *alpha == 1.0))
    throw InvalidArgument("alpha: the renyi task needs an order >= 0 other than 1");
  if (task == BenchTask::kUniformity && !(epsilon > 0.0 && epsilon < 2.0))
    throw InvalidArgument("epsilon: must lie in (0, 2)");
  if (task == BenchTask::kCoverage && !(coverage_factor > 0.0))
    throw InvalidArgument("coverage_factor: must be positive");
  if (em.em_iterations < 1) throw InvalidArgument("em_iterations: must be at least 1");
}

ExperimentConfig parse_experiment_config(const std::string& text) {
  ExperimentConfig cfg;
  bool have_task = false, have_k = false;
  std::istringstream in(text);
  std::string raw;
  std::size_t lineno = 0;
  while (std::getline(in, raw)) {
    ++lineno;
    const auto hash = raw.find('#');
    const std::string line = trim(std::string_view(raw).substr(0, hash));
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw InvalidArgument("line " + std::to_string(lineno) + ": expected 'key = value'");
    const std::string key = trim(std::string_view(line).substr(0, eq));
    const std::string value = trim(std::string_view(line).substr(eq + 1));

    if (key == "task") {
      cfg.task = parse_bench_task(value);
      have_task = true;
    } else if (key == "distributions") {
      cfg.distributions = split_list(value);
    } else if (key == "k") {
      cfg.k = to_uint(key, value);
      have_k = true;
    } else if (key == "n_grid") {
      cfg.n_grid.clear();
      for (const auto& item : split_list(value)) cfg.n_grid.push_back(to_uint(key, item));
    } else if (key == "trials") {
      cfg.trials = to_uint(key, value);
    } else if (key == "alpha") {
      cfg.alpha = to_double(key, value);
    } else if (key == "seed") {
      cfg.seed = RngSeed{to_uint(key, value)};
    } else if (key == "estimators") {
      cfg.estimators = split_list(value);
    } else if (key == "known_k") {
      cfg.known_k = to_bool(key, value);
    } else if (key == "epsilon") {
      cfg.epsilon = to_double(key, value);
    } else if (key == "coverage_factor") {
      cfg.coverage_factor = to_double(key, value);
    } else if (key == "em_iterations") {
      cfg.em.em_iterations = to_uint(key, value);
    } else if (key == "max_support") {
      cfg.em.max_support = to_uint(key, value);
    } else if (key == "mcmc_sweeps") {
      cfg.em.mcmc_sweeps_per_estep = to_uint(key, value);
    } else if (key == "tau_multiplier") {
      cfg.em.tau_multiplier = to_double(key, value);
    } else {
      throw InvalidArgument("line " + std::to_string(lineno) + ": unknown key '" + key + "'");
    }
  }
  if (!have_task) throw InvalidArgument("task: missing");
  if (!have_k) throw InvalidArgument("k: missing");
  cfg.validate();
  return cfg;
}

ExperimentConfig load_experiment_config(const std::string& path) {
  return parse_experiment_config(read_text_file(path));
}

std::vector<double> run_trial(const ExperimentConfig& cfg, std::size_t dist_index, std::uint64_t n,
                              std::size_t trial) {
  const Distribution truth = make_named(cfg.distributions.at(dist_index), cfg.k);
  const RngSeed seed = trial_seed(cfg, dist_index, n, trial);
  const Sample sample = draw_sample(truth, n, derive_seed(seed, kSampleStream));
  const bool wants_big =
      std::find(cfg.estimators.begin(), cfg.estimators.end(), "empirical_nlogn") != cfg.estimators.end();
  const Sample big = wants_big ? draw_sample(truth, nlogn_size(n), derive_seed(seed, kNlognStream)) : Sample{};
  EmConfig em = cfg.em;
  em.seed = derive_seed(seed, kEmStream);

  std::vector<double> errors;
  errors.reserve(cfg.estimators.size());
  for (const auto& e : cfg.estimators) errors.push_back(estimator_error(cfg, truth, e, sample, big, em));
  return errors;
}

std::vector<ResultRow> run_experiment(const ExperimentConfig& cfg, const RunOptions& options) {
  cfg.validate();
  std::vector<ResultRow> rows;
  const double nan = std::numeric_limits<double>::quiet_NaN();
  for (std::size_t d = 0; d < cfg.distributions.size(); ++d) {
    for (std::uint64_t n : cfg.n_grid) {
      using Clock = std::chrono::steady_clock;
      const auto start = Clock::now();
      std::atomic<bool> expired{false};
      auto per_trial = map_indices(
          cfg.trials,
          [&](std::size_t t) -> std::vector<double> {
            if (options.max_seconds) {
              const std::chrono::duration<double> elapsed = Clock::now() - start;
              if (expired.load() || elapsed.count() > *options.max_seconds) {
                expired.store(true);
                return {};
              }
            }
            return run_trial(cfg, d, n, t);
          },
          options.exec);

      for (std::size_t e = 0; e < cfg.estimators.size(); ++e) {
        ResultRow row{cfg.distributions[d], n, cfg.estimators[e], nan, nan, 0};
        if (!expired.load()) {
          std::vector<double> errs;
          errs.reserve(cfg.trials);
          for (const auto& trial : per_trial) errs.push_back(trial[e]);
          const double mean = compensated_sum(errs) / static_cast<double>(errs.size());
          double ss = 0.0;
          for (double x : errs) ss += (x - mean) * (x - mean);
          const double m = static_cast<double>(errs.size());
          row.mean_error = mean;
          row.std_error = errs.size() > 1 ? std::sqrt(ss / (m - 1.0)) / std::sqrt(m) : 0.0;
          row.trials = errs.size();
        }
        rows.push_back(std::move(row));
      }
    }
  }
  std::stable_sort(rows.begin(), rows.end(), [](const ResultRow& a, const ResultRow& b) {
    return std::tie(a.distribution, a.n, a.estimator) < std::tie(b.distribution, b.n, b.estimator);
  });
  return rows;
}

std::string format_csv(const std::vector<ResultRow>& rows) {
  std::string out = "distribution,n,estimator,mean_error,std_error,trials\n";
  for (const auto& r : rows) {
    out += r.distribution + ',' + std::to_string(r.n) + ',' + r.estimator + ',' + fmt(r.mean_error) + ',' +
           fmt(r.std_error) + ',' + std::to_string(r.trials) + '\n';
  }
  return out;
}

std::string render_svg(const std::vector<ResultRow>& rows, std::string_view distribution, std::string_view title) {
  constexpr double width = 640, height = 420, left = 70, right = 150, top = 40, bottom = 50;
  const double plot_w = width - left - right, plot_h = height - top - bottom;

  std::map<std::string, std::vector<std::pair<double, double>>> series;
  double xmin = std::numeric_limits<double>::infinity(), xmax = -xmin, ymax = 0.0;
  for (const auto& r : rows) {
    if (r.distribution != distribution || r.trials == 0 || !std::isfinite(r.mean_error)) continue;
    const double x = std::log10(static_cast<double>(r.n));
    series[r.estimator].emplace_back(x, r.mean_error);
    xmin = std::min(xmin, x);
    xmax = std::max(xmax, x);
    ymax = std::max(ymax, r.mean_error);
  }
  if (series.empty()) {
    xmin = 0.0;
    xmax = 1.0;
  }
  if (xmax - xmin < 1e-9) {
    xmin -= 0.5;
    xmax += 0.5;
  }
  if (!(ymax > 0.0)) ymax = 1.0;
  ymax *= 1.1;
  auto px = [&](double x) { return left + (x - xmin) / (xmax - xmin) * plot_w; };
  auto py = [&](double y) { return top + plot_h - y / ymax * plot_h; };

  static const char* palette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"};
  std::string s;
  s += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + fixed(width, 0) + "\" height=\"" + fixed(height, 0) +
       "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  s += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  s += "<text x=\"" + fixed(left + plot_w / 2, 1) + "\" y=\"22\" text-anchor=\"middle\" font-size=\"14\">" +
       escape_xml(title) + "</text>\n";
  // Axes.
  s += "<line x1=\"" + fixed(left, 1) + "\" y1=\"" + fixed(top + plot_h, 1) + "\" x2=\"" + fixed(left + plot_w, 1) +
       "\" y2=\"" + fixed(top + plot_h, 1) + "\" stroke=\"black\"/>\n";
  s += "<line x1=\"" + fixed(left, 1) + "\" y1=\"" + fixed(top, 1) + "\" x2=\"" + fixed(left, 1) + "\" y2=\"" +
       fixed(top + plot_h, 1) + "\" stroke=\"black\"/>\n";
  // x ticks at the grid points (log scale).
  std::vector<double> xticks;
  for (const auto& [name, pts] : series)
    for (const auto& p : pts) xticks.push_back(p.first);
  std::sort(xticks.begin(), xticks.end());
  xticks.erase(std::unique(xticks.begin(), xticks.end()), xticks.end());
  for (double x : xticks) {
    const double X = px(x);
    s += "<line x1=\"" + fixed(X, 1) + "\" y1=\"" + fixed(top + plot_h, 1) + "\" x2=\"" + fixed(X, 1) + "\" y2=\"" +
         fixed(top + plot_h + 5, 1) + "\" stroke=\"black\"/>\n";
    s += "<text x=\"" + fixed(X, 1) + "\" y=\"" + fixed(top + plot_h + 18, 1) + "\" text-anchor=\"middle\">" +
         fmt(std::round(std::pow(10.0, x))) + "</text>\n";
  }
  s += "<text x=\"" + fixed(left + plot_w / 2, 1) + "\" y=\"" + fixed(height - 10, 1) +
       "\" text-anchor=\"middle\">n (log scale)</text>\n";
  for (int i = 0; i <= 4; ++i) {
    const double y = ymax * i / 4.0;
    const double Y = py(y);
    s += "<line x1=\"" + fixed(left - 5, 1) + "\" y1=\"" + fixed(Y, 1) + "\" x2=\"" + fixed(left, 1) + "\" y2=\"" +
         fixed(Y, 1) + "\" stroke=\"black\"/>\n";
    s += "<text x=\"" + fixed(left - 8, 1) + "\" y=\"" + fixed(Y + 4, 1) + "\" text-anchor=\"end\">" + fmt(y) +
         "</text>\n";
  }
  s += "<text transform=\"translate(16," + fixed(top + plot_h / 2, 1) +
       ") rotate(-90)\" text-anchor=\"middle\">mean error</text>\n";

  std::size_t idx = 0;
  for (const auto& [name, pts] : series) {
    const char* color = palette[idx % (sizeof palette / sizeof *palette)];
    s += "<polyline fill=\"none\" stroke=\"" + std::string(color) + "\" stroke-width=\"2\" points=\"";
    for (std::size_t i = 0; i < pts.size(); ++i) {
      if (i) s += ' ';
      s += fixed(px(pts[i].first), 2) + ',' + fixed(py(pts[i].second), 2);
    }
    s += "\"/>\n";
    for (const auto& p : pts)
      s += "<circle cx=\"" + fixed(px(p.first), 2) + "\" cy=\"" + fixed(py(p.second), 2) + "\" r=\"3\" fill=\"" +
           color + "\"/>\n";
    const double ly = top + 10 + 20.0 * static_cast<double>(idx);
    s += "<line x1=\"" + fixed(left + plot_w + 15, 1) + "\" y1=\"" + fixed(ly, 1) + "\" x2=\"" +
         fixed(left + plot_w + 40, 1) + "\" y2=\"" + fixed(ly, 1) + "\" stroke=\"" + color +
         "\" stroke-width=\"2\"/>\n";
    s += "<text x=\"" + fixed(left + plot_w + 45, 1) + "\" y=\"" + fixed(ly + 4, 1) + "\">" + escape_xml(name) +
         "</text>\n";
    ++idx;
  }
  s += "</svg>\n";
  return s;
}

}  // namespace pmllab
