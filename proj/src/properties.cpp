#include "pmllab/properties.hpp"

#include <cmath>

#include "pmllab/dist_est.hpp"

namespace pmllab {

PropertyTag parse_property(std::string_view name) {
  if (name == "entropy") return PropertyTag::kEntropy;
  if (name == "renyi") return PropertyTag::kRenyi;
  if (name == "power_sum") return PropertyTag::kPowerSum;
  if (name == "support") return PropertyTag::kSupportSize;
  if (name == "coverage") return PropertyTag::kSupportCoverage;
  if (name == "uniformity_distance") return PropertyTag::kDistanceToUniformity;
  throw InvalidArgument("unknown property '" + std::string(name) + "'");
}

std::string_view property_name(PropertyTag tag) {
  switch (tag) {
    case PropertyTag::kEntropy:
      return "entropy";
    case PropertyTag::kRenyi:
      return "renyi";
    case PropertyTag::kPowerSum:
      return "power_sum";
    case PropertyTag::kSupportSize:
      return "support";
    case PropertyTag::kSupportCoverage:
      return "coverage";
    case PropertyTag::kDistanceToUniformity:
      return "uniformity_distance";
  }
  return "?";
}

namespace {

double power_sum(const Distribution& dist, double alpha) {
  std::vector<double> terms;
  terms.reserve(dist.size());
  for (double p : dist.probs()) terms.push_back(p > 0.0 ? std::pow(p, alpha) : 0.0);
  return compensated_sum(terms);
}

double require_param(std::optional<double> param, const char* what) {
  if (!param) throw InvalidArgument(std::string("property needs parameter ") + what);
  return *param;
}

}  // namespace

double property_value(const Distribution& dist, PropertyTag tag, std::optional<double> param) {
  switch (tag) {
    case PropertyTag::kEntropy: {
      std::vector<double> terms;
      terms.reserve(dist.size());
      for (double p : dist.probs()) terms.push_back(p > 0.0 ? -p * std::log(p) : 0.0);
      return compensated_sum(terms);
    }
    case PropertyTag::kRenyi: {
      const double alpha = require_param(param, "alpha");
      if (!(alpha >= 0.0) || alpha == 1.0) throw InvalidArgument("Renyi order must be >= 0 and != 1");
      return std::log(power_sum(dist, alpha)) / (1.0 - alpha);
    }
    case PropertyTag::kPowerSum: {
      const double alpha = require_param(param, "alpha");
      if (!(alpha >= 0.0)) throw InvalidArgument("power-sum order must be >= 0");
      return power_sum(dist, alpha);
    }
    case PropertyTag::kSupportSize: {
      const double floor = param.value_or(0.0);
      double count = 0.0;
      for (double p : dist.probs())
        if (p > floor) count += 1.0;
      return count;
    }
    case PropertyTag::kSupportCoverage: {
      const double m = require_param(param, "m");
      if (!(m >= 1.0)) throw InvalidArgument("coverage size m must be >= 1");
      std::vector<double> terms;
      terms.reserve(dist.size());
      for (double p : dist.probs()) terms.push_back(-std::expm1(m * std::log1p(-p)));
      return compensated_sum(terms);
    }
    case PropertyTag::kDistanceToUniformity: {
      const double u = 1.0 / static_cast<double>(dist.size());
      std::vector<double> terms;
      terms.reserve(dist.size());
      for (double p : dist.probs()) terms.push_back(std::abs(p - u));
      return compensated_sum(terms);
    }
  }
  throw InvalidArgument("unknown property");
}

Distribution empirical_distribution(const Sample& sample, std::optional<std::size_t> k) {
  if (sample.empty()) throw InvalidArgument("empirical distribution of an empty sample");
  if (k && *k < sample.distinct()) throw InvalidArgument("alphabet smaller than the observed support");
  std::vector<double> probs;
  probs.reserve(k.value_or(sample.distinct()));
  const double n = static_cast<double>(sample.n());
  for (const auto& [symbol, mult] : sample.counts()) probs.push_back(static_cast<double>(mult) / n);
  if (k) probs.resize(*k, 0.0);
  return Distribution::from_weights(probs);
}

EstimatorKind parse_estimator(std::string_view name) {
  if (name == "empirical") return EstimatorKind::kEmpirical;
  if (name == "pml") return EstimatorKind::kPml;
  if (name == "tpml") return EstimatorKind::kTpml;
  throw InvalidArgument("unknown estimator '" + std::string(name) + "'");
}

double plug_in(const Sample& sample, PropertyTag tag, EstimatorKind estimator, std::optional<double> param,
               const PlugInOptions& options) {
  const bool needs_alphabet = tag == PropertyTag::kDistanceToUniformity;
  if (needs_alphabet && !options.k_hint) throw InvalidArgument("distance to uniformity needs the alphabet size");
  switch (estimator) {
    case EstimatorKind::kEmpirical:
      return property_value(empirical_distribution(sample, needs_alphabet ? options.k_hint : std::nullopt), tag, param);
    case EstimatorKind::kPml:
    case EstimatorKind::kTpml: {
      Distribution est = estimator == EstimatorKind::kPml
                             ? approximate_pml(sample, options.k_hint, options.em)
                             : tpml_distribution(sample, default_tpml_thresholds(sample.n()), options.em);
      if (needs_alphabet) est = est.resized(*options.k_hint);
      if (tag == PropertyTag::kSupportSize && !param) {
        const double n = static_cast<double>(sample.n());
        return property_value(est, tag, 1.0 / (n * n));
      }
      return property_value(est, tag, param);
    }
  }
  throw InvalidArgument("unknown estimator");
}

double missing_mass_estimate(const Profile& profile) {
  const std::uint64_t singletons = profile.prevalence(1);
  if (singletons == 0) return 0.0;
  double denominator = 0.0;
  for (std::uint64_t j = 1; j <= profile.max_multiplicity(); ++j) {
    const double phi_j = static_cast<double>(profile.prevalence(j));
    const double phi_next = static_cast<double>(profile.prevalence(j + 1));
    const double jd = static_cast<double>(j);
    denominator += jd > phi_next ? jd * phi_j : (jd + 1.0) * phi_next;
  }
  if (!(denominator > 0.0)) return 1.0;
  return std::clamp(static_cast<double>(singletons) / denominator, 0.0, 1.0);
}

double missing_mass_estimate(const Sample& sample) { return missing_mass_estimate(profile_of(sample)); }

namespace {

double falling(double z, unsigned alpha) {
  double out = 1.0;
  for (unsigned i = 0; i < alpha; ++i) out *= z - static_cast<double>(i);
  return out;
}

}  // namespace

double falling_factorial_power_sum(const Profile& profile, unsigned alpha) {
  if (alpha < 2) throw InvalidArgument("falling-factorial power sum needs alpha >= 2");
  if (profile.n() < alpha) throw InvalidArgument("falling-factorial power sum needs n >= alpha");
  const double denominator = falling(static_cast<double>(profile.n()), alpha);
  double numerator = 0.0;
  for (const auto& [mult, count] : profile.prevalences()) {
    if (mult < alpha) continue;
    numerator += static_cast<double>(count) * falling(static_cast<double>(mult), alpha);
  }
  return numerator / denominator;
}

double falling_factorial_power_sum(const Sample& sample, unsigned alpha) {
  return falling_factorial_power_sum(profile_of(sample), alpha);
}

double linear_apply(const LinearEstimator& est, const Profile& profile) {
  if (profile.max_multiplicity() > est.coeffs.size())
    throw InvalidArgument("linear estimator has " + std::to_string(est.coeffs.size()) +
                          " coefficients but the profile reaches multiplicity " +
                          std::to_string(profile.max_multiplicity()));
  double out = 0.0;
  for (const auto& [mult, count] : profile.prevalences()) out += est.coeffs[mult - 1] * static_cast<double>(count);
  return out;
}

double linear_sensitivity_bound(const LinearEstimator& est) {
  double prev = 0.0;
  double worst = 0.0;
  for (double c : est.coeffs) {
    worst = std::max(worst, std::abs(c - prev));
    prev = c;
  }
  return 2.0 * worst;
}

double mcdiarmid_tail_bound(double t, std::uint64_t n, double sensitivity) {
  if (t < 0.0) throw InvalidArgument("deviation must be non-negative");
  const double spread = std::sqrt(static_cast<double>(n)) * sensitivity;
  if (spread == 0.0) return t > 0.0 ? 0.0 : 2.0;
  return std::min(2.0, 2.0 * std::exp(-2.0 * t * t / (spread * spread)));
}

}  // namespace pmllab
