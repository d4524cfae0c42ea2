#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "pmllab/core.hpp"
#include "pmllab/pml_em.hpp"

namespace pmllab {

enum class PropertyTag {
  kEntropy,                // Shannon entropy, nats
  kRenyi,                  // alpha-Renyi entropy, param = alpha (>= 0, != 1)
  kPowerSum,               // sum_x p(x)^alpha, param = alpha (>= 0)
  kSupportSize,            // #{x : p(x) > param}, param defaults to 0
  kSupportCoverage,        // sum_x 1 - (1 - p(x))^m, param = m (>= 1)
  kDistanceToUniformity,   // ||p - uniform||_1 over the distribution's alphabet
};

PropertyTag parse_property(std::string_view name);
std::string_view property_name(PropertyTag tag);

double property_value(const Distribution& dist, PropertyTag tag, std::optional<double> param = std::nullopt);

/// mu_x / n for each observed symbol (ascending symbol order), zero-padded
/// to k entries when k is given. Throws when k < distinct().
Distribution empirical_distribution(const Sample& sample, std::optional<std::size_t> k = std::nullopt);

enum class EstimatorKind { kEmpirical, kPml, kTpml };

EstimatorKind parse_estimator(std::string_view name);

struct PlugInOptions {
  std::optional<std::size_t> k_hint;
  EmConfig em;
};

/// property_value evaluated at the chosen distribution estimate. For the PML
/// and TPML estimates the support-size property ignores entries at or below
/// 1/n^2 (residue of the EM smoothing).
double plug_in(const Sample& sample, PropertyTag tag, EstimatorKind estimator, std::optional<double> param,
               const PlugInOptions& options = {});

/// Missing-mass estimate phi_1 / sum_j (j phi_j [j > phi_{j+1}] +
/// (j+1) phi_{j+1} [j <= phi_{j+1}]), clamped to [0, 1]; 0 when phi_1 = 0.
double missing_mass_estimate(const Sample& sample);
double missing_mass_estimate(const Profile& profile);

/// sum_x mu_x^(alpha falling) / n^(alpha falling); unbiased for the power sum.
double falling_factorial_power_sum(const Sample& sample, unsigned alpha);
double falling_factorial_power_sum(const Profile& profile, unsigned alpha);

/// Estimator sum_{i>=1} coeffs[i-1] * phi_i.
struct LinearEstimator {
  std::vector<double> coeffs;
};

/// Throws InvalidArgument when coefficients do not cover every multiplicity
/// present in the profile.
double linear_apply(const LinearEstimator& est, const Profile& profile);

/// 2 * max_i |l_i - l_{i-1}| with l_0 = 0.
double linear_sensitivity_bound(const LinearEstimator& est);

/// McDiarmid tail bound 2 exp(-2 t^2 / (sqrt(n) s)^2) for an estimator with
/// sensitivity s on n draws.
double mcdiarmid_tail_bound(double t, std::uint64_t n, double sensitivity);

}  // namespace pmllab
