#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "lpinfer/bootmoments.hpp"

namespace lpinfer {

enum class CiMethod { conventional, naive_gp, naive_lp, rbc_pgp, plp, mplp };

CiMethod ci_method_from_string(const std::string& name);
std::string to_string(CiMethod m);

struct ConfidenceInterval {
    double lower = 0.0;
    double upper = 0.0;
    double estimate = 0.0;
    double bias_correction = 0.0;  // (nh)^{-1/2} B-hat
    double se = 0.0;               // (nh)^{-1/2} times the relevant sd
    double alpha = 0.05;
    CiMethod method = CiMethod::conventional;
    std::vector<std::string> warnings;
};

enum class Multiplier { gaussian, rademacher, mammen };

Multiplier multiplier_from_string(const std::string& name);
std::string to_string(Multiplier m);

struct ResamplingPlan {
    long replications = 1;
    Multiplier multiplier = Multiplier::gaussian;
    std::uint64_t seed = 0;
};

/// Prepivoting cdf H(u) = Phi(Phi^{-1}(u) / m_hat) with m_hat = v_P / v.
double prepivot_cdf_apply(double m_hat, double u);

/// Its inverse, H^{-1}(a) = Phi(m_hat · z_a).
double prepivot_cdf_inverse(double m_hat, double a);

/// [estimate ± z_{1-a/2} (nh)^{-1/2} sd_v1]; ignores bias.
ConfidenceInterval conventional_ci(double estimate, double sd_v1, double nh,
                                   double alpha);

/// Closed-form prepivoted interval
///   [(estimate - (nh)^{-1/2} B) ± z_{1-a/2} (nh)^{-1/2} v_P].
/// Method tag follows the moments: gp -> rbc_pgp, lp -> plp, mlp -> mplp.
ConfidenceInterval analytic_prepivot_ci(double estimate,
                                        const BootstrapMoments& moments,
                                        double alpha);

/// Equal-tailed percentile interval without prepivoting. Analytic (Gaussian
/// multiplier law) when no plan is given; empirical quantiles of resampled
/// T* otherwise. Only gp and lp schemes have a naive interval.
ConfidenceInterval naive_bootstrap_ci(
    double estimate, const BootstrapMoments& moments, double alpha,
    const std::optional<ResamplingPlan>& plan = std::nullopt);

/// Resampled prepivoted interval: wild-bootstrap draws of T*, empirical
/// quantiles taken at the prepivoted levels H^{-1}(a/2), H^{-1}(1-a/2).
ConfidenceInterval resampled_prepivot_ci(double estimate,
                                         const BootstrapMoments& moments,
                                         double alpha,
                                         const ResamplingPlan& plan);

}  // namespace lpinfer
