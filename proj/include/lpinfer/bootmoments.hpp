#pragma once

#include <string>
#include <vector>

#include "lpinfer/locpoly.hpp"
#include "lpinfer/residuals.hpp"

namespace lpinfer {

/// Bootstrap scheme behind a set of closed-form moments.
enum class Method { gp, lp, mlp };

std::string to_string(Method m);

/// Closed-form mean and dispersion of the wild-bootstrap statistic
/// T* = sqrt(nh)(g*_n(x) - center), plus the debiased standard deviation
/// used for prepivoted intervals. `score` holds the products w_i(x)·eps_i
/// over the kernel window: the noise core of T* is q·Σ score_i e*_i /
/// sqrt(nh), which the resampling path draws from directly.
struct BootstrapMoments {
    Method method = Method::gp;
    double bias = 0.0;         // B-hat = E*[T*]
    double boot_sd = 0.0;      // v-hat = sd*[T*]
    double debiased_sd = 0.0;  // v-hat_P, asymptotic sd of T_n - B-hat
    double q = 1.0;            // 1 for gp/lp, Q_n for mlp
    double nh = 0.0;
    std::vector<double> score;
};

/// Global-polynomial scheme: bias from the order-(p+1) leading coefficient,
///   B = sqrt(n h^{2p+3}) g^{(p+1)}(x) C_n / (p+1)!,
/// debiased variance from the weights w_i - w_GPbc,i. Identical to the
/// textbook robust-bias-corrected quantities.
BootstrapMoments gp_moments(const Sample& sample, const FitConfig& config,
                            const ResidualVector& residuals);

/// Local-polynomial (double smoothing) scheme:
///   B = (nh)^{-1/2} Σ w_LPbc,i(x) y_i,
/// debiased variance from w_i - w_LPbc,i.
BootstrapMoments lp_moments(const Sample& sample, const FitConfig& config,
                            const ResidualVector& residuals);

/// Boundary-adaptive modification: the lp scheme rescaled by Q_n, with
/// debiased variance from w_i - Q_n w_LPbc,i.
BootstrapMoments mlp_moments(const Sample& sample, const FitConfig& config,
                             const ResidualVector& residuals);

}  // namespace lpinfer
