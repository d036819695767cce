#pragma once

#include <cstddef>
#include <vector>

#include "lpinfer/kernels.hpp"

namespace lpinfer {

/// Regression data (x_i, y_i), equal lengths, all entries finite.
struct Sample {
    std::vector<double> x;
    std::vector<double> y;
};

/// Which observations a fit may see, relative to a cutoff. `both` is plain
/// regression; the one-sided values implement sharp-RDD kernels
/// K±((x_i-x)/h) = K((x_i-x)/h)·1{x_i ≷ cutoff}. Ties x_i == cutoff belong
/// to the right (treated) side.
enum class Side { both, right_of_cutoff, left_of_cutoff };

struct FitConfig {
    double point = 0.0;       // evaluation point
    double bandwidth = 0.0;   // h > 0
    int order = 1;            // polynomial order p, odd
    Kernel kernel = Kernel::epanechnikov;
    Side side = Side::both;   // one-sided values anchor the cutoff at `point`
};

/// Local polynomial weights w_i(x), dense and aligned with the sample
/// (zero outside the kernel window). Normalized so (nh)^{-1} Σ w_i = 1 and
/// (nh)^{-1} Σ w_i ((x_i-x)/h)^j = 0 for j = 1..p.
struct WeightVector {
    std::vector<double> values;
    std::ptrdiff_t effective_n = 0;  // observations with nonzero kernel weight
};

/// Result of the kernel-weighted least-squares fit at one point.
struct LocalFit {
    std::vector<double> beta;  // p+1 coefficients of (x_i - point)^j
    double ghat = 0.0;         // beta[0]
    WeightVector weights;
    double curvature = 0.0;    // C_n = (nh)^{-1} Σ w_i ((x_i-x)/h)^{p+1}
};

struct QFactor {
    double q = 0.0;     // Q_n = C_n / C_LP,n
    double c_n = 0.0;
    double c_lp_n = 0.0;
};

WeightVector local_weights(const Sample& sample, const FitConfig& config);

LocalFit local_fit(const Sample& sample, const FitConfig& config);

double curvature_constant(const Sample& sample, const FitConfig& config);

/// Convolution bias-correction weights
///   w_LPbc,i = (nh)^{-1} Σ_j w_j(x) w_i(x_j) - w_i(x),
/// dense, nonzero only within twice the bandwidth of the point. Requires a
/// valid order-p fit at the point and at every in-window x_j.
std::vector<double> lp_bc_weights(const Sample& sample, const FitConfig& config);

/// Boundary scaling Q_n = C_n / C_LP,n with the smoothed curvature
/// C_LP,n = (nh)^{-1} Σ_i w_i(x) C_n(x_i). Throws DegenerateScaling when
/// |C_LP,n| < 1e-12 |C_n|.
QFactor q_factor(const Sample& sample, const FitConfig& config);

}  // namespace lpinfer
