#pragma once

#include <string>
#include <vector>

#include "lpinfer/locpoly.hpp"

namespace lpinfer {

enum class HcOrder { hc0, hc1, hc2, hc3 };

HcOrder hc_from_string(const std::string& name);
std::string to_string(HcOrder hc);

/// Bias-corrected heteroskedasticity-robust residuals: the base residual is
/// y_i - r_{p+1}(x_i - x)' beta_{p+1}(x) from the kernel-weighted
/// order-(p+1) fit at the point; HC adjustments use that regression's
/// hat-matrix diagonal. Values are dense, aligned with the sample, and
/// nonzero only within twice the bandwidth of the point (the support of
/// every weighting they enter); leverages are nonzero only inside the
/// kernel window itself.
struct ResidualVector {
    std::vector<double> values;
    HcOrder hc_order = HcOrder::hc3;
    std::vector<double> leverages;
};

/// Throws InsufficientLocalData when the order-(p+1) fit fails and
/// LeverageOne when a leverage reaches one (isolated in-window point) or
/// the HC1 degrees of freedom vanish.
ResidualVector bc_residuals(const Sample& sample, const FitConfig& config,
                            HcOrder hc);

}  // namespace lpinfer
