#pragma once

#include <optional>
#include <string>
#include <vector>

#include "lpinfer/intervals.hpp"
#include "lpinfer/locpoly.hpp"
#include "lpinfer/rdd.hpp"
#include "lpinfer/residuals.hpp"

namespace lpinfer {

/// One-stop request: which intervals to build at a point, and how.
struct PointRequest {
    FitConfig fit;
    HcOrder hc = HcOrder::hc3;
    double alpha = 0.05;
    std::vector<CiMethod> methods;          // empty = all six
    std::optional<ResamplingPlan> plan;     // resample instead of closed form
};

struct PointAnalysis {
    double estimate = 0.0;
    double nh = 0.0;
    long n_eff = 0;
    double c_n = 0.0;
    double c_lp_n = 0.0;
    double q_n = 0.0;  // NaN when the scaling is degenerate
    std::vector<ConfidenceInterval> intervals;
    std::vector<std::string> warnings;
};

/// Computes the point estimate and every requested interval with one pass of
/// the underlying fits. A degenerate Q_n downgrades the mplp request to the
/// plp interval, flagged in `warnings` (and on the interval itself).
PointAnalysis analyze_point(const Sample& sample, const PointRequest& request);

struct RddRequest {
    double cutoff = 0.0;
    double bandwidth = 0.0;
    std::optional<double> bandwidth_left, bandwidth_right;
    Kernel kernel = Kernel::triangular;
    std::optional<Kernel> kernel_left, kernel_right;
    int order = 1;
    HcOrder hc = HcOrder::hc3;
    double alpha = 0.05;
    std::vector<CiMethod> methods;
    std::optional<ResamplingPlan> plan;
};

struct RddAnalysis {
    double tau = 0.0;
    double nh = 0.0;
    long n_eff_plus = 0, n_eff_minus = 0;
    double q_plus = 0.0, q_minus = 0.0;
    std::vector<ConfidenceInterval> intervals;
    std::vector<std::string> warnings;
};

RddAnalysis analyze_rdd(const RddSample& sample, const RddRequest& request);

}  // namespace lpinfer
