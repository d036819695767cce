#pragma once

#include <vector>

#include "lpinfer/bootmoments.hpp"
#include "lpinfer/intervals.hpp"
#include "lpinfer/locpoly.hpp"
#include "lpinfer/residuals.hpp"

namespace lpinfer {

/// Sharp-design data: treatment is 1{x_i >= cutoff} by construction.
struct RddSample {
    std::vector<double> x;
    std::vector<double> y;
    double cutoff = 0.0;
};

/// Combined two-sided moments on the T = sqrt(nh)(tau-hat - tau) scale,
/// plus the per-side modified-lp moments they were assembled from.
struct RddMoments {
    double bias_rd = 0.0;         // Q+ B+ - Q- B-
    double boot_sd_rd = 0.0;      // sqrt(Q+^2 v+^2 + Q-^2 v-^2)
    double debiased_sd_rd = 0.0;  // sqrt(v_mPLP,+^2 + v_mPLP,-^2)
    double q_plus = 1.0;
    double q_minus = 1.0;
    BootstrapMoments plus;
    BootstrapMoments minus;
    double nh = 0.0;
};

/// tau-hat = g+(cutoff) - g-(cutoff), two one-sided local fits.
double ate_estimate(const RddSample& sample, double bandwidth, int order,
                    Kernel kernel);

RddMoments rdd_moments(const RddSample& sample, double bandwidth, int order,
                       Kernel kernel, HcOrder hc);

/// Modified prepivoted interval at the cutoff:
///   [(tau - (nh)^{-1/2} B_rd) ± z_{1-a/2} (nh)^{-1/2} v_rd].
ConfidenceInterval rdd_ci(const RddSample& sample, double bandwidth, int order,
                          Kernel kernel, HcOrder hc, double alpha);

/// Two one-sided moment sets merged into a single statistic
/// T* = T+* - T-* (per-side q factors folded into each side's score/bias):
/// bias subtracts, variances add, scores concatenate with the minus side
/// negated. Used for every rdd interval variant.
BootstrapMoments combine_sides(const BootstrapMoments& plus,
                               const BootstrapMoments& minus);

}  // namespace lpinfer
