#pragma once

#include <string>
#include <vector>

#include "lpinfer/kernels.hpp"

namespace lpinfer {

enum class Region { interior, boundary };

Region region_from_string(const std::string& name);
std::string to_string(Region r);

/// Which limiting weight function a table samples.
enum class WFamily { w, w_gp_bc, w_conv, w_conv_bnd, w_plp, w_mplp, w_rbc };

struct EquivKernelTable {
    std::vector<double> grid;
    std::vector<double> values;
    WFamily family = WFamily::w;
    Region region = Region::interior;
};

/// Asymptotic constants of the (bias-corrected) equivalent kernels. At an
/// interior point c_lp == c, q == 1, and k_mplp == k_plp.
struct ConstantsReport {
    Kernel kernel = Kernel::epanechnikov;
    int order = 1;
    Region region = Region::interior;
    double c = 0.0;       // C = ∫ w(u) u^{p+1} du over the region
    double c_lp = 0.0;    // smoothed analogue (boundary double integral)
    double q = 1.0;       // C / C_LP
    double k_base = 0.0;  // ∫ w(u)^2 du, variance constant of the raw fit
    double k_plp = 0.0;
    double k_mplp = 0.0;
    double k_rbc = 0.0;
    double length_ratio = 0.0;  // sqrt(k_mplp / k_rbc)
};

/// Equivalent kernel w(u) (interior) or its left-truncated version
/// w_bnd(u, s) whose moment matrix runs over [-s, 1] (boundary; s = 0 is
/// the evaluation point itself). Zero outside the region's data range.
double equivalent_kernel(Kernel kernel, int order, Region region, double u,
                         double s = 0.0);

/// Convolution weight: w_conv(u) = ∫ w(r) w(u-r) dr (interior, |u| < 2) or
/// its boundary analogue ∫ w_bnd(r,0) w_bnd(u-r,r) dr (support [0, 2]).
/// Adaptive quadrature to absolute tolerance 1e-8.
double convolution_kernel(Kernel kernel, int order, Region region, double u);

ConstantsReport kernel_constants(Kernel kernel, int order, Region region);

EquivKernelTable equiv_kernel_table(Kernel kernel, int order, Region region,
                                    WFamily family, double step = 0.01);

}  // namespace lpinfer
