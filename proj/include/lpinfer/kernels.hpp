#pragma once

#include <string>

namespace lpinfer {

/// Compact-support second-order kernels, normalized to unit integral on the
/// open support (-1, 1). All are symmetric and piecewise polynomial.
enum class Kernel { triangular, uniform, epanechnikov, biweight, triweight };

inline constexpr Kernel kAllKernels[] = {
    Kernel::triangular, Kernel::uniform, Kernel::epanechnikov,
    Kernel::biweight, Kernel::triweight};

Kernel kernel_from_string(const std::string& name);
std::string to_string(Kernel k);

/// K(u). Exactly 0 for |u| >= 1; total over all finite u.
double eval_kernel(Kernel k, double u);

/// Closed-form moment  ∫ K(u)^s u^j du  over [lower, upper] ∩ [-1, 1],
/// with s = 2 when `squared`, else 1. The kernels are piecewise polynomial,
/// so this is an exact polynomial antiderivative, not quadrature.
/// Throws InvalidRange when lower >= upper.
double kernel_moment(Kernel k, int j, double lower, double upper,
                     bool squared = false);

}  // namespace lpinfer
