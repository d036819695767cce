#pragma once

#include <cmath>
#include <functional>
#include <vector>

#include "lpinfer/errors.hpp"

namespace lpinfer::detail {

// Adaptive Gauss-Kronrod 15(7) to an absolute tolerance. Piecewise-smooth
// integrands should be split at their kinks by the caller; the bisection
// handles the rest.

namespace gk {

// QK15 abscissae (positive half) and weights.
inline constexpr double kx[8] = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144838258730, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.0};
inline constexpr double kw[8] = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
inline constexpr double gw[4] = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Estimate {
    double value;
    double error;
};

template <typename F>
Estimate rule(const F& f, double a, double b) {
    const double c = 0.5 * (a + b);
    const double hw = 0.5 * (b - a);
    double kron = 0.0, gauss = 0.0;
    for (int i = 0; i < 8; ++i) {
        const double fsum =
            (i == 7) ? f(c) : f(c - hw * kx[i]) + f(c + hw * kx[i]);
        kron += kw[i] * fsum;
        // odd indices (and the midpoint, i == 7) form the embedded Gauss-7
        if (i % 2 == 1 || i == 7) gauss += gw[i / 2] * fsum;
    }
    kron *= hw;
    gauss *= hw;
    return {kron, std::fabs(kron - gauss)};
}

}  // namespace gk

template <typename F>
double integrate_segment(const F& f, double a, double b, double abs_tol,
                         int depth = 0) {
    auto est = gk::rule(f, a, b);
    if (est.error <= abs_tol || (b - a) < 1e-14) return est.value;
    if (depth > 48) {
        throw QuadratureNonconvergence(
            "adaptive quadrature failed to reach the requested tolerance");
    }
    const double m = 0.5 * (a + b);
    return integrate_segment(f, a, m, 0.5 * abs_tol, depth + 1) +
           integrate_segment(f, m, b, 0.5 * abs_tol, depth + 1);
}

/// Adaptive GK15 with absolute tolerance, splitting first at the supplied
/// breakpoints (clipped to [a,b], assumed sorted).
double integrate(const std::function<double(double)>& f, double a, double b,
                 double abs_tol, const std::vector<double>& breaks = {});

}  // namespace lpinfer::detail
