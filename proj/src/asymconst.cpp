#include "lpinfer/asymconst.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>

#include "detail/quadrature.hpp"
#include "lpinfer/errors.hpp"

namespace lpinfer {

namespace {

using Vec = Eigen::VectorXd;

constexpr double kConvTol = 1e-8;
constexpr double kSquareTol = 1e-7;  // per primitive; constants good to ~1e-6

// First (or requested) row of the inverse moment matrix over [lo, hi]:
// Gamma_{ij} = ∫ K(u) u^{i+j} du. Closed-form entries via kernel_moment.
Vec inverse_row(Kernel k, int order, double lo, double hi, int row) {
    const int dim = order + 1;
    Eigen::MatrixXd gamma(dim, dim);
    for (int i = 0; i < dim; ++i) {
        for (int j = 0; j < dim; ++j) {
            gamma(i, j) = kernel_moment(k, i + j, lo, hi, false);
        }
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(gamma);
    const auto& lam = eig.eigenvalues();
    if (!(lam(dim - 1) > 0.0) || lam(0) <= lam(dim - 1) * 1e-20) {
        throw SingularMomentMatrix(
            "equivalent-kernel moment matrix is numerically singular");
    }
    Vec e = Vec::Zero(dim);
    e(row) = 1.0;
    return eig.eigenvectors() *
           (lam.cwiseInverse().asDiagonal() * (eig.eigenvectors().transpose() * e));
}

double poly_eval(const Vec& c, double u) {
    double v = c(c.size() - 1);
    for (int t = static_cast<int>(c.size()) - 2; t >= 0; --t) v = v * u + c(t);
    return v;
}

// region data range: interior (-1,1); boundary [0,1) at the point itself.
struct RegionSpec {
    double lo, hi;           // moment-matrix range at the evaluation point
    double data_lo;          // observations only exist above this
};

RegionSpec region_spec(Region r) {
    if (r == Region::interior) return {-1.0, 1.0, -1.0};
    return {0.0, 1.0, 0.0};
}

void validate_order(int order) {
    if (order < 1 || order % 2 == 0 || order > 9) {
        throw InvalidArgument("order must be odd, between 1 and 9");
    }
}

// w_bnd(u, s): weight at scaled offset u for a fit whose window is [-s, 1]
// relative to itself (s >= 0 is the fit point's distance from the boundary).
double w_bnd(Kernel k, int order, double s, double u) {
    const double lo = -std::min(s, 1.0);
    if (u < lo || u >= 1.0) return 0.0;
    Vec c = inverse_row(k, order, lo, 1.0, 0);
    return poly_eval(c, u) * eval_kernel(k, u);
}

double w_interior(Kernel k, int order, double u) {
    if (std::fabs(u) >= 1.0) return 0.0;
    Vec c = inverse_row(k, order, -1.0, 1.0, 0);
    return poly_eval(c, u) * eval_kernel(k, u);
}

double conv_interior(Kernel k, int order, double u) {
    if (std::fabs(u) >= 2.0) return 0.0;
    Vec c = inverse_row(k, order, -1.0, 1.0, 0);
    auto w = [&](double v) { return poly_eval(c, v) * eval_kernel(k, v); };
    const double lo = std::max(-1.0, u - 1.0);
    const double hi = std::min(1.0, u + 1.0);
    // kinks of the product at r = 0 and r = u (triangular kernel)
    return detail::integrate([&](double r) { return w(r) * w(u - r); }, lo, hi,
                             kConvTol, {0.0, u});
}

double conv_boundary(Kernel k, int order, double u) {
    if (u < 0.0 || u >= 2.0) return 0.0;
    Vec c0 = inverse_row(k, order, 0.0, 1.0, 0);
    // inner factor vanishes unless u - r ∈ [-r, 1), i.e. r > u - 1 (and u >= 0)
    const double lo = std::max(0.0, u - 1.0);
    auto f = [&](double r) {
        const double w0 = poly_eval(c0, r) * eval_kernel(k, r);
        if (w0 == 0.0) return 0.0;
        return w0 * w_bnd(k, order, r, u - r);
    };
    return detail::integrate(f, lo, 1.0, kConvTol, {u - 1.0, u, 1.0});
}

double curvature_limit(Kernel k, int order, double lo, double hi) {
    Vec c = inverse_row(k, order, lo, hi, 0);
    double acc = 0.0;
    for (int j = 0; j <= order; ++j) {
        acc += c(j) * kernel_moment(k, j + order + 1, lo, hi, false);
    }
    return acc;
}

// C_LP = ∫_0^1 w(s) [∫_{-s}^1 w_bnd(u,s) u^{p+1} du] ds; the inner integral
// collapses to closed-form kernel moments given the per-node inverse row.
double c_lp_boundary(Kernel k, int order) {
    Vec c0 = inverse_row(k, order, 0.0, 1.0, 0);
    auto f = [&](double s) {
        const double ws = poly_eval(c0, s) * eval_kernel(k, s);
        if (ws == 0.0) return 0.0;
        return ws * curvature_limit(k, order, -std::min(s, 1.0), 1.0);
    };
    return detail::integrate(f, 0.0, 1.0, 1e-10, {});
}

}  // namespace

Region region_from_string(const std::string& name) {
    if (name == "interior") return Region::interior;
    if (name == "boundary") return Region::boundary;
    throw InvalidArgument("unknown region: " + name);
}

std::string to_string(Region r) {
    return r == Region::interior ? "interior" : "boundary";
}

double equivalent_kernel(Kernel kernel, int order, Region region, double u,
                         double s) {
    validate_order(order);
    if (region == Region::interior) return w_interior(kernel, order, u);
    if (s < 0.0) throw InvalidArgument("left-truncation s must be >= 0");
    return w_bnd(kernel, order, s, u);
}

double convolution_kernel(Kernel kernel, int order, Region region, double u) {
    validate_order(order);
    return region == Region::interior ? conv_interior(kernel, order, u)
                                      : conv_boundary(kernel, order, u);
}

ConstantsReport kernel_constants(Kernel kernel, int order, Region region) {
    validate_order(order);
    const RegionSpec spec = region_spec(region);

    ConstantsReport rep;
    rep.kernel = kernel;
    rep.order = order;
    rep.region = region;
    rep.c = curvature_limit(kernel, order, spec.lo, spec.hi);
    rep.c_lp = region == Region::interior ? rep.c : c_lp_boundary(kernel, order);
    if (std::fabs(rep.c_lp) < 1e-12 * std::fabs(rep.c)) {
        throw DegenerateScaling("limiting smoothed curvature vanishes");
    }
    rep.q = rep.c / rep.c_lp;

    Vec c = inverse_row(kernel, order, spec.lo, spec.hi, 0);
    auto w = [&](double u) {
        if (u < spec.data_lo || u >= 1.0) return 0.0;
        return poly_eval(c, u) * eval_kernel(kernel, u);
    };
    auto conv = [&](double u) {
        return region == Region::interior ? conv_interior(kernel, order, u)
                                          : conv_boundary(kernel, order, u);
    };

    const double lo1 = spec.data_lo, hi1 = 1.0;
    const double lo2 = region == Region::interior ? -2.0 : 0.0, hi2 = 2.0;
    const std::vector<double> breaks{-2.0, -1.0, 0.0, 1.0, 2.0};

    const double i_ww = detail::integrate(
        [&](double u) { return w(u) * w(u); }, lo1, hi1, kSquareTol, breaks);
    const double i_wc = detail::integrate(
        [&](double u) { return w(u) * conv(u); }, lo1, hi1, kSquareTol, breaks);
    const double i_cc = detail::integrate(
        [&](double u) { const double v = conv(u); return v * v; }, lo2, hi2,
        kSquareTol, breaks);

    rep.k_base = i_ww;
    rep.k_plp = 4.0 * i_ww - 4.0 * i_wc + i_cc;
    const double q = rep.q;
    rep.k_mplp =
        (1.0 + q) * (1.0 + q) * i_ww - 2.0 * (1.0 + q) * q * i_wc + q * q * i_cc;

    // RBC: w_gp_bc = C · iota_{p+1}' Gamma_{p+1}^{-1} r_{p+1}(u) K(u)
    Vec c2 = inverse_row(kernel, order + 1, spec.lo, spec.hi, order + 1);
    auto w_rbc = [&](double u) {
        if (u < spec.data_lo || u >= 1.0) return 0.0;
        return w(u) - rep.c * poly_eval(c2, u) * eval_kernel(kernel, u);
    };
    rep.k_rbc = detail::integrate(
        [&](double u) { const double v = w_rbc(u); return v * v; }, lo1, hi1,
        kSquareTol, breaks);
    rep.length_ratio = std::sqrt(rep.k_mplp / rep.k_rbc);
    return rep;
}

EquivKernelTable equiv_kernel_table(Kernel kernel, int order, Region region,
                                    WFamily family, double step) {
    validate_order(order);
    if (!(step > 0.0)) throw InvalidArgument("grid step must be positive");
    const RegionSpec spec = region_spec(region);
    // one wide grid per region so per-family tables align column-wise
    const double lo = region == Region::interior ? -2.0 : -1.0;
    const double hi = 2.0;

    const double c_limit = curvature_limit(kernel, order, spec.lo, spec.hi);
    double q_limit = 1.0;
    if (family == WFamily::w_mplp && region == Region::boundary) {
        q_limit = c_limit / c_lp_boundary(kernel, order);
    }

    Vec c = inverse_row(kernel, order, spec.lo, spec.hi, 0);
    Vec c2 = inverse_row(kernel, order + 1, spec.lo, spec.hi, order + 1);
    auto w = [&](double u) {
        if (u < spec.data_lo || u >= 1.0) return 0.0;
        return poly_eval(c, u) * eval_kernel(kernel, u);
    };
    auto gpbc = [&](double u) {
        if (u < spec.data_lo || u >= 1.0) return 0.0;
        return c_limit * poly_eval(c2, u) * eval_kernel(kernel, u);
    };
    auto conv = [&](double u) {
        return convolution_kernel(kernel, order, region, u);
    };

    EquivKernelTable table;
    table.family = family;
    table.region = region;
    const auto count = static_cast<std::size_t>((hi - lo) / step + 1.5);
    table.grid.reserve(count);
    table.values.reserve(count);
    for (std::size_t i = 0; i < count; ++i) {
        const double u = lo + step * static_cast<double>(i);
        double v = 0.0;
        switch (family) {
            case WFamily::w: v = w(u); break;
            case WFamily::w_gp_bc: v = gpbc(u); break;
            case WFamily::w_conv:
            case WFamily::w_conv_bnd: v = conv(u); break;
            case WFamily::w_plp: v = 2.0 * w(u) - conv(u); break;
            case WFamily::w_mplp:
                v = (1.0 + q_limit) * w(u) - q_limit * conv(u);
                break;
            case WFamily::w_rbc: v = w(u) - gpbc(u); break;
        }
        table.grid.push_back(u);
        table.values.push_back(v);
    }
    return table;
}

}  // namespace lpinfer
