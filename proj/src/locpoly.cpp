#include "lpinfer/locpoly.hpp"

#include <cmath>

#include "detail/pipeline.hpp"

namespace lpinfer {

namespace {

WeightVector densify(const detail::SortedSample& d, const std::vector<double>& w,
                     int lo, int hi) {
    WeightVector out;
    out.values.assign(d.n, 0.0);
    for (int i = lo; i < hi; ++i) out.values[d.orig[i]] = w[i - lo];
    out.effective_n = hi - lo;
    return out;
}

}  // namespace

WeightVector local_weights(const Sample& sample, const FitConfig& config) {
    detail::SortedSample d(sample);
    detail::Pipeline pipe(d, config);
    return densify(d, pipe.weights(), pipe.lo1(), pipe.hi1());
}

LocalFit local_fit(const Sample& sample, const FitConfig& config) {
    detail::SortedSample d(sample);
    detail::validate_config(config);
    detail::SideFilter filter{config.side, config.point};
    auto solve = detail::solve_local(d, config.kernel, config.point,
                                     config.bandwidth, filter, config.order,
                                     true, false);
    detail::Pipeline pipe(d, config);

    LocalFit fit;
    fit.beta.resize(config.order + 1);
    double hj = 1.0;
    for (int j = 0; j <= config.order; ++j) {
        fit.beta[j] = solve.coef(j) / hj;  // beta_j = b_j / h^j
        hj *= config.bandwidth;
    }
    fit.ghat = fit.beta[0];
    fit.weights = densify(d, pipe.weights(), pipe.lo1(), pipe.hi1());
    fit.curvature = pipe.curvature();
    return fit;
}

double curvature_constant(const Sample& sample, const FitConfig& config) {
    detail::SortedSample d(sample);
    detail::Pipeline pipe(d, config);
    return pipe.curvature();
}

std::vector<double> lp_bc_weights(const Sample& sample, const FitConfig& config) {
    detail::SortedSample d(sample);
    detail::Pipeline pipe(d, config);
    pipe.ensure_lp();
    std::vector<double> dense(d.n, 0.0);
    for (int i = pipe.lo2(); i < pipe.hi2(); ++i) {
        dense[d.orig[i]] = pipe.lp_bc()[i - pipe.lo2()];
    }
    return dense;
}

QFactor q_factor(const Sample& sample, const FitConfig& config) {
    detail::SortedSample d(sample);
    detail::Pipeline pipe(d, config);
    pipe.ensure_lp();
    QFactor out;
    out.q = pipe.q_factor();
    out.c_n = pipe.curvature();
    out.c_lp_n = pipe.c_lp();
    return out;
}

}  // namespace lpinfer
