#include "lpinfer/bootmoments.hpp"

#include <cmath>

#include "detail/pipeline.hpp"

namespace lpinfer {

std::string to_string(Method m) {
    switch (m) {
        case Method::gp: return "gp";
        case Method::lp: return "lp";
        case Method::mlp: return "mlp";
    }
    return "?";
}

namespace detail {

namespace {

// y scale of the kernel window, for the degenerate-variance guard.
double window_y_scale2(const Pipeline& pipe) {
    const auto& d = pipe.data();
    double acc = 0.0;
    const int m = pipe.hi1() - pipe.lo1();
    for (int i = pipe.lo1(); i < pipe.hi1(); ++i) acc += d.y[i] * d.y[i];
    return m > 0 ? acc / m : 0.0;
}

void check_variance(double boot_var, double scale2) {
    if (!(boot_var > 0.0) || boot_var < kVarianceTol * scale2) {
        throw DegenerateVariance(
            "bootstrap variance vanishes (noiseless window); no studentized "
            "interval is available");
    }
}

std::vector<double> window_scores(const Pipeline& pipe,
                                  const std::vector<double>& eps) {
    std::vector<double> score(pipe.hi1() - pipe.lo1());
    for (int i = pipe.lo1(); i < pipe.hi1(); ++i) {
        score[i - pipe.lo1()] =
            pipe.weights()[i - pipe.lo1()] * eps[i - pipe.lo2()];
    }
    return score;
}

}  // namespace

// eps: residuals over [lo2, hi2) in sorted-window layout.
BootstrapMoments gp_moments_impl(Pipeline& pipe, const std::vector<double>& eps) {
    pipe.ensure_aug();
    pipe.ensure_lp();  // eps spans the doubled window
    const double nh = pipe.nh();
    const int p = pipe.config().order;

    BootstrapMoments out;
    out.method = Method::gp;
    out.nh = nh;
    out.bias = std::sqrt(nh) * pipe.aug_coef()(p + 1) * pipe.curvature();

    double boot = 0.0, deb = 0.0;
    for (int i = pipe.lo1(); i < pipe.hi1(); ++i) {
        const double e2 = eps[i - pipe.lo2()] * eps[i - pipe.lo2()];
        const double wi = pipe.weights()[i - pipe.lo1()];
        const double wd = wi - pipe.gp_bc_weights()[i - pipe.lo1()];
        boot += wi * wi * e2;
        deb += wd * wd * e2;
    }
    boot /= nh;
    deb /= nh;
    check_variance(boot, window_y_scale2(pipe));
    out.boot_sd = std::sqrt(boot);
    out.debiased_sd = std::sqrt(deb);
    out.score = window_scores(pipe, eps);
    return out;
}

BootstrapMoments lp_moments_impl(Pipeline& pipe, const std::vector<double>& eps) {
    pipe.ensure_lp();
    const double nh = pipe.nh();
    const auto& d = pipe.data();

    BootstrapMoments out;
    out.method = Method::lp;
    out.nh = nh;

    double bias = 0.0, boot = 0.0, deb = 0.0;
    for (int i = pipe.lo2(); i < pipe.hi2(); ++i) {
        const double wb = pipe.lp_bc()[i - pipe.lo2()];
        const double e2 = eps[i - pipe.lo2()] * eps[i - pipe.lo2()];
        const bool in_kernel = i >= pipe.lo1() && i < pipe.hi1();
        const double wi = in_kernel ? pipe.weights()[i - pipe.lo1()] : 0.0;
        bias += wb * d.y[i];
        boot += wi * wi * e2;
        const double wd = wi - wb;
        deb += wd * wd * e2;
    }
    out.bias = bias / std::sqrt(nh);
    boot /= nh;
    deb /= nh;
    check_variance(boot, window_y_scale2(pipe));
    out.boot_sd = std::sqrt(boot);
    out.debiased_sd = std::sqrt(deb);
    out.score = window_scores(pipe, eps);
    return out;
}

BootstrapMoments mlp_moments_impl(Pipeline& pipe, const std::vector<double>& eps) {
    pipe.ensure_lp();
    const double qn = pipe.q_factor();  // throws DegenerateScaling
    BootstrapMoments out = lp_moments_impl(pipe, eps);
    out.method = Method::mlp;
    out.q = qn;
    out.bias *= qn;
    out.boot_sd *= std::fabs(qn);

    const double nh = pipe.nh();
    double deb = 0.0;
    for (int i = pipe.lo2(); i < pipe.hi2(); ++i) {
        const bool in_kernel = i >= pipe.lo1() && i < pipe.hi1();
        const double wi = in_kernel ? pipe.weights()[i - pipe.lo1()] : 0.0;
        const double wd = wi - qn * pipe.lp_bc()[i - pipe.lo2()];
        deb += wd * wd * eps[i - pipe.lo2()] * eps[i - pipe.lo2()];
    }
    out.debiased_sd = std::sqrt(deb / nh);
    return out;
}

}  // namespace detail

namespace {

// Map a caller-supplied dense residual vector into sorted-window layout.
std::vector<double> gather_eps(const detail::SortedSample& d,
                               const detail::Pipeline& pipe,
                               const ResidualVector& residuals) {
    if (static_cast<int>(residuals.values.size()) != d.n) {
        throw InvalidArgument("residual vector length does not match sample");
    }
    std::vector<double> eps(pipe.hi2() - pipe.lo2());
    for (int i = pipe.lo2(); i < pipe.hi2(); ++i) {
        eps[i - pipe.lo2()] = residuals.values[d.orig[i]];
    }
    return eps;
}

template <typename Impl>
BootstrapMoments with_pipeline(const Sample& sample, const FitConfig& config,
                               const ResidualVector& residuals, Impl impl) {
    detail::SortedSample d(sample);
    detail::Pipeline pipe(d, config);
    pipe.ensure_lp();
    auto eps = gather_eps(d, pipe, residuals);
    return impl(pipe, eps);
}

}  // namespace

BootstrapMoments gp_moments(const Sample& sample, const FitConfig& config,
                            const ResidualVector& residuals) {
    return with_pipeline(sample, config, residuals, detail::gp_moments_impl);
}

BootstrapMoments lp_moments(const Sample& sample, const FitConfig& config,
                            const ResidualVector& residuals) {
    return with_pipeline(sample, config, residuals, detail::lp_moments_impl);
}

BootstrapMoments mlp_moments(const Sample& sample, const FitConfig& config,
                             const ResidualVector& residuals) {
    return with_pipeline(sample, config, residuals, detail::mlp_moments_impl);
}

}  // namespace lpinfer
