#include "lpinfer/rdd.hpp"

#include <cmath>

#include "detail/moments_impl.hpp"
#include "detail/pipeline.hpp"

namespace lpinfer {

namespace detail {

FitConfig side_config(const RddSample& sample, double bandwidth, int order,
                      Kernel kernel, bool plus) {
    FitConfig cfg;
    cfg.point = sample.cutoff;
    cfg.bandwidth = bandwidth;
    cfg.order = order;
    cfg.kernel = kernel;
    cfg.side = plus ? Side::right_of_cutoff : Side::left_of_cutoff;
    return cfg;
}

}  // namespace detail

namespace {

template <typename F>
auto tagged(bool plus, F&& f) {
    const char* side = plus ? "right of cutoff: " : "left of cutoff: ";
    try {
        return f();
    } catch (const InsufficientLocalData& e) {
        throw InsufficientLocalData(side + std::string(e.what()));
    } catch (const LeverageOne& e) {
        throw LeverageOne(side + std::string(e.what()));
    }
}

}  // namespace

BootstrapMoments combine_sides(const BootstrapMoments& plus,
                               const BootstrapMoments& minus) {
    // With per-side bandwidths the sides live on different sqrt(nh) scales;
    // express the minus side on the plus scale (ratio 1 when h is shared).
    const double rescale = std::sqrt(plus.nh / minus.nh);
    BootstrapMoments out;
    out.method = plus.method;
    out.nh = plus.nh;
    out.q = 1.0;  // per-side scalings already folded in below
    out.bias = plus.bias - rescale * minus.bias;
    out.boot_sd = std::sqrt(plus.boot_sd * plus.boot_sd +
                            rescale * rescale * minus.boot_sd * minus.boot_sd);
    out.debiased_sd =
        std::sqrt(plus.debiased_sd * plus.debiased_sd +
                  rescale * rescale * minus.debiased_sd * minus.debiased_sd);
    out.score.reserve(plus.score.size() + minus.score.size());
    for (double s : plus.score) out.score.push_back(plus.q * s);
    for (double s : minus.score) out.score.push_back(-minus.q * rescale * s);
    return out;
}

double ate_estimate(const RddSample& sample, double bandwidth, int order,
                    Kernel kernel) {
    Sample flat{sample.x, sample.y};
    detail::SortedSample d(flat);
    double ghat_plus = 0.0, ghat_minus = 0.0;
    tagged(true, [&] {
        detail::Pipeline pipe(
            d, detail::side_config(sample, bandwidth, order, kernel, true));
        ghat_plus = pipe.ghat();
        return 0;
    });
    tagged(false, [&] {
        detail::Pipeline pipe(
            d, detail::side_config(sample, bandwidth, order, kernel, false));
        ghat_minus = pipe.ghat();
        return 0;
    });
    return ghat_plus - ghat_minus;
}

namespace {

BootstrapMoments side_mlp_moments(const detail::SortedSample& d,
                                  const RddSample& sample, double bandwidth,
                                  int order, Kernel kernel, HcOrder hc,
                                  bool plus) {
    return tagged(plus, [&] {
        detail::Pipeline pipe(
            d, detail::side_config(sample, bandwidth, order, kernel, plus));
        auto eps = detail::window_residuals(pipe, hc);
        return detail::mlp_moments_impl(pipe, eps);
    });
}

}  // namespace

RddMoments rdd_moments(const RddSample& sample, double bandwidth, int order,
                       Kernel kernel, HcOrder hc) {
    Sample flat{sample.x, sample.y};
    detail::SortedSample d(flat);
    RddMoments out;
    out.plus = side_mlp_moments(d, sample, bandwidth, order, kernel, hc, true);
    out.minus = side_mlp_moments(d, sample, bandwidth, order, kernel, hc, false);
    out.nh = out.plus.nh;
    out.q_plus = out.plus.q;
    out.q_minus = out.minus.q;
    out.bias_rd = out.plus.bias - out.minus.bias;
    out.boot_sd_rd = std::sqrt(out.plus.boot_sd * out.plus.boot_sd +
                               out.minus.boot_sd * out.minus.boot_sd);
    out.debiased_sd_rd =
        std::sqrt(out.plus.debiased_sd * out.plus.debiased_sd +
                  out.minus.debiased_sd * out.minus.debiased_sd);
    return out;
}

ConfidenceInterval rdd_ci(const RddSample& sample, double bandwidth, int order,
                          Kernel kernel, HcOrder hc, double alpha) {
    const double tau = ate_estimate(sample, bandwidth, order, kernel);
    RddMoments m = rdd_moments(sample, bandwidth, order, kernel, hc);
    return analytic_prepivot_ci(tau, combine_sides(m.plus, m.minus), alpha);
}

}  // namespace lpinfer
