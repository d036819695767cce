#include "lpinfer/residuals.hpp"

#include <cmath>

#include "detail/pipeline.hpp"

namespace lpinfer {

HcOrder hc_from_string(const std::string& name) {
    if (name == "hc0") return HcOrder::hc0;
    if (name == "hc1") return HcOrder::hc1;
    if (name == "hc2") return HcOrder::hc2;
    if (name == "hc3") return HcOrder::hc3;
    throw InvalidArgument("unknown residual type: " + name);
}

std::string to_string(HcOrder hc) {
    switch (hc) {
        case HcOrder::hc0: return "hc0";
        case HcOrder::hc1: return "hc1";
        case HcOrder::hc2: return "hc2";
        case HcOrder::hc3: return "hc3";
    }
    return "?";
}

namespace detail {

// Residuals over the doubled window [pipe.lo2, pipe.hi2), indexed locally.
// Shared with bootmoments, which needs them in sorted-window layout.
std::vector<double> window_residuals(Pipeline& pipe, HcOrder hc) {
    pipe.ensure_aug();
    pipe.ensure_lp();
    const auto& d = pipe.data();
    const FitConfig& cfg = pipe.config();
    const int dim = cfg.order + 2;
    const int n_eff = pipe.hi1() - pipe.lo1();

    double hc1_factor = 1.0;
    if (hc == HcOrder::hc1) {
        const int dof = n_eff - dim;
        if (dof <= 0) {
            throw LeverageOne(
                "hc1 degrees of freedom vanish (window holds no more points "
                "than the order-(p+1) fit has parameters)");
        }
        hc1_factor = std::sqrt(static_cast<double>(n_eff) / dof);
    }

    std::vector<double> eps(pipe.hi2() - pipe.lo2(), 0.0);
    const auto& coef = pipe.aug_coef();
    for (int i = pipe.lo2(); i < pipe.hi2(); ++i) {
        const double ui = pipe.u(i);
        double fitted = coef(dim - 1);
        for (int t = dim - 2; t >= 0; --t) fitted = fitted * ui + coef(t);
        double e = d.y[i] - fitted;
        if (i >= pipe.lo1() && i < pipe.hi1()) {
            const double lev = pipe.leverages()[i - pipe.lo1()];
            if (lev >= 1.0 - kLeverageTol) {
                throw LeverageOne(
                    "leverage reaches one for an in-window observation "
                    "(isolated point; enlarge the bandwidth)");
            }
            switch (hc) {
                case HcOrder::hc0: break;
                case HcOrder::hc1: e *= hc1_factor; break;
                case HcOrder::hc2: e /= std::sqrt(1.0 - lev); break;
                case HcOrder::hc3: e /= (1.0 - lev); break;
            }
        } else if (hc == HcOrder::hc1) {
            e *= hc1_factor;
        }
        eps[i - pipe.lo2()] = e;
    }
    return eps;
}

}  // namespace detail

ResidualVector bc_residuals(const Sample& sample, const FitConfig& config,
                            HcOrder hc) {
    detail::SortedSample d(sample);
    detail::Pipeline pipe(d, config);
    auto eps = detail::window_residuals(pipe, hc);

    ResidualVector out;
    out.hc_order = hc;
    out.values.assign(d.n, 0.0);
    out.leverages.assign(d.n, 0.0);
    for (int i = pipe.lo2(); i < pipe.hi2(); ++i) {
        out.values[d.orig[i]] = eps[i - pipe.lo2()];
    }
    for (int i = pipe.lo1(); i < pipe.hi1(); ++i) {
        out.leverages[d.orig[i]] = pipe.leverages()[i - pipe.lo1()];
    }
    return out;
}

}  // namespace lpinfer
