#include "lpinfer/analyze.hpp"

#include <cmath>
#include <limits>

#include "detail/moments_impl.hpp"
#include "detail/pipeline.hpp"

namespace lpinfer {

namespace {

const std::vector<CiMethod> kAllMethods = {
    CiMethod::conventional, CiMethod::naive_gp, CiMethod::naive_lp,
    CiMethod::rbc_pgp,      CiMethod::plp,      CiMethod::mplp};

// Per-point moment bundle; mlp absent when the scaling degenerates.
struct MomentSet {
    BootstrapMoments gp, lp;
    std::optional<BootstrapMoments> mlp;
    bool degenerate_scaling = false;
};

MomentSet compute_moments(detail::Pipeline& pipe, HcOrder hc) {
    auto eps = detail::window_residuals(pipe, hc);
    MomentSet out;
    out.gp = detail::gp_moments_impl(pipe, eps);
    out.lp = detail::lp_moments_impl(pipe, eps);
    try {
        out.mlp = detail::mlp_moments_impl(pipe, eps);
    } catch (const DegenerateScaling&) {
        out.degenerate_scaling = true;
    }
    return out;
}

// Emits one interval per requested method, in request order, so callers can
// pair intervals with requests positionally.
void build_intervals(const MomentSet& m, double estimate, double alpha,
                     const std::vector<CiMethod>& methods,
                     const std::optional<ResamplingPlan>& plan,
                     std::vector<ConfidenceInterval>& out,
                     std::vector<std::string>& warnings) {
    auto prepivoted = [&](const BootstrapMoments& mm) {
        return plan ? resampled_prepivot_ci(estimate, mm, alpha, *plan)
                    : analytic_prepivot_ci(estimate, mm, alpha);
    };
    for (CiMethod method : methods) {
        switch (method) {
            case CiMethod::conventional:
                out.push_back(
                    conventional_ci(estimate, m.gp.boot_sd, m.gp.nh, alpha));
                break;
            case CiMethod::naive_gp:
                out.push_back(naive_bootstrap_ci(estimate, m.gp, alpha, plan));
                break;
            case CiMethod::naive_lp:
                out.push_back(naive_bootstrap_ci(estimate, m.lp, alpha, plan));
                break;
            case CiMethod::rbc_pgp:
                out.push_back(prepivoted(m.gp));
                break;
            case CiMethod::plp:
                out.push_back(prepivoted(m.lp));
                break;
            case CiMethod::mplp:
                if (m.mlp) {
                    out.push_back(prepivoted(*m.mlp));
                } else {
                    auto ci = prepivoted(m.lp);
                    ci.warnings.push_back("degenerate_scaling_mplp_unavailable");
                    out.push_back(ci);
                    warnings.push_back(
                        "degenerate_scaling: mplp unavailable, plp interval "
                        "emitted");
                }
                break;
        }
    }
}

void require_odd_order(int order) {
    if (order % 2 == 0) {
        throw InvalidArgument(
            "interval construction requires an odd polynomial order");
    }
}

}  // namespace

PointAnalysis analyze_point(const Sample& sample, const PointRequest& request) {
    require_odd_order(request.fit.order);
    detail::SortedSample d(sample);
    detail::Pipeline pipe(d, request.fit);
    pipe.ensure_lp();

    PointAnalysis out;
    out.estimate = pipe.ghat();
    out.nh = pipe.nh();
    out.n_eff = pipe.hi1() - pipe.lo1();
    out.c_n = pipe.curvature();
    out.c_lp_n = pipe.c_lp();
    try {
        out.q_n = pipe.q_factor();
    } catch (const DegenerateScaling&) {
        out.q_n = std::numeric_limits<double>::quiet_NaN();
    }

    MomentSet moments = compute_moments(pipe, request.hc);
    const auto& methods = request.methods.empty() ? kAllMethods : request.methods;
    build_intervals(moments, out.estimate, request.alpha, methods, request.plan,
                    out.intervals, out.warnings);
    return out;
}

RddAnalysis analyze_rdd(const RddSample& sample, const RddRequest& request) {
    require_odd_order(request.order);
    Sample flat{sample.x, sample.y};
    detail::SortedSample d(flat);

    auto side_cfg = [&](bool plus) {
        FitConfig cfg;
        cfg.point = request.cutoff;
        cfg.order = request.order;
        cfg.side = plus ? Side::right_of_cutoff : Side::left_of_cutoff;
        cfg.bandwidth = plus ? request.bandwidth_right.value_or(request.bandwidth)
                             : request.bandwidth_left.value_or(request.bandwidth);
        cfg.kernel = plus ? request.kernel_right.value_or(request.kernel)
                          : request.kernel_left.value_or(request.kernel);
        return cfg;
    };

    auto run_side = [&](bool plus, detail::Pipeline& pipe) {
        try {
            pipe.ensure_lp();
            return compute_moments(pipe, request.hc);
        } catch (const InsufficientLocalData& e) {
            throw InsufficientLocalData(
                std::string(plus ? "right of cutoff: " : "left of cutoff: ") +
                e.what());
        } catch (const LeverageOne& e) {
            throw LeverageOne(
                std::string(plus ? "right of cutoff: " : "left of cutoff: ") +
                e.what());
        }
    };

    detail::Pipeline plus_pipe(d, side_cfg(true));
    detail::Pipeline minus_pipe(d, side_cfg(false));
    MomentSet plus = run_side(true, plus_pipe);
    MomentSet minus = run_side(false, minus_pipe);

    RddAnalysis out;
    out.tau = plus_pipe.ghat() - minus_pipe.ghat();
    out.nh = plus_pipe.nh();
    out.n_eff_plus = plus_pipe.hi1() - plus_pipe.lo1();
    out.n_eff_minus = minus_pipe.hi1() - minus_pipe.lo1();
    out.q_plus = plus.mlp ? plus.mlp->q : std::numeric_limits<double>::quiet_NaN();
    out.q_minus =
        minus.mlp ? minus.mlp->q : std::numeric_limits<double>::quiet_NaN();

    MomentSet combined;
    combined.gp = combine_sides(plus.gp, minus.gp);
    combined.lp = combine_sides(plus.lp, minus.lp);
    if (plus.mlp && minus.mlp) {
        combined.mlp = combine_sides(*plus.mlp, *minus.mlp);
    } else {
        combined.degenerate_scaling = true;
    }
    const auto& methods = request.methods.empty() ? kAllMethods : request.methods;
    build_intervals(combined, out.tau, request.alpha, methods, request.plan,
                    out.intervals, out.warnings);
    return out;
}

}  // namespace lpinfer
