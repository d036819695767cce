#include "lpinfer/intervals.hpp"

#include <algorithm>
#include <cmath>

#include "lpinfer/errors.hpp"
#include "lpinfer/stats.hpp"

namespace lpinfer {

CiMethod ci_method_from_string(const std::string& name) {
    if (name == "conventional") return CiMethod::conventional;
    if (name == "naive_gp") return CiMethod::naive_gp;
    if (name == "naive_lp") return CiMethod::naive_lp;
    if (name == "rbc_pgp") return CiMethod::rbc_pgp;
    if (name == "plp") return CiMethod::plp;
    if (name == "mplp") return CiMethod::mplp;
    throw InvalidArgument("unknown interval method: " + name);
}

std::string to_string(CiMethod m) {
    switch (m) {
        case CiMethod::conventional: return "conventional";
        case CiMethod::naive_gp: return "naive_gp";
        case CiMethod::naive_lp: return "naive_lp";
        case CiMethod::rbc_pgp: return "rbc_pgp";
        case CiMethod::plp: return "plp";
        case CiMethod::mplp: return "mplp";
    }
    return "?";
}

Multiplier multiplier_from_string(const std::string& name) {
    if (name == "gaussian") return Multiplier::gaussian;
    if (name == "rademacher") return Multiplier::rademacher;
    if (name == "mammen") return Multiplier::mammen;
    throw InvalidArgument("unknown multiplier: " + name);
}

std::string to_string(Multiplier m) {
    switch (m) {
        case Multiplier::gaussian: return "gaussian";
        case Multiplier::rademacher: return "rademacher";
        case Multiplier::mammen: return "mammen";
    }
    return "?";
}

namespace {

void check_alpha(double alpha) {
    if (!(alpha > 0.0 && alpha < 1.0)) {
        throw InvalidAlpha("alpha must lie in (0,1)");
    }
}

CiMethod prepivot_tag(Method m) {
    switch (m) {
        case Method::gp: return CiMethod::rbc_pgp;
        case Method::lp: return CiMethod::plp;
        case Method::mlp: return CiMethod::mplp;
    }
    return CiMethod::rbc_pgp;
}

double mammen_draw(Rng& rng) {
    // two-point distribution with mean 0, variance 1:
    // -(sqrt5-1)/2 with prob (sqrt5+1)/(2 sqrt5), (sqrt5+1)/2 otherwise
    static const double s5 = std::sqrt(5.0);
    static const double p_low = (s5 + 1.0) / (2.0 * s5);
    return rng.uniform() < p_low ? -(s5 - 1.0) / 2.0 : (s5 + 1.0) / 2.0;
}

std::vector<double> draw_statistics(const BootstrapMoments& moments,
                                    const ResamplingPlan& plan) {
    if (plan.replications < 1) {
        throw InvalidArgument("resampling plan needs at least one replication");
    }
    const double root_nh = std::sqrt(moments.nh);
    std::vector<double> t(static_cast<std::size_t>(plan.replications));
    for (long b = 0; b < plan.replications; ++b) {
        Rng rng(plan.seed, static_cast<std::uint64_t>(b));
        double noise = 0.0;
        switch (plan.multiplier) {
            case Multiplier::gaussian:
                for (double s : moments.score) noise += s * rng.normal();
                break;
            case Multiplier::rademacher:
                for (double s : moments.score)
                    noise += (rng.next_u64() >> 63) ? s : -s;
                break;
            case Multiplier::mammen:
                for (double s : moments.score) noise += s * mammen_draw(rng);
                break;
        }
        t[static_cast<std::size_t>(b)] =
            moments.bias + moments.q * noise / root_nh;
    }
    return t;
}

}  // namespace

double prepivot_cdf_apply(double m_hat, double u) {
    if (!(m_hat > 0.0)) throw InvalidArgument("m_hat must be positive");
    if (!(u > 0.0 && u < 1.0)) {
        throw InvalidProbability("prepivot cdf argument must lie in (0,1)");
    }
    return normal_cdf(normal_quantile(u) / m_hat);
}

double prepivot_cdf_inverse(double m_hat, double a) {
    if (!(m_hat > 0.0)) throw InvalidArgument("m_hat must be positive");
    if (!(a > 0.0 && a < 1.0)) {
        throw InvalidProbability("prepivot cdf level must lie in (0,1)");
    }
    return normal_cdf(m_hat * normal_quantile(a));
}

ConfidenceInterval conventional_ci(double estimate, double sd_v1, double nh,
                                   double alpha) {
    check_alpha(alpha);
    if (!(sd_v1 > 0.0) || !(nh > 0.0)) {
        throw InvalidArgument("conventional_ci needs sd_v1 > 0 and nh > 0");
    }
    ConfidenceInterval ci;
    ci.method = CiMethod::conventional;
    ci.estimate = estimate;
    ci.alpha = alpha;
    ci.bias_correction = 0.0;
    ci.se = sd_v1 / std::sqrt(nh);
    const double half = normal_quantile(1.0 - alpha / 2.0) * ci.se;
    ci.lower = estimate - half;
    ci.upper = estimate + half;
    return ci;
}

ConfidenceInterval analytic_prepivot_ci(double estimate,
                                        const BootstrapMoments& moments,
                                        double alpha) {
    check_alpha(alpha);
    ConfidenceInterval ci;
    ci.method = prepivot_tag(moments.method);
    ci.estimate = estimate;
    ci.alpha = alpha;
    ci.bias_correction = moments.bias / std::sqrt(moments.nh);
    ci.se = moments.debiased_sd / std::sqrt(moments.nh);
    const double center = estimate - ci.bias_correction;
    const double half = normal_quantile(1.0 - alpha / 2.0) * ci.se;
    ci.lower = center - half;
    ci.upper = center + half;
    return ci;
}

ConfidenceInterval naive_bootstrap_ci(
    double estimate, const BootstrapMoments& moments, double alpha,
    const std::optional<ResamplingPlan>& plan) {
    check_alpha(alpha);
    if (moments.method == Method::mlp) {
        throw InvalidArgument(
            "naive interval is defined for the gp and lp schemes only");
    }
    ConfidenceInterval ci;
    ci.method = moments.method == Method::gp ? CiMethod::naive_gp
                                             : CiMethod::naive_lp;
    ci.estimate = estimate;
    ci.alpha = alpha;
    const double root_nh = std::sqrt(moments.nh);
    ci.bias_correction = moments.bias / root_nh;
    ci.se = moments.boot_sd / root_nh;
    if (!plan) {
        const double z = normal_quantile(1.0 - alpha / 2.0);
        ci.lower = estimate - ci.bias_correction - z * ci.se;
        ci.upper = estimate - ci.bias_correction + z * ci.se;
        return ci;
    }
    auto t = draw_statistics(moments, *plan);
    std::sort(t.begin(), t.end());
    ci.lower = estimate - sorted_quantile_type7(t, 1.0 - alpha / 2.0) / root_nh;
    ci.upper = estimate - sorted_quantile_type7(t, alpha / 2.0) / root_nh;
    if (plan->replications < 2) {
        ci.warnings.push_back("degenerate_resampling");
    }
    return ci;
}

ConfidenceInterval resampled_prepivot_ci(double estimate,
                                         const BootstrapMoments& moments,
                                         double alpha,
                                         const ResamplingPlan& plan) {
    check_alpha(alpha);
    ConfidenceInterval ci;
    ci.method = prepivot_tag(moments.method);
    ci.estimate = estimate;
    ci.alpha = alpha;
    const double root_nh = std::sqrt(moments.nh);
    ci.bias_correction = moments.bias / root_nh;
    ci.se = moments.debiased_sd / root_nh;

    const double m_hat = moments.debiased_sd / moments.boot_sd;
    const double lo_level = prepivot_cdf_inverse(m_hat, alpha / 2.0);
    const double hi_level = prepivot_cdf_inverse(m_hat, 1.0 - alpha / 2.0);

    auto t = draw_statistics(moments, plan);
    std::sort(t.begin(), t.end());
    ci.lower = estimate - sorted_quantile_type7(t, hi_level) / root_nh;
    ci.upper = estimate - sorted_quantile_type7(t, lo_level) / root_nh;
    if (plan.replications < 2) {
        ci.warnings.push_back("degenerate_resampling");
    }
    return ci;
}

}  // namespace lpinfer
