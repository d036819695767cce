#include "lpinfer/simharness.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <numbers>
#include <thread>

#include "lpinfer/errors.hpp"

namespace lpinfer {

namespace {

// quintic coefficients of the two sharp designs, by side of the cutoff
constexpr double kRdd1Left[6] = {3.71, 2.30, 3.28, 1.45, 0.23, 0.03};
constexpr double kRdd1Right[6] = {0.26, 18.49, -54.81, 74.30, -45.02, 9.83};
constexpr double kRdd2Left[6] = {0.48, 1.27, -0.5 * 7.18, 0.7 * 20.21,
                                 1.1 * 21.54, 1.5 * 7.33};
constexpr double kRdd2Right[6] = {0.52, 0.84, -0.1 * 3.00, -0.3 * 7.99,
                                  -0.1 * 9.01, 3.56};

double poly6(const double* c, double x) {
    double v = c[5];
    for (int t = 4; t >= 0; --t) v = v * x + c[t];
    return v;
}

double poly6_deriv(const double* c, double x, int m) {
    if (m > 5) return 0.0;
    double d[6];
    std::copy(c, c + 6, d);
    for (int pass = 0; pass < m; ++pass) {
        for (int t = 0; t + 1 < 6; ++t) d[t] = d[t + 1] * (t + 1);
        d[5] = 0.0;
    }
    double v = d[5];
    for (int t = 4; t >= 0; --t) v = v * x + d[t];
    return v;
}

double sign0(double x) { return x > 0.0 ? 1.0 : (x < 0.0 ? -1.0 : 0.0); }

// npreg curve sin(3πx/2) / (1 + 18x²(sign(x)+1))
double npreg_mean(double x) {
    const double s = std::sin(1.5 * std::numbers::pi * x);
    return s / (1.0 + 18.0 * x * x * (sign0(x) + 1.0));
}

// m-th derivative. Left of zero the curve is a pure sine; right of zero a
// quotient, supported to second order (all the harness needs for p = 1).
double npreg_deriv(double x, int m) {
    const double c = 1.5 * std::numbers::pi;
    if (x <= 0.0) {
        return std::pow(c, m) * std::sin(c * x + 0.5 * std::numbers::pi * m);
    }
    const double s = std::sin(c * x), s1 = c * std::cos(c * x),
                 s2 = -c * c * std::sin(c * x);
    const double d = 1.0 + 36.0 * x * x, d1 = 72.0 * x, d2 = 72.0;
    switch (m) {
        case 0: return s / d;
        case 1: return (s1 * d - s * d1) / (d * d);
        case 2:
            return (s2 * d * d - 2.0 * s1 * d1 * d + s * (2.0 * d1 * d1 - d * d2)) /
                   (d * d * d);
        default:
            throw InvalidArgument(
                "npreg derivatives above order 2 are only available left of 0");
    }
}

}  // namespace

DgpKind dgp_from_string(const std::string& name) {
    if (name == "npreg") return DgpKind::npreg;
    if (name == "rdd1") return DgpKind::rdd1;
    if (name == "rdd2") return DgpKind::rdd2;
    throw InvalidArgument("unknown dgp: " + name);
}

std::string to_string(DgpKind kind) {
    switch (kind) {
        case DgpKind::npreg: return "npreg";
        case DgpKind::rdd1: return "rdd1";
        case DgpKind::rdd2: return "rdd2";
    }
    return "?";
}

double DgpSpec::sigma() const {
    return kind == DgpKind::npreg ? 1.0 : 0.1295;
}

double DgpSpec::mean(double x) const {
    switch (kind) {
        case DgpKind::npreg: return npreg_mean(x);
        case DgpKind::rdd1: return poly6(x < 0.0 ? kRdd1Left : kRdd1Right, x);
        case DgpKind::rdd2: return poly6(x < 0.0 ? kRdd2Left : kRdd2Right, x);
    }
    return 0.0;
}

double DgpSpec::deriv(double x, int m) const {
    switch (kind) {
        case DgpKind::npreg: return npreg_deriv(x, m);
        case DgpKind::rdd1:
            return poly6_deriv(x < 0.0 ? kRdd1Left : kRdd1Right, x, m);
        case DgpKind::rdd2:
            return poly6_deriv(x < 0.0 ? kRdd2Left : kRdd2Right, x, m);
    }
    return 0.0;
}

double DgpSpec::density(double x) const {
    if (std::fabs(x) > 1.0) return 0.0;
    if (kind == DgpKind::npreg) return 0.5;  // includes the support endpoints
    // x = 2B - 1 with B ~ Beta(2,4): f(x) = (10/16)(1+x)(1-x)^3
    const double t = 1.0 - x;
    return 0.625 * (1.0 + x) * t * t * t;
}

double DgpSpec::truth(double point) const {
    if (kind == DgpKind::npreg) return mean(point);
    // jump at the cutoff: right intercept minus left intercept
    const double* right = kind == DgpKind::rdd1 ? kRdd1Right : kRdd2Right;
    const double* left = kind == DgpKind::rdd1 ? kRdd1Left : kRdd2Left;
    return poly6(right, point) - poly6(left, point);
}

Sample draw_sample(const DgpSpec& dgp, long n, Rng& stream) {
    if (n < 1) throw InvalidArgument("sample size must be positive");
    Sample s;
    s.x.resize(static_cast<std::size_t>(n));
    s.y.resize(static_cast<std::size_t>(n));
    for (auto& xi : s.x) {
        xi = dgp.kind == DgpKind::npreg ? stream.uniform(-1.0, 1.0)
                                        : 2.0 * stream.beta_2_4() - 1.0;
    }
    const double sd = dgp.sigma();
    for (std::size_t i = 0; i < s.y.size(); ++i) {
        s.y[i] = dgp.mean(s.x[i]) + sd * stream.normal();
    }
    return s;
}

double oracle_bandwidth(const DgpSpec& dgp, double point, long n,
                        Kernel kernel, int order, Region region) {
    if (n < 1) throw InvalidArgument("sample size must be positive");
    ConstantsReport consts = kernel_constants(kernel, order, region);
    double curv, var_num;
    if (dgp.is_rdd()) {
        // jump in the (p+1)-th one-sided derivatives; both sides share the
        // boundary constants by symmetry of the kernel
        const double* right = dgp.kind == DgpKind::rdd1 ? kRdd1Right : kRdd2Right;
        const double* left = dgp.kind == DgpKind::rdd1 ? kRdd1Left : kRdd2Left;
        curv = poly6_deriv(right, point, order + 1) -
               poly6_deriv(left, point, order + 1);
        var_num = 2.0 * dgp.sigma() * dgp.sigma() * consts.k_base;
    } else {
        curv = dgp.deriv(point, order + 1);
        var_num = dgp.sigma() * dgp.sigma() * consts.k_base;
    }
    double fact = 1.0;
    for (int t = 2; t <= order + 1; ++t) fact *= t;
    const double b = curv * consts.c / fact;
    if (b == 0.0) {
        throw ZeroCurvature(
            "bias constant vanishes at this point; the MSE-optimal bandwidth "
            "is undefined (supply a fixed bandwidth)");
    }
    const double f = dgp.density(point);
    if (!(f > 0.0)) {
        throw InvalidArgument("design density vanishes at the point");
    }
    const double v2 = var_num / f;
    const double expo = 1.0 / (2.0 * order + 3.0);
    return std::pow(v2 / (2.0 * (order + 1) * b * b * static_cast<double>(n)),
                    expo);
}

namespace {

struct RepOutcome {
    double h = 0.0;
    bool failed = false;
    // aligned with config.methods
    std::vector<unsigned char> covered;
    std::vector<double> length;
};

int resolve_threads(int requested) {
    if (requested > 0) return requested;
    if (const char* env = std::getenv("NPREG_THREADS")) {
        const int v = std::atoi(env);
        if (v > 0) return v;
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : static_cast<int>(hw);
}

}  // namespace

SimResult run_simulation(const SimConfig& config) {
    if (config.replications < 1) {
        throw InvalidArgument("at least one replication required");
    }
    std::vector<CiMethod> methods = config.methods;
    if (methods.empty()) {
        methods = {CiMethod::naive_gp, CiMethod::naive_lp, CiMethod::rbc_pgp,
                   CiMethod::mplp};
    }

    double oracle_h = 0.0;
    if (config.rule == BandwidthRule::oracle_mse) {
        oracle_h = oracle_bandwidth(config.dgp, config.point, config.n,
                                    config.kernel, config.order, config.region);
    } else if (config.rule == BandwidthRule::fixed) {
        if (!(config.fixed_bandwidth > 0.0)) {
            throw InvalidArgument("fixed bandwidth rule needs bandwidth > 0");
        }
    } else {
        if (static_cast<long>(config.bandwidth_schedule.size()) <
            config.replications) {
            throw InvalidArgument(
                "bandwidth schedule shorter than the replication count");
        }
    }

    const long reps = config.replications;
    std::vector<RepOutcome> outcomes(static_cast<std::size_t>(reps));

    auto run_rep = [&](long r) {
        RepOutcome& out = outcomes[static_cast<std::size_t>(r)];
        out.covered.assign(methods.size(), 0);
        out.length.assign(methods.size(), 0.0);
        switch (config.rule) {
            case BandwidthRule::oracle_mse: out.h = oracle_h; break;
            case BandwidthRule::fixed: out.h = config.fixed_bandwidth; break;
            case BandwidthRule::per_replication:
                out.h = config.bandwidth_schedule[static_cast<std::size_t>(r)];
                break;
        }
        Rng stream(config.seed, static_cast<std::uint64_t>(r));
        Sample sample = draw_sample(config.dgp, config.n, stream);
        const double truth = config.dgp.truth(config.point);
        try {
            std::vector<ConfidenceInterval> intervals;
            if (config.dgp.is_rdd()) {
                RddRequest req;
                req.cutoff = config.point;
                req.bandwidth = out.h;
                req.kernel = config.kernel;
                req.order = config.order;
                req.hc = config.hc;
                req.alpha = config.alpha;
                req.methods = methods;
                RddSample rs{sample.x, sample.y, config.point};
                intervals = analyze_rdd(rs, req).intervals;
            } else {
                PointRequest req;
                req.fit = FitConfig{config.point, out.h, config.order,
                                    config.kernel, Side::both};
                req.hc = config.hc;
                req.alpha = config.alpha;
                req.methods = methods;
                intervals = analyze_point(sample, req).intervals;
            }
            for (std::size_t m = 0; m < methods.size(); ++m) {
                const auto& ci = intervals[m];
                out.covered[m] = ci.lower <= truth && truth <= ci.upper;
                out.length[m] = ci.upper - ci.lower;
            }
        } catch (const Error&) {
            out.failed = true;
        }
    };

    const int threads = std::min<long>(resolve_threads(config.threads), reps);
    if (threads <= 1) {
        for (long r = 0; r < reps; ++r) run_rep(r);
    } else {
        std::vector<std::thread> pool;
        pool.reserve(static_cast<std::size_t>(threads));
        for (int t = 0; t < threads; ++t) {
            pool.emplace_back([&, t] {
                for (long r = t; r < reps; r += threads) run_rep(r);
            });
        }
        for (auto& th : pool) th.join();
    }

    // deterministic ordered reduction
    SimResult result;
    result.replications = reps;
    result.per_method.resize(methods.size());
    std::vector<long> ok_count(methods.size(), 0);
    double h_sum = 0.0;
    for (const RepOutcome& out : outcomes) {
        h_sum += out.h;
        for (std::size_t m = 0; m < methods.size(); ++m) {
            auto& summary = result.per_method[m];
            if (out.failed) {
                ++summary.failures;
            } else {
                ++ok_count[m];
                summary.coverage_pct += out.covered[m];
                summary.avg_length += out.length[m];
            }
        }
    }
    result.avg_bandwidth = h_sum / static_cast<double>(reps);
    for (std::size_t m = 0; m < methods.size(); ++m) {
        auto& summary = result.per_method[m];
        summary.method = methods[m];
        if (ok_count[m] > 0) {
            summary.coverage_pct *= 100.0 / static_cast<double>(ok_count[m]);
            summary.avg_length /= static_cast<double>(ok_count[m]);
        }
    }
    return result;
}

}  // namespace lpinfer
