#include <doctest.h>

#include <cmath>
#include <vector>

#include "lpinfer/asymconst.hpp"
#include "lpinfer/bootmoments.hpp"
#include "lpinfer/errors.hpp"
#include "lpinfer/locpoly.hpp"
#include "lpinfer/stats.hpp"

using namespace lpinfer;

namespace {

Sample random_sample(int n, Rng& rng, double lo = -1.0, double hi = 1.0) {
    Sample s;
    s.x.resize(n);
    s.y.resize(n);
    for (int i = 0; i < n; ++i) {
        s.x[i] = rng.uniform(lo, hi);
        s.y[i] = rng.normal();
    }
    return s;
}

Sample grid_sample(int n, double lo, double hi) {
    Sample s;
    s.x.resize(n);
    s.y.assign(n, 0.0);
    for (int i = 0; i < n; ++i) s.x[i] = lo + (hi - lo) * (i + 0.5) / n;
    return s;
}

// Definition-level wild-bootstrap oracle: simulate T* = sqrt(nh)(g*(x) - c*)
// by drawing bootstrap outcomes on the fixed design and re-fitting, without
// any of the closed-form shortcuts. Returns (mean, sd) over B draws.
struct OracleMoments {
    double mean, sd, se_mean, se_sd;
};

enum class Scheme { gp, lp };

OracleMoments wild_oracle(const Sample& s, const FitConfig& cfg,
                          const ResidualVector& resid, Scheme scheme, long B,
                          std::uint64_t seed) {
    const int n = static_cast<int>(s.x.size());
    const double nh = n * cfg.bandwidth;

    // bootstrap conditional mean and its value at the point
    std::vector<double> gstar(n);
    double center = 0.0;
    if (scheme == Scheme::gp) {
        FitConfig aug = cfg;
        aug.order = cfg.order + 1;
        LocalFit fit = local_fit(s, aug);
        for (int i = 0; i < n; ++i) {
            double acc = 0.0, pw = 1.0;
            for (int j = 0; j <= aug.order; ++j) {
                acc += fit.beta[j] * pw;
                pw *= s.x[i] - cfg.point;
            }
            gstar[i] = acc;
        }
        center = fit.beta[0];
    } else {
        for (int i = 0; i < n; ++i) {
            FitConfig at = cfg;
            at.point = s.x[i];
            gstar[i] = local_fit(s, at).ghat;
        }
        FitConfig at = cfg;
        center = local_fit(s, at).ghat;
    }

    WeightVector w = local_weights(s, cfg);
    Sample boot = s;
    double sum = 0.0, sum2 = 0.0;
    for (long b = 0; b < B; ++b) {
        Rng rng(seed, static_cast<std::uint64_t>(b));
        double ghat_star = 0.0;
        for (int i = 0; i < n; ++i) {
            const double ystar = gstar[i] + resid.values[i] * rng.normal();
            ghat_star += w.values[i] * ystar;
        }
        ghat_star /= nh;
        const double t = std::sqrt(nh) * (ghat_star - center);
        sum += t;
        sum2 += t * t;
    }
    OracleMoments out{};
    out.mean = sum / B;
    const double var = (sum2 - B * out.mean * out.mean) / (B - 1);
    out.sd = std::sqrt(var);
    out.se_mean = out.sd / std::sqrt(static_cast<double>(B));
    out.se_sd = out.sd / std::sqrt(2.0 * static_cast<double>(B));
    return out;
}

}  // namespace

TEST_CASE("gp bias: zero on low-degree data, exact on quadratics") {
    Rng rng(31, 0);
    Sample s = random_sample(60, rng);
    FitConfig cfg{0.0, 0.5, 1, Kernel::epanechnikov, Side::both};

    // noiseless data trips the variance guard
    for (std::size_t i = 0; i < s.x.size(); ++i) s.y[i] = 1.0 - 2.0 * s.x[i];
    auto r0 = bc_residuals(s, cfg, HcOrder::hc0);
    CHECK_THROWS_AS(gp_moments(s, cfg, r0), DegenerateVariance);

    // residuals from a noisy copy keep the variance positive while the bias
    // is evaluated on exact polynomial outcomes
    Sample noisy = s;
    Rng noise(32, 0);
    for (auto& y : noisy.y) y += 0.2 * noise.normal();
    auto r = bc_residuals(noisy, cfg, HcOrder::hc3);

    BootstrapMoments lin = gp_moments(s, cfg, r);
    CHECK(std::fabs(lin.bias) < 1e-9);  // order-2 fit has zero leading coef

    // y = x^2: the order-2 fit recovers the curvature exactly, so
    // bias = sqrt(n h^5) * ghat''(x) * C_n / 2 with ghat'' = 2
    for (std::size_t i = 0; i < s.x.size(); ++i) s.y[i] = s.x[i] * s.x[i];
    BootstrapMoments quad = gp_moments(s, cfg, r);
    const double n = static_cast<double>(s.x.size());
    const double expected =
        std::sqrt(n * std::pow(cfg.bandwidth, 5)) * curvature_constant(s, cfg);
    CHECK(quad.bias == doctest::Approx(expected).epsilon(1e-9));
}

TEST_CASE("lp bias: polynomial annihilation and the two closed forms") {
    Rng rng(33, 0);
    Sample s = random_sample(120, rng);
    FitConfig cfg{0.05, 0.45, 1, Kernel::triangular, Side::both};

    // linear data: double smoothing reproduces, bias is exactly zero
    Sample lin = s;
    for (std::size_t i = 0; i < lin.x.size(); ++i) lin.y[i] = 3.0 + 2.0 * lin.x[i];
    auto r_lin = bc_residuals(s, cfg, HcOrder::hc3);  // residual source irrelevant
    BootstrapMoments m_lin = lp_moments(lin, cfg, r_lin);
    CHECK(std::fabs(m_lin.bias) < 1e-9 * 3.0);

    // identity between the direct and the convolution-weight forms
    auto r = bc_residuals(s, cfg, HcOrder::hc3);
    BootstrapMoments m = lp_moments(s, cfg, r);
    const double n = static_cast<double>(s.x.size());
    const double nh = n * cfg.bandwidth;
    WeightVector w = local_weights(s, cfg);
    double smoothed = 0.0;
    for (std::size_t i = 0; i < s.x.size(); ++i) {
        if (w.values[i] == 0.0) continue;
        FitConfig at = cfg;
        at.point = s.x[i];
        smoothed += w.values[i] * local_fit(s, at).ghat;
    }
    FitConfig at_x = cfg;
    const double direct =
        std::sqrt(nh) * (smoothed / nh - local_fit(s, at_x).ghat);
    CHECK(m.bias == doctest::Approx(direct).epsilon(1e-10));
}

TEST_CASE("scale equivariance of all moments") {
    Rng rng(34, 0);
    Sample s = random_sample(100, rng);
    FitConfig cfg{0.0, 0.5, 1, Kernel::biweight, Side::both};
    auto r = bc_residuals(s, cfg, HcOrder::hc3);
    BootstrapMoments gp = gp_moments(s, cfg, r), lp = lp_moments(s, cfg, r),
                     ml = mlp_moments(s, cfg, r);

    const double c = -2.5;
    Sample scaled = s;
    for (auto& y : scaled.y) y *= c;
    auto rc = bc_residuals(scaled, cfg, HcOrder::hc3);
    BootstrapMoments gp_c = gp_moments(scaled, cfg, rc),
                     lp_c = lp_moments(scaled, cfg, rc),
                     ml_c = mlp_moments(scaled, cfg, rc);

    CHECK(gp_c.bias == doctest::Approx(c * gp.bias).epsilon(1e-10));
    CHECK(lp_c.bias == doctest::Approx(c * lp.bias).epsilon(1e-10));
    CHECK(ml_c.bias == doctest::Approx(c * ml.bias).epsilon(1e-10));
    CHECK(gp_c.boot_sd == doctest::Approx(std::fabs(c) * gp.boot_sd).epsilon(1e-10));
    CHECK(gp_c.debiased_sd ==
          doctest::Approx(std::fabs(c) * gp.debiased_sd).epsilon(1e-10));
    CHECK(lp_c.debiased_sd ==
          doctest::Approx(std::fabs(c) * lp.debiased_sd).epsilon(1e-10));
    CHECK(ml_c.debiased_sd ==
          doctest::Approx(std::fabs(c) * ml.debiased_sd).epsilon(1e-10));
}

TEST_CASE("mlp is the q-scaled lp scheme") {
    Rng rng(35, 0);
    Sample s = random_sample(90, rng, 0.0, 1.0);  // one-sided design
    FitConfig cfg{0.0, 0.4, 1, Kernel::epanechnikov, Side::both};
    auto r = bc_residuals(s, cfg, HcOrder::hc3);
    BootstrapMoments lp = lp_moments(s, cfg, r);
    BootstrapMoments ml = mlp_moments(s, cfg, r);
    QFactor q = q_factor(s, cfg);
    CHECK(ml.q == doctest::Approx(q.q).epsilon(1e-12));
    CHECK(ml.bias == doctest::Approx(q.q * lp.bias).epsilon(1e-12));
    CHECK(ml.boot_sd == doctest::Approx(std::fabs(q.q) * lp.boot_sd).epsilon(1e-12));
    CHECK(ml.debiased_sd > 0.0);
}

TEST_CASE("interior: mlp and lp agree asymptotically") {
    Sample s = grid_sample(5000, -1.0, 1.0);
    Rng rng(36, 0);
    for (auto& y : s.y) y = rng.normal();
    FitConfig cfg{0.0, 0.08, 1, Kernel::epanechnikov, Side::both};
    auto r = bc_residuals(s, cfg, HcOrder::hc3);
    BootstrapMoments lp = lp_moments(s, cfg, r);
    BootstrapMoments ml = mlp_moments(s, cfg, r);
    CHECK(std::fabs(ml.q - 1.0) < 0.05);
    CHECK(ml.debiased_sd == doctest::Approx(lp.debiased_sd).epsilon(0.05));
    if (lp.bias != 0.0) {
        CHECK(ml.bias / lp.bias == doctest::Approx(ml.q).epsilon(1e-12));
    }
}

TEST_CASE("boundary: debiased variance approaches the mPLP constant") {
    // dense one-sided design on [0,1]: v_mPLP^2 * f / sigma^2 -> K_mPLP
    Sample s = grid_sample(5000, 0.0, 1.0);
    Rng rng(37, 0);
    const double sigma = 0.7;
    for (auto& y : s.y) y = sigma * rng.normal();
    FitConfig cfg{0.0, 0.12, 1, Kernel::epanechnikov, Side::both};
    auto r = bc_residuals(s, cfg, HcOrder::hc3);
    BootstrapMoments ml = mlp_moments(s, cfg, r);
    ConstantsReport rep =
        kernel_constants(Kernel::epanechnikov, 1, Region::boundary);
    const double f0 = 1.0;  // uniform grid density on [0,1]
    const double limit = rep.k_mplp * sigma * sigma / f0;
    CHECK(ml.debiased_sd * ml.debiased_sd == doctest::Approx(limit).epsilon(0.10));
}

TEST_CASE("closed-form moments match the resampling oracle (n=20)") {
    Rng rng(38, 0);
    Sample s = random_sample(20, rng, -1.0, 1.0);
    FitConfig cfg{0.0, 0.8, 1, Kernel::epanechnikov, Side::both};
    auto r = bc_residuals(s, cfg, HcOrder::hc3);

    const long B = 200000;
    SUBCASE("gp scheme") {
        BootstrapMoments m = gp_moments(s, cfg, r);
        OracleMoments o = wild_oracle(s, cfg, r, Scheme::gp, B, 99);
        CHECK(std::fabs(m.bias - o.mean) < 3.0 * o.se_mean);
        CHECK(std::fabs(m.boot_sd - o.sd) < 3.0 * o.se_sd);
    }
    SUBCASE("lp scheme") {
        BootstrapMoments m = lp_moments(s, cfg, r);
        OracleMoments o = wild_oracle(s, cfg, r, Scheme::lp, B, 100);
        CHECK(std::fabs(m.bias - o.mean) < 3.0 * o.se_mean);
        CHECK(std::fabs(m.boot_sd - o.sd) < 3.0 * o.se_sd);
    }
}

TEST_CASE("debiased variances are nonnegative by construction") {
    Rng rng(39, 0);
    for (int trial = 0; trial < 10; ++trial) {
        Sample s = random_sample(50, rng);
        FitConfig cfg{rng.uniform(-0.4, 0.4), rng.uniform(0.4, 0.9), 1,
                      kAllKernels[trial % 5], Side::both};
        auto r = bc_residuals(s, cfg, HcOrder::hc2);
        CHECK(lp_moments(s, cfg, r).debiased_sd >= 0.0);
        CHECK(mlp_moments(s, cfg, r).debiased_sd >= 0.0);
    }
}
