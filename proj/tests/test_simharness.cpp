#include <doctest.h>

#include <cmath>

#include "lpinfer/errors.hpp"
#include "lpinfer/simharness.hpp"

using namespace lpinfer;

TEST_CASE("dgp means, intercepts, density") {
    DgpSpec np{DgpKind::npreg};
    CHECK(np.mean(-1.0 / 3) == doctest::Approx(-1.0).epsilon(1e-12));
    CHECK(np.mean(-1.0) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(np.sigma() == 1.0);
    CHECK(np.density(0.3) == doctest::Approx(0.5));
    CHECK(np.truth(-1.0 / 3) == doctest::Approx(-1.0));

    DgpSpec r1{DgpKind::rdd1};
    CHECK(r1.truth(0.0) == doctest::Approx(-3.45));
    CHECK(r1.mean(-1e-12) == doctest::Approx(3.71));
    CHECK(r1.mean(0.0) == doctest::Approx(0.26));
    CHECK(r1.sigma() == doctest::Approx(0.1295));
    CHECK(r1.density(0.0) == doctest::Approx(0.625));

    DgpSpec r2{DgpKind::rdd2};
    CHECK(r2.truth(0.0) == doctest::Approx(0.04));
}

TEST_CASE("draws are deterministic with the stated first moments") {
    DgpSpec np{DgpKind::npreg};
    Rng a(5, 3), b(5, 3);
    Sample s1 = draw_sample(np, 1000, a);
    Sample s2 = draw_sample(np, 1000, b);
    CHECK(s1.x == s2.x);  // bitwise determinism
    CHECK(s1.y == s2.y);

    const long big = 1000000;
    Rng c(6, 0);
    Sample s3 = draw_sample(np, big, c);
    double mx = 0.0;
    for (double x : s3.x) mx += x;
    CHECK(std::fabs(mx / big) < 0.002);

    DgpSpec r1{DgpKind::rdd1};
    Rng d(7, 0);
    Sample s4 = draw_sample(r1, big, d);
    double mb = 0.0;
    for (double x : s4.x) mb += x;
    CHECK(mb / big == doctest::Approx(-1.0 / 3).epsilon(0.006));
}

TEST_CASE("oracle bandwidths reproduce the reference values") {
    DgpSpec np{DgpKind::npreg};
    const double h2000 = oracle_bandwidth(np, -1.0 / 3, 2000,
                                          Kernel::epanechnikov, 1,
                                          Region::interior);
    CHECK(std::fabs(h2000 - 0.125) < 0.002);
    const double h1000 = oracle_bandwidth(np, -1.0 / 3, 1000,
                                          Kernel::epanechnikov, 1,
                                          Region::interior);
    CHECK(std::fabs(h1000 - 0.143) < 0.002);

    const double hb = oracle_bandwidth(np, -1.0, 2000, Kernel::epanechnikov, 1,
                                       Region::boundary);
    CHECK(std::fabs(hb - 0.233) < 0.002);

    DgpSpec r1{DgpKind::rdd1};
    CHECK(std::fabs(oracle_bandwidth(r1, 0.0, 4000, Kernel::triangular, 1,
                                     Region::boundary) -
                    0.054) < 0.002);
    DgpSpec r2{DgpKind::rdd2};
    CHECK(std::fabs(oracle_bandwidth(r2, 0.0, 2000, Kernel::triangular, 1,
                                     Region::boundary) -
                    0.197) < 0.002);
}

TEST_CASE("closed-form minimizer agrees with a grid search") {
    DgpSpec np{DgpKind::npreg};
    ConstantsReport consts =
        kernel_constants(Kernel::epanechnikov, 1, Region::interior);
    const long n = 2000;
    const double b = np.deriv(-1.0 / 3, 2) * consts.c / 2.0;
    const double v2 = consts.k_base / np.density(-1.0 / 3);
    double best_h = 0.0, best = 1e300;
    for (double h = 0.01; h <= 1.0; h += 1e-4) {
        const double amse = b * b * h * h * h * h + v2 / (n * h);
        if (amse < best) {
            best = amse;
            best_h = h;
        }
    }
    const double closed = oracle_bandwidth(np, -1.0 / 3, n, Kernel::epanechnikov,
                                           1, Region::interior);
    CHECK(std::fabs(closed - best_h) < 1e-3);
}

TEST_CASE("zero curvature is reported") {
    DgpSpec np{DgpKind::npreg};
    // g'' vanishes at the sine's inflection point x = -2/3
    CHECK_THROWS_AS(oracle_bandwidth(np, -2.0 / 3, 500, Kernel::epanechnikov, 1,
                                     Region::interior),
                    ZeroCurvature);
}

TEST_CASE("simulation runs are deterministic for any worker count") {
    SimConfig cfg;
    cfg.dgp.kind = DgpKind::npreg;
    cfg.n = 300;
    cfg.replications = 40;
    cfg.point = -1.0 / 3;
    cfg.kernel = Kernel::epanechnikov;
    cfg.rule = BandwidthRule::fixed;
    cfg.fixed_bandwidth = 0.25;
    cfg.seed = 2024;

    cfg.threads = 1;
    SimResult a = run_simulation(cfg);
    cfg.threads = 2;
    SimResult b = run_simulation(cfg);
    REQUIRE(a.per_method.size() == b.per_method.size());
    for (std::size_t i = 0; i < a.per_method.size(); ++i) {
        CHECK(a.per_method[i].coverage_pct == b.per_method[i].coverage_pct);
        CHECK(a.per_method[i].avg_length == b.per_method[i].avg_length);
        CHECK(a.per_method[i].failures == b.per_method[i].failures);
    }
    CHECK(a.avg_bandwidth == doctest::Approx(0.25));
}

TEST_CASE("failed replications are counted and excluded") {
    SimConfig cfg;
    cfg.dgp.kind = DgpKind::npreg;
    cfg.n = 4;  // far too small for the 0.05 window: most reps fail
    cfg.replications = 20;
    cfg.point = -1.0 / 3;
    cfg.rule = BandwidthRule::fixed;
    cfg.fixed_bandwidth = 0.05;
    cfg.seed = 9;
    SimResult res = run_simulation(cfg);
    for (const auto& m : res.per_method) {
        CHECK(m.failures > 0);
        CHECK(m.failures <= res.replications);
    }
}

TEST_CASE("per-replication bandwidth schedules replay") {
    SimConfig cfg;
    cfg.dgp.kind = DgpKind::npreg;
    cfg.n = 400;
    cfg.replications = 10;
    cfg.point = -1.0 / 3;
    cfg.rule = BandwidthRule::per_replication;
    cfg.bandwidth_schedule.assign(10, 0.3);
    cfg.bandwidth_schedule[0] = 0.2;
    cfg.seed = 33;
    SimResult res = run_simulation(cfg);
    CHECK(res.avg_bandwidth == doctest::Approx((0.2 + 9 * 0.3) / 10));

    cfg.bandwidth_schedule.resize(5);
    CHECK_THROWS_AS(run_simulation(cfg), InvalidArgument);
}
