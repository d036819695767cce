#include <doctest.h>

#include <cmath>
#include <vector>

#include "lpinfer/errors.hpp"
#include "lpinfer/stats.hpp"

using namespace lpinfer;

TEST_CASE("normal quantile matches reference values") {
    // reference values from an independent high-precision implementation
    CHECK(normal_quantile(0.975) == doctest::Approx(1.959963984540054).epsilon(1e-12));
    CHECK(normal_quantile(0.75) == doctest::Approx(0.6744897501960817).epsilon(1e-12));
    CHECK(normal_quantile(0.5) == doctest::Approx(0.0).epsilon(1e-15));
    CHECK(normal_quantile(0.025) == doctest::Approx(-1.959963984540054).epsilon(1e-12));
    CHECK(normal_quantile(1e-10) == doctest::Approx(-6.361340902404056).epsilon(1e-9));
    CHECK_THROWS_AS(normal_quantile(0.0), InvalidProbability);
    CHECK_THROWS_AS(normal_quantile(1.0), InvalidProbability);
}

TEST_CASE("normal cdf and quantile are inverses") {
    for (double p : {0.001, 0.025, 0.2, 0.5, 0.8, 0.975, 0.999}) {
        CHECK(normal_cdf(normal_quantile(p)) == doctest::Approx(p).epsilon(1e-12));
    }
    CHECK(normal_cdf(1.959963984540054 / 2) ==
          doctest::Approx(0.8364524961544296).epsilon(1e-12));
}

TEST_CASE("type-7 quantile: linear interpolation of order statistics") {
    std::vector<double> v{4.0, 1.0, 3.0, 2.0};
    CHECK(empirical_quantile_type7(v, 0.0) == 1.0);
    CHECK(empirical_quantile_type7(v, 1.0) == 4.0);
    CHECK(empirical_quantile_type7(v, 0.5) == doctest::Approx(2.5));
    // (n-1)p = 3*0.25 = 0.75 -> between 1 and 2
    CHECK(empirical_quantile_type7(v, 0.25) == doctest::Approx(1.75));
    CHECK(empirical_quantile_type7({5.0}, 0.3) == 5.0);
}

TEST_CASE("rng substreams are deterministic and well-behaved") {
    Rng a(42, 7), b(42, 7), c(42, 8);
    for (int i = 0; i < 100; ++i) {
        CHECK(a.next_u64() == b.next_u64());
    }
    bool differs = false;
    Rng a2(42, 7);
    for (int i = 0; i < 10; ++i) differs |= a2.next_u64() != c.next_u64();
    CHECK(differs);

    // uniform moments
    Rng u(3, 0);
    double sum = 0.0, sum2 = 0.0;
    const int n = 200000;
    for (int i = 0; i < n; ++i) {
        const double v = u.uniform();
        CHECK(v > 0.0);
        CHECK(v < 1.0);
        sum += v;
        sum2 += v * v;
    }
    CHECK(sum / n == doctest::Approx(0.5).epsilon(0.01));
    CHECK(sum2 / n == doctest::Approx(1.0 / 3).epsilon(0.01));
}

TEST_CASE("normal and beta draws match their first moments") {
    Rng r(11, 0);
    const int n = 200000;
    double nsum = 0.0, nsum2 = 0.0, bsum = 0.0;
    for (int i = 0; i < n; ++i) {
        const double z = r.normal();
        nsum += z;
        nsum2 += z * z;
        bsum += r.beta_2_4();
    }
    CHECK(nsum / n == doctest::Approx(0.0).epsilon(0.02));
    CHECK(std::abs(nsum2 / n - 1.0) < 0.02);
    // Beta(2,4) mean = 1/3
    CHECK(bsum / n == doctest::Approx(1.0 / 3).epsilon(0.01));
}
