#include <doctest.h>

#include <cmath>
#include <functional>

#include "lpinfer/errors.hpp"
#include "lpinfer/kernels.hpp"
#include "lpinfer/stats.hpp"

using namespace lpinfer;

namespace {

// independent oracle: adaptive Simpson quadrature on the raw integrand
double simpson(const std::function<double(double)>& f, double a, double b,
               double fa, double fm, double fb, double tol, int depth) {
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
    const double flm = f(lm), frm = f(rm);
    const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    if (depth > 40 || std::fabs(left + right - whole) < 15.0 * tol) {
        return left + right + (left + right - whole) / 15.0;
    }
    return simpson(f, a, m, fa, flm, fm, 0.5 * tol, depth + 1) +
           simpson(f, m, b, fm, frm, fb, 0.5 * tol, depth + 1);
}

double quad_oracle(const std::function<double(double)>& f, double a, double b,
                   double tol = 1e-12) {
    const double m = 0.5 * (a + b);
    return simpson(f, a, b, f(a), f(m), f(b), tol, 0);
}

}  // namespace

TEST_CASE("kernel evaluation at reference points") {
    CHECK(eval_kernel(Kernel::epanechnikov, 0.0) == doctest::Approx(0.75));
    CHECK(eval_kernel(Kernel::triangular, 1.0) == 0.0);
    CHECK(eval_kernel(Kernel::triangular, -1.0) == 0.0);
    CHECK(eval_kernel(Kernel::uniform, 0.3) == doctest::Approx(0.5));
    CHECK(eval_kernel(Kernel::biweight, 0.0) == doctest::Approx(15.0 / 16));
    CHECK(eval_kernel(Kernel::triweight, 0.0) == doctest::Approx(35.0 / 32));
    CHECK(eval_kernel(Kernel::epanechnikov, 2.0) == 0.0);
    CHECK(eval_kernel(Kernel::epanechnikov, -5.0) == 0.0);
}

TEST_CASE("kernels are symmetric, nonnegative, unit mass") {
    for (Kernel k : kAllKernels) {
        CAPTURE(to_string(k));
        for (double u = 0.0; u <= 1.05; u += 0.01) {
            CHECK(eval_kernel(k, u) == doctest::Approx(eval_kernel(k, -u)));
            CHECK(eval_kernel(k, u) >= 0.0);
        }
        CHECK(kernel_moment(k, 0, -1.0, 1.0) == doctest::Approx(1.0).epsilon(1e-13));
    }
}

TEST_CASE("reference moments") {
    CHECK(kernel_moment(Kernel::epanechnikov, 2, -1.0, 1.0) ==
          doctest::Approx(0.2).epsilon(1e-13));
    CHECK(kernel_moment(Kernel::epanechnikov, 0, -1.0, 1.0, true) ==
          doctest::Approx(0.6).epsilon(1e-13));
    for (Kernel k : kAllKernels) {
        CHECK(kernel_moment(k, 1, -1.0, 1.0) == doctest::Approx(0.0).epsilon(1e-14));
        CHECK(kernel_moment(k, 3, -1.0, 1.0) == doctest::Approx(0.0).epsilon(1e-14));
    }
    // second moments of the textbook forms
    CHECK(kernel_moment(Kernel::triangular, 2, -1.0, 1.0) ==
          doctest::Approx(1.0 / 6).epsilon(1e-13));
    CHECK(kernel_moment(Kernel::uniform, 2, -1.0, 1.0) ==
          doctest::Approx(1.0 / 3).epsilon(1e-13));
    CHECK(kernel_moment(Kernel::biweight, 2, -1.0, 1.0) ==
          doctest::Approx(1.0 / 7).epsilon(1e-13));
    CHECK(kernel_moment(Kernel::triweight, 2, -1.0, 1.0) ==
          doctest::Approx(1.0 / 9).epsilon(1e-13));
}

TEST_CASE("closed-form moments agree with quadrature on random subranges") {
    Rng rng(20240817, 0);
    for (Kernel k : kAllKernels) {
        CAPTURE(to_string(k));
        for (int trial = 0; trial < 25; ++trial) {
            double a = rng.uniform(-1.0, 1.0);
            double b = rng.uniform(-1.0, 1.0);
            if (a > b) std::swap(a, b);
            if (b - a < 1e-3) continue;
            const int j = static_cast<int>(rng.uniform(0.0, 6.999));
            const bool sq = rng.uniform() < 0.5;
            auto f = [&](double u) {
                const double kv = eval_kernel(k, u);
                return (sq ? kv * kv : kv) * std::pow(u, j);
            };
            CHECK(kernel_moment(k, j, a, b, sq) ==
                  doctest::Approx(quad_oracle(f, a, b)).epsilon(1e-10));
        }
    }
}

TEST_CASE("moment range validation") {
    CHECK_THROWS_AS(kernel_moment(Kernel::uniform, 0, 0.5, 0.5), InvalidRange);
    CHECK_THROWS_AS(kernel_moment(Kernel::uniform, 0, 0.7, 0.2), InvalidRange);
    // ranges beyond the support clip to zero mass outside
    CHECK(kernel_moment(Kernel::uniform, 0, -3.0, 3.0) == doctest::Approx(1.0));
    CHECK(kernel_from_string("epanechnikov") == Kernel::epanechnikov);
    CHECK_THROWS_AS(kernel_from_string("gaussian"), InvalidArgument);
}
