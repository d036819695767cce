#include "lpinfer/kernels.hpp"

#include <algorithm>
#include <array>
#include <cmath>

#include "lpinfer/errors.hpp"

namespace lpinfer {

namespace {

// K(u) = P(|u|) on |u| < 1; coefficients of P in increasing degree.
struct Branch {
    std::array<double, 7> c;
    int deg;
};

const Branch& branch(Kernel k) {
    static const Branch tri{{1.0, -1.0}, 1};
    static const Branch uni{{0.5}, 0};
    static const Branch epa{{0.75, 0.0, -0.75}, 2};
    static const Branch biw{{15.0 / 16, 0.0, -30.0 / 16, 0.0, 15.0 / 16}, 4};
    static const Branch trw{{35.0 / 32, 0.0, -105.0 / 32, 0.0, 105.0 / 32, 0.0, -35.0 / 32}, 6};
    switch (k) {
        case Kernel::triangular: return tri;
        case Kernel::uniform: return uni;
        case Kernel::epanechnikov: return epa;
        case Kernel::biweight: return biw;
        case Kernel::triweight: return trw;
    }
    throw InvalidArgument("unknown kernel");
}

// ∫_0^t u^j Q(u) du for polynomial Q given by coeffs c[0..deg], t in [0,1].
double moment_from_zero(const double* c, int deg, int j, double t) {
    if (t <= 0.0) return 0.0;
    double acc = 0.0;
    double power = std::pow(t, j + 1);  // t^{j+m+1}, starting at m=0
    for (int m = 0; m <= deg; ++m) {
        acc += c[m] * power / static_cast<double>(j + m + 1);
        power *= t;
    }
    return acc;
}

}  // namespace

Kernel kernel_from_string(const std::string& name) {
    if (name == "triangular") return Kernel::triangular;
    if (name == "uniform") return Kernel::uniform;
    if (name == "epanechnikov") return Kernel::epanechnikov;
    if (name == "biweight") return Kernel::biweight;
    if (name == "triweight") return Kernel::triweight;
    throw InvalidArgument("unknown kernel name: " + name);
}

std::string to_string(Kernel k) {
    switch (k) {
        case Kernel::triangular: return "triangular";
        case Kernel::uniform: return "uniform";
        case Kernel::epanechnikov: return "epanechnikov";
        case Kernel::biweight: return "biweight";
        case Kernel::triweight: return "triweight";
    }
    return "?";
}

double eval_kernel(Kernel k, double u) {
    const double a = std::fabs(u);
    if (a >= 1.0) return 0.0;
    const Branch& b = branch(k);
    double v = 0.0;
    for (int m = b.deg; m >= 0; --m) v = v * a + b.c[m];
    return v;
}

double kernel_moment(Kernel k, int j, double lower, double upper, bool squared) {
    if (j < 0) throw InvalidArgument("kernel_moment: power must be >= 0");
    if (!(lower < upper)) {
        throw InvalidRange("kernel_moment: lower must be < upper");
    }
    const double a = std::clamp(lower, -1.0, 1.0);
    const double b = std::clamp(upper, -1.0, 1.0);
    if (a >= b) return 0.0;

    const Branch& br = branch(k);
    std::array<double, 13> q{};
    int deg = br.deg;
    if (!squared) {
        std::copy_n(br.c.begin(), deg + 1, q.begin());
    } else {
        for (int m = 0; m <= br.deg; ++m)
            for (int l = 0; l <= br.deg; ++l) q[m + l] += br.c[m] * br.c[l];
        deg = 2 * br.deg;
    }

    // Split at 0; on [a,0]: u = -t gives (-1)^j ∫_0^{-a} t^j Q(t) dt.
    const double sign = (j % 2 == 0) ? 1.0 : -1.0;
    double total = 0.0;
    if (a < 0.0) {
        const double hi = std::min(-a, 1.0);
        const double lo = std::max(-b, 0.0);
        total += sign * (moment_from_zero(q.data(), deg, j, hi) -
                         moment_from_zero(q.data(), deg, j, lo));
    }
    if (b > 0.0) {
        const double lo = std::max(a, 0.0);
        total += moment_from_zero(q.data(), deg, j, b) -
                 moment_from_zero(q.data(), deg, j, lo);
    }
    return total;
}

}  // namespace lpinfer
