#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace lpinfer {

/// Standard normal cdf, accurate to machine precision via erfc.
double normal_cdf(double x);

/// Standard normal quantile (inverse cdf), Wichura's AS 241 (PPND16).
/// Absolute error below 1e-15 on (0,1); well inside the 1e-9 contract that
/// keeps interval endpoints reproducible across implementations.
double normal_quantile(double p);

/// Type-7 (linear interpolation of order statistics) empirical quantile of
/// an unsorted sample. p in [0,1].
double empirical_quantile_type7(std::vector<double> values, double p);

/// Same, for data already sorted ascending.
double sorted_quantile_type7(std::span<const double> sorted, double p);

// --- deterministic RNG substreams -----------------------------------------
//
// xoshiro256++ seeded through splitmix64. Substreams are keyed by
// (seed, stream_index): statistically independent streams with identical
// output for any parallel schedule.

class Rng {
public:
    Rng(std::uint64_t seed, std::uint64_t stream);

    std::uint64_t next_u64();

    /// Uniform on (0,1), never exactly 0 or 1.
    double uniform();

    /// Standard normal via inverse-cdf transform of uniform().
    double normal();

    /// Uniform on (a,b).
    double uniform(double a, double b) { return a + (b - a) * uniform(); }

    /// Beta(2,4) as the 2nd order statistic of five uniforms (exact; fixed
    /// consumption of five uniforms per draw).
    double beta_2_4();

private:
    std::uint64_t s_[4];
};

}  // namespace lpinfer
