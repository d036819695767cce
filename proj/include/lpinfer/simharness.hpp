#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "lpinfer/analyze.hpp"
#include "lpinfer/asymconst.hpp"
#include "lpinfer/stats.hpp"

namespace lpinfer {

/// The three simulation designs: a nonparametric regression curve on
/// Uniform(-1,1) regressors with unit Gaussian noise, and two sharp-design
/// piecewise quintics on 2·Beta(2,4)-1 regressors with sigma = 0.1295.
enum class DgpKind { npreg, rdd1, rdd2 };

DgpKind dgp_from_string(const std::string& name);
std::string to_string(DgpKind kind);

struct DgpSpec {
    DgpKind kind = DgpKind::npreg;

    bool is_rdd() const { return kind != DgpKind::npreg; }
    double sigma() const;
    double mean(double x) const;            // regression function g
    double deriv(double x, int m) const;    // m-th derivative (one-sided at 0)
    double density(double x) const;         // regressor density
    /// g(point) for npreg; the jump g(0+) - g(0-) for the sharp designs.
    double truth(double point) const;
};

enum class BandwidthRule { oracle_mse, fixed, per_replication };

struct SimConfig {
    DgpSpec dgp;
    long n = 500;
    long replications = 1000;
    double alpha = 0.05;
    double point = 0.0;  // evaluation point, or the cutoff for rdd kinds
    Kernel kernel = Kernel::epanechnikov;
    int order = 1;
    HcOrder hc = HcOrder::hc3;
    BandwidthRule rule = BandwidthRule::oracle_mse;
    double fixed_bandwidth = 0.0;
    std::vector<double> bandwidth_schedule;  // per-replication replay
    Region region = Region::interior;        // where the oracle expands
    std::vector<CiMethod> methods;           // default: the four table methods
    std::uint64_t seed = 1;
    int threads = 0;  // 0: NPREG_THREADS env var, then hardware concurrency
};

struct MethodSummary {
    CiMethod method;
    double coverage_pct = 0.0;
    double avg_length = 0.0;
    long failures = 0;
};

struct SimResult {
    std::vector<MethodSummary> per_method;
    double avg_bandwidth = 0.0;
    long replications = 0;
};

/// Deterministic draw for one replication substream. For rdd kinds the
/// cutoff is 0 and x carries the forcing variable.
Sample draw_sample(const DgpSpec& dgp, long n, Rng& stream);

/// Infeasible MSE-optimal bandwidth: minimizes b²h^{2(p+1)} + v²/(nh) with
/// b and v built from the true curvature, noise level, design density, and
/// the region's equivalent-kernel constants. Throws ZeroCurvature when the
/// bias constant vanishes.
double oracle_bandwidth(const DgpSpec& dgp, double point, long n,
                        Kernel kernel, int order, Region region);

/// Runs the replication loop (parallel, deterministic for any worker
/// count) and aggregates coverage and average length per method.
/// Replications where an estimator throws count as failures and drop out
/// of that method's averages.
SimResult run_simulation(const SimConfig& config);

}  // namespace lpinfer
