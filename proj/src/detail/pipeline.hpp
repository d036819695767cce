#pragma once

// Shared machinery behind the local-polynomial operations: sorted window
// queries, the small weighted least-squares solver in scaled coordinates,
// and the staged per-point pipeline (weights, curvature, convolution
// bias-correction pass, order-(p+1) fit).

#include <Eigen/Dense>
#include <utility>
#include <vector>

#include "lpinfer/errors.hpp"
#include "lpinfer/kernels.hpp"
#include "lpinfer/locpoly.hpp"

namespace lpinfer::detail {

inline constexpr double kRankTol = 1e-10;      // scaled singular-value ratio
inline constexpr double kScalingTol = 1e-12;   // |C_LP,n| vs |C_n|
inline constexpr double kVarianceTol = 1e-24;  // boot variance vs y scale^2
inline constexpr double kLeverageTol = 1e-12;  // 1 - leverage floor
inline constexpr int kMaxOrder = 9;

// Small dense types sized for order <= kMaxOrder+1 without heap traffic.
using SmallMat = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, 0, 12, 12>;
using SmallVec = Eigen::Matrix<double, Eigen::Dynamic, 1, 0, 12, 1>;

struct SideFilter {
    Side side = Side::both;
    double cutoff = 0.0;

    bool admits(double x) const {
        switch (side) {
            case Side::both: return true;
            case Side::right_of_cutoff: return x >= cutoff;
            case Side::left_of_cutoff: return x < cutoff;
        }
        return false;
    }
};

/// Sample copied into ascending-x order; `orig[k]` maps back to the input
/// index. Window queries return contiguous sorted ranges.
struct SortedSample {
    std::vector<double> x, y;
    std::vector<int> orig;
    int n = 0;

    explicit SortedSample(const Sample& s);

    /// Half-open sorted-index range with |x - c| < radius, intersected with
    /// the side filter. Both comparisons strict (open kernel support).
    std::pair<int, int> window(double c, double radius,
                               const SideFilter& f) const;
};

/// One kernel-weighted polynomial LS fit at `center` in scaled coordinates
/// u = (x - center)/h. Gram matrix S = Σ K_i r(u_i) r(u_i)'; rank is checked
/// through the eigenvalues of S (singular values of the scaled design are
/// their square roots).
struct LocalSolve {
    int lo = 0, hi = 0;  // in-window sorted range
    int order = 0;
    SmallVec c0;         // S^{-1} iota_0; weights are w_i = nh (c0'r_i) K_i
    SmallVec coef;       // scaled LS coefficients (filled when with_coef)
    SmallMat s_inv;      // filled when with_sinv
};

LocalSolve solve_local(const SortedSample& d, Kernel kernel, double center,
                       double h, const SideFilter& f, int order,
                       bool with_coef, bool with_sinv);

void validate_config(const FitConfig& cfg);

/// Staged computation at one evaluation point. Construction validates and
/// runs the base order-p fit; further stages run on demand.
class Pipeline {
public:
    Pipeline(const SortedSample& data, const FitConfig& cfg);

    const SortedSample& data() const { return *data_; }
    const FitConfig& config() const { return cfg_; }
    double nh() const { return nh_; }

    // base fit (order p)
    int lo1() const { return base_.lo; }
    int hi1() const { return base_.hi; }
    const std::vector<double>& weights() const { return w_; }  // [lo1,hi1)
    double ghat() const { return ghat_; }
    double curvature() const { return cn_; }

    // order-(p+1) fit: scaled coefficients, leverages, GP bias-correction row
    void ensure_aug();
    const SmallVec& aug_coef() const { return aug_.coef; }
    const std::vector<double>& leverages() const { return lev_; }   // [lo1,hi1)
    const std::vector<double>& gp_bc_weights() const { return wgp_; }

    // convolution pass: w_LPbc on the doubled window [lo2,hi2), C_LP,n
    void ensure_lp();
    int lo2() const { return lo2_; }
    int hi2() const { return hi2_; }
    const std::vector<double>& lp_bc() const { return wlpbc_; }     // [lo2,hi2)
    double c_lp() const { return clp_; }
    double q_factor() const;  // throws DegenerateScaling

    /// Scaled regressor u_i for sorted index i.
    double u(int i) const { return (data_->x[i] - cfg_.point) / cfg_.bandwidth; }

private:
    const SortedSample* data_;
    FitConfig cfg_;
    SideFilter filter_;
    double nh_ = 0.0;

    LocalSolve base_;
    std::vector<double> w_;
    double ghat_ = 0.0, cn_ = 0.0;

    bool have_aug_ = false;
    LocalSolve aug_;
    std::vector<double> lev_, wgp_;

    bool have_lp_ = false;
    int lo2_ = 0, hi2_ = 0;
    std::vector<double> wlpbc_;
    double clp_ = 0.0;
};

}  // namespace lpinfer::detail

namespace lpinfer {
enum class HcOrder;
}

namespace lpinfer::detail {

/// HC-adjusted residuals over the pipeline's doubled window [lo2, hi2),
/// locally indexed. Defined in residuals.cpp; shared with bootmoments.
std::vector<double> window_residuals(Pipeline& pipe, HcOrder hc);

}  // namespace lpinfer::detail
