#include "detail/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace lpinfer::detail {

SortedSample::SortedSample(const Sample& s) {
    if (s.x.size() != s.y.size()) {
        throw InvalidArgument("sample: x and y must have equal length");
    }
    if (s.x.empty()) {
        throw InvalidArgument("sample: at least one observation required");
    }
    n = static_cast<int>(s.x.size());
    for (int i = 0; i < n; ++i) {
        if (!std::isfinite(s.x[i]) || !std::isfinite(s.y[i])) {
            throw InvalidArgument("sample: entries must be finite");
        }
    }
    orig.resize(n);
    std::iota(orig.begin(), orig.end(), 0);
    std::sort(orig.begin(), orig.end(),
              [&](int a, int b) { return s.x[a] < s.x[b]; });
    x.resize(n);
    y.resize(n);
    for (int k = 0; k < n; ++k) {
        x[k] = s.x[orig[k]];
        y[k] = s.y[orig[k]];
    }
}

std::pair<int, int> SortedSample::window(double c, double radius,
                                         const SideFilter& f) const {
    double lo_val = c - radius;
    double hi_val = c + radius;
    bool lo_closed = false;  // kernel support is open; the cutoff is x >= cutoff
    if (f.side == Side::right_of_cutoff && f.cutoff > lo_val) {
        lo_val = f.cutoff;
        lo_closed = true;
    }
    if (f.side == Side::left_of_cutoff) hi_val = std::min(hi_val, f.cutoff);
    auto first = lo_closed ? std::lower_bound(x.begin(), x.end(), lo_val)
                           : std::upper_bound(x.begin(), x.end(), lo_val);
    auto last = std::lower_bound(x.begin(), x.end(), hi_val);  // x < hi_val
    int lo_idx = static_cast<int>(first - x.begin());
    int hi_idx = static_cast<int>(last - x.begin());
    if (lo_idx > hi_idx) lo_idx = hi_idx;
    return {lo_idx, hi_idx};
}

namespace {
inline double ipow(double v, int e) {
    double r = 1.0;
    for (int t = 0; t < e; ++t) r *= v;
    return r;
}
}  // namespace

void validate_config(const FitConfig& cfg) {
    if (!std::isfinite(cfg.point)) {
        throw InvalidArgument("fit config: point must be finite");
    }
    if (!(cfg.bandwidth > 0.0) || !std::isfinite(cfg.bandwidth)) {
        throw InvalidArgument("fit config: bandwidth must be positive");
    }
    // even orders are legitimate here: the residual/bias machinery runs
    // order p+1 fits through the same entry points
    if (cfg.order < 1 || cfg.order > kMaxOrder) {
        throw InvalidArgument("fit config: order must lie between 1 and 9");
    }
}

LocalSolve solve_local(const SortedSample& d, Kernel kernel, double center,
                       double h, const SideFilter& f, int order,
                       bool with_coef, bool with_sinv) {
    auto [lo, hi] = d.window(center, h, f);
    const int m = hi - lo;
    const int dim = order + 1;
    if (m < dim) {
        throw InsufficientLocalData(
            "fewer than order+1 observations in the kernel window (bandwidth "
            "too small for this point)");
    }

    // Power sums M_t = Σ K_i u_i^t fill the Hankel Gram; b_t = Σ K_i u_i^t y_i.
    double M[2 * (kMaxOrder + 1) + 2] = {0.0};
    double b[kMaxOrder + 2] = {0.0};
    const int tmax = 2 * order;
    for (int i = lo; i < hi; ++i) {
        const double u = (d.x[i] - center) / h;
        const double k = eval_kernel(kernel, u);
        double up = k;
        for (int t = 0; t <= tmax; ++t) {
            M[t] += up;
            if (with_coef && t <= order) b[t] += up * d.y[i];
            up *= u;
        }
    }

    SmallMat S(dim, dim);
    for (int r = 0; r < dim; ++r)
        for (int c = 0; c < dim; ++c) S(r, c) = M[r + c];

    Eigen::SelfAdjointEigenSolver<SmallMat> eig(S);
    const auto& lam = eig.eigenvalues();
    const double lam_max = lam(dim - 1);
    if (!(lam_max > 0.0) ||
        lam(0) <= lam_max * kRankTol * kRankTol) {
        throw InsufficientLocalData(
            "rank-deficient local design (fewer than order+1 distinct "
            "regressor values in the window)");
    }

    LocalSolve out;
    out.lo = lo;
    out.hi = hi;
    out.order = order;
    const auto& V = eig.eigenvectors();
    SmallVec inv_lam = lam.cwiseInverse();
    auto apply_inv = [&](const SmallVec& v) -> SmallVec {
        return V * (inv_lam.asDiagonal() * (V.transpose() * v));
    };
    SmallVec e0 = SmallVec::Zero(dim);
    e0(0) = 1.0;
    out.c0 = apply_inv(e0);
    if (with_coef) {
        SmallVec rhs(dim);
        for (int t = 0; t < dim; ++t) rhs(t) = b[t];
        out.coef = apply_inv(rhs);
    }
    if (with_sinv) {
        out.s_inv = V * inv_lam.asDiagonal() * V.transpose();
    }
    return out;
}

Pipeline::Pipeline(const SortedSample& data, const FitConfig& cfg)
    : data_(&data), cfg_(cfg), filter_{cfg.side, cfg.point} {
    validate_config(cfg);
    nh_ = static_cast<double>(data.n) * cfg.bandwidth;

    base_ = solve_local(data, cfg.kernel, cfg.point, cfg.bandwidth, filter_,
                        cfg.order, false, false);
    const int m = base_.hi - base_.lo;
    w_.resize(m);
    const int dim = cfg.order + 1;
    double swy = 0.0, scu = 0.0;
    for (int i = base_.lo; i < base_.hi; ++i) {
        const double ui = u(i);
        const double k = eval_kernel(cfg.kernel, ui);
        double ru = base_.c0(dim - 1);
        for (int t = dim - 2; t >= 0; --t) ru = ru * ui + base_.c0(t);
        const double wi = nh_ * ru * k;
        w_[i - base_.lo] = wi;
        swy += wi * data.y[i];
        scu += wi * ipow(ui, cfg.order + 1);
    }
    ghat_ = swy / nh_;
    cn_ = scu / nh_;
}

void Pipeline::ensure_aug() {
    if (have_aug_) return;
    aug_ = solve_local(*data_, cfg_.kernel, cfg_.point, cfg_.bandwidth, filter_,
                       cfg_.order + 1, true, true);
    // same kernel window as the base fit
    const int m = aug_.hi - aug_.lo;
    lev_.resize(m);
    wgp_.resize(m);
    const int dim = cfg_.order + 2;
    SmallVec r(dim);
    for (int i = aug_.lo; i < aug_.hi; ++i) {
        const double ui = u(i);
        const double k = eval_kernel(cfg_.kernel, ui);
        r(0) = 1.0;
        for (int t = 1; t < dim; ++t) r(t) = r(t - 1) * ui;
        lev_[i - aug_.lo] = k * r.dot(aug_.s_inv * r);
        // w_GPbc,i = C_n iota_{p+1}' Gamma_{p+1}^{-1} r_{p+1}(u_i) K_i
        wgp_[i - aug_.lo] = cn_ * nh_ * aug_.s_inv.row(dim - 1).dot(r) * k;
    }
    have_aug_ = true;
}

void Pipeline::ensure_lp() {
    if (have_lp_) return;
    auto [lo2, hi2] = data_->window(cfg_.point, 2.0 * cfg_.bandwidth, filter_);
    lo2_ = lo2;
    hi2_ = hi2;
    wlpbc_.assign(hi2 - lo2, 0.0);
    clp_ = 0.0;

    const int dim = cfg_.order + 1;
    const double h = cfg_.bandwidth;
    for (int j = base_.lo; j < base_.hi; ++j) {
        const double wj = w_[j - base_.lo];
        LocalSolve inner;
        try {
            inner = solve_local(*data_, cfg_.kernel, data_->x[j], h, filter_,
                                cfg_.order, false, false);
        } catch (const InsufficientLocalData&) {
            throw InsufficientLocalData(
                "inner fit failed at an in-window regressor (sparse design "
                "near the evaluation point)");
        }
        double cnj = 0.0;
        for (int l = inner.lo; l < inner.hi; ++l) {
            const double ul = (data_->x[l] - data_->x[j]) / h;
            const double k = eval_kernel(cfg_.kernel, ul);
            double ru = inner.c0(dim - 1);
            for (int t = dim - 2; t >= 0; --t) ru = ru * ul + inner.c0(t);
            const double a = ru * k;  // w_l(x_j) / (nh)
            wlpbc_[l - lo2_] += wj * a;
            cnj += a * ipow(ul, cfg_.order + 1);
        }
        clp_ += wj * cnj;  // cnj is already C_n(x_j)
    }
    clp_ /= nh_;
    for (int i = base_.lo; i < base_.hi; ++i) {
        wlpbc_[i - lo2_] -= w_[i - base_.lo];
    }
    have_lp_ = true;
}

double Pipeline::q_factor() const {
    if (clp_ == 0.0 || std::fabs(clp_) < kScalingTol * std::fabs(cn_)) {
        throw DegenerateScaling(
            "smoothed curvature C_LP,n vanishes relative to C_n; the modified "
            "interval is unavailable for this design");
    }
    return cn_ / clp_;
}

}  // namespace lpinfer::detail
