#include "detail/quadrature.hpp"

#include <algorithm>

namespace lpinfer::detail {

double integrate(const std::function<double(double)>& f, double a, double b,
                 double abs_tol, const std::vector<double>& breaks) {
    if (!(a < b)) return 0.0;
    std::vector<double> pts{a};
    for (double v : breaks) {
        if (v > a && v < b) pts.push_back(v);
    }
    pts.push_back(b);
    std::sort(pts.begin(), pts.end());
    double total = 0.0;
    const double seg_tol = abs_tol / static_cast<double>(pts.size() - 1);
    for (std::size_t s = 0; s + 1 < pts.size(); ++s) {
        total += integrate_segment(f, pts[s], pts[s + 1], seg_tol);
    }
    return total;
}

}  // namespace lpinfer::detail
