// Python bindings for the core operations: fits, weights, bootstrap
// moments, intervals, sharp-design analysis, asymptotic constants, and the
// Monte Carlo harness.

#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "lpinfer/analyze.hpp"
#include "lpinfer/asymconst.hpp"
#include "lpinfer/errors.hpp"
#include "lpinfer/report.hpp"
#include "lpinfer/simharness.hpp"

namespace py = pybind11;
using namespace lpinfer;

namespace {

Sample make_sample(const std::vector<double>& x, const std::vector<double>& y) {
    return Sample{x, y};
}

FitConfig make_config(double point, double bandwidth, int order,
                      const std::string& kernel, const std::string& side) {
    FitConfig cfg;
    cfg.point = point;
    cfg.bandwidth = bandwidth;
    cfg.order = order;
    cfg.kernel = kernel_from_string(kernel);
    if (side == "both") cfg.side = Side::both;
    else if (side == "right_of_cutoff") cfg.side = Side::right_of_cutoff;
    else if (side == "left_of_cutoff") cfg.side = Side::left_of_cutoff;
    else throw InvalidArgument("unknown side: " + side);
    return cfg;
}

py::dict interval_dict(const ConfidenceInterval& ci) {
    py::dict d;
    d["method"] = to_string(ci.method);
    d["lower"] = ci.lower;
    d["upper"] = ci.upper;
    d["estimate"] = ci.estimate;
    d["bias_correction"] = ci.bias_correction;
    d["se"] = ci.se;
    d["alpha"] = ci.alpha;
    d["warnings"] = ci.warnings;
    return d;
}

py::dict moments_dict(const BootstrapMoments& m) {
    py::dict d;
    d["method"] = to_string(m.method);
    d["bias"] = m.bias;
    d["boot_sd"] = m.boot_sd;
    d["debiased_sd"] = m.debiased_sd;
    d["q"] = m.q;
    d["nh"] = m.nh;
    return d;
}

std::vector<CiMethod> method_list(const std::vector<std::string>& names) {
    std::vector<CiMethod> out;
    for (const auto& n : names) out.push_back(ci_method_from_string(n));
    return out;
}

std::optional<ResamplingPlan> plan_from(long reps,
                                        const std::string& multiplier,
                                        std::uint64_t seed, bool resample) {
    if (!resample) return std::nullopt;
    return ResamplingPlan{reps, multiplier_from_string(multiplier), seed};
}

}  // namespace

PYBIND11_MODULE(_lpinfer, m) {
    m.doc() =
        "local polynomial and sharp-RDD inference with analytic prepivoted "
        "bootstrap confidence intervals";

    py::register_exception<Error>(m, "LpinferError");

    m.def("eval_kernel",
          [](const std::string& k, double u) {
              return eval_kernel(kernel_from_string(k), u);
          },
          py::arg("kernel"), py::arg("u"));

    m.def("kernel_moment",
          [](const std::string& k, int j, double lower, double upper,
             bool squared) {
              return kernel_moment(kernel_from_string(k), j, lower, upper,
                                   squared);
          },
          py::arg("kernel"), py::arg("j"), py::arg("lower"), py::arg("upper"),
          py::arg("squared") = false);

    m.def("local_fit",
          [](const std::vector<double>& x, const std::vector<double>& y,
             double point, double bandwidth, int order,
             const std::string& kernel, const std::string& side) {
              LocalFit fit = local_fit(
                  make_sample(x, y),
                  make_config(point, bandwidth, order, kernel, side));
              py::dict d;
              d["beta"] = fit.beta;
              d["ghat"] = fit.ghat;
              d["curvature"] = fit.curvature;
              d["weights"] = fit.weights.values;
              d["effective_n"] = fit.weights.effective_n;
              return d;
          },
          py::arg("x"), py::arg("y"), py::arg("point"), py::arg("bandwidth"),
          py::arg("order") = 1, py::arg("kernel") = "epanechnikov",
          py::arg("side") = "both");

    m.def("local_weights",
          [](const std::vector<double>& x, const std::vector<double>& y,
             double point, double bandwidth, int order,
             const std::string& kernel, const std::string& side) {
              return local_weights(
                         make_sample(x, y),
                         make_config(point, bandwidth, order, kernel, side))
                  .values;
          },
          py::arg("x"), py::arg("y"), py::arg("point"), py::arg("bandwidth"),
          py::arg("order") = 1, py::arg("kernel") = "epanechnikov",
          py::arg("side") = "both");

    m.def("lp_bc_weights",
          [](const std::vector<double>& x, const std::vector<double>& y,
             double point, double bandwidth, int order,
             const std::string& kernel, const std::string& side) {
              return lp_bc_weights(
                  make_sample(x, y),
                  make_config(point, bandwidth, order, kernel, side));
          },
          py::arg("x"), py::arg("y"), py::arg("point"), py::arg("bandwidth"),
          py::arg("order") = 1, py::arg("kernel") = "epanechnikov",
          py::arg("side") = "both");

    m.def("q_factor",
          [](const std::vector<double>& x, const std::vector<double>& y,
             double point, double bandwidth, int order,
             const std::string& kernel, const std::string& side) {
              QFactor q = q_factor(
                  make_sample(x, y),
                  make_config(point, bandwidth, order, kernel, side));
              return py::make_tuple(q.q, q.c_n, q.c_lp_n);
          },
          py::arg("x"), py::arg("y"), py::arg("point"), py::arg("bandwidth"),
          py::arg("order") = 1, py::arg("kernel") = "epanechnikov",
          py::arg("side") = "both");

    m.def("bc_residuals",
          [](const std::vector<double>& x, const std::vector<double>& y,
             double point, double bandwidth, int order,
             const std::string& kernel, const std::string& hc,
             const std::string& side) {
              ResidualVector r = bc_residuals(
                  make_sample(x, y),
                  make_config(point, bandwidth, order, kernel, side),
                  hc_from_string(hc));
              py::dict d;
              d["values"] = r.values;
              d["leverages"] = r.leverages;
              d["hc"] = to_string(r.hc_order);
              return d;
          },
          py::arg("x"), py::arg("y"), py::arg("point"), py::arg("bandwidth"),
          py::arg("order") = 1, py::arg("kernel") = "epanechnikov",
          py::arg("hc") = "hc3", py::arg("side") = "both");

    m.def("bootstrap_moments",
          [](const std::vector<double>& x, const std::vector<double>& y,
             double point, double bandwidth, const std::string& method,
             int order, const std::string& kernel, const std::string& hc,
             const std::string& side) {
              Sample s = make_sample(x, y);
              FitConfig cfg = make_config(point, bandwidth, order, kernel, side);
              ResidualVector r = bc_residuals(s, cfg, hc_from_string(hc));
              BootstrapMoments mm;
              if (method == "gp") mm = gp_moments(s, cfg, r);
              else if (method == "lp") mm = lp_moments(s, cfg, r);
              else if (method == "mlp") mm = mlp_moments(s, cfg, r);
              else throw InvalidArgument("method must be gp, lp, or mlp");
              return moments_dict(mm);
          },
          py::arg("x"), py::arg("y"), py::arg("point"), py::arg("bandwidth"),
          py::arg("method"), py::arg("order") = 1,
          py::arg("kernel") = "epanechnikov", py::arg("hc") = "hc3",
          py::arg("side") = "both");

    m.def("ci",
          [](const std::vector<double>& x, const std::vector<double>& y,
             double point, double bandwidth, double alpha, int order,
             const std::string& kernel, const std::string& hc,
             const std::vector<std::string>& methods,
             const std::string& bootstrap, long reps,
             const std::string& multiplier, std::uint64_t seed) {
              PointRequest req;
              req.fit = make_config(point, bandwidth, order, kernel, "both");
              req.hc = hc_from_string(hc);
              req.alpha = alpha;
              req.methods = method_list(methods);
              req.plan =
                  plan_from(reps, multiplier, seed, bootstrap == "resampled");
              PointAnalysis res = analyze_point(make_sample(x, y), req);
              py::dict d;
              d["estimate"] = res.estimate;
              d["n_eff"] = res.n_eff;
              d["c_n"] = res.c_n;
              d["c_lp_n"] = res.c_lp_n;
              d["q_n"] = res.q_n;
              d["warnings"] = res.warnings;
              py::list intervals;
              for (const auto& ci : res.intervals)
                  intervals.append(interval_dict(ci));
              d["intervals"] = intervals;
              return d;
          },
          py::arg("x"), py::arg("y"), py::arg("point"), py::arg("bandwidth"),
          py::arg("alpha") = 0.05, py::arg("order") = 1,
          py::arg("kernel") = "epanechnikov", py::arg("hc") = "hc3",
          py::arg("methods") = std::vector<std::string>{},
          py::arg("bootstrap") = "analytic", py::arg("reps") = 2000,
          py::arg("multiplier") = "gaussian", py::arg("seed") = 0);

    m.def("rdd",
          [](const std::vector<double>& x, const std::vector<double>& y,
             double cutoff, double bandwidth, double alpha, int order,
             const std::string& kernel, const std::string& hc,
             const std::vector<std::string>& methods,
             const std::string& bootstrap, long reps,
             const std::string& multiplier, std::uint64_t seed) {
              RddRequest req;
              req.cutoff = cutoff;
              req.bandwidth = bandwidth;
              req.kernel = kernel_from_string(kernel);
              req.order = order;
              req.hc = hc_from_string(hc);
              req.alpha = alpha;
              req.methods = method_list(methods);
              req.plan =
                  plan_from(reps, multiplier, seed, bootstrap == "resampled");
              RddAnalysis res = analyze_rdd(RddSample{x, y, cutoff}, req);
              py::dict d;
              d["tau"] = res.tau;
              d["n_eff_right"] = res.n_eff_plus;
              d["n_eff_left"] = res.n_eff_minus;
              d["q_right"] = res.q_plus;
              d["q_left"] = res.q_minus;
              d["warnings"] = res.warnings;
              py::list intervals;
              for (const auto& ci : res.intervals)
                  intervals.append(interval_dict(ci));
              d["intervals"] = intervals;
              return d;
          },
          py::arg("x"), py::arg("y"), py::arg("cutoff"), py::arg("bandwidth"),
          py::arg("alpha") = 0.05, py::arg("order") = 1,
          py::arg("kernel") = "triangular", py::arg("hc") = "hc3",
          py::arg("methods") = std::vector<std::string>{},
          py::arg("bootstrap") = "analytic", py::arg("reps") = 2000,
          py::arg("multiplier") = "gaussian", py::arg("seed") = 0);

    m.def("equivalent_kernel",
          [](const std::string& kernel, int order, const std::string& region,
             double u, double s) {
              return equivalent_kernel(kernel_from_string(kernel), order,
                                       region_from_string(region), u, s);
          },
          py::arg("kernel"), py::arg("order"), py::arg("region"), py::arg("u"),
          py::arg("s") = 0.0);

    m.def("convolution_kernel",
          [](const std::string& kernel, int order, const std::string& region,
             double u) {
              return convolution_kernel(kernel_from_string(kernel), order,
                                        region_from_string(region), u);
          },
          py::arg("kernel"), py::arg("order"), py::arg("region"), py::arg("u"));

    m.def("kernel_constants",
          [](const std::string& kernel, int order, const std::string& region) {
              ConstantsReport r = kernel_constants(
                  kernel_from_string(kernel), order, region_from_string(region));
              py::dict d;
              d["kernel"] = to_string(r.kernel);
              d["order"] = r.order;
              d["region"] = to_string(r.region);
              d["c"] = r.c;
              d["c_lp"] = r.c_lp;
              d["q"] = r.q;
              d["k_base"] = r.k_base;
              d["k_plp"] = r.k_plp;
              d["k_mplp"] = r.k_mplp;
              d["k_rbc"] = r.k_rbc;
              d["length_ratio"] = r.length_ratio;
              return d;
          },
          py::arg("kernel"), py::arg("order") = 1,
          py::arg("region") = "interior");

    m.def("oracle_bandwidth",
          [](const std::string& dgp, double point, long n,
             const std::string& kernel, int order, const std::string& region) {
              DgpSpec spec{dgp_from_string(dgp)};
              return oracle_bandwidth(spec, point, n, kernel_from_string(kernel),
                                      order, region_from_string(region));
          },
          py::arg("dgp"), py::arg("point"), py::arg("n"), py::arg("kernel"),
          py::arg("order") = 1, py::arg("region") = "interior");

    m.def("draw_sample",
          [](const std::string& dgp, long n, std::uint64_t seed,
             std::uint64_t stream) {
              DgpSpec spec{dgp_from_string(dgp)};
              Rng rng(seed, stream);
              Sample s = draw_sample(spec, n, rng);
              return py::make_tuple(s.x, s.y);
          },
          py::arg("dgp"), py::arg("n"), py::arg("seed"), py::arg("stream") = 0);

    m.def("run_simulation",
          [](const std::string& dgp, long n, long reps, double point,
             const std::string& kernel, const std::string& region,
             const std::string& rule, double bandwidth, double alpha,
             int order, const std::string& hc,
             const std::vector<std::string>& methods, std::uint64_t seed,
             int threads) {
              SimConfig cfg;
              cfg.dgp.kind = dgp_from_string(dgp);
              cfg.n = n;
              cfg.replications = reps;
              cfg.point = point;
              cfg.kernel = kernel_from_string(kernel);
              cfg.region = region_from_string(region);
              if (rule == "oracle") {
                  cfg.rule = BandwidthRule::oracle_mse;
              } else if (rule == "fixed") {
                  cfg.rule = BandwidthRule::fixed;
                  cfg.fixed_bandwidth = bandwidth;
              } else {
                  throw InvalidArgument("rule must be 'oracle' or 'fixed'");
              }
              cfg.alpha = alpha;
              cfg.order = order;
              cfg.hc = hc_from_string(hc);
              if (!methods.empty()) cfg.methods = method_list(methods);
              cfg.seed = seed;
              cfg.threads = threads;
              SimResult res = run_simulation(cfg);
              py::list rows;
              for (const auto& mm : res.per_method) {
                  py::dict row;
                  row["method"] = to_string(mm.method);
                  row["coverage"] = mm.coverage_pct;
                  row["length"] = mm.avg_length;
                  row["failures"] = mm.failures;
                  rows.append(row);
              }
              py::dict d;
              d["per_method"] = rows;
              d["avg_bandwidth"] = res.avg_bandwidth;
              d["replications"] = res.replications;
              return d;
          },
          py::arg("dgp"), py::arg("n"), py::arg("reps"), py::arg("point"),
          py::arg("kernel") = "epanechnikov", py::arg("region") = "interior",
          py::arg("rule") = "oracle", py::arg("bandwidth") = 0.0,
          py::arg("alpha") = 0.05, py::arg("order") = 1, py::arg("hc") = "hc3",
          py::arg("methods") = std::vector<std::string>{},
          py::arg("seed") = 1, py::arg("threads") = 0);

    m.def("normal_quantile", &normal_quantile, py::arg("p"));
    m.def("normal_cdf", &normal_cdf, py::arg("x"));
    m.def("prepivot_cdf_apply", &prepivot_cdf_apply, py::arg("m_hat"),
          py::arg("u"));
    m.def("prepivot_cdf_inverse", &prepivot_cdf_inverse, py::arg("m_hat"),
          py::arg("a"));
}
