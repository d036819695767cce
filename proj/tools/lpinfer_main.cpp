// lpinfer: bias-aware confidence intervals for local polynomial regression
// and sharp regression-discontinuity designs, with an asymptotic-constants
// engine and a Monte Carlo coverage harness.

#include <CLI11.hpp>
#include <fstream>
#include <iostream>
#include <json.hpp>
#include <optional>

#include "lpinfer/analyze.hpp"
#include "lpinfer/asymconst.hpp"
#include "lpinfer/errors.hpp"
#include "lpinfer/report.hpp"
#include "lpinfer/simharness.hpp"

using nlohmann::ordered_json;
using namespace lpinfer;

namespace {

constexpr int kSchemaVersion = 1;

void write_text(const std::string& text, const std::string& out_path) {
    if (out_path.empty() || out_path == "-") {
        std::cout << text;
        return;
    }
    std::ofstream out(out_path);
    if (!out) throw InvalidArgument("cannot open output file: " + out_path);
    out << text;
}

void emit_report(const ordered_json& report, const std::string& format,
                 const std::string& out_path, const std::string& text_alt) {
    if (format == "json") {
        write_text(report.dump(2) + "\n", out_path);
    } else {
        write_text(text_alt, out_path);
    }
}

ordered_json interval_json(const ConfidenceInterval& ci) {
    ordered_json j;
    j["method"] = to_string(ci.method);
    j["lower"] = ci.lower;
    j["upper"] = ci.upper;
    j["estimate"] = ci.estimate;
    j["bias_correction"] = ci.bias_correction;
    j["se"] = ci.se;
    j["alpha"] = ci.alpha;
    j["warnings"] = ci.warnings;
    return j;
}

std::string intervals_csv(const std::vector<ConfidenceInterval>& cis) {
    std::string s = "method,lower,upper,estimate,bias_correction,se,alpha\n";
    for (const auto& ci : cis) {
        s += to_string(ci.method) + "," + format_double(ci.lower) + "," +
             format_double(ci.upper) + "," + format_double(ci.estimate) + "," +
             format_double(ci.bias_correction) + "," + format_double(ci.se) +
             "," + format_double(ci.alpha) + "\n";
    }
    return s;
}

std::string intervals_text(const std::vector<ConfidenceInterval>& cis) {
    char buf[160];
    std::string s;
    for (const auto& ci : cis) {
        std::snprintf(buf, sizeof buf,
                      "%-12s [%10.4f, %10.4f]  est %9.4f  bias %9.4f  se %8.4f%s\n",
                      to_string(ci.method).c_str(), ci.lower, ci.upper,
                      ci.estimate, ci.bias_correction, ci.se,
                      ci.warnings.empty() ? "" : "  !");
        s += buf;
    }
    return s;
}

std::vector<CiMethod> parse_methods(const std::vector<std::string>& names) {
    std::vector<CiMethod> methods;
    for (const auto& name : names) {
        if (name == "all") return {};
        methods.push_back(ci_method_from_string(name));
    }
    return methods;
}

std::optional<ResamplingPlan> make_plan(const std::string& bootstrap,
                                        long reps,
                                        const std::string& multiplier,
                                        std::uint64_t seed) {
    if (bootstrap == "analytic") return std::nullopt;
    if (bootstrap != "resampled") {
        throw InvalidArgument("bootstrap must be 'analytic' or 'resampled'");
    }
    ResamplingPlan plan;
    plan.replications = reps;
    plan.multiplier = multiplier_from_string(multiplier);
    plan.seed = seed;
    return plan;
}

// display rounding, half away from zero; the epsilon absorbs quadrature
// noise on values sitting exactly on a half-point (e.g. 9/8)
// Expands `--config FILE` (key=value lines, '#' comments) into ordinary
// --key=value tokens placed right after the subcommand, so explicit flags
// override file entries. Keys already present on the command line are
// dropped from the file expansion.
std::vector<std::string> expand_config(int argc, char** argv) {
    std::vector<std::string> args(argv, argv + argc);
    std::string path;
    for (std::size_t i = 1; i < args.size();) {
        if (args[i] == "--config" && i + 1 < args.size()) {
            path = args[i + 1];
            args.erase(args.begin() + static_cast<long>(i),
                       args.begin() + static_cast<long>(i) + 2);
        } else if (args[i].rfind("--config=", 0) == 0) {
            path = args[i].substr(9);
            args.erase(args.begin() + static_cast<long>(i));
        } else {
            ++i;
        }
    }
    if (path.empty()) return args;

    std::ifstream in(path);
    if (!in) throw InvalidArgument("cannot open config file: " + path);
    std::vector<std::string> expansion;
    std::string line;
    while (std::getline(in, line)) {
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.resize(hash);
        const auto eq = line.find('=');
        if (eq == std::string::npos) continue;
        auto trim = [](std::string s) {
            const auto a = s.find_first_not_of(" \t\r");
            if (a == std::string::npos) return std::string();
            const auto b = s.find_last_not_of(" \t\r");
            return s.substr(a, b - a + 1);
        };
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty()) continue;
        bool overridden = false;
        for (const auto& a : args) {
            if (a == "--" + key || a.rfind("--" + key + "=", 0) == 0) {
                overridden = true;
                break;
            }
        }
        if (!overridden) expansion.push_back("--" + key + "=" + value);
    }
    // insert after the subcommand token
    const std::size_t at = args.size() >= 2 ? 2 : args.size();
    args.insert(args.begin() + static_cast<long>(at), expansion.begin(),
                expansion.end());
    return args;
}

double round2(double v) {
    return std::copysign(std::floor(std::fabs(v) * 100.0 + 0.5 + 1e-9), v) /
           100.0;
}

// rounded to the display convention of the reference tables
ordered_json constants_json(const ConstantsReport& rep) {
    ordered_json j;
    j["kernel"] = to_string(rep.kernel);
    j["order"] = rep.order;
    j["region"] = to_string(rep.region);
    j["c"] = rep.c;
    j["c_lp"] = rep.c_lp;
    j["q"] = rep.q;
    j["k_base"] = rep.k_base;
    j["k_plp"] = rep.k_plp;
    j["k_mplp"] = rep.k_mplp;
    j["k_rbc"] = rep.k_rbc;
    j["length_ratio"] = rep.length_ratio;
    j["table"] = {{"k_plp", round2(rep.k_plp)},
                  {"k_mplp", round2(rep.k_mplp)},
                  {"k_rbc", round2(rep.k_rbc)},
                  {"length_ratio", round2(rep.length_ratio)}};
    return j;
}

// --- subcommand state -------------------------------------------------------

struct CiArgs {
    std::string input, format = "json", out, residuals = "hc3";
    std::string bootstrap = "analytic", multiplier = "gaussian";
    std::vector<std::string> methods{"all"};
    std::string kernel = "epanechnikov";
    double point = 0.0, bandwidth = 0.0, alpha = 0.05;
    int order = 1;
    long reps = 2000;
    std::uint64_t seed = 0;
};

struct RddArgs {
    std::string input, format = "json", out, residuals = "hc3";
    std::string bootstrap = "analytic", multiplier = "gaussian";
    std::vector<std::string> methods{"all"};
    std::string kernel = "triangular", kernel_left, kernel_right;
    double cutoff = 0.0, bandwidth = 0.0, bandwidth_left = 0.0,
           bandwidth_right = 0.0, alpha = 0.05;
    int order = 1;
    long reps = 2000;
    std::uint64_t seed = 0;
};

struct ConstArgs {
    std::string kernel, region, emit_grid, format = "json", out;
    bool all = false;
    int order = 1;
    double grid_step = 0.01;
};

struct SimArgs {
    int table = 0;
    std::string dgp, eval = "int", kernel, h_arg, out, residuals = "hc3";
    long n = 2000, reps = 5000;
    bool oracle = false;
    double alpha = 0.05;
    int order = 1, threads = 0;
    std::uint64_t seed = 1;
};

int run_ci(const CiArgs& a) {
    Sample sample = ingest_sample(a.input);
    PointRequest req;
    req.fit = FitConfig{a.point, a.bandwidth, a.order,
                        kernel_from_string(a.kernel), Side::both};
    req.hc = hc_from_string(a.residuals);
    req.alpha = a.alpha;
    req.methods = parse_methods(a.methods);
    req.plan = make_plan(a.bootstrap, a.reps, a.multiplier, a.seed);
    PointAnalysis res = analyze_point(sample, req);

    ordered_json j;
    j["schema_version"] = kSchemaVersion;
    j["request"] = {{"command", "ci"},
                    {"input", a.input},
                    {"point", a.point},
                    {"bandwidth", a.bandwidth},
                    {"order", a.order},
                    {"kernel", a.kernel},
                    {"alpha", a.alpha},
                    {"residuals", a.residuals},
                    {"methods", a.methods},
                    {"bootstrap", a.bootstrap},
                    {"reps", a.reps},
                    {"multiplier", a.multiplier},
                    {"seed", a.seed}};
    j["estimate"] = res.estimate;
    j["intervals"] = ordered_json::array();
    for (const auto& ci : res.intervals) j["intervals"].push_back(interval_json(ci));
    j["diagnostics"] = {{"n", sample.x.size()},
                        {"n_eff", res.n_eff},
                        {"h", a.bandwidth},
                        {"nh", res.nh},
                        {"c_n", res.c_n},
                        {"c_lp_n", res.c_lp_n},
                        {"q_n", res.q_n},
                        {"warnings", res.warnings}};
    emit_report(j, a.format, a.out,
                a.format == "csv" ? intervals_csv(res.intervals)
                                  : intervals_text(res.intervals));
    return 0;
}

int run_rdd(const RddArgs& a) {
    RddSample sample = ingest_rdd_sample(a.input, a.cutoff);
    RddRequest req;
    req.cutoff = a.cutoff;
    req.bandwidth = a.bandwidth;
    if (a.bandwidth_left > 0.0) req.bandwidth_left = a.bandwidth_left;
    if (a.bandwidth_right > 0.0) req.bandwidth_right = a.bandwidth_right;
    req.kernel = kernel_from_string(a.kernel);
    if (!a.kernel_left.empty()) req.kernel_left = kernel_from_string(a.kernel_left);
    if (!a.kernel_right.empty())
        req.kernel_right = kernel_from_string(a.kernel_right);
    req.order = a.order;
    req.hc = hc_from_string(a.residuals);
    req.alpha = a.alpha;
    req.methods = parse_methods(a.methods);
    req.plan = make_plan(a.bootstrap, a.reps, a.multiplier, a.seed);
    RddAnalysis res = analyze_rdd(sample, req);

    ordered_json j;
    j["schema_version"] = kSchemaVersion;
    j["request"] = {{"command", "rdd"},
                    {"input", a.input},
                    {"cutoff", a.cutoff},
                    {"bandwidth", a.bandwidth},
                    {"order", a.order},
                    {"kernel", a.kernel},
                    {"alpha", a.alpha},
                    {"residuals", a.residuals},
                    {"methods", a.methods},
                    {"bootstrap", a.bootstrap},
                    {"reps", a.reps},
                    {"multiplier", a.multiplier},
                    {"seed", a.seed}};
    j["estimate"] = res.tau;
    j["intervals"] = ordered_json::array();
    for (const auto& ci : res.intervals) j["intervals"].push_back(interval_json(ci));
    j["diagnostics"] = {{"n", sample.x.size()},
                        {"n_eff_right", res.n_eff_plus},
                        {"n_eff_left", res.n_eff_minus},
                        {"h", a.bandwidth},
                        {"nh", res.nh},
                        {"q_right", res.q_plus},
                        {"q_left", res.q_minus},
                        {"warnings", res.warnings}};
    emit_report(j, a.format, a.out,
                a.format == "csv" ? intervals_csv(res.intervals)
                                  : intervals_text(res.intervals));
    return 0;
}

int run_constants(const ConstArgs& a) {
    std::vector<Kernel> kernels;
    if (a.all || a.kernel.empty()) {
        kernels.assign(std::begin(kAllKernels), std::end(kAllKernels));
    } else {
        kernels.push_back(kernel_from_string(a.kernel));
    }
    std::vector<Region> regions;
    if (a.region.empty()) {
        regions = {Region::interior, Region::boundary};
    } else {
        regions = {region_from_string(a.region)};
    }

    ordered_json j;
    j["schema_version"] = kSchemaVersion;
    j["request"] = {{"command", "constants"},
                    {"order", a.order},
                    {"kernels", ordered_json::array()},
                    {"regions", ordered_json::array()}};
    std::string text;
    char buf[160];
    j["reports"] = ordered_json::array();
    for (Kernel k : kernels) {
        j["request"]["kernels"].push_back(to_string(k));
        for (Region r : regions) {
            ConstantsReport rep = kernel_constants(k, a.order, r);
            j["reports"].push_back(constants_json(rep));
            std::snprintf(buf, sizeof buf,
                          "%-13s %-8s C=%8.4f C_LP=%8.4f Q=%6.3f K_plp=%6.2f "
                          "K_mplp=%6.2f K_rbc=%6.2f ratio=%4.2f\n",
                          to_string(k).c_str(), to_string(r).c_str(), rep.c,
                          rep.c_lp, rep.q, round2(rep.k_plp), round2(rep.k_mplp),
                          round2(rep.k_rbc), round2(rep.length_ratio));
            text += buf;
        }
    }
    for (Region r : regions) j["request"]["regions"].push_back(to_string(r));

    if (!a.emit_grid.empty()) {
        if (kernels.size() != 1 || regions.size() != 1) {
            throw InvalidArgument(
                "--emit-grid needs a single --kernel and --region");
        }
        auto plp = equiv_kernel_table(kernels[0], a.order, regions[0],
                                      WFamily::w_plp, a.grid_step);
        auto mplp = equiv_kernel_table(kernels[0], a.order, regions[0],
                                       WFamily::w_mplp, a.grid_step);
        auto rbc = equiv_kernel_table(kernels[0], a.order, regions[0],
                                      WFamily::w_rbc, a.grid_step);
        std::string csv = "u,w_plp,w_mplp,w_rbc\n";
        for (std::size_t i = 0; i < plp.grid.size(); ++i) {
            csv += format_double(plp.grid[i]) + "," +
                   format_double(plp.values[i]) + "," +
                   format_double(mplp.values[i]) + "," +
                   format_double(rbc.values[i]) + "\n";
        }
        std::ofstream out(a.emit_grid);
        if (!out) throw InvalidArgument("cannot open grid file: " + a.emit_grid);
        out << csv;
    }
    emit_report(j, a.format, a.out, text);
    return 0;
}

int run_simulate(const SimArgs& a) {
    SimConfig cfg;
    cfg.n = a.n;
    cfg.replications = a.reps;
    cfg.alpha = a.alpha;
    cfg.order = a.order;
    cfg.hc = hc_from_string(a.residuals);
    cfg.seed = a.seed;
    cfg.threads = a.threads;

    std::string dgp_name = a.dgp;
    if (dgp_name.empty()) {
        if (a.table == 4) dgp_name = "npreg";
        else if (a.table == 5) dgp_name = "rdd1";
        else throw InvalidArgument("supply --table 4|5 or --dgp");
    }
    cfg.dgp.kind = dgp_from_string(dgp_name);
    if (cfg.dgp.is_rdd()) {
        cfg.point = 0.0;
        cfg.region = Region::boundary;
        cfg.kernel = Kernel::triangular;
    } else {
        cfg.point = a.eval == "bnd" ? -1.0 : -1.0 / 3.0;
        cfg.region = a.eval == "bnd" ? Region::boundary : Region::interior;
        cfg.kernel = Kernel::epanechnikov;
    }
    if (!a.kernel.empty()) cfg.kernel = kernel_from_string(a.kernel);

    std::string rule_name = "oracle";
    if (a.oracle || a.h_arg.empty()) {
        cfg.rule = BandwidthRule::oracle_mse;
    } else {
        // numeric => fixed bandwidth, otherwise a per-replication file
        char* end = nullptr;
        const double v = std::strtod(a.h_arg.c_str(), &end);
        if (end == a.h_arg.c_str() + a.h_arg.size() && v > 0.0) {
            cfg.rule = BandwidthRule::fixed;
            cfg.fixed_bandwidth = v;
            rule_name = "fixed";
        } else {
            std::ifstream in(a.h_arg);
            if (!in) {
                throw InvalidArgument("cannot open bandwidth file: " + a.h_arg);
            }
            double h;
            while (in >> h) cfg.bandwidth_schedule.push_back(h);
            cfg.rule = BandwidthRule::per_replication;
            rule_name = "file";
        }
    }

    SimResult res = run_simulation(cfg);

    std::string csv = "dgp,n,rule,hbar,method,coverage,length,failures\n";
    const std::string tag =
        cfg.dgp.is_rdd() ? dgp_name : dgp_name + "_" + a.eval;
    for (const auto& m : res.per_method) {
        csv += tag + "," + std::to_string(a.n) + "," + rule_name + "," +
               format_double(res.avg_bandwidth) + "," + to_string(m.method) +
               "," + format_double(m.coverage_pct) + "," +
               format_double(m.avg_length) + "," + std::to_string(m.failures) +
               "\n";
    }
    write_text(csv, a.out);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{
        "local polynomial and sharp-RDD confidence intervals with analytic "
        "prepivoted bootstrap methods"};
    app.require_subcommand(1);
    app.set_help_flag("--help", "print usage");  // frees -h / --h for bandwidths

    CiArgs ci;
    auto* ci_cmd = app.add_subcommand("ci", "intervals for g(x) at a point");
    ci_cmd->add_option("input", ci.input, "CSV file with columns x,y")->required();
    ci_cmd->add_option("--point", ci.point, "evaluation point")->required();
    ci_cmd->add_option("--bandwidth", ci.bandwidth, "bandwidth h > 0")->required();
    ci_cmd->add_option("--order", ci.order, "polynomial order (odd)");
    ci_cmd->add_option("--kernel", ci.kernel, "kernel name");
    ci_cmd->add_option("--alpha", ci.alpha, "1 - confidence level");
    ci_cmd->add_option("--method", ci.methods,
                       "interval methods (repeatable) or 'all'");
    ci_cmd->add_option("--residuals", ci.residuals, "hc0|hc1|hc2|hc3");
    ci_cmd->add_option("--bootstrap", ci.bootstrap, "analytic|resampled");
    ci_cmd->add_option("--reps", ci.reps, "resampling replications");
    ci_cmd->add_option("--multiplier", ci.multiplier,
                       "gaussian|rademacher|mammen");
    ci_cmd->add_option("--seed", ci.seed, "resampling seed");
    ci_cmd->add_option("--format", ci.format, "json|csv|text");
    ci_cmd->add_option("--out", ci.out, "output file (default stdout)");

    RddArgs rd;
    auto* rd_cmd = app.add_subcommand("rdd", "sharp-design jump at a cutoff");
    rd_cmd->add_option("input", rd.input, "CSV file with columns x,y[,d]")
        ->required();
    rd_cmd->add_option("--cutoff", rd.cutoff, "cutoff point")->required();
    rd_cmd->add_option("--bandwidth", rd.bandwidth, "shared bandwidth")
        ->required();
    rd_cmd->add_option("--bandwidth-left", rd.bandwidth_left,
                       "override for the left side");
    rd_cmd->add_option("--bandwidth-right", rd.bandwidth_right,
                       "override for the right side");
    rd_cmd->add_option("--kernel", rd.kernel, "kernel name");
    rd_cmd->add_option("--kernel-left", rd.kernel_left, "left-side kernel");
    rd_cmd->add_option("--kernel-right", rd.kernel_right, "right-side kernel");
    rd_cmd->add_option("--order", rd.order, "polynomial order (odd)");
    rd_cmd->add_option("--alpha", rd.alpha, "1 - confidence level");
    rd_cmd->add_option("--method", rd.methods,
                       "interval methods (repeatable) or 'all'");
    rd_cmd->add_option("--residuals", rd.residuals, "hc0|hc1|hc2|hc3");
    rd_cmd->add_option("--bootstrap", rd.bootstrap, "analytic|resampled");
    rd_cmd->add_option("--reps", rd.reps, "resampling replications");
    rd_cmd->add_option("--multiplier", rd.multiplier,
                       "gaussian|rademacher|mammen");
    rd_cmd->add_option("--seed", rd.seed, "resampling seed");
    rd_cmd->add_option("--format", rd.format, "json|csv|text");
    rd_cmd->add_option("--out", rd.out, "output file (default stdout)");

    ConstArgs co;
    auto* co_cmd =
        app.add_subcommand("constants", "equivalent-kernel asymptotic constants");
    co_cmd->add_option("--kernel", co.kernel, "kernel name");
    co_cmd->add_flag("--all", co.all, "all five kernels");
    co_cmd->add_option("--order", co.order, "polynomial order (odd)");
    co_cmd->add_option("--region", co.region, "interior|boundary");
    co_cmd->add_option("--emit-grid", co.emit_grid,
                       "write u,w_plp,w_mplp,w_rbc samples to this CSV");
    co_cmd->add_option("--grid-step", co.grid_step, "grid spacing");
    co_cmd->add_option("--format", co.format, "json|text");
    co_cmd->add_option("--out", co.out, "output file (default stdout)");

    SimArgs si;
    auto* si_cmd =
        app.add_subcommand("simulate", "Monte Carlo coverage experiment");
    si_cmd->add_option("--table", si.table, "4 (curve) or 5 (sharp design)");
    si_cmd->add_option("--dgp", si.dgp, "npreg|rdd1|rdd2");
    si_cmd->add_option("--eval", si.eval, "int|bnd (curve experiments)");
    si_cmd->add_option("--n", si.n, "sample size")->required();
    si_cmd->add_option("--reps", si.reps, "Monte Carlo replications");
    si_cmd->add_option("--seed", si.seed, "master seed");
    si_cmd->add_flag("--oracle", si.oracle, "infeasible MSE-optimal bandwidth");
    si_cmd->add_option("--h", si.h_arg,
                       "fixed bandwidth value, or a file with one bandwidth "
                       "per replication");
    si_cmd->add_option("--kernel", si.kernel, "kernel override");
    si_cmd->add_option("--order", si.order, "polynomial order (odd)");
    si_cmd->add_option("--alpha", si.alpha, "1 - nominal level");
    si_cmd->add_option("--residuals", si.residuals, "hc0|hc1|hc2|hc3");
    si_cmd->add_option("--threads", si.threads,
                       "worker cap (NPREG_THREADS also honored)");
    si_cmd->add_option("--out", si.out, "output CSV (default stdout)");

    std::string config_doc;
    for (auto* sub : {ci_cmd, rd_cmd, co_cmd, si_cmd}) {
        sub->add_option("--config", config_doc,
                        "key=value file; explicit flags take precedence");
    }

    try {
        auto args = expand_config(argc, argv);
        std::vector<const char*> cargs;
        cargs.reserve(args.size());
        for (const auto& a : args) cargs.push_back(a.c_str());
        app.parse(static_cast<int>(cargs.size()),
                  const_cast<char**>(cargs.data()));
        if (ci_cmd->parsed()) return run_ci(ci);
        if (rd_cmd->parsed()) return run_rdd(rd);
        if (co_cmd->parsed()) return run_constants(co);
        if (si_cmd->parsed()) return run_simulate(si);
        return 0;
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    } catch (const Error& e) {
        ordered_json err{{"error", {{"code", e.code()}, {"message", e.what()}}}};
        std::cout << err.dump(2) << "\n";
        return 1;
    } catch (const std::exception& e) {
        ordered_json err{
            {"error", {{"code", "internal_error"}, {"message", e.what()}}}};
        std::cout << err.dump(2) << "\n";
        return 2;
    }
}
