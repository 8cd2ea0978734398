// nnspline: nonnegative spline smoothing from the command line.
//
// Subcommands:
//   generate    write a synthetic nonnegative dataset as CSV
//   fit         fit one spline with a chosen method and report the result
//   experiment  run a (n, degree, seed, method) grid and write CSV/JSON/SVG
//   verify      cross-check a cutting-plane fit against the dense-grid
//               oracle, the first-order certificate and the coefficient
//               error bound
//
// Exit codes: 0 success, 1 usage error, 2 data error, 3 solver failure or
// failed verification.

#include <algorithm>
#include <cstdio>
#include <exception>
#include <fstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "nnspline/experiment.hpp"
#include "nnspline/svg.hpp"
#include "nnspline/version.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitData = 2;
constexpr int kExitSolver = 3;

struct DataArgs {
    std::string input;
    int n = 10;
    std::uint64_t seed = 0;
};

nnspline::Dataset resolve_dataset(const DataArgs& args) {
    if (!args.input.empty()) return nnspline::load_dataset(args.input);
    return nnspline::generate_data(args.n, args.seed);
}

void add_data_options(CLI::App* cmd, DataArgs& args) {
    cmd->add_option("--input", args.input, "dataset CSV (header x,y); omit to generate");
    cmd->add_option("--n", args.n, "sample count n for generated data (points 0..n)");
    cmd->add_option("--seed", args.seed, "seed for generated data");
}

int cmd_generate(const DataArgs& data_args, const std::string& output) {
    const nnspline::Dataset data = nnspline::generate_data(data_args.n, data_args.seed);
    if (output.empty()) {
        std::printf("x,y\n");
        for (std::size_t i = 0; i < data.size(); ++i)
            std::printf("%.17g,%.17g\n", data.x[i], data.y[i]);
    } else {
        nnspline::save_dataset(data, output);
        std::printf("wrote %zu samples to %s\n", data.size(), output.c_str());
    }
    return kExitOk;
}

int cmd_fit(const DataArgs& data_args, const nnspline::FitConfig& config,
            const std::string& method_name, int oracle_grid, const std::string& output,
            const std::string& svg_path, int zoom) {
    const nnspline::Dataset data = resolve_dataset(data_args);
    const nnspline::Partition partition(data.x);
    const nnspline::FitMethod method = nnspline::parse_method(method_name);

    nnspline::FitResult fit = [&] {
        switch (method) {
            case nnspline::FitMethod::standard:
                return nnspline::fit_standard(data, partition, config);
            case nnspline::FitMethod::sufficient_qp:
                return nnspline::fit_sufficient_qp(data, partition, config);
            case nnspline::FitMethod::cutting_plane:
                return nnspline::fit_cutting_plane(data, partition, config);
            default:
                return nnspline::fit_discretized_oracle(data, partition, config, oracle_grid);
        }
    }();

    const double grid_min = nnspline::grid_minimum(fit.coefficients, config.verification_grid);
    std::printf("method              %s\n", nnspline::method_name(method));
    std::printf("cost                %.17g\n", fit.cost);
    std::printf("grid minimum        %.17g\n", grid_min);
    std::printf("solve time          %.3f ms\n", fit.wall_time_s * 1e3);
    std::printf("assembly time       %.3f ms\n", fit.assembly_time_s * 1e3);
    if (method == nnspline::FitMethod::cutting_plane) {
        std::printf("cp iterations       %zu\n", fit.trace.size());
        std::printf("total cuts          %d\n", fit.cuts.total());
        const char* term = fit.termination == nnspline::Termination::converged ? "converged"
                           : fit.termination == nnspline::Termination::max_iters ? "max_iters"
                                                                                 : "stalled";
        std::printf("termination         %s\n", term);
    }

    if (!output.empty()) {
        nlohmann::json doc;
        doc["version"] = nnspline::kVersion;
        doc["method"] = nnspline::method_name(method);
        doc["degree"] = config.degree;
        doc["lambda"] = config.lambda;
        doc["epsilon"] = config.epsilon;
        doc["cost"] = fit.cost;
        doc["grid_min"] = grid_min;
        doc["solve_time_ms"] = fit.wall_time_s * 1e3;
        doc["assembly_time_ms"] = fit.assembly_time_s * 1e3;
        doc["coefficients"] = std::vector<double>(fit.coefficients.b.data(),
                                                  fit.coefficients.b.data() + fit.coefficients.b.size());
        doc["knots"] = partition.knots();
        if (method == nnspline::FitMethod::cutting_plane) {
            doc["cp_iterations"] = fit.trace.size();
            doc["total_cuts"] = fit.cuts.total();
            nlohmann::json trace = nlohmann::json::array();
            for (const auto& rec : fit.trace)
                trace.push_back({{"r", rec.r},
                                 {"cost", rec.cost},
                                 {"cuts_added", rec.cuts_added},
                                 {"most_negative_min", rec.most_negative_min},
                                 {"qp_iterations", rec.qp_iterations}});
            doc["trace"] = std::move(trace);
        }
        std::ofstream file(output, std::ios::binary);
        if (!file) throw std::runtime_error("cannot open " + output);
        file << doc.dump(2) << '\n';
        std::printf("wrote %s\n", output.c_str());
    }
    if (!svg_path.empty()) {
        nnspline::SvgOptions options;
        options.zoom_interval = zoom;
        options.title = std::string(nnspline::method_name(method)) +
                        " d=" + std::to_string(config.degree);
        nnspline::write_spline_svg(svg_path, data,
                                   {{nnspline::method_name(method), &fit.coefficients}}, options);
        std::printf("wrote %s\n", svg_path.c_str());
    }
    return kExitOk;
}

int cmd_verify(const DataArgs& data_args, nnspline::FitConfig config, int oracle_grid) {
    const nnspline::Dataset data = resolve_dataset(data_args);
    const nnspline::Partition partition(data.x);

    const nnspline::FitResult cp = nnspline::fit_cutting_plane(data, partition, config);
    const nnspline::FitResult oracle =
        nnspline::fit_discretized_oracle(data, partition, config, oracle_grid);

    bool ok = true;
    const double rel_gap = std::abs(cp.cost - oracle.cost) / std::max(1e-300, std::abs(oracle.cost));
    const bool gap_ok = rel_gap <= 1e-6;
    ok = ok && gap_ok;
    std::printf("[%s] oracle equivalence: |cp-oracle|/|oracle| = %.3e (tol 1e-06)\n",
                gap_ok ? "PASS" : "FAIL", rel_gap);

    const nnspline::ProblemMatrices matrices =
        nnspline::build_problem_matrices(data, partition, config.degree);
    const nnspline::KktResiduals cert =
        nnspline::verify_kkt_certificate(cp, matrices, config.lambda);
    const bool cert_ok = cert.stationarity <= 1e-6 && cert.primal_eq <= 1e-8 &&
                         cert.primal_ineq <= 1e-8 && cert.complementarity <= 1e-8;
    ok = ok && cert_ok;
    std::printf("[%s] kkt certificate: stationarity=%.3e eq=%.3e ineq=%.3e comp=%.3e\n",
                cert_ok ? "PASS" : "FAIL", cert.stationarity, cert.primal_eq, cert.primal_ineq,
                cert.complementarity);

    const double gamma = nnspline::strong_convexity_gamma(matrices.A, matrices.Q, config.lambda,
                                                          matrices.H);
    const std::vector<bool> bound = nnspline::check_coefficient_bound(cp.trace, oracle, gamma);
    const std::size_t held = static_cast<std::size_t>(std::count(bound.begin(), bound.end(), true));
    const bool bound_ok = held == bound.size();
    ok = ok && bound_ok;
    std::printf("[%s] coefficient error bound (gamma=%.6g): holds at %zu/%zu iterations\n",
                bound_ok ? "PASS" : "FAIL", gamma, held, bound.size());

    const double cp_min = nnspline::grid_minimum(cp.coefficients, config.verification_grid);
    const bool nn_ok = cp_min >= -config.epsilon - 1e-12;
    ok = ok && nn_ok;
    std::printf("[%s] nonnegativity: grid minimum = %.3e\n", nn_ok ? "PASS" : "FAIL", cp_min);

    return ok ? kExitOk : kExitSolver;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"exact 1-D nonnegative spline smoothing via cutting planes"};
    app.set_version_flag("--version", nnspline::kVersion);
    app.require_subcommand(1);

    DataArgs data_args;
    nnspline::FitConfig config;
    std::string method = "cutting_plane";
    std::string roots = "closed";
    std::string output;
    std::string svg_path;
    int oracle_grid = 10000;
    int zoom = -1;

    auto* generate = app.add_subcommand("generate", "write a synthetic nonnegative dataset");
    generate->add_option("--n", data_args.n, "sample count n (points 0..n)");
    generate->add_option("--seed", data_args.seed, "generator seed");
    generate->add_option("--output,-o", output, "CSV path (stdout when omitted)");

    auto add_fit_options = [&](CLI::App* cmd) {
        add_data_options(cmd, data_args);
        cmd->add_option("--degree,-d", config.degree, "spline degree (3..10)");
        cmd->add_option("--lambda", config.lambda, "smoothing parameter (> 0)");
        cmd->add_option("--epsilon", config.epsilon, "cutting-plane termination tolerance");
        cmd->add_option("--grid", oracle_grid, "oracle grid points per interval");
        cmd->add_option("--roots", roots, "lower-level root solver: closed | companion");
        cmd->add_option("--max-cp-iterations", config.max_cp_iterations,
                        "cutting-plane iteration cap");
    };

    auto* fit = app.add_subcommand("fit", "fit one spline and report cost/minimum/timing");
    add_fit_options(fit);
    fit->add_option("--method,-m", method,
                    "standard | sufficient_qp | cutting_plane | discretized_oracle");
    fit->add_option("--output,-o", output, "write the full result as JSON");
    fit->add_option("--svg", svg_path, "write an overlay plot");
    fit->add_option("--zoom", zoom, "interval index magnified in the plot");

    auto* verify = app.add_subcommand(
        "verify", "cross-check the cutting-plane result on one instance");
    add_fit_options(verify);

    std::vector<int> exp_n{5, 10, 50, 100};
    std::vector<int> exp_degrees{3, 4};
    std::vector<std::string> exp_methods{"sufficient_qp", "cutting_plane"};
    int exp_seeds = 1;
    std::uint64_t exp_seed0 = 0;
    bool exp_svg = false;
    auto* experiment = app.add_subcommand("experiment", "run a method/size grid, write reports");
    experiment->add_option("--n", exp_n, "sample counts");
    experiment->add_option("--degree,-d", exp_degrees, "degrees");
    experiment->add_option("--method,-m", exp_methods, "methods to run");
    experiment->add_option("--seeds", exp_seeds, "number of seeds (seed0, seed0+1, ...)");
    experiment->add_option("--seed", exp_seed0, "first seed");
    experiment->add_option("--lambda", config.lambda, "smoothing parameter");
    experiment->add_option("--epsilon", config.epsilon, "cutting-plane tolerance");
    experiment->add_option("--grid", oracle_grid, "oracle grid points per interval");
    experiment->add_option("--roots", roots, "lower-level root solver: closed | companion");
    experiment->add_option("--output,-o", output, "report path prefix (required)")->required();
    experiment->add_flag("--svg", exp_svg, "write one overlay plot per (n, d, seed)");
    experiment->add_option("--zoom", zoom, "interval index magnified in the plots");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);  // prints help or the parse error
        return code == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (roots != "closed" && roots != "companion") {
            std::fprintf(stderr, "error: --roots must be closed or companion\n");
            return kExitUsage;
        }
        config.lower_level = roots == "closed" ? nnspline::LowerLevelMethod::closed_form
                                               : nnspline::LowerLevelMethod::companion;

        if (generate->parsed()) return cmd_generate(data_args, output);
        if (fit->parsed())
            return cmd_fit(data_args, config, method, oracle_grid, output, svg_path, zoom);
        if (verify->parsed()) return cmd_verify(data_args, config, oracle_grid);

        nnspline::ExperimentSpec spec;
        spec.n_values = exp_n;
        spec.degrees = exp_degrees;
        spec.methods.clear();
        for (const std::string& name : exp_methods) spec.methods.push_back(nnspline::parse_method(name));
        spec.seeds.clear();
        for (int i = 0; i < exp_seeds; ++i)
            spec.seeds.push_back(exp_seed0 + static_cast<std::uint64_t>(i));
        spec.lambda = config.lambda;
        spec.epsilon = config.epsilon;
        spec.oracle_grid = oracle_grid;
        spec.lower_level = config.lower_level;
        spec.output_prefix = output;
        spec.svg = exp_svg;
        spec.svg_zoom_interval = zoom;
        const nnspline::ExperimentReport report = nnspline::run_experiment(spec);
        std::printf("wrote %s.csv and %s.json (%zu cells)\n", output.c_str(), output.c_str(),
                    report.cells.size());
        if (!report.all_ok()) {
            for (const auto& cell : report.cells)
                if (!cell.ok)
                    std::fprintf(stderr, "cell n=%d d=%d seed=%llu %s failed: %s\n", cell.n, cell.d,
                                 static_cast<unsigned long long>(cell.seed),
                                 nnspline::method_name(cell.method), cell.error.c_str());
            return kExitSolver;
        }
        return kExitOk;
    } catch (const nnspline::DataError& ex) {
        std::fprintf(stderr, "error: %s\n", ex.what());
        return kExitData;
    } catch (const std::invalid_argument& ex) {
        std::fprintf(stderr, "error: %s\n", ex.what());
        return kExitUsage;
    } catch (const std::exception& ex) {
        std::fprintf(stderr, "error: %s\n", ex.what());
        return kExitSolver;
    }
}
