#include "nnspline/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <stdexcept>
#include <tuple>

#include "json.hpp"
#include "nnspline/svg.hpp"
#include "nnspline/version.hpp"

namespace nnspline {

namespace {

std::string fmt17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

FitResult run_cell(const Dataset& data, const Partition& partition,
                   const ExperimentSpec& spec, int degree, FitMethod method) {
    FitConfig config;
    config.degree = degree;
    config.lambda = spec.lambda;
    config.epsilon = spec.epsilon;
    config.max_cp_iterations = spec.max_cp_iterations;
    config.verification_grid = spec.verification_grid;
    config.lower_level = spec.lower_level;
    switch (method) {
        case FitMethod::standard: return fit_standard(data, partition, config);
        case FitMethod::sufficient_qp: return fit_sufficient_qp(data, partition, config);
        case FitMethod::cutting_plane: return fit_cutting_plane(data, partition, config);
        case FitMethod::discretized_oracle:
            return fit_discretized_oracle(data, partition, config, spec.oracle_grid);
    }
    throw std::logic_error("run_cell: unknown method");
}

}  // namespace

void ExperimentSpec::validate() const {
    if (n_values.empty() || degrees.empty() || seeds.empty())
        throw std::invalid_argument("ExperimentSpec: n_values, degrees and seeds must be nonempty");
    for (int n : n_values)
        if (n < 1) throw std::invalid_argument("ExperimentSpec: n must be >= 1");
    for (int d : degrees)
        if (d < 3 || d > 10) throw std::invalid_argument("ExperimentSpec: degree must be in [3, 10]");
    if (!(lambda > 0.0)) throw std::invalid_argument("ExperimentSpec: lambda must be positive");
    if (oracle_grid < 2) throw std::invalid_argument("ExperimentSpec: oracle_grid must be >= 2");
}

bool ExperimentReport::all_ok() const {
    return std::all_of(cells.begin(), cells.end(), [](const ExperimentCell& c) { return c.ok; });
}

const char* method_name(FitMethod m) {
    switch (m) {
        case FitMethod::standard: return "standard";
        case FitMethod::sufficient_qp: return "sufficient_qp";
        case FitMethod::cutting_plane: return "cutting_plane";
        case FitMethod::discretized_oracle: return "discretized_oracle";
    }
    return "unknown";
}

FitMethod parse_method(const std::string& name) {
    if (name == "standard") return FitMethod::standard;
    if (name == "sufficient_qp") return FitMethod::sufficient_qp;
    if (name == "cutting_plane") return FitMethod::cutting_plane;
    if (name == "discretized_oracle") return FitMethod::discretized_oracle;
    throw std::invalid_argument("unknown method \"" + name + "\"");
}

ExperimentReport run_experiment(const ExperimentSpec& spec) {
    spec.validate();
    ExperimentReport report;

    for (int n : spec.n_values) {
        for (std::uint64_t seed : spec.seeds) {
            const Dataset data = generate_data(n, seed);
            const Partition partition(data.x);  // knots at the sample points
            for (int d : spec.degrees) {
                std::map<FitMethod, FitResult> fits;  // kept for the overlay plot
                for (FitMethod method : spec.methods) {
                    ExperimentCell cell;
                    cell.n = n;
                    cell.d = d;
                    cell.seed = seed;
                    cell.method = method;
                    try {
                        FitResult fit = run_cell(data, partition, spec, d, method);
                        cell.ok = fit.termination == Termination::converged;
                        if (!cell.ok)
                            cell.error = fit.termination == Termination::max_iters
                                             ? "cutting plane hit the iteration cap"
                                             : "cutting plane stalled on duplicate cuts";
                        cell.cost = fit.cost;
                        cell.time_ms = fit.wall_time_s * 1e3;
                        cell.cp_iterations = static_cast<int>(fit.trace.size());
                        cell.total_cuts = method == FitMethod::cutting_plane ? fit.cuts.total() : 0;
                        cell.grid_min = grid_minimum(fit.coefficients, spec.verification_grid);
                        fits.emplace(method, std::move(fit));
                    } catch (const std::exception& ex) {
                        cell.ok = false;
                        cell.error = ex.what();
                        cell.cost = std::nan("");
                        cell.grid_min = std::nan("");
                    }
                    report.cells.push_back(std::move(cell));
                }
                if (spec.svg && !spec.output_prefix.empty() && !fits.empty()) {
                    std::vector<SvgCurve> curves;
                    for (const auto& [method, fit] : fits)
                        curves.push_back({method_name(method), &fit.coefficients});
                    SvgOptions options;
                    options.zoom_interval = spec.svg_zoom_interval;
                    options.title = "n=" + std::to_string(n) + " d=" + std::to_string(d) +
                                    " seed=" + std::to_string(seed);
                    write_spline_svg(spec.output_prefix + "_n" + std::to_string(n) + "_d" +
                                         std::to_string(d) + "_seed" + std::to_string(seed) + ".svg",
                                     data, curves, options);
                }
            }
        }
    }

    std::sort(report.cells.begin(), report.cells.end(),
              [](const ExperimentCell& a, const ExperimentCell& b) {
                  return std::tie(a.n, a.d, a.seed, a.method) <
                         std::tie(b.n, b.d, b.seed, b.method);
              });

    if (!spec.output_prefix.empty()) {
        write_report_csv(report, spec.output_prefix + ".csv");
        write_report_json(report, spec, spec.output_prefix + ".json");
    }
    return report;
}

void write_report_csv(const ExperimentReport& report, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("write_report_csv: cannot open " + path);
    out << "n,d,seed,method,cost,time_ms,cp_iterations,total_cuts,grid_min\n";
    for (const ExperimentCell& c : report.cells) {
        char time_buf[32];
        std::snprintf(time_buf, sizeof(time_buf), "%.3f", c.time_ms);
        out << c.n << ',' << c.d << ',' << c.seed << ',' << method_name(c.method) << ','
            << fmt17(c.cost) << ',' << time_buf << ',' << c.cp_iterations << ',' << c.total_cuts
            << ',' << fmt17(c.grid_min) << '\n';
    }
    if (!out) throw std::runtime_error("write_report_csv: write failed for " + path);
}

void write_report_json(const ExperimentReport& report, const ExperimentSpec& spec,
                       const std::string& path) {
    nlohmann::json doc;
    doc["version"] = kVersion;
    nlohmann::json config;
    config["n_values"] = spec.n_values;
    config["degrees"] = spec.degrees;
    config["seeds"] = spec.seeds;
    std::vector<std::string> methods;
    for (FitMethod m : spec.methods) methods.emplace_back(method_name(m));
    config["methods"] = methods;
    config["lambda"] = spec.lambda;
    config["epsilon"] = spec.epsilon;
    config["oracle_grid"] = spec.oracle_grid;
    config["verification_grid"] = spec.verification_grid;
    config["lower_level"] =
        spec.lower_level == LowerLevelMethod::closed_form ? "closed_form" : "companion";
    doc["config"] = config;

    nlohmann::json cells = nlohmann::json::array();
    for (const ExperimentCell& c : report.cells) {
        nlohmann::json row;
        row["n"] = c.n;
        row["d"] = c.d;
        row["seed"] = c.seed;
        row["method"] = method_name(c.method);
        row["ok"] = c.ok;
        if (!c.ok) row["error"] = c.error;
        row["cost"] = c.cost;
        row["time_ms"] = c.time_ms;
        row["cp_iterations"] = c.cp_iterations;
        row["total_cuts"] = c.total_cuts;
        row["grid_min"] = c.grid_min;
        cells.push_back(std::move(row));
    }
    doc["cells"] = std::move(cells);

    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("write_report_json: cannot open " + path);
    out << doc.dump(2) << '\n';
    if (!out) throw std::runtime_error("write_report_json: write failed for " + path);
}

}  // namespace nnspline
