#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "nnspline/smoothers.hpp"

namespace nnspline {

/// Grid of experiment cells: every (n, degree, seed, method) combination is
/// run independently with the shared lambda/epsilon settings.
struct ExperimentSpec {
    std::vector<int> n_values{10};
    std::vector<int> degrees{3};
    std::vector<std::uint64_t> seeds{0};
    std::vector<FitMethod> methods;
    double lambda = 1.0 / 250.0;
    double epsilon = 0.0;
    int oracle_grid = 10000;        // grid density of discretized_oracle cells
    int verification_grid = 10000;  // density of the reported grid minimum
    int max_cp_iterations = 500;
    LowerLevelMethod lower_level = LowerLevelMethod::closed_form;
    std::string output_prefix;  // when nonempty, writes <prefix>.csv and <prefix>.json
    bool svg = false;           // one overlay plot per (n, degree, seed)
    int svg_zoom_interval = -1;

    void validate() const;
};

struct ExperimentCell {
    int n = 0;
    int d = 0;
    std::uint64_t seed = 0;
    FitMethod method = FitMethod::standard;
    bool ok = false;
    std::string error;
    double cost = 0.0;
    double time_ms = 0.0;
    int cp_iterations = 0;
    int total_cuts = 0;
    double grid_min = 0.0;
};

struct ExperimentReport {
    std::vector<ExperimentCell> cells;

    bool all_ok() const;
};

const char* method_name(FitMethod m);
FitMethod parse_method(const std::string& name);  // throws on unknown names

/// Run every cell (failures are recorded, not fatal), sort the cells by
/// (n, d, seed, method), and write the CSV/JSON/SVG outputs if requested.
ExperimentReport run_experiment(const ExperimentSpec& spec);

/// Report CSV: header n,d,seed,method,cost,time_ms,cp_iterations,total_cuts,grid_min
/// with 17-significant-digit floats for cost and grid_min.
void write_report_csv(const ExperimentReport& report, const std::string& path);

/// JSON mirror of the CSV rows plus the config echo and the library version.
void write_report_json(const ExperimentReport& report, const ExperimentSpec& spec,
                       const std::string& path);

}  // namespace nnspline
