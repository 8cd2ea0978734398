#pragma once

#include <vector>

#include "nnspline/assembly.hpp"
#include "nnspline/bezier.hpp"
#include "nnspline/dataset.hpp"
#include "nnspline/polyroots.hpp"
#include "nnspline/qp.hpp"

namespace nnspline {

enum class FitMethod { standard, sufficient_qp, cutting_plane, discretized_oracle };

enum class Termination {
    converged,
    max_iters,
    stalled,  // repeated duplicate cuts while a violation persists
};

struct FitConfig {
    int degree = 3;                  // in [3, 10]
    double lambda = 1.0 / 250.0;     // roughness weight, > 0
    double epsilon = 0.0;            // termination tolerance on piece minima
    int max_cp_iterations = 500;
    int verification_grid = 10000;   // points per interval for grid re-checks
    LowerLevelMethod lower_level = LowerLevelMethod::closed_form;
    bool shift_to_nonnegative = false;  // add a constant to cancel tiny negative values
    QpSettings qp;

    void validate() const;
};

/// One record per upper-level solve of the cutting-plane loop.
struct CpIteration {
    int r = 0;
    double cost = 0.0;
    int cuts_added = 0;
    double most_negative_min = 0.0;  // min over pieces of the lower-level minimum
    int qp_iterations = 0;
    QpStatus qp_status = QpStatus::optimal;
    Eigen::VectorXd b;
};

struct FitResult {
    SplineCoefficients coefficients;
    double cost = 0.0;
    FitMethod method = FitMethod::standard;
    std::vector<CpIteration> trace;  // cutting-plane runs only
    CutSet cuts;
    double wall_time_s = 0.0;      // solver time
    double assembly_time_s = 0.0;  // matrix construction time, kept separate
    Termination termination = Termination::converged;
    QpSolution qp;  // final upper-level solution (multipliers included)

    explicit FitResult(SplineCoefficients c) : coefficients(std::move(c)) {}
};

/// Smoothing without shape constraints: minimize |y - Ab|^2 + lambda b'Qb
/// subject to Hb = 0.
FitResult fit_standard(const Dataset& data, const Partition& partition,
                       const FitConfig& config);

/// Conservative nonnegative smoothing: the componentwise constraint b >= 0
/// guarantees a nonnegative spline but shrinks the feasible set.
FitResult fit_sufficient_qp(const Dataset& data, const Partition& partition,
                            const FitConfig& config);

/// Exact nonnegative smoothing by cutting planes. Starting from the
/// unconstrained relaxation, each round solves the QP with the accumulated
/// site constraints, minimizes every piece over [0, 1], and terminates once
/// all minima are >= -epsilon; otherwise each violating piece contributes its
/// minimizer as a new constraint site. Requires nonnegative data.
FitResult fit_cutting_plane(const Dataset& data, const Partition& partition,
                            const FitConfig& config);

/// Dense-discretization relaxation used as an independent verification
/// oracle: enforce nonnegativity on a uniform tau grid (including both
/// endpoints) in every interval and solve the single large QP.
FitResult fit_discretized_oracle(const Dataset& data, const Partition& partition,
                                 const FitConfig& config, int grid_points_per_interval);

/// Minimum of the spline over a uniform tau grid of the given density in
/// every interval.
double grid_minimum(const SplineCoefficients& s, int points_per_interval);

/// Strong-convexity error bound on a cutting-plane trace: for each recorded
/// iterate b_r, checks
///   |b_ref - b_r|^2 <= (2/gamma) (f(b_ref) - f(b_r)) + 1e-6 (1 + |b_ref|^2)
/// against a reference solution computed at tighter accuracy.
std::vector<bool> check_coefficient_bound(const std::vector<CpIteration>& trace,
                                          const FitResult& reference, double gamma);

/// First-order optimality certificate for a converged cutting-plane result:
/// rebuilds the constraint matrix from the final cut set augmented with the
/// final per-piece minimizers (zero multipliers on the new rows) and reports
/// the stationarity, feasibility and complementarity residuals. Never throws
/// on bad residuals; it only reports them.
KktResiduals verify_kkt_certificate(const FitResult& result,
                                    const ProblemMatrices& matrices, double lambda);

/// Quadratic cost data shared by all four fits:
/// P = A'A + lambda Q, q = -2 A'y, constant = y'y, E = H.
QpProblem make_qp_problem(const ProblemMatrices& matrices, double lambda);

}  // namespace nnspline
