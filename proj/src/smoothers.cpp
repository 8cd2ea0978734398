#include "nnspline/smoothers.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <limits>
#include <stdexcept>
#include <string>
#include <utility>

namespace nnspline {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

const char* status_name(QpStatus s) {
    switch (s) {
        case QpStatus::optimal: return "optimal";
        case QpStatus::max_iters: return "max_iters";
        default: return "numerical_failure";
    }
}

[[noreturn]] void throw_solver_failure(const char* where, const QpSolution& sol,
                                       const std::vector<CpIteration>& trace) {
    std::string msg = std::string(where) + ": QP solver returned " + status_name(sol.status) +
                      " (kkt max " + std::to_string(sol.kkt.max_norm()) + ")";
    if (!trace.empty()) {
        msg += "; trace:";
        for (const CpIteration& rec : trace)
            msg += " r=" + std::to_string(rec.r) + " cost=" + std::to_string(rec.cost) +
                   " min=" + std::to_string(rec.most_negative_min);
    }
    throw std::runtime_error(msg);
}

void require_nonnegative_data(const Dataset& data, const char* where) {
    for (double v : data.y)
        if (v < 0.0)
            throw std::invalid_argument(std::string(where) + ": data values must be nonnegative");
}

// Shared epilogue: coefficients, cost and final QP state for one-shot fits.
FitResult finish_single_solve(const ProblemMatrices& M, const FitConfig& config,
                              QpSolution sol, FitMethod method, double assembly_time,
                              Clock::time_point t_solve) {
    if (sol.status != QpStatus::optimal) throw_solver_failure("fit", sol, {});
    FitResult out(SplineCoefficients(config.degree, M.partition, sol.b));
    out.cost = sol.objective;
    out.method = method;
    out.cuts = CutSet(M.partition.intervals());
    out.assembly_time_s = assembly_time;
    out.wall_time_s = seconds_since(t_solve);
    out.qp = std::move(sol);
    return out;
}

}  // namespace

void FitConfig::validate() const {
    if (degree < 3 || degree > 10)
        throw std::invalid_argument("FitConfig: degree must be in [3, 10]");
    if (!(lambda > 0.0)) throw std::invalid_argument("FitConfig: lambda must be positive");
    if (!(epsilon >= 0.0)) throw std::invalid_argument("FitConfig: epsilon must be nonnegative");
    if (max_cp_iterations < 1)
        throw std::invalid_argument("FitConfig: max_cp_iterations must be >= 1");
    if (verification_grid < 2)
        throw std::invalid_argument("FitConfig: verification_grid must be >= 2");
}

QpProblem make_qp_problem(const ProblemMatrices& matrices, double lambda) {
    QpProblem qp;
    qp.P = Eigen::SparseMatrix<double>(matrices.A.transpose() * matrices.A) + lambda * matrices.Q;
    qp.q = -2.0 * (matrices.A.transpose() * matrices.y);
    qp.constant = matrices.y.squaredNorm();
    qp.E = matrices.H;
    qp.e = Eigen::VectorXd::Zero(matrices.H.rows());
    return qp;
}

FitResult fit_standard(const Dataset& data, const Partition& partition,
                       const FitConfig& config) {
    config.validate();
    const auto t0 = Clock::now();
    const ProblemMatrices M = build_problem_matrices(data, partition, config.degree);
    const QpProblem qp = make_qp_problem(M, config.lambda);
    const double assembly_time = seconds_since(t0);

    const auto t1 = Clock::now();
    QpSolution sol = solve_qp(qp, config.qp);
    return finish_single_solve(M, config, std::move(sol), FitMethod::standard, assembly_time, t1);
}

FitResult fit_sufficient_qp(const Dataset& data, const Partition& partition,
                            const FitConfig& config) {
    config.validate();
    for (double v : data.y) {
        if (v < 0.0) {
            std::fprintf(stderr,
                         "fit_sufficient_qp: warning: negative data value %.17g;"
                         " the nonnegativity constraint still applies\n", v);
            break;
        }
    }
    const auto t0 = Clock::now();
    const ProblemMatrices M = build_problem_matrices(data, partition, config.degree);
    QpProblem qp = make_qp_problem(M, config.lambda);
    const Eigen::Index nv = qp.vars();
    Eigen::SparseMatrix<double> identity(nv, nv);
    identity.setIdentity();
    qp.C = identity;
    qp.c = Eigen::VectorXd::Zero(nv);
    const double assembly_time = seconds_since(t0);

    const auto t1 = Clock::now();
    QpSolution sol = solve_qp(qp, config.qp);
    return finish_single_solve(M, config, std::move(sol), FitMethod::sufficient_qp,
                               assembly_time, t1);
}

FitResult fit_cutting_plane(const Dataset& data, const Partition& partition,
                            const FitConfig& config) {
    config.validate();
    require_nonnegative_data(data, "fit_cutting_plane");

    const auto t0 = Clock::now();
    const ProblemMatrices M = build_problem_matrices(data, partition, config.degree);
    const QpProblem base = make_qp_problem(M, config.lambda);
    const double assembly_time = seconds_since(t0);

    const int m = partition.intervals();
    const int d = config.degree;

    CutSet cuts(m);
    std::vector<CpIteration> trace;
    QpSolution last;
    Termination termination = Termination::max_iters;

    const auto t1 = Clock::now();
    for (int r = 0; r < config.max_cp_iterations; ++r) {
        QpProblem qp = base;
        if (cuts.total() > 0) {
            qp.C = build_G(cuts, d);
            qp.c = Eigen::VectorXd::Zero(qp.C.rows());
        }
        QpSolution sol = solve_qp(qp, config.qp);
        if (sol.status != QpStatus::optimal) throw_solver_failure("fit_cutting_plane", sol, trace);

        const SplineCoefficients s(d, partition, sol.b);
        double most_negative = std::numeric_limits<double>::infinity();
        std::vector<std::pair<int, double>> violations;
        for (int p = 0; p < m; ++p) {
            const PieceMinimizer pm = minimize_piece(s.piece(p), config.lower_level);
            most_negative = std::min(most_negative, pm.min_value);
            if (pm.min_value < -config.epsilon) violations.emplace_back(p, pm.tau_star);
        }

        trace.push_back({r, sol.objective, 0, most_negative, sol.iterations, sol.status, sol.b});
        last = std::move(sol);

        if (violations.empty()) {
            termination = Termination::converged;
            break;
        }
        int added = 0;
        for (const auto& [piece, tau] : violations)
            if (cuts.insert(piece, tau)) ++added;
        trace.back().cuts_added = added;
        if (added == 0) {
            // Finite-precision solves can re-propose an existing site; stop
            // rather than loop, and report convergence only when the residual
            // violation is within the duplicate tolerance.
            termination = (most_negative >= -(config.epsilon + 1e-12)) ? Termination::converged
                                                                       : Termination::stalled;
            break;
        }
    }
    const double solve_time = seconds_since(t1);

    FitResult out(SplineCoefficients(d, partition, last.b));
    out.cost = last.objective;
    out.method = FitMethod::cutting_plane;
    out.trace = std::move(trace);
    out.cuts = std::move(cuts);
    out.assembly_time_s = assembly_time;
    out.wall_time_s = solve_time;
    out.termination = termination;
    out.qp = std::move(last);

    if (config.shift_to_nonnegative) {
        double low = 0.0;
        for (int p = 0; p < m; ++p)
            low = std::min(low, minimize_piece(out.coefficients.piece(p)).min_value);
        if (low < 0.0) {
            // A constant shift moves every coefficient by the same amount.
            out.coefficients.b.array() -= low;
            out.cost = base.objective(out.coefficients.b);
        }
    }
    return out;
}

FitResult fit_discretized_oracle(const Dataset& data, const Partition& partition,
                                 const FitConfig& config, int grid_points_per_interval) {
    config.validate();
    if (grid_points_per_interval < 2)
        throw std::invalid_argument("fit_discretized_oracle: need at least 2 grid points per interval");

    const auto t0 = Clock::now();
    const ProblemMatrices M = build_problem_matrices(data, partition, config.degree);
    QpProblem qp = make_qp_problem(M, config.lambda);

    const int m = partition.intervals();
    CutSet grid(m);
    for (int p = 0; p < m; ++p)
        for (int j = 0; j < grid_points_per_interval; ++j)
            grid.insert(p, static_cast<double>(j) / (grid_points_per_interval - 1));
    qp.C = build_G(grid, config.degree);
    qp.c = Eigen::VectorXd::Zero(qp.C.rows());
    const double assembly_time = seconds_since(t0);

    const auto t1 = Clock::now();
    QpSolution sol = solve_qp(qp, config.qp);
    FitResult out = finish_single_solve(M, config, std::move(sol), FitMethod::discretized_oracle,
                                        assembly_time, t1);
    out.cuts = std::move(grid);
    return out;
}

double grid_minimum(const SplineCoefficients& s, int points_per_interval) {
    if (points_per_interval < 2)
        throw std::invalid_argument("grid_minimum: need at least 2 points per interval");
    double low = std::numeric_limits<double>::infinity();
    for (int p = 0; p < s.partition.intervals(); ++p) {
        const LocalPolynomial piece = s.piece(p);
        for (int j = 0; j < points_per_interval; ++j) {
            const double tau = static_cast<double>(j) / (points_per_interval - 1);
            low = std::min(low, evaluate_piece(piece, tau));
        }
    }
    return low;
}

std::vector<bool> check_coefficient_bound(const std::vector<CpIteration>& trace,
                                          const FitResult& reference, double gamma) {
    if (!(gamma > 0.0))
        throw std::invalid_argument("check_coefficient_bound: gamma must be positive");
    const Eigen::VectorXd& b_ref = reference.coefficients.b;
    const double slack = 1e-6 * (1.0 + b_ref.squaredNorm());
    std::vector<bool> out;
    out.reserve(trace.size());
    for (const CpIteration& rec : trace) {
        const double lhs = (b_ref - rec.b).squaredNorm();
        const double rhs = (2.0 / gamma) * (reference.cost - rec.cost) + slack;
        out.push_back(lhs <= rhs);
    }
    return out;
}

KktResiduals verify_kkt_certificate(const FitResult& result,
                                    const ProblemMatrices& matrices, double lambda) {
    const int d = matrices.degree;
    const int m = matrices.partition.intervals();
    const Eigen::VectorXd& b = result.coefficients.b;

    // Final constraint set: accumulated sites with their multipliers from the
    // last solve, augmented with each piece's current minimizer at multiplier
    // zero (unless it coincides with an existing site).
    std::vector<Eigen::Triplet<double>> trip;
    std::vector<double> mu_aug;
    int row = 0;
    Eigen::Index mu_offset = 0;
    for (int p = 0; p < m; ++p) {
        const std::vector<double>& sites = result.cuts.piece_cuts(p);
        std::vector<std::pair<double, double>> entries;  // (tau, mu)
        entries.reserve(sites.size() + 1);
        for (std::size_t j = 0; j < sites.size(); ++j)
            entries.emplace_back(sites[j], result.qp.mu[mu_offset + static_cast<Eigen::Index>(j)]);
        mu_offset += static_cast<Eigen::Index>(sites.size());

        const PieceMinimizer pm = minimize_piece(result.coefficients.piece(p));
        const bool duplicate = std::any_of(entries.begin(), entries.end(), [&](const auto& en) {
            return std::abs(en.first - pm.tau_star) <= 1e-12;
        });
        if (!duplicate) entries.emplace_back(pm.tau_star, 0.0);
        std::sort(entries.begin(), entries.end());

        for (const auto& [tau, mu] : entries) {
            const Eigen::VectorXd g = g_tau(tau, d);
            for (int k = 0; k <= d; ++k)
                if (g[k] != 0.0) trip.emplace_back(row, d * p + k, g[k]);
            mu_aug.push_back(mu);
            ++row;
        }
    }

    Eigen::SparseMatrix<double> G(row, d * m + 1);
    G.setFromTriplets(trip.begin(), trip.end());
    const Eigen::Map<const Eigen::VectorXd> mu(mu_aug.data(), static_cast<Eigen::Index>(mu_aug.size()));

    KktResiduals r;
    Eigen::VectorXd grad = 2.0 * (matrices.A.transpose() * (matrices.A * b - matrices.y)) +
                           2.0 * lambda * (matrices.Q * b);
    grad -= G.transpose() * mu;
    if (matrices.H.rows() > 0) grad += matrices.H.transpose() * result.qp.nu;
    r.stationarity = grad.lpNorm<Eigen::Infinity>();
    if (matrices.H.rows() > 0) r.primal_eq = (matrices.H * b).lpNorm<Eigen::Infinity>();
    if (row > 0) {
        const Eigen::VectorXd values = G * b;
        r.primal_ineq = std::max(0.0, -values.minCoeff());
        r.complementarity = (mu.array() * values.array()).abs().maxCoeff();
    }
    return r;
}

}  // namespace nnspline
