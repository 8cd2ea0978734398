#pragma once

#include <Eigen/Core>
#include <Eigen/SparseCore>

namespace nnspline {

/// Convex quadratic program
///   minimize b' P b + q' b + constant
///   subject to E b = e, C b >= c,
/// with P symmetric positive semidefinite (and positive definite on the null
/// space of E for the smoothing problems). Either constraint block may be
/// empty (zero rows).
struct QpProblem {
    Eigen::SparseMatrix<double> P;
    Eigen::VectorXd q;
    double constant = 0.0;
    Eigen::SparseMatrix<double> E;
    Eigen::VectorXd e;
    Eigen::SparseMatrix<double> C;
    Eigen::VectorXd c;

    Eigen::Index vars() const { return q.size(); }
    double objective(const Eigen::VectorXd& b) const;
    void validate() const;  // throws std::invalid_argument on dimension mismatch
};

struct QpSettings {
    double tol = 1e-9;        // max-norm bound on all four KKT residuals
    int max_iterations = 100;
};

enum class QpStatus { optimal, max_iters, numerical_failure };

/// Max-norms of the first-order optimality residuals at a candidate point:
/// stationarity |2Pb + q - C'mu + E'nu|, equality |Eb - e|, inequality
/// violation |(Cb - c)^-| and complementarity |mu o (Cb - c)|.
struct KktResiduals {
    double stationarity = 0.0;
    double primal_eq = 0.0;
    double primal_ineq = 0.0;
    double complementarity = 0.0;

    double max_norm() const;
};

struct QpSolution {
    Eigen::VectorXd b;
    Eigen::VectorXd mu;  // inequality multipliers, >= 0 at optimum
    Eigen::VectorXd nu;  // equality multipliers
    QpStatus status = QpStatus::numerical_failure;
    KktResiduals kkt;
    int iterations = 0;
    double wall_time_s = 0.0;
    double objective = 0.0;
};

/// Mehrotra predictor-corrector primal-dual path following on the sparse
/// augmented KKT system. Deterministic for identical inputs and settings.
///
/// With no inequality rows the equality-constrained KKT system is solved
/// directly (one sparse LU factorization plus iterative refinement); that
/// path accepts residuals relative to the cost scale, so very large penalty
/// weights still report optimal. A factorization breakdown yields
/// status = numerical_failure, never an exception.
QpSolution solve_qp(const QpProblem& p, const QpSettings& settings = {});

KktResiduals kkt_residuals(const QpProblem& p, const Eigen::VectorXd& b,
                           const Eigen::VectorXd& mu, const Eigen::VectorXd& nu);

/// Orthonormal basis of the null space of E from a Householder QR of E'.
struct NullSpaceBasis {
    Eigen::MatrixXd V;       // E V = 0, V'V = I
    Eigen::Index rank = 0;   // numerical rank of E
    bool full_row_rank = true;
};

NullSpaceBasis null_space_basis(const Eigen::MatrixXd& E);

/// Strong-convexity constant of b' (A'A + lambda Q) b on the null space of H:
/// twice the smallest eigenvalue of V' (A'A + lambda Q) V. Throws
/// std::domain_error when that eigenvalue is not positive beyond -1e-10,
/// which signals a degenerate instance.
double strong_convexity_gamma(const Eigen::SparseMatrix<double>& A,
                              const Eigen::SparseMatrix<double>& Q,
                              double lambda,
                              const Eigen::SparseMatrix<double>& H);

}  // namespace nnspline
