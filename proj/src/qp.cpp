#include "nnspline/qp.hpp"

#include <Eigen/Dense>
#include <Eigen/SparseLU>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

namespace nnspline {

namespace {

using Clock = std::chrono::steady_clock;
using SpMat = Eigen::SparseMatrix<double>;
using Eigen::VectorXd;

double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

double inf_norm(const VectorXd& v) {
    return v.size() == 0 ? 0.0 : v.lpNorm<Eigen::Infinity>();
}

// [S, E'; E, 0] with S in the leading block.
SpMat assemble_kkt(const SpMat& S, const SpMat& E) {
    const Eigen::Index nv = S.rows();
    const Eigen::Index me = E.rows();
    std::vector<Eigen::Triplet<double>> trip;
    trip.reserve(static_cast<std::size_t>(S.nonZeros() + 2 * E.nonZeros()));
    for (int k = 0; k < S.outerSize(); ++k)
        for (SpMat::InnerIterator it(S, k); it; ++it)
            trip.emplace_back(static_cast<int>(it.row()), static_cast<int>(it.col()), it.value());
    for (int k = 0; k < E.outerSize(); ++k)
        for (SpMat::InnerIterator it(E, k); it; ++it) {
            trip.emplace_back(static_cast<int>(nv + it.row()), static_cast<int>(it.col()), it.value());
            trip.emplace_back(static_cast<int>(it.col()), static_cast<int>(nv + it.row()), it.value());
        }
    SpMat K(nv + me, nv + me);
    K.setFromTriplets(trip.begin(), trip.end());
    return K;
}

// Largest alpha in [0, 1] keeping v + alpha dv >= 0.
double max_step(const VectorXd& v, const VectorXd& dv) {
    double alpha = 1.0;
    for (Eigen::Index i = 0; i < v.size(); ++i)
        if (dv[i] < 0.0) alpha = std::min(alpha, -v[i] / dv[i]);
    return alpha;
}

double matrix_scale(const SpMat& M) {
    double s = 0.0;
    for (int k = 0; k < M.outerSize(); ++k)
        for (SpMat::InnerIterator it(M, k); it; ++it) s = std::max(s, std::abs(it.value()));
    return s;
}

// Direct solve of the equality-constrained problem (no inequalities):
// [2P, E'; E, 0] [b; nu] = [-q; e], with two refinement passes. The optimal
// status test is relative to the cost scale so that huge penalty weights do
// not defeat an absolute tolerance.
QpSolution solve_equality_constrained(const QpProblem& prob, const QpSettings& settings,
                                      Clock::time_point t0) {
    const Eigen::Index nv = prob.vars();
    const Eigen::Index me = prob.E.rows();

    QpSolution sol;
    sol.mu = VectorXd::Zero(0);

    SpMat K = assemble_kkt(SpMat(2.0 * prob.P), prob.E);
    Eigen::SparseLU<SpMat> lu;
    lu.compute(K);
    if (lu.info() != Eigen::Success) {
        sol.b = VectorXd::Zero(nv);
        sol.nu = VectorXd::Zero(me);
        sol.status = QpStatus::numerical_failure;
        sol.kkt = kkt_residuals(prob, sol.b, sol.mu, sol.nu);
        sol.objective = prob.objective(sol.b);
        sol.wall_time_s = seconds_since(t0);
        return sol;
    }

    VectorXd rhs(nv + me);
    rhs.head(nv) = -prob.q;
    if (me > 0) rhs.tail(me) = prob.e;
    VectorXd xy = lu.solve(rhs);
    for (int pass = 0; pass < 2 && xy.allFinite(); ++pass) {
        VectorXd residual = rhs - K * xy;
        xy += lu.solve(residual);
    }

    sol.iterations = 1;
    if (!xy.allFinite()) {
        sol.b = VectorXd::Zero(nv);
        sol.nu = VectorXd::Zero(me);
        sol.status = QpStatus::numerical_failure;
    } else {
        sol.b = xy.head(nv);
        sol.nu = xy.tail(me);
        const double scale = 1.0 + 2.0 * matrix_scale(prob.P) + inf_norm(prob.q) + inf_norm(prob.e);
        sol.kkt = kkt_residuals(prob, sol.b, sol.mu, sol.nu);
        sol.status = (sol.kkt.max_norm() <= settings.tol * scale) ? QpStatus::optimal
                                                                  : QpStatus::numerical_failure;
    }
    if (sol.status == QpStatus::numerical_failure)
        sol.kkt = kkt_residuals(prob, sol.b, sol.mu, sol.nu);
    sol.objective = prob.objective(sol.b);
    sol.wall_time_s = seconds_since(t0);
    return sol;
}

}  // namespace

double QpProblem::objective(const VectorXd& b) const {
    return b.dot(P * b) + q.dot(b) + constant;
}

void QpProblem::validate() const {
    const Eigen::Index nv = q.size();
    if (P.rows() != nv || P.cols() != nv)
        throw std::invalid_argument("QpProblem: P must be square and match q");
    if (E.rows() > 0 && E.cols() != nv)
        throw std::invalid_argument("QpProblem: E column count must match q");
    if (e.size() != E.rows())
        throw std::invalid_argument("QpProblem: e length must match E rows");
    if (C.rows() > 0 && C.cols() != nv)
        throw std::invalid_argument("QpProblem: C column count must match q");
    if (c.size() != C.rows())
        throw std::invalid_argument("QpProblem: c length must match C rows");
}

double KktResiduals::max_norm() const {
    return std::max(std::max(stationarity, primal_eq), std::max(primal_ineq, complementarity));
}

KktResiduals kkt_residuals(const QpProblem& p, const VectorXd& b,
                           const VectorXd& mu, const VectorXd& nu) {
    KktResiduals r;
    VectorXd grad = 2.0 * (p.P * b) + p.q;
    if (p.C.rows() > 0) grad -= p.C.transpose() * mu;
    if (p.E.rows() > 0) grad += p.E.transpose() * nu;
    r.stationarity = inf_norm(grad);
    if (p.E.rows() > 0) r.primal_eq = inf_norm(p.E * b - p.e);
    if (p.C.rows() > 0) {
        const VectorXd slack = p.C * b - p.c;
        r.primal_ineq = std::max(0.0, -slack.minCoeff());
        r.complementarity = (mu.array() * slack.array()).abs().maxCoeff();
    }
    return r;
}

QpSolution solve_qp(const QpProblem& prob, const QpSettings& settings) {
    const auto t0 = Clock::now();
    prob.validate();

    const Eigen::Index nv = prob.vars();
    const Eigen::Index me = prob.E.rows();
    const Eigen::Index mi = prob.C.rows();

    if (mi == 0) return solve_equality_constrained(prob, settings, t0);

    QpSolution sol;
    auto fail = [&](const VectorXd& x, const VectorXd& z, const VectorXd& y, int iters) {
        sol.b = x;
        sol.mu = z;
        sol.nu = y;
        sol.status = QpStatus::numerical_failure;
        sol.iterations = iters;
        sol.kkt = kkt_residuals(prob, x, z, y);
        sol.objective = prob.objective(x);
        sol.wall_time_s = seconds_since(t0);
        return sol;
    };

    const SpMat twoP = 2.0 * prob.P;
    const SpMat Ct = prob.C.transpose();

    // Starting point: equality-constrained stationary point ignoring the
    // inequalities, slacks lifted to at least 1, unit duals.
    VectorXd x = VectorXd::Zero(nv);
    {
        SpMat K0 = assemble_kkt(twoP, prob.E);
        Eigen::SparseLU<SpMat> lu0;
        lu0.compute(K0);
        if (lu0.info() == Eigen::Success) {
            VectorXd rhs(nv + me);
            rhs.head(nv) = -prob.q;
            if (me > 0) rhs.tail(me) = prob.e;
            VectorXd xy = lu0.solve(rhs);
            if (xy.allFinite()) x = xy.head(nv);
        }
    }
    VectorXd s = (prob.C * x - prob.c).cwiseMax(1.0);
    VectorXd z = VectorXd::Ones(mi);
    VectorXd y = VectorXd::Zero(me);

    const double frac = 0.995;  // fraction-to-boundary step damping
    // Holding the barrier near the tolerance keeps z/s bounded; letting the
    // complementarity products collapse to machine zero destroys the KKT
    // conditioning while the linear residuals are still catching up.
    const double mu_floor = 0.05 * settings.tol;

    VectorXd best_x = x, best_z = z, best_y = y;
    double best_res = std::numeric_limits<double>::infinity();
    int best_iter = 0;

    Eigen::SparseLU<SpMat> lu;
    for (int iter = 0; iter <= settings.max_iterations; ++iter) {
        sol.kkt = kkt_residuals(prob, x, z, y);
        if (sol.kkt.max_norm() < best_res) {
            best_res = sol.kkt.max_norm();
            best_x = x;
            best_z = z;
            best_y = y;
            best_iter = iter;
        }
        if (sol.kkt.max_norm() <= settings.tol) {
            sol.b = x;
            sol.mu = z;
            sol.nu = y;
            sol.status = QpStatus::optimal;
            sol.iterations = iter;
            sol.objective = prob.objective(x);
            sol.wall_time_s = seconds_since(t0);
            return sol;
        }
        if (iter == settings.max_iterations) break;

        const VectorXd rd = twoP * x + prob.q - Ct * z +
                            (me > 0 ? VectorXd(prob.E.transpose() * y) : VectorXd::Zero(nv));
        const VectorXd re = me > 0 ? VectorXd(prob.E * x - prob.e) : VectorXd();
        const VectorXd ri = prob.C * x - s - prob.c;
        const double mu_gap = s.dot(z) / static_cast<double>(mi);

        const VectorXd w = z.cwiseQuotient(s);
        SpMat S = twoP;
        S += SpMat(Ct * w.asDiagonal() * prob.C);
        SpMat K = assemble_kkt(S, prob.E);
        // The sparsity pattern is identical across iterations; analyze once.
        if (iter == 0) lu.analyzePattern(K);
        lu.factorize(K);
        if (lu.info() != Eigen::Success) return fail(x, z, y, iter);

        auto solve_step = [&](const VectorXd& rc, VectorXd& dx, VectorXd& dy,
                              VectorXd& ds, VectorXd& dz) -> bool {
            VectorXd rhs(nv + me);
            rhs.head(nv) = -rd - Ct * (rc.cwiseQuotient(s) + w.cwiseProduct(ri));
            if (me > 0) rhs.tail(me) = -re;
            VectorXd dxy = lu.solve(rhs);
            if (!dxy.allFinite()) return false;
            dxy += lu.solve(VectorXd(rhs - K * dxy));  // one refinement pass
            if (!dxy.allFinite()) return false;
            dx = dxy.head(nv);
            dy = me > 0 ? VectorXd(dxy.tail(me)) : VectorXd();
            ds = prob.C * dx + ri;
            dz = -rc.cwiseQuotient(s) - w.cwiseProduct(ds);
            return true;
        };

        // Predictor (affine scaling) direction.
        VectorXd dx_aff, dy_aff, ds_aff, dz_aff;
        if (!solve_step(s.cwiseProduct(z), dx_aff, dy_aff, ds_aff, dz_aff))
            return fail(x, z, y, iter);
        const double alpha_p_aff = max_step(s, ds_aff);
        const double alpha_d_aff = max_step(z, dz_aff);
        const double mu_aff = (s + alpha_p_aff * ds_aff).dot(z + alpha_d_aff * dz_aff) /
                              static_cast<double>(mi);
        const double ratio = std::clamp(mu_aff / std::max(mu_gap, 1e-300), 0.0, 1.0);
        double sigma = ratio * ratio * ratio;
        if (mu_gap < mu_floor) sigma = std::min(1.0, std::max(sigma, mu_floor / mu_gap));

        // Corrector with centering.
        const VectorXd rc = (s.array() * z.array() + ds_aff.array() * dz_aff.array() -
                             sigma * mu_gap)
                                .matrix();
        VectorXd dx, dy, ds, dz;
        if (!solve_step(rc, dx, dy, ds, dz)) return fail(x, z, y, iter);

        const double alpha_p = std::min(1.0, frac * max_step(s, ds));
        const double alpha_d = std::min(1.0, frac * max_step(z, dz));
        x += alpha_p * dx;
        s += alpha_p * ds;
        z += alpha_d * dz;
        if (me > 0) y += alpha_d * dy;
        if (!x.allFinite() || !s.allFinite() || !z.allFinite()) return fail(x, z, y, iter);
    }

    sol.b = best_x;
    sol.mu = best_z;
    sol.nu = best_y;
    sol.status = QpStatus::max_iters;
    sol.iterations = best_iter;
    sol.kkt = kkt_residuals(prob, best_x, best_z, best_y);
    sol.objective = prob.objective(best_x);
    sol.wall_time_s = seconds_since(t0);
    return sol;
}

NullSpaceBasis null_space_basis(const Eigen::MatrixXd& E) {
    NullSpaceBasis out;
    const Eigen::Index n = E.cols();
    if (E.rows() == 0) {
        out.V = Eigen::MatrixXd::Identity(n, n);
        out.rank = 0;
        out.full_row_rank = true;
        return out;
    }
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(E.transpose());
    out.rank = qr.rank();
    out.full_row_rank = (out.rank == E.rows());
    // Columns of Q beyond the rank are orthogonal to the row space of E.
    Eigen::MatrixXd Qfull = qr.householderQ() * Eigen::MatrixXd::Identity(n, n);
    out.V = Qfull.rightCols(n - out.rank);
    return out;
}

double strong_convexity_gamma(const Eigen::SparseMatrix<double>& A,
                              const Eigen::SparseMatrix<double>& Q,
                              double lambda,
                              const Eigen::SparseMatrix<double>& H) {
    if (!(lambda > 0.0))
        throw std::invalid_argument("strong_convexity_gamma: lambda must be positive");
    const Eigen::MatrixXd M =
        Eigen::MatrixXd(Eigen::SparseMatrix<double>(A.transpose() * A)) + lambda * Eigen::MatrixXd(Q);
    const NullSpaceBasis basis = null_space_basis(Eigen::MatrixXd(H));
    const Eigen::MatrixXd reduced = basis.V.transpose() * M * basis.V;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(reduced);
    if (es.info() != Eigen::Success)
        throw std::runtime_error("strong_convexity_gamma: eigensolver failed");
    const double gamma = 2.0 * es.eigenvalues().minCoeff();
    if (!(gamma > 0.0))
        throw std::domain_error("strong_convexity_gamma: cost is not strongly convex on null(H)");
    return gamma;
}

}  // namespace nnspline
