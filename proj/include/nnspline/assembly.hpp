#pragma once

#include <Eigen/Core>
#include <Eigen/SparseCore>

#include <vector>

#include "nnspline/bezier.hpp"
#include "nnspline/dataset.hpp"
#include "nnspline/partition.hpp"

namespace nnspline {

/// Bernstein basis row at tau: g[k] = C(d,k) (1-tau)^(d-k) tau^k, so that
/// g.dot(piece coefficients) evaluates the piece at tau.
/// Throws std::domain_error for tau outside [0, 1].
Eigen::VectorXd g_tau(double tau, int d);

/// Fidelity matrix: row i holds the Bernstein basis values at sample x_i in
/// the columns of the piece containing it, so (A b)_i = s(x_i).
/// Samples must be strictly increasing and inside the knot range.
Eigen::SparseMatrix<double> build_A(const std::vector<double>& xs,
                                    const Partition& partition, int d);

/// Roughness matrix: b' Q b equals the integral of |s''|^2 over the knot
/// range. Assembled from per-interval blocks scaled by 1/width^3; blocks of
/// adjacent intervals overlap in one corner entry, which is summed. Symmetric
/// positive semidefinite by construction.
Eigen::SparseMatrix<double> build_Q(const Partition& partition, int d);

/// C^2 continuity matrix: H b = 0 exactly when the first and second
/// derivatives match across every interior knot. 2(m-1) rows ordered
/// (knot 1, l=1), (knot 1, l=2), (knot 2, l=1), ...
Eigen::SparseMatrix<double> build_H(const Partition& partition, int d);

/// Per-piece sets of normalized sites at which nonnegativity is enforced.
/// Sites only accumulate, keeping each piece's list sorted.
class CutSet {
public:
    CutSet() = default;
    explicit CutSet(int pieces);

    /// Insert tau into piece p; rejects values within tol of an existing
    /// entry in the same piece and returns false in that case.
    bool insert(int piece, double tau, double tol = 1e-12);

    const std::vector<double>& piece_cuts(int p) const;
    int pieces() const { return static_cast<int>(cuts_.size()); }
    int total() const { return total_; }

private:
    std::vector<std::vector<double>> cuts_;
    int total_ = 0;
};

/// Constraint matrix with one Bernstein basis row per accumulated site, rows
/// grouped by piece and sorted by tau; (G b) lists the piece values at the
/// sites. An empty cut set yields a matrix with zero rows.
Eigen::SparseMatrix<double> build_G(const CutSet& cuts, int d);

/// All matrices of one smoothing problem plus the data they came from.
struct ProblemMatrices {
    Eigen::SparseMatrix<double> A;
    Eigen::SparseMatrix<double> Q;
    Eigen::SparseMatrix<double> H;
    std::vector<double> xs;
    Eigen::VectorXd y;
    Partition partition;
    int degree;
};

ProblemMatrices build_problem_matrices(const Dataset& data,
                                       const Partition& partition, int degree);

}  // namespace nnspline
