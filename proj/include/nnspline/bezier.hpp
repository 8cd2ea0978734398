#pragma once

#include <Eigen/Core>

#include <vector>

#include "nnspline/partition.hpp"

namespace nnspline {

/// Largest argument for which exact binomial coefficients are tabulated.
/// Covers every degree handled by the library (fits use d <= 10; degree
/// elevation adds one).
inline constexpr int kMaxBinomialN = 24;

/// Exact binomial coefficient C(n, k) from a precomputed integer table.
long long binomial(int n, int k);

/// One polynomial piece in Bernstein form over normalized tau in [0, 1]:
/// p(tau) = sum_k coeffs[k] * C(d,k) * (1-tau)^(d-k) * tau^k.
struct LocalPolynomial {
    int degree = 0;
    std::vector<double> coeffs;  // size degree + 1
};

/// Bernstein-Bezier coefficients of a piecewise polynomial of degree d on a
/// partition with m intervals. Piece p owns b[d*p .. d*p+d]; adjacent pieces
/// share the boundary coefficient, so the spline value at knot xi_i is
/// b[d*i].
struct SplineCoefficients {
    int degree;
    Partition partition;
    Eigen::VectorXd b;  // length d*m + 1

    SplineCoefficients(int degree, Partition partition, Eigen::VectorXd b);

    /// Copy of piece p's d+1 coefficients as a LocalPolynomial.
    LocalPolynomial piece(int p) const;
};

/// Evaluate a Bernstein piece at tau via the de Casteljau recursion, which is
/// stable near the endpoints. Throws std::domain_error for tau outside [0, 1].
double evaluate_piece(const LocalPolynomial& p, double tau);

/// Evaluate the spline at x: locate the interval, normalize to tau, evaluate
/// the piece. Throws std::domain_error for x outside the knot range.
double evaluate_spline(const SplineCoefficients& s, double x);

/// Monomial coefficients of dp/dtau in ascending powers (length d):
/// coefficient of tau^l is
///   sum_{k=0}^{l} d! (-1)^(l-k) (coeffs[k+1]-coeffs[k]) / ((d-l-1)!(l-k)!k!).
std::vector<double> derivative_monomial_coeffs(const LocalPolynomial& p);

/// Re-express the same spline with degree d+1 (standard Bernstein degree
/// raising). Used by tests for the nesting of spline spaces; the solvers do
/// not call it.
SplineCoefficients elevate_degree(const SplineCoefficients& s);

}  // namespace nnspline
