#pragma once

#include <vector>

#include "nnspline/bezier.hpp"

namespace nnspline {

// Coefficients are ascending powers throughout: c[k] multiplies tau^k.
// Every solver returns the real roots sorted ascending with repeated roots
// reported once, each polished by at most two safeguarded Newton steps.

/// Real roots of c2 t^2 + c1 t + c0 via the sign-aware quadratic formula.
/// A zero leading coefficient degenerates to the linear case.
std::vector<double> roots_quadratic(double c0, double c1, double c2);

/// Real roots of a real cubic; trigonometric form when all roots are real,
/// Cardano otherwise. A zero leading coefficient delegates downward.
std::vector<double> roots_cubic(double c0, double c1, double c2, double c3);

/// Real roots of a real quartic via Ferrari's resolvent-cubic method.
std::vector<double> roots_quartic(double c0, double c1, double c2, double c3, double c4);

/// Real roots from the eigenvalues of the companion matrix. Works for any
/// trimmed degree >= 1; eigenvalues with |imaginary part| < 1e-8 are taken as
/// real. Exact zero constant terms are factored out as zero roots first.
/// Throws std::invalid_argument for the all-zero polynomial.
std::vector<double> roots_numeric(const std::vector<double>& coeffs);

/// Root-finding route for the per-piece minimization.
/// closed_form uses the degree <= 4 solvers and falls back to the companion
/// matrix for higher degrees; companion forces the numeric route throughout.
enum class LowerLevelMethod { closed_form, companion };

/// Result of minimizing one polynomial piece over [0, 1].
struct PieceMinimizer {
    enum class Method { closed_form, companion_matrix, constant_piece };

    double tau_star = 0.0;
    double min_value = 0.0;
    Method method = Method::closed_form;
};

/// Global minimum of a Bernstein piece over [0, 1]: the candidates are the
/// endpoints and the real critical points of dp/dtau inside the interval.
/// Ties within 1e-12 in value resolve to the smallest tau; a piece whose
/// derivative coefficients are all below 1e-14 is treated as constant with
/// tau_star = 0.
PieceMinimizer minimize_piece(const LocalPolynomial& p,
                              LowerLevelMethod method = LowerLevelMethod::closed_form);

}  // namespace nnspline
