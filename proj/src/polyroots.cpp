#include "nnspline/polyroots.hpp"

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace nnspline {

namespace {

constexpr double kPi = 3.14159265358979323846;

double horner(const std::vector<double>& c, double x) {
    double v = 0.0;
    for (std::size_t k = c.size(); k-- > 0;) v = v * x + c[k];
    return v;
}

void horner_value_deriv(const std::vector<double>& c, double x, double& v, double& dv) {
    v = 0.0;
    dv = 0.0;
    for (std::size_t k = c.size(); k-- > 0;) {
        dv = dv * x + v;
        v = v * x + c[k];
    }
}

// At most two Newton steps; a step is kept only if it does not increase
// |p(x)|, and iteration stops once |step| < 1e-14.
double polish_root(const std::vector<double>& c, double x) {
    for (int it = 0; it < 2; ++it) {
        double v, dv;
        horner_value_deriv(c, x, v, dv);
        if (v == 0.0 || dv == 0.0) break;
        const double step = v / dv;
        if (!std::isfinite(step)) break;
        const double xn = x - step;
        if (std::abs(horner(c, xn)) > std::abs(v)) break;
        x = xn;
        if (std::abs(step) < 1e-14) break;
    }
    return x;
}

std::vector<double> sort_dedupe(std::vector<double> roots) {
    std::sort(roots.begin(), roots.end());
    std::vector<double> out;
    for (double r : roots) {
        if (out.empty() || std::abs(r - out.back()) > 1e-9 * (1.0 + std::abs(r)))
            out.push_back(r);
    }
    return out;
}

std::vector<double> polish_all(std::vector<double> roots, const std::vector<double>& poly) {
    for (double& r : roots) r = polish_root(poly, r);
    return sort_dedupe(std::move(roots));
}

}  // namespace

std::vector<double> roots_quadratic(double c0, double c1, double c2) {
    if (c2 == 0.0) {
        if (c1 == 0.0) return {};
        return {-c0 / c1};
    }
    const double disc = c1 * c1 - 4.0 * c2 * c0;
    if (disc < 0.0) return {};
    if (disc == 0.0) return {-c1 / (2.0 * c2)};
    const double sq = std::sqrt(disc);
    // q = -(c1 + sign(c1) sqrt(disc))/2 avoids cancellation in one root.
    const double q = -0.5 * (c1 + std::copysign(sq, c1));
    std::vector<double> roots{q / c2, c0 / q};
    return polish_all(std::move(roots), {c0, c1, c2});
}

std::vector<double> roots_cubic(double c0, double c1, double c2, double c3) {
    if (c3 == 0.0) return roots_quadratic(c0, c1, c2);
    const double a2 = c2 / c3;
    const double a1 = c1 / c3;
    const double a0 = c0 / c3;
    const double shift = a2 / 3.0;
    // Depressed cubic t^3 + p t + q with x = t - shift.
    const double p = a1 - a2 * a2 / 3.0;
    const double q = 2.0 * a2 * a2 * a2 / 27.0 - a2 * a1 / 3.0 + a0;
    const double D = 0.25 * q * q + p * p * p / 27.0;

    std::vector<double> roots;
    if (D > 0.0) {
        // One real root; pick the large cube root first to avoid cancellation.
        const double sq = std::sqrt(D);
        const double u = std::cbrt(-0.5 * q - std::copysign(sq, q));
        const double t = (u == 0.0) ? 0.0 : u - p / (3.0 * u);
        roots.push_back(t - shift);
    } else if (p == 0.0 && q == 0.0) {
        roots.push_back(-shift);  // triple root
    } else {
        // Three real roots (p < 0 here).
        const double r = std::sqrt(-p / 3.0);
        const double cosarg = std::clamp(-0.5 * q / (r * r * r), -1.0, 1.0);
        const double theta = std::acos(cosarg);
        for (int k = 0; k < 3; ++k)
            roots.push_back(2.0 * r * std::cos((theta - 2.0 * kPi * k) / 3.0) - shift);
    }
    return polish_all(std::move(roots), {c0, c1, c2, c3});
}

std::vector<double> roots_quartic(double c0, double c1, double c2, double c3, double c4) {
    if (c4 == 0.0) return roots_cubic(c0, c1, c2, c3);
    const double a3 = c3 / c4;
    const double a2 = c2 / c4;
    const double a1 = c1 / c4;
    const double a0 = c0 / c4;
    const double shift = a3 / 4.0;
    // Depressed quartic t^4 + p t^2 + q t + r with x = t - shift.
    const double p = a2 - 3.0 * a3 * a3 / 8.0;
    const double q = a1 - 0.5 * a3 * a2 + a3 * a3 * a3 / 8.0;
    const double r = a0 - 0.25 * a3 * a1 + a3 * a3 * a2 / 16.0 - 3.0 * a3 * a3 * a3 * a3 / 256.0;

    std::vector<double> roots;
    if (std::abs(q) <= 1e-12 * (1.0 + std::abs(p) + std::abs(r))) {
        // Biquadratic: quadratic in t^2.
        for (double u : roots_quadratic(r, p, 1.0)) {
            if (u < -1e-12) continue;
            const double s = std::sqrt(std::max(u, 0.0));
            roots.push_back(s - shift);
            roots.push_back(-s - shift);
        }
    } else {
        // Ferrari: a positive root m of the resolvent cubic splits the quartic
        // into two quadratics (the resolvent value at 0 is -q^2 < 0, so one
        // exists).
        const std::vector<double> res =
            roots_cubic(-q * q, 2.0 * p * p - 8.0 * r, 8.0 * p, 8.0);
        double m = -1.0;
        for (double cand : res) m = std::max(m, cand);
        if (m > 0.0) {
            const double s = std::sqrt(2.0 * m);
            const double half = 0.5 * p + m;
            const double offset = q / (2.0 * s);
            for (double t : roots_quadratic(half + offset, -s, 1.0)) roots.push_back(t - shift);
            for (double t : roots_quadratic(half - offset, s, 1.0)) roots.push_back(t - shift);
        }
    }
    return polish_all(std::move(roots), {c0, c1, c2, c3, c4});
}

std::vector<double> roots_numeric(const std::vector<double>& coeffs) {
    double scale = 0.0;
    for (double c : coeffs) scale = std::max(scale, std::abs(c));
    if (coeffs.empty() || scale == 0.0)
        throw std::invalid_argument("roots_numeric: zero polynomial has no defined root set");

    int deg = static_cast<int>(coeffs.size()) - 1;
    while (deg > 0 && std::abs(coeffs[static_cast<std::size_t>(deg)]) <= 1e-14 * scale) --deg;
    if (deg == 0) return {};

    // Exact zero constant terms are roots at zero; factor them out before
    // forming the companion matrix, as the cited numeric root routines do.
    int low = 0;
    while (low < deg && coeffs[static_cast<std::size_t>(low)] == 0.0) ++low;

    std::vector<double> roots;
    if (low > 0) roots.push_back(0.0);
    if (low == deg) return sort_dedupe(std::move(roots));

    const int nd = deg - low;
    std::vector<double> reduced(static_cast<std::size_t>(nd) + 1);
    for (int k = 0; k <= nd; ++k) reduced[static_cast<std::size_t>(k)] = coeffs[static_cast<std::size_t>(low + k)];

    const double lead = reduced[static_cast<std::size_t>(nd)];
    Eigen::MatrixXd companion = Eigen::MatrixXd::Zero(nd, nd);
    for (int i = 1; i < nd; ++i) companion(i, i - 1) = 1.0;
    for (int k = 0; k < nd; ++k) companion(k, nd - 1) = -reduced[static_cast<std::size_t>(k)] / lead;

    Eigen::EigenSolver<Eigen::MatrixXd> es(companion, /*computeEigenvectors=*/false);
    if (es.info() != Eigen::Success)
        throw std::runtime_error("roots_numeric: companion eigenvalue computation failed");
    for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) {
        const std::complex<double> lambda = es.eigenvalues()[i];
        if (std::abs(lambda.imag()) < 1e-8)
            roots.push_back(polish_root(reduced, lambda.real()));
    }
    return sort_dedupe(std::move(roots));
}

PieceMinimizer minimize_piece(const LocalPolynomial& p, LowerLevelMethod method) {
    std::vector<double> dc = derivative_monomial_coeffs(p);
    double scale = 0.0;
    for (double c : dc) scale = std::max(scale, std::abs(c));

    PieceMinimizer out;
    if (scale <= 1e-14) {
        // Flat piece: minimizer pinned to tau = 0.
        out.tau_star = 0.0;
        out.min_value = evaluate_piece(p, 0.0);
        out.method = PieceMinimizer::Method::constant_piece;
        return out;
    }

    int deg = static_cast<int>(dc.size()) - 1;
    while (deg > 0 && std::abs(dc[static_cast<std::size_t>(deg)]) <= 1e-14 * scale) --deg;
    dc.resize(static_cast<std::size_t>(deg) + 1);

    std::vector<double> critical;
    if (method == LowerLevelMethod::companion) {
        critical = roots_numeric(dc);
        out.method = PieceMinimizer::Method::companion_matrix;
    } else if (deg <= 4) {
        switch (deg) {
            case 1: critical = {-dc[0] / dc[1]}; break;
            case 2: critical = roots_quadratic(dc[0], dc[1], dc[2]); break;
            case 3: critical = roots_cubic(dc[0], dc[1], dc[2], dc[3]); break;
            default: critical = roots_quartic(dc[0], dc[1], dc[2], dc[3], dc[4]); break;
        }
        out.method = PieceMinimizer::Method::closed_form;
    } else {
        critical = roots_numeric(dc);
        out.method = PieceMinimizer::Method::companion_matrix;
    }

    // Candidates: endpoints plus interior critical points; roots within
    // 1e-12 of the interval are clamped onto it.
    std::vector<double> candidates{0.0, 1.0};
    for (double t : critical) {
        if (t >= -1e-12 && t <= 1.0 + 1e-12)
            candidates.push_back(std::clamp(t, 0.0, 1.0));
    }
    std::sort(candidates.begin(), candidates.end());

    double best_tau = candidates.front();
    double best = evaluate_piece(p, best_tau);
    for (std::size_t i = 1; i < candidates.size(); ++i) {
        const double v = evaluate_piece(p, candidates[i]);
        // Strict improvement beyond the tie tolerance keeps the smallest tau.
        if (v < best - 1e-12) {
            best = v;
            best_tau = candidates[i];
        }
    }
    out.tau_star = best_tau;
    out.min_value = best;
    return out;
}

}  // namespace nnspline
