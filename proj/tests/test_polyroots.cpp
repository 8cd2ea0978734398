#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <cmath>

#include "nnspline/polyroots.hpp"
#include "oracles.hpp"

using nnspline::LocalPolynomial;
using nnspline::LowerLevelMethod;
using nnspline::PieceMinimizer;

namespace {

double match_error(const std::vector<double>& expected, const std::vector<double>& got) {
    double worst = 0.0;
    for (double e : expected) {
        double best = std::numeric_limits<double>::infinity();
        for (double g : got) best = std::min(best, std::abs(g - e));
        worst = std::max(worst, best);
    }
    return worst;
}

LocalPolynomial random_piece(oracle::TestRng& rng, int d) {
    LocalPolynomial p;
    p.degree = d;
    p.coeffs.resize(static_cast<std::size_t>(d) + 1);
    for (double& c : p.coeffs) c = rng.uniform(-2.0, 2.0);
    return p;
}

}  // namespace

TEST_CASE("quadratic handles the textbook cases") {
    CHECK(match_error({-1.0, 1.0}, nnspline::roots_quadratic(-1.0, 0.0, 1.0)) <= 1e-15);
    const auto dbl = nnspline::roots_quadratic(0.0, 0.0, 1.0);
    REQUIRE(dbl.size() == 1);  // double root reported once
    CHECK(dbl[0] == 0.0);
    CHECK(nnspline::roots_quadratic(1.0, 0.0, 1.0).empty());  // complex pair
    const auto linear = nnspline::roots_quadratic(-2.0, 1.0, 0.0);
    REQUIRE(linear.size() == 1);
    CHECK(linear[0] == doctest::Approx(2.0));
    CHECK(nnspline::roots_quadratic(3.0, 0.0, 0.0).empty());
}

TEST_CASE("planted quadratics recovered to 1e-12") {
    oracle::TestRng rng(101);
    double worst = 0.0;
    for (int trial = 0; trial < 1000; ++trial) {
        const double r0 = rng.uniform(-3.0, 3.0);
        const double r1 = r0 + rng.uniform(0.05, 3.0);
        const double lead = rng.uniform(0.2, 2.0) * (rng.uniform() < 0.5 ? -1.0 : 1.0);
        const auto c = oracle::expand_from_roots({r0, r1}, lead);
        worst = std::max(worst, match_error({r0, r1}, nnspline::roots_quadratic(c[0], c[1], c[2])));
    }
    CHECK(worst <= 1e-12);
}

TEST_CASE("cubic factors and degenerate cases") {
    CHECK(match_error({-1.0, 0.0, 1.0}, nnspline::roots_cubic(0.0, -1.0, 0.0, 1.0)) <= 1e-12);
    const auto triple = nnspline::roots_cubic(0.0, 0.0, 0.0, 1.0);
    REQUIRE(triple.size() == 1);
    CHECK(triple[0] == 0.0);
    // Zero leading coefficient delegates to the quadratic.
    CHECK(match_error({-2.0, 2.0}, nnspline::roots_cubic(-4.0, 0.0, 1.0, 0.0)) <= 1e-12);
}

TEST_CASE("planted cubics recovered to 1e-9 over 1000 cases") {
    oracle::TestRng rng(202);
    double worst = 0.0;
    for (int trial = 0; trial < 1000; ++trial) {
        std::vector<double> roots{rng.uniform(-2.0, 2.0)};
        roots.push_back(roots[0] + rng.uniform(0.15, 2.0));
        roots.push_back(roots[1] + rng.uniform(0.15, 2.0));
        const double lead = rng.uniform(0.2, 2.0) * (rng.uniform() < 0.5 ? -1.0 : 1.0);
        const auto c = oracle::expand_from_roots(roots, lead);
        worst = std::max(worst, match_error(roots, nnspline::roots_cubic(c[0], c[1], c[2], c[3])));
    }
    CHECK(worst < 1e-9);
}

TEST_CASE("quartic special shapes") {
    CHECK(match_error({-1.0, 1.0}, nnspline::roots_quartic(-1.0, 0.0, 0.0, 0.0, 1.0)) <= 1e-12);
    // (t^2 - 1)^2: double roots reported once.
    const auto dbl = nnspline::roots_quartic(1.0, 0.0, -2.0, 0.0, 1.0);
    REQUIRE(dbl.size() == 2);
    CHECK(match_error({-1.0, 1.0}, dbl) <= 1e-9);
}

TEST_CASE("planted quartics recovered to 1e-8 over 1000 cases") {
    oracle::TestRng rng(303);
    double worst = 0.0;
    for (int trial = 0; trial < 1000; ++trial) {
        std::vector<double> roots{rng.uniform(-2.0, 1.0)};
        for (int k = 0; k < 3; ++k) roots.push_back(roots.back() + rng.uniform(0.15, 1.2));
        const double lead = rng.uniform(0.2, 2.0) * (rng.uniform() < 0.5 ? -1.0 : 1.0);
        const auto c = oracle::expand_from_roots(roots, lead);
        worst = std::max(worst,
                         match_error(roots, nnspline::roots_quartic(c[0], c[1], c[2], c[3], c[4])));
    }
    CHECK(worst < 1e-8);
}

TEST_CASE("companion matrix roots for degree five and beyond") {
    const std::vector<double> planted{0.1, 0.3, 0.5, 0.7, 0.9};
    const auto c = oracle::expand_from_roots(planted, 1.0);
    CHECK(match_error(planted, nnspline::roots_numeric(c)) <= 1e-9);

    std::vector<double> sixths;
    for (int k = 1; k <= 5; ++k) sixths.push_back(k / 6.0);
    const auto c6 = oracle::expand_from_roots(sixths, 1.0);
    CHECK(match_error(sixths, nnspline::roots_numeric(c6)) <= 1e-9);

    const auto pure = nnspline::roots_numeric({0.0, 0.0, 0.0, 0.0, 0.0, 1.0});  // tau^5
    REQUIRE(pure.size() == 1);
    CHECK(pure[0] == 0.0);

    CHECK_THROWS_AS(nnspline::roots_numeric({0.0, 0.0, 0.0}), std::invalid_argument);
}

TEST_CASE("every returned root nearly annihilates its polynomial") {
    oracle::TestRng rng(404);
    for (int trial = 0; trial < 200; ++trial) {
        const int deg = rng.uniform_int(2, 7);
        std::vector<double> roots{rng.uniform(-1.0, 0.0)};
        for (int k = 1; k < deg; ++k) roots.push_back(roots.back() + rng.uniform(0.1, 0.8));
        const auto c = oracle::expand_from_roots(roots, rng.uniform(0.5, 1.5));
        double scale = 0.0;
        for (double v : c) scale = std::max(scale, std::abs(v));

        std::vector<double> got;
        switch (deg) {
            case 2: got = nnspline::roots_quadratic(c[0], c[1], c[2]); break;
            case 3: got = nnspline::roots_cubic(c[0], c[1], c[2], c[3]); break;
            case 4: got = nnspline::roots_quartic(c[0], c[1], c[2], c[3], c[4]); break;
            default: got = nnspline::roots_numeric(c); break;
        }
        for (double r : got) CHECK(std::abs(oracle::horner(c, r)) <= 1e-8 * (1.0 + scale));
    }
}

TEST_CASE("minimize_piece on the symmetric bowl") {
    // p(tau) = (1-tau)^3 + tau^3
    const PieceMinimizer pm = nnspline::minimize_piece({3, {1.0, 0.0, 0.0, 1.0}});
    CHECK(pm.tau_star == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(pm.min_value == doctest::Approx(0.25).epsilon(1e-12));
    CHECK(pm.method == PieceMinimizer::Method::closed_form);
}

TEST_CASE("minimize_piece on a monotone ramp picks the left endpoint") {
    const PieceMinimizer pm = nnspline::minimize_piece({3, {0.0, 1.0 / 3.0, 2.0 / 3.0, 1.0}});
    CHECK(pm.tau_star == 0.0);
    CHECK(pm.min_value == doctest::Approx(0.0).epsilon(1e-15));
}

TEST_CASE("minimize_piece on a constant piece follows the zero convention") {
    const PieceMinimizer pm = nnspline::minimize_piece({4, {1.5, 1.5, 1.5, 1.5, 1.5}});
    CHECK(pm.tau_star == 0.0);
    CHECK(pm.min_value == doctest::Approx(1.5));
    CHECK(pm.method == PieceMinimizer::Method::constant_piece);
}

TEST_CASE("minimize_piece matches a dense grid search on a random degree-6 piece") {
    oracle::TestRng rng(505);
    const LocalPolynomial p = random_piece(rng, 6);
    const PieceMinimizer pm = nnspline::minimize_piece(p);
    const oracle::GridMin grid = oracle::grid_search_min(p, 1000000);
    CHECK(std::abs(pm.tau_star - grid.tau) <= 1e-5);
    CHECK(std::abs(pm.min_value - grid.value) <= 1e-9);
}

TEST_CASE("minimizer dominates a dense grid for degrees 3..10") {
    oracle::TestRng rng(606);
    for (int d = 3; d <= 10; ++d) {
        for (int trial = 0; trial < 5; ++trial) {
            const LocalPolynomial p = random_piece(rng, d);
            const PieceMinimizer pm = nnspline::minimize_piece(p);
            double floor = std::numeric_limits<double>::infinity();
            for (int j = 0; j < 10000; ++j) floor = std::min(floor, nnspline::evaluate_piece(p, j / 9999.0));
            CHECK(pm.min_value <= floor + 1e-10);
        }
    }
}

TEST_CASE("closed-form and companion routes agree on low-degree pieces") {
    oracle::TestRng rng(707);
    for (int trial = 0; trial < 100; ++trial) {
        const int d = rng.uniform_int(4, 5);  // derivative degree 3 or 4
        const LocalPolynomial p = random_piece(rng, d);
        const PieceMinimizer closed = nnspline::minimize_piece(p, LowerLevelMethod::closed_form);
        const PieceMinimizer numeric = nnspline::minimize_piece(p, LowerLevelMethod::companion);
        CHECK(closed.method == PieceMinimizer::Method::closed_form);
        CHECK(numeric.method == PieceMinimizer::Method::companion_matrix);
        CHECK(std::abs(closed.min_value - numeric.min_value) <= 1e-9);
    }
}

TEST_CASE("returned minimum is within relative tolerance 1e-6 of the true minimum") {
    oracle::TestRng rng(808);
    for (int trial = 0; trial < 60; ++trial) {
        const int d = rng.uniform_int(3, 10);
        const LocalPolynomial p = random_piece(rng, d);
        const PieceMinimizer pm = nnspline::minimize_piece(p);
        const oracle::GridMin grid = oracle::grid_search_min(p, 200001);
        // min_found <= min_true + 1e-6 |min_true|; the grid value upper-bounds
        // the true minimum, so the check is conservative.
        CHECK(pm.min_value <= grid.value + 1e-6 * std::abs(grid.value) + 1e-12);
    }
}

TEST_CASE("value recomputes at the reported minimizer") {
    oracle::TestRng rng(909);
    for (int trial = 0; trial < 50; ++trial) {
        const LocalPolynomial p = random_piece(rng, rng.uniform_int(3, 10));
        const PieceMinimizer pm = nnspline::minimize_piece(p);
        CHECK(pm.tau_star >= 0.0);
        CHECK(pm.tau_star <= 1.0);
        CHECK(std::abs(nnspline::evaluate_piece(p, pm.tau_star) - pm.min_value) <= 1e-12);
    }
}

TEST_CASE("ties in minimum value break toward the smaller tau") {
    // Symmetric W-shaped piece: two equal interior minima.
    const PieceMinimizer pm = nnspline::minimize_piece({4, {0.0, -1.0, 0.5, -1.0, 0.0}});
    CHECK(pm.tau_star < 0.5);
}
