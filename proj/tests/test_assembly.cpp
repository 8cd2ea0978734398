#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "nnspline/assembly.hpp"
#include "nnspline/qp.hpp"
#include "nnspline/smoothers.hpp"
#include "oracles.hpp"

using nnspline::CutSet;
using nnspline::Partition;
using nnspline::SplineCoefficients;

namespace {

Partition random_partition(oracle::TestRng& rng, int max_intervals = 6) {
    const int m = rng.uniform_int(2, max_intervals);
    std::vector<double> knots{rng.uniform(-1.0, 0.5)};
    for (int i = 0; i < m; ++i) knots.push_back(knots.back() + rng.uniform(0.3, 2.5));
    return Partition(knots);
}

Eigen::VectorXd random_coeffs(oracle::TestRng& rng, int d, int m, double lo = -2.0, double hi = 2.0) {
    Eigen::VectorXd b(d * m + 1);
    for (Eigen::Index i = 0; i < b.size(); ++i) b[i] = rng.uniform(lo, hi);
    return b;
}

// Roughness entry straight from the factorial ratio, evaluated exactly in
// 128-bit integers. Independent route used to pin down the assembled values.
double factorial_weight(int d, int k, int l, int v, int w) {
    if (k < v || k > d + v - 2 || l < w || l > d + w - 2) return 0.0;
    auto fact = [](int n) {
        __int128 f = 1;
        for (int i = 2; i <= n; ++i) f *= i;
        return f;
    };
    const __int128 num = fact(d) * fact(d) * fact(2 * d - k - l + v + w - 4) * fact(k + l - v - w);
    const __int128 den = fact(2 * d - 3) * fact(d - k + v - 2) * fact(k - v) *
                         fact(d - l + w - 2) * fact(l - w);
    return static_cast<double>(static_cast<long double>(num) / static_cast<long double>(den));
}

}  // namespace

TEST_CASE("basis row g_tau") {
    const Eigen::VectorXd at_zero = nnspline::g_tau(0.0, 4);
    CHECK(at_zero[0] == 1.0);
    for (int k = 1; k <= 4; ++k) CHECK(at_zero[k] == 0.0);

    const Eigen::VectorXd mid = nnspline::g_tau(0.5, 3);
    CHECK(mid[0] == doctest::Approx(0.125));
    CHECK(mid[1] == doctest::Approx(0.375));
    CHECK(mid[2] == doctest::Approx(0.375));
    CHECK(mid[3] == doctest::Approx(0.125));

    oracle::TestRng rng(1);
    for (int d = 3; d <= 10; ++d)
        CHECK(nnspline::g_tau(rng.uniform(), d).sum() == doctest::Approx(1.0).epsilon(1e-13));

    CHECK_THROWS_AS(nnspline::g_tau(-0.1, 3), std::domain_error);
    CHECK_THROWS_AS(nnspline::g_tau(1.1, 3), std::domain_error);
}

TEST_CASE("fidelity matrix rows") {
    const Partition part({0.0, 1.0, 2.0, 3.0});
    const int d = 3;

    SUBCASE("a sample at a knot hits a single shared coefficient") {
        const auto A = nnspline::build_A({0.0, 1.0, 2.0, 3.0}, part, d);
        const Eigen::MatrixXd dense(A);
        for (int i = 0; i < 4; ++i) {
            for (int col = 0; col <= d * part.intervals(); ++col) {
                const double expected = (col == d * i) ? 1.0 : 0.0;
                CHECK(dense(i, col) == expected);
            }
        }
    }

    SUBCASE("partition of unity maps the all-ones coefficients to ones") {
        const auto A = nnspline::build_A({0.2, 0.9, 1.5, 2.8}, part, d);
        const Eigen::VectorXd values = A * Eigen::VectorXd::Ones(d * part.intervals() + 1);
        for (Eigen::Index i = 0; i < values.size(); ++i)
            CHECK(values[i] == doctest::Approx(1.0).epsilon(1e-14));
    }

    SUBCASE("A b agrees with direct evaluation") {
        oracle::TestRng rng(7);
        for (int trial = 0; trial < 25; ++trial) {
            const Partition rpart = random_partition(rng);
            const int deg = rng.uniform_int(3, 8);
            std::vector<double> xs;
            double x = rpart.left();
            while (true) {
                x += rng.uniform(0.01, 0.4);
                if (x > rpart.right()) break;
                xs.push_back(x);
            }
            if (xs.empty()) continue;
            const auto A = nnspline::build_A(xs, rpart, deg);
            const Eigen::VectorXd b = random_coeffs(rng, deg, rpart.intervals());
            const SplineCoefficients s(deg, rpart, b);
            const Eigen::VectorXd values = A * b;
            for (std::size_t i = 0; i < xs.size(); ++i)
                CHECK(std::abs(values[static_cast<Eigen::Index>(i)] -
                               nnspline::evaluate_spline(s, xs[i])) <= 1e-12);
        }
    }

    SUBCASE("samples outside the knots or out of order are rejected") {
        CHECK_THROWS_AS(nnspline::build_A({-0.5, 1.0}, part, d), std::domain_error);
        CHECK_THROWS_AS(nnspline::build_A({0.5, 0.5}, part, d), std::invalid_argument);
        CHECK_THROWS_AS(nnspline::build_A({1.0, 0.5}, part, d), std::invalid_argument);
    }
}

TEST_CASE("roughness matrix") {
    SUBCASE("exactly symmetric") {
        oracle::TestRng rng(3);
        for (int trial = 0; trial < 10; ++trial) {
            const Partition part = random_partition(rng);
            const int d = rng.uniform_int(3, 10);
            const Eigen::MatrixXd Q(nnspline::build_Q(part, d));
            CHECK((Q - Q.transpose()).lpNorm<Eigen::Infinity>() == 0.0);
        }
    }

    SUBCASE("constants and affine splines have zero energy") {
        oracle::TestRng rng(4);
        const Partition part = random_partition(rng);
        const int d = 4;
        const auto Q = nnspline::build_Q(part, d);

        const Eigen::VectorXd ones = Eigen::VectorXd::Ones(d * part.intervals() + 1);
        CHECK(std::abs(ones.dot(Q * ones)) <= 1e-10);

        const Eigen::VectorXd affine =
            oracle::polynomial_spline_coeffs({0.7, -1.3}, part, d);  // 0.7 - 1.3 x
        CHECK(std::abs(affine.dot(Q * affine)) <= 1e-10);
    }

    SUBCASE("cubic monomial on the unit interval has energy 12") {
        const Partition part({0.0, 1.0});
        const auto Q = nnspline::build_Q(part, 3);
        Eigen::VectorXd b(4);
        b << 0.0, 0.0, 0.0, 1.0;  // p(x) = x^3, integral of |6x|^2 over [0,1]
        CHECK(b.dot(Q * b) == doctest::Approx(12.0).epsilon(1e-13));
    }

    SUBCASE("positive semidefinite on random coefficients") {
        oracle::TestRng rng(5);
        const Partition part = random_partition(rng);
        const int d = 5;
        const auto Q = nnspline::build_Q(part, d);
        for (int trial = 0; trial < 50; ++trial) {
            const Eigen::VectorXd b = random_coeffs(rng, d, part.intervals());
            CHECK(b.dot(Q * b) >= -1e-10);
        }
    }

    SUBCASE("entries match the exact factorial ratio") {
        static const int e[3] = {1, -2, 1};
        for (int d = 3; d <= 10; ++d) {
            const Partition part({0.0, 1.0});
            const Eigen::MatrixXd Q(nnspline::build_Q(part, d));
            for (int k = 0; k <= d; ++k) {
                for (int l = 0; l <= d; ++l) {
                    double expected = 0.0;
                    for (int v = 0; v < 3; ++v)
                        for (int w = 0; w < 3; ++w)
                            expected += e[v] * e[w] * factorial_weight(d, k, l, v, w);
                    CHECK(Q(k, l) == doctest::Approx(expected).epsilon(1e-12));
                }
            }
        }
    }

    SUBCASE("quadratic form equals Gauss-Legendre quadrature of the energy") {
        oracle::TestRng rng(6);
        for (int trial = 0; trial < 40; ++trial) {
            const Partition part = random_partition(rng);
            const int d = rng.uniform_int(3, 8);
            const auto Q = nnspline::build_Q(part, d);
            const Eigen::VectorXd b = random_coeffs(rng, d, part.intervals());
            const SplineCoefficients s(d, part, b);
            const double direct = b.dot(Q * b);
            const double quad = oracle::roughness_energy_quadrature(s);
            CHECK(std::abs(direct - quad) <= 1e-9 * std::max(1.0, std::abs(quad)));
        }
    }
}

TEST_CASE("continuity matrix") {
    SUBCASE("kinked tent violates first-derivative continuity by 2/3") {
        const Partition part({0.0, 1.0, 2.0});
        const auto H = nnspline::build_H(part, 3);
        Eigen::VectorXd b(7);
        b << 0.0, 1.0 / 3.0, 2.0 / 3.0, 1.0, 2.0 / 3.0, 1.0 / 3.0, 0.0;
        const Eigen::VectorXd r = H * b;
        REQUIRE(r.size() == 2);
        CHECK(r[0] == doctest::Approx(2.0 / 3.0).epsilon(1e-14));  // l = 1 row
        CHECK(std::abs(r[1]) <= 1e-14);                            // l = 2 row
    }

    SUBCASE("global polynomials satisfy H b = 0") {
        oracle::TestRng rng(8);
        for (int trial = 0; trial < 50; ++trial) {
            const Partition part = random_partition(rng);
            const int d = rng.uniform_int(3, 6);
            std::vector<double> mono(static_cast<std::size_t>(d) + 1);
            for (double& c : mono) c = rng.uniform(-1.0, 1.0);
            const Eigen::VectorXd b = oracle::polynomial_spline_coeffs(mono, part, d);
            const auto H = nnspline::build_H(part, d);
            CHECK((H * b).lpNorm<Eigen::Infinity>() <= 1e-10);
        }
    }

    SUBCASE("null space dimension is dm+1 - (2m-2)") {
        oracle::TestRng rng(9);
        for (int trial = 0; trial < 5; ++trial) {
            const Partition part = random_partition(rng);
            const int d = rng.uniform_int(3, 6);
            const int m = part.intervals();
            const auto basis = nnspline::null_space_basis(Eigen::MatrixXd(nnspline::build_H(part, d)));
            CHECK(basis.full_row_rank);
            CHECK(basis.V.cols() == d * m + 1 - (2 * m - 2));
        }
    }

    SUBCASE("projection onto null(H) yields C2-continuous derivatives") {
        oracle::TestRng rng(10);
        const Partition part = random_partition(rng);
        const int d = 4;
        const int m = part.intervals();
        const auto H = nnspline::build_H(part, d);
        const auto basis = nnspline::null_space_basis(Eigen::MatrixXd(H));
        const Eigen::VectorXd raw = random_coeffs(rng, d, m);
        const Eigen::VectorXd b = basis.V * (basis.V.transpose() * raw);
        CHECK((H * b).lpNorm<Eigen::Infinity>() <= 1e-12);

        const SplineCoefficients s(d, part, b);
        auto value = [&](double x) { return nnspline::evaluate_spline(s, x); };
        for (int j = 1; j < m; ++j) {
            const double xk = part.knot(j);
            const double h = 1e-5;
            // One-sided slopes and curvatures across the knot agree.
            const double dl = (value(xk) - value(xk - h)) / h;
            const double dr = (value(xk + h) - value(xk)) / h;
            CHECK(std::abs(dl - dr) <= 1e-3);
            const double cl = (value(xk) - 2.0 * value(xk - h) + value(xk - 2 * h)) / (h * h);
            const double cr = (value(xk + 2 * h) - 2.0 * value(xk + h) + value(xk)) / (h * h);
            CHECK(std::abs(cl - cr) <= 1e-2);
        }
    }
}

TEST_CASE("cut sets grow monotonically and stay sorted") {
    CutSet cuts(3);
    CHECK(cuts.total() == 0);
    CHECK(cuts.insert(0, 0.5));
    CHECK(cuts.insert(0, 0.25));
    CHECK(cuts.insert(2, 1.0));
    CHECK(cuts.total() == 3);
    CHECK_FALSE(cuts.insert(0, 0.25));                 // duplicate
    CHECK_FALSE(cuts.insert(0, 0.25 + 5e-13));         // within tolerance
    CHECK(cuts.insert(0, 0.25 + 1e-6));
    CHECK(cuts.total() == 4);
    const auto& first = cuts.piece_cuts(0);
    CHECK(std::is_sorted(first.begin(), first.end()));
    CHECK_THROWS_AS(cuts.insert(3, 0.1), std::out_of_range);
    CHECK_THROWS_AS(cuts.insert(0, 1.5), std::domain_error);
}

TEST_CASE("cut matrix") {
    SUBCASE("empty cut set gives a zero-row matrix") {
        const auto G = nnspline::build_G(CutSet(4), 3);
        CHECK(G.rows() == 0);
        CHECK(G.cols() == 13);
    }

    SUBCASE("single endpoint cut is a basis row") {
        CutSet cuts(2);
        cuts.insert(0, 0.0);
        const Eigen::MatrixXd G(nnspline::build_G(cuts, 3));
        REQUIRE(G.rows() == 1);
        CHECK(G(0, 0) == 1.0);
        CHECK(G.row(0).tail(6).lpNorm<Eigen::Infinity>() == 0.0);
    }

    SUBCASE("rows evaluate the pieces at their sites") {
        oracle::TestRng rng(12);
        const Partition part = random_partition(rng);
        const int d = 5;
        const int m = part.intervals();
        CutSet cuts(m);
        std::vector<std::pair<int, double>> sites;
        for (int trial = 0; trial < 20; ++trial) {
            const int p = rng.uniform_int(0, m - 1);
            const double tau = rng.uniform();
            if (cuts.insert(p, tau)) sites.emplace_back(p, tau);
        }
        std::sort(sites.begin(), sites.end());
        const auto G = nnspline::build_G(cuts, d);
        const Eigen::VectorXd b = random_coeffs(rng, d, m);
        const SplineCoefficients s(d, part, b);
        const Eigen::VectorXd values = G * b;
        REQUIRE(values.size() == static_cast<Eigen::Index>(sites.size()));
        for (std::size_t i = 0; i < sites.size(); ++i)
            CHECK(std::abs(values[static_cast<Eigen::Index>(i)] -
                           nnspline::evaluate_piece(s.piece(sites[i].first), sites[i].second)) <= 1e-12);
    }
}

TEST_CASE("degree elevation preserves both cost terms") {
    oracle::TestRng rng(13);
    for (int trial = 0; trial < 10; ++trial) {
        const Partition part = random_partition(rng);
        const int d = rng.uniform_int(3, 7);
        const int m = part.intervals();
        const Eigen::VectorXd b = random_coeffs(rng, d, m);
        const SplineCoefficients s(d, part, b);
        const SplineCoefficients raised = nnspline::elevate_degree(s);

        std::vector<double> xs;
        for (int j = 0; j <= 12; ++j)
            xs.push_back(part.left() + (part.right() - part.left()) * j / 12.0);
        Eigen::VectorXd y(static_cast<Eigen::Index>(xs.size()));
        for (Eigen::Index i = 0; i < y.size(); ++i) y[i] = rng.uniform(0.0, 2.0);

        const auto A_low = nnspline::build_A(xs, part, d);
        const auto A_high = nnspline::build_A(xs, part, d + 1);
        const double fit_low = (y - A_low * s.b).squaredNorm();
        const double fit_high = (y - A_high * raised.b).squaredNorm();
        CHECK(std::abs(fit_low - fit_high) <= 1e-9 * (1.0 + fit_low));

        const auto Q_low = nnspline::build_Q(part, d);
        const auto Q_high = nnspline::build_Q(part, d + 1);
        const double rough_low = s.b.dot(Q_low * s.b);
        const double rough_high = raised.b.dot(Q_high * raised.b);
        CHECK(std::abs(rough_low - rough_high) <= 1e-9 * (1.0 + rough_low));
    }
}

TEST_CASE("componentwise nonnegativity is sufficient for a nonnegative spline") {
    oracle::TestRng rng(14);
    for (int trial = 0; trial < 20; ++trial) {
        const Partition part = random_partition(rng);
        const int d = rng.uniform_int(3, 8);
        const Eigen::VectorXd b = random_coeffs(rng, d, part.intervals(), 0.0, 2.0);
        const SplineCoefficients s(d, part, b);
        CHECK(nnspline::grid_minimum(s, 500) >= -1e-12);
    }
}
