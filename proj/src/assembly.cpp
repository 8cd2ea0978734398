#include "nnspline/assembly.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace nnspline {

namespace {

using Triplet = Eigen::Triplet<double>;

// Entry of the unit-width roughness block, the weight coupling b_{k} and
// b_{l} through the second-difference stencil offsets v, w in {0, 1, 2}.
// Written as a ratio of small exact integers:
//   d^2 (d-1)^2 C(d-2, k-v) C(d-2, l-w) / ((2d-3) C(2d-4, (k-v)+(l-w))),
// which regroups the factorial form without overflowing 64-bit integers.
double roughness_weight(int d, int k, int l, int v, int w) {
    const int a = k - v;
    const int b = l - w;
    if (a < 0 || a > d - 2 || b < 0 || b > d - 2) return 0.0;
    const long long num = static_cast<long long>(d) * d * (d - 1) * (d - 1) *
                          binomial(d - 2, a) * binomial(d - 2, b);
    const long long den = static_cast<long long>(2 * d - 3) * binomial(2 * d - 4, a + b);
    return static_cast<double>(num) / static_cast<double>(den);
}

// Dense (d+1)x(d+1) roughness block for a unit-width interval; exact mirror
// symmetry by construction.
Eigen::MatrixXd unit_roughness_block(int d) {
    static const int e[3] = {1, -2, 1};
    Eigen::MatrixXd block(d + 1, d + 1);
    for (int k = 0; k <= d; ++k) {
        for (int l = k; l <= d; ++l) {
            double acc = 0.0;
            for (int v = 0; v < 3; ++v)
                for (int w = 0; w < 3; ++w)
                    acc += e[v] * e[w] * roughness_weight(d, k, l, v, w);
            block(k, l) = acc;
            block(l, k) = acc;
        }
    }
    return block;
}

}  // namespace

Eigen::VectorXd g_tau(double tau, int d) {
    if (!(tau >= 0.0 && tau <= 1.0))
        throw std::domain_error("g_tau: tau outside [0, 1]");
    if (d < 1 || d > kMaxBinomialN)
        throw std::invalid_argument("g_tau: unsupported degree");
    Eigen::VectorXd g(d + 1);
    for (int k = 0; k <= d; ++k)
        g[k] = static_cast<double>(binomial(d, k)) *
               std::pow(1.0 - tau, d - k) * std::pow(tau, k);
    return g;
}

Eigen::SparseMatrix<double> build_A(const std::vector<double>& xs,
                                    const Partition& partition, int d) {
    const int m = partition.intervals();
    for (std::size_t i = 0; i < xs.size(); ++i) {
        if (i > 0 && !(xs[i - 1] < xs[i]))
            throw std::invalid_argument("build_A: samples must be strictly increasing");
        if (!(xs[i] >= partition.left() && xs[i] <= partition.right()))
            throw std::domain_error("build_A: sample outside the knot range");
    }

    std::vector<Triplet> trip;
    trip.reserve(xs.size() * (static_cast<std::size_t>(d) + 1));
    for (std::size_t i = 0; i < xs.size(); ++i) {
        const int piece = partition.locate(xs[i]);
        const Eigen::VectorXd g = g_tau(partition.normalize(xs[i], piece), d);
        for (int k = 0; k <= d; ++k)
            if (g[k] != 0.0)
                trip.emplace_back(static_cast<int>(i), d * piece + k, g[k]);
    }
    Eigen::SparseMatrix<double> A(static_cast<Eigen::Index>(xs.size()), d * m + 1);
    A.setFromTriplets(trip.begin(), trip.end());
    return A;
}

Eigen::SparseMatrix<double> build_Q(const Partition& partition, int d) {
    if (d < 3) throw std::invalid_argument("build_Q: degree must be >= 3");
    const int m = partition.intervals();
    const Eigen::MatrixXd block = unit_roughness_block(d);

    std::vector<Triplet> trip;
    trip.reserve(static_cast<std::size_t>(m) * (d + 1) * (d + 1));
    for (int p = 0; p < m; ++p) {
        const double width = partition.width(p);
        const double scale = 1.0 / (width * width * width);
        for (int k = 0; k <= d; ++k)
            for (int l = 0; l <= d; ++l)
                trip.emplace_back(d * p + k, d * p + l, scale * block(k, l));
    }
    Eigen::SparseMatrix<double> Q(d * m + 1, d * m + 1);
    Q.setFromTriplets(trip.begin(), trip.end());
    return Q;
}

Eigen::SparseMatrix<double> build_H(const Partition& partition, int d) {
    const int m = partition.intervals();
    std::vector<Triplet> trip;
    // Interior knot j joins pieces j-1 and j; l-th derivative continuity is
    //   (1/D_left^l) sum_k (-1)^(l-k) C(l,k) b[d j + k - l]
    // - (1/D_right^l) sum_k (-1)^(l-k) C(l,k) b[d j + k] = 0.
    for (int j = 1; j <= m - 1; ++j) {
        const double left = partition.width(j - 1);
        const double right = partition.width(j);
        for (int l = 1; l <= 2; ++l) {
            const int row = 2 * (j - 1) + (l - 1);
            const double left_scale = 1.0 / std::pow(left, l);
            const double right_scale = 1.0 / std::pow(right, l);
            for (int k = 0; k <= l; ++k) {
                const double sign = ((l - k) % 2 == 0) ? 1.0 : -1.0;
                const double coef = sign * static_cast<double>(binomial(l, k));
                trip.emplace_back(row, d * j + k - l, coef * left_scale);
                trip.emplace_back(row, d * j + k, -coef * right_scale);
            }
        }
    }
    Eigen::SparseMatrix<double> H(2 * (m - 1), d * m + 1);
    H.setFromTriplets(trip.begin(), trip.end());
    return H;
}

CutSet::CutSet(int pieces) : cuts_(static_cast<std::size_t>(pieces)) {
    if (pieces < 0) throw std::invalid_argument("CutSet: piece count must be >= 0");
}

bool CutSet::insert(int piece, double tau, double tol) {
    if (piece < 0 || piece >= pieces())
        throw std::out_of_range("CutSet::insert: piece index out of range");
    if (!(tau >= 0.0 && tau <= 1.0))
        throw std::domain_error("CutSet::insert: tau outside [0, 1]");
    auto& list = cuts_[static_cast<std::size_t>(piece)];
    auto it = std::lower_bound(list.begin(), list.end(), tau);
    if (it != list.end() && std::abs(*it - tau) <= tol) return false;
    if (it != list.begin() && std::abs(*(it - 1) - tau) <= tol) return false;
    list.insert(it, tau);
    ++total_;
    return true;
}

const std::vector<double>& CutSet::piece_cuts(int p) const {
    return cuts_.at(static_cast<std::size_t>(p));
}

Eigen::SparseMatrix<double> build_G(const CutSet& cuts, int d) {
    const int m = cuts.pieces();
    std::vector<Triplet> trip;
    trip.reserve(static_cast<std::size_t>(cuts.total()) * (d + 1));
    int row = 0;
    for (int p = 0; p < m; ++p) {
        for (double tau : cuts.piece_cuts(p)) {
            const Eigen::VectorXd g = g_tau(tau, d);
            for (int k = 0; k <= d; ++k)
                if (g[k] != 0.0) trip.emplace_back(row, d * p + k, g[k]);
            ++row;
        }
    }
    Eigen::SparseMatrix<double> G(row, d * m + 1);
    G.setFromTriplets(trip.begin(), trip.end());
    return G;
}

ProblemMatrices build_problem_matrices(const Dataset& data,
                                       const Partition& partition, int degree) {
    ProblemMatrices out{build_A(data.x, partition, degree),
                        build_Q(partition, degree),
                        build_H(partition, degree),
                        data.x,
                        Eigen::Map<const Eigen::VectorXd>(data.y.data(),
                                                          static_cast<Eigen::Index>(data.y.size())),
                        partition,
                        degree};
    return out;
}

}  // namespace nnspline
