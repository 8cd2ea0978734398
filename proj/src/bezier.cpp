#include "nnspline/bezier.hpp"

#include <array>
#include <stdexcept>

namespace nnspline {

namespace {

using BinomialTable =
    std::array<std::array<long long, kMaxBinomialN + 1>, kMaxBinomialN + 1>;

const BinomialTable& binomial_table() {
    static const BinomialTable table = [] {
        BinomialTable t{};
        for (int n = 0; n <= kMaxBinomialN; ++n) {
            t[n][0] = 1;
            for (int k = 1; k <= n; ++k)
                t[n][k] = t[n - 1][k - 1] + (k <= n - 1 ? t[n - 1][k] : 0);
        }
        return t;
    }();
    return table;
}

void validate(const LocalPolynomial& p) {
    if (p.degree < 0 || p.degree > kMaxBinomialN)
        throw std::invalid_argument("LocalPolynomial: unsupported degree");
    if (p.coeffs.size() != static_cast<std::size_t>(p.degree) + 1)
        throw std::invalid_argument("LocalPolynomial: coefficient count must be degree + 1");
}

}  // namespace

long long binomial(int n, int k) {
    if (k < 0 || k > n) return 0;
    if (n > kMaxBinomialN)
        throw std::invalid_argument("binomial: argument exceeds the precomputed table");
    return binomial_table()[n][k];
}

SplineCoefficients::SplineCoefficients(int degree_, Partition partition_, Eigen::VectorXd b_)
    : degree(degree_), partition(std::move(partition_)), b(std::move(b_)) {
    if (degree < 1 || degree > kMaxBinomialN)
        throw std::invalid_argument("SplineCoefficients: unsupported degree");
    const Eigen::Index expected =
        static_cast<Eigen::Index>(degree) * partition.intervals() + 1;
    if (b.size() != expected)
        throw std::invalid_argument("SplineCoefficients: coefficient vector must have length d*m + 1");
}

LocalPolynomial SplineCoefficients::piece(int p) const {
    if (p < 0 || p >= partition.intervals())
        throw std::out_of_range("SplineCoefficients::piece: index out of range");
    LocalPolynomial out;
    out.degree = degree;
    out.coeffs.resize(static_cast<std::size_t>(degree) + 1);
    for (int k = 0; k <= degree; ++k)
        out.coeffs[static_cast<std::size_t>(k)] = b[static_cast<Eigen::Index>(degree) * p + k];
    return out;
}

double evaluate_piece(const LocalPolynomial& p, double tau) {
    validate(p);
    if (!(tau >= 0.0 && tau <= 1.0))
        throw std::domain_error("evaluate_piece: tau outside [0, 1]");
    double buf[kMaxBinomialN + 1];
    for (int k = 0; k <= p.degree; ++k) buf[k] = p.coeffs[static_cast<std::size_t>(k)];
    for (int r = 1; r <= p.degree; ++r)
        for (int i = 0; i + r <= p.degree; ++i)
            buf[i] = (1.0 - tau) * buf[i] + tau * buf[i + 1];
    return buf[0];
}

double evaluate_spline(const SplineCoefficients& s, double x) {
    const int piece = s.partition.locate(x);
    const double tau = s.partition.normalize(x, piece);
    double buf[kMaxBinomialN + 1];
    const Eigen::Index off = static_cast<Eigen::Index>(s.degree) * piece;
    for (int k = 0; k <= s.degree; ++k) buf[k] = s.b[off + k];
    for (int r = 1; r <= s.degree; ++r)
        for (int i = 0; i + r <= s.degree; ++i)
            buf[i] = (1.0 - tau) * buf[i] + tau * buf[i + 1];
    return buf[0];
}

std::vector<double> derivative_monomial_coeffs(const LocalPolynomial& p) {
    validate(p);
    if (p.degree < 1)
        throw std::invalid_argument("derivative_monomial_coeffs: degree must be >= 1");
    const int d = p.degree;
    std::vector<double> out(static_cast<std::size_t>(d), 0.0);
    for (int l = 0; l < d; ++l) {
        double acc = 0.0;
        for (int k = 0; k <= l; ++k) {
            const double diff =
                p.coeffs[static_cast<std::size_t>(k) + 1] - p.coeffs[static_cast<std::size_t>(k)];
            const double term =
                static_cast<double>(binomial(d - 1, l) * binomial(l, k)) * diff;
            acc += ((l - k) % 2 == 0) ? term : -term;
        }
        out[static_cast<std::size_t>(l)] = static_cast<double>(d) * acc;
    }
    return out;
}

SplineCoefficients elevate_degree(const SplineCoefficients& s) {
    const int d = s.degree;
    const int m = s.partition.intervals();
    Eigen::VectorXd out(static_cast<Eigen::Index>(d + 1) * m + 1);
    for (int p = 0; p < m; ++p) {
        const Eigen::Index src = static_cast<Eigen::Index>(d) * p;
        const Eigen::Index dst = static_cast<Eigen::Index>(d + 1) * p;
        // c'_k = (k c_{k-1} + (d+1-k) c_k) / (d+1); endpoints are preserved,
        // so the shared boundary coefficients stay consistent across pieces.
        for (int k = 0; k <= d + 1; ++k) {
            double v = 0.0;
            if (k > 0) v += static_cast<double>(k) * s.b[src + k - 1];
            if (k <= d) v += static_cast<double>(d + 1 - k) * s.b[src + k];
            out[dst + k] = v / static_cast<double>(d + 1);
        }
    }
    return SplineCoefficients(d + 1, s.partition, std::move(out));
}

}  // namespace nnspline
