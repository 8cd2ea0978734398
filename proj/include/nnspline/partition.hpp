#pragma once

#include <vector>

namespace nnspline {

/// Strictly increasing knot sequence xi_0 < xi_1 < ... < xi_m.
///
/// The m subintervals [xi_i, xi_{i+1}] (0-based interval index i in
/// [0, m-1]) carry the polynomial pieces of a spline. Immutable after
/// construction.
class Partition {
public:
    explicit Partition(std::vector<double> knots);

    int intervals() const { return static_cast<int>(knots_.size()) - 1; }
    const std::vector<double>& knots() const { return knots_; }
    double knot(int i) const { return knots_[static_cast<std::size_t>(i)]; }
    double left() const { return knots_.front(); }
    double right() const { return knots_.back(); }

    /// Width of interval i: knot(i+1) - knot(i), always positive.
    double width(int i) const;

    /// Index of the interval whose piece evaluates x. Interior knots belong
    /// to the right-hand piece (tau = 0); x = xi_m belongs to the last piece
    /// (tau = 1). Throws std::domain_error for x outside [xi_0, xi_m].
    int locate(double x) const;

    /// Normalized coordinate tau = (x - xi_i) / width(i) of x in interval i.
    double normalize(double x, int interval) const;

private:
    std::vector<double> knots_;
};

}  // namespace nnspline
