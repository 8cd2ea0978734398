#include "nnspline/partition.hpp"

#include <algorithm>
#include <stdexcept>

namespace nnspline {

Partition::Partition(std::vector<double> knots) : knots_(std::move(knots)) {
    if (knots_.size() < 2)
        throw std::invalid_argument("Partition: need at least two knots");
    for (std::size_t i = 1; i < knots_.size(); ++i) {
        if (!(knots_[i - 1] < knots_[i]))
            throw std::invalid_argument("Partition: knots must be strictly increasing");
    }
}

double Partition::width(int i) const {
    if (i < 0 || i >= intervals())
        throw std::out_of_range("Partition::width: interval index out of range");
    return knots_[static_cast<std::size_t>(i) + 1] - knots_[static_cast<std::size_t>(i)];
}

int Partition::locate(double x) const {
    if (!(x >= left() && x <= right()))
        throw std::domain_error("Partition::locate: x outside the knot range");
    // First knot strictly greater than x; interior knots fall to the right piece.
    auto it = std::upper_bound(knots_.begin(), knots_.end(), x);
    int piece = static_cast<int>(it - knots_.begin()) - 1;
    return std::min(piece, intervals() - 1);
}

double Partition::normalize(double x, int interval) const {
    return (x - knot(interval)) / width(interval);
}

}  // namespace nnspline
