#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace nnspline {

/// Unreadable or malformed dataset files.
struct DataError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Sample points (x_i, y_i) with strictly increasing abscissae.
struct Dataset {
    enum class Provenance { generated, loaded };

    std::vector<double> x;
    std::vector<double> y;
    std::optional<std::uint64_t> seed;
    Provenance provenance = Provenance::loaded;

    std::size_t size() const { return x.size(); }
};

/// j-th output of the seeded counter-based bit stream (splitmix64 of the
/// counter). The whole stream is a pure function of (seed, j), so generated
/// datasets reproduce across platforms and runs.
std::uint64_t counter_bits(std::uint64_t seed, std::uint64_t counter);

/// i-th standard normal deviate of the seeded stream (Box-Muller over the
/// counter-based uniforms).
double normal_deviate(std::uint64_t seed, std::uint64_t index);

/// Synthetic nonnegative data at x_i = i for i = 0..n: draw z_i from the
/// standard normal, then y_i = |z_i|/100 when i mod 5 is 2 or 3 (so values
/// very close to zero recur), and y_i = |z_i| otherwise.
Dataset generate_data(int n, std::uint64_t seed);

/// Write the dataset as CSV with header "x,y" and 17-significant-digit
/// decimal floats, which round-trip bit-exactly.
void save_dataset(const Dataset& dataset, const std::string& path);

/// Parse a dataset CSV. Raises DataError naming the offending row for
/// malformed fields, non-increasing x, or (in nonnegative mode) negative
/// y values.
Dataset load_dataset(const std::string& path, bool require_nonnegative = true);

}  // namespace nnspline
