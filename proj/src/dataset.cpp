#include "nnspline/dataset.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace nnspline {

namespace {

constexpr double kTwoPi = 6.28318530717958647692;

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

// Uniform in (0, 1]; the +1 keeps log() finite in Box-Muller.
double uniform01(std::uint64_t bits) {
    return static_cast<double>((bits >> 11) + 1) * 0x1.0p-53;
}

[[noreturn]] void parse_error(const std::string& path, std::size_t row, const std::string& what) {
    throw DataError("load_dataset: " + path + " row " + std::to_string(row) + ": " + what);
}

bool parse_field(const std::string& field, double& out) {
    const char* begin = field.c_str();
    char* end = nullptr;
    out = std::strtod(begin, &end);
    return end != begin && *end == '\0' && !field.empty();
}

}  // namespace

std::uint64_t counter_bits(std::uint64_t seed, std::uint64_t counter) {
    std::uint64_t z = seed + (counter + 1) * 0x9E3779B97F4A7C15ULL;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

double normal_deviate(std::uint64_t seed, std::uint64_t index) {
    const std::uint64_t pair = index / 2;
    const double u1 = uniform01(counter_bits(seed, 2 * pair));
    const double u2 = uniform01(counter_bits(seed, 2 * pair + 1));
    const double radius = std::sqrt(-2.0 * std::log(u1));
    const double angle = kTwoPi * u2;
    return (index % 2 == 0) ? radius * std::cos(angle) : radius * std::sin(angle);
}

Dataset generate_data(int n, std::uint64_t seed) {
    if (n < 1) throw std::invalid_argument("generate_data: n must be >= 1");
    Dataset out;
    out.seed = seed;
    out.provenance = Dataset::Provenance::generated;
    out.x.reserve(static_cast<std::size_t>(n) + 1);
    out.y.reserve(static_cast<std::size_t>(n) + 1);
    for (int i = 0; i <= n; ++i) {
        const double z = normal_deviate(seed, static_cast<std::uint64_t>(i));
        const int phase = i % 5;
        const double y = (phase == 2 || phase == 3) ? std::abs(z) / 100.0 : std::abs(z);
        out.x.push_back(static_cast<double>(i));
        out.y.push_back(y);
    }
    return out;
}

void save_dataset(const Dataset& dataset, const std::string& path) {
    std::ofstream file(path, std::ios::binary);
    if (!file) throw DataError("save_dataset: cannot open " + path);
    file << "x,y\n";
    for (std::size_t i = 0; i < dataset.size(); ++i)
        file << format_double(dataset.x[i]) << ',' << format_double(dataset.y[i]) << '\n';
    if (!file) throw DataError("save_dataset: write failed for " + path);
}

Dataset load_dataset(const std::string& path, bool require_nonnegative) {
    std::ifstream file(path, std::ios::binary);
    if (!file) throw DataError("load_dataset: cannot open " + path);

    Dataset out;
    out.provenance = Dataset::Provenance::loaded;

    std::string line;
    std::size_t row = 0;
    while (std::getline(file, line)) {
        ++row;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (row == 1) {
            if (line != "x,y") parse_error(path, row, "expected header \"x,y\"");
            continue;
        }
        if (line.empty()) continue;
        const std::size_t comma = line.find(',');
        if (comma == std::string::npos) parse_error(path, row, "expected two comma-separated fields");
        double x, y;
        if (!parse_field(line.substr(0, comma), x)) parse_error(path, row, "malformed x value");
        if (!parse_field(line.substr(comma + 1), y)) parse_error(path, row, "malformed y value");
        if (!out.x.empty() && !(x > out.x.back())) parse_error(path, row, "x values must be strictly increasing");
        if (require_nonnegative && y < 0.0) parse_error(path, row, "negative y value in nonnegative mode");
        out.x.push_back(x);
        out.y.push_back(y);
    }
    if (row == 0) throw DataError("load_dataset: " + path + " is empty");
    if (out.size() == 0) throw DataError("load_dataset: " + path + " has no samples");
    return out;
}

}  // namespace nnspline
