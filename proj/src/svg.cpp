#include "nnspline/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <stdexcept>

namespace nnspline {

namespace {

const char* kPalette[] = {"#c8a400", "#d62728", "#1f77b4", "#9467bd", "#2ca02c", "#8c564b"};

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.6g", v);
    return buf;
}

struct Viewport {
    double x0, x1, y0, y1;      // data range
    double px, py, pw, ph;      // pixel rectangle

    double map_x(double x) const { return px + (x - x0) / (x1 - x0) * pw; }
    double map_y(double y) const { return py + ph - (y - y0) / (y1 - y0) * ph; }
};

void draw_frame(std::ofstream& out, const Viewport& v) {
    out << "<rect x=\"" << fmt(v.px) << "\" y=\"" << fmt(v.py) << "\" width=\"" << fmt(v.pw)
        << "\" height=\"" << fmt(v.ph) << "\" fill=\"none\" stroke=\"#444\" stroke-width=\"1\"/>\n";
    for (int t = 0; t <= 4; ++t) {
        const double fx = v.x0 + (v.x1 - v.x0) * t / 4.0;
        const double fy = v.y0 + (v.y1 - v.y0) * t / 4.0;
        out << "<text x=\"" << fmt(v.map_x(fx)) << "\" y=\"" << fmt(v.py + v.ph + 16)
            << "\" font-size=\"11\" text-anchor=\"middle\" fill=\"#333\">" << fmt(fx) << "</text>\n";
        out << "<text x=\"" << fmt(v.px - 6) << "\" y=\"" << fmt(v.map_y(fy) + 4)
            << "\" font-size=\"11\" text-anchor=\"end\" fill=\"#333\">" << fmt(fy) << "</text>\n";
    }
    if (v.y0 < 0.0 && v.y1 > 0.0) {
        out << "<line x1=\"" << fmt(v.px) << "\" y1=\"" << fmt(v.map_y(0.0)) << "\" x2=\""
            << fmt(v.px + v.pw) << "\" y2=\"" << fmt(v.map_y(0.0))
            << "\" stroke=\"#999\" stroke-width=\"0.6\" stroke-dasharray=\"4 3\"/>\n";
    }
}

void draw_curves(std::ofstream& out, const Viewport& v,
                 const std::vector<std::vector<std::pair<double, double>>>& samples) {
    for (std::size_t ci = 0; ci < samples.size(); ++ci) {
        out << "<polyline fill=\"none\" stroke=\"" << kPalette[ci % 6]
            << "\" stroke-width=\"1.6\" points=\"";
        for (const auto& [x, y] : samples[ci]) {
            if (x < v.x0 || x > v.x1) continue;
            out << fmt(v.map_x(x)) << ',' << fmt(v.map_y(std::clamp(y, v.y0, v.y1))) << ' ';
        }
        out << "\"/>\n";
    }
}

void draw_points(std::ofstream& out, const Viewport& v, const Dataset& data) {
    for (std::size_t i = 0; i < data.size(); ++i) {
        if (data.x[i] < v.x0 || data.x[i] > v.x1) continue;
        if (data.y[i] < v.y0 || data.y[i] > v.y1) continue;
        out << "<circle cx=\"" << fmt(v.map_x(data.x[i])) << "\" cy=\"" << fmt(v.map_y(data.y[i]))
            << "\" r=\"2.6\" fill=\"#111\"/>\n";
    }
}

}  // namespace

std::vector<std::pair<double, double>> sample_spline(const SplineCoefficients& s,
                                                     int points_per_interval) {
    const int per = std::max(points_per_interval, 200);
    std::vector<std::pair<double, double>> out;
    out.reserve(static_cast<std::size_t>(per) * s.partition.intervals());
    for (int p = 0; p < s.partition.intervals(); ++p) {
        const LocalPolynomial piece = s.piece(p);
        const double a = s.partition.knot(p);
        const double w = s.partition.width(p);
        for (int j = 0; j < per; ++j) {
            const double tau = static_cast<double>(j) / (per - 1);
            out.emplace_back(a + w * tau, evaluate_piece(piece, tau));
        }
    }
    return out;
}

void write_spline_svg(const std::string& path, const Dataset& data,
                      const std::vector<SvgCurve>& curves, const SvgOptions& options) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("write_spline_svg: cannot open " + path);

    std::vector<std::vector<std::pair<double, double>>> samples;
    samples.reserve(curves.size());
    for (const SvgCurve& c : curves) {
        if (c.spline == nullptr) throw std::invalid_argument("write_spline_svg: null spline");
        samples.push_back(sample_spline(*c.spline, options.samples_per_interval));
    }

    double x_lo = std::numeric_limits<double>::infinity(), x_hi = -x_lo;
    double y_lo = x_lo, y_hi = -x_lo;
    for (const auto& curve : samples)
        for (const auto& [x, y] : curve) {
            x_lo = std::min(x_lo, x);
            x_hi = std::max(x_hi, x);
            y_lo = std::min(y_lo, y);
            y_hi = std::max(y_hi, y);
        }
    for (std::size_t i = 0; i < data.size(); ++i) {
        x_lo = std::min(x_lo, data.x[i]);
        x_hi = std::max(x_hi, data.x[i]);
        y_lo = std::min(y_lo, data.y[i]);
        y_hi = std::max(y_hi, data.y[i]);
    }
    if (!(x_lo < x_hi)) { x_lo -= 0.5; x_hi += 0.5; }
    const double pad = 0.05 * std::max(y_hi - y_lo, 1e-12);
    y_lo -= pad;
    y_hi += pad;

    const bool zoom = options.zoom_interval >= 0 && !curves.empty() &&
                      options.zoom_interval < curves.front().spline->partition.intervals();
    const double w = options.width;
    const double h = options.height;

    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << options.width << "\" height=\""
        << options.height << "\" viewBox=\"0 0 " << options.width << ' ' << options.height << "\">\n";
    out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    if (!options.title.empty())
        out << "<text x=\"" << fmt(w / 2) << "\" y=\"18\" font-size=\"14\" text-anchor=\"middle\">"
            << options.title << "</text>\n";

    const double main_h = zoom ? (h - 70) * 0.58 : h - 70;
    Viewport main{x_lo, x_hi, y_lo, y_hi, 52, 28, w - 72, main_h};
    draw_frame(out, main);
    draw_curves(out, main, samples);
    draw_points(out, main, data);

    for (std::size_t ci = 0; ci < curves.size(); ++ci) {
        const double lx = main.px + 12 + 150.0 * static_cast<double>(ci % 4);
        const double ly = main.py + 14 + 16.0 * static_cast<double>(ci / 4);
        out << "<line x1=\"" << fmt(lx) << "\" y1=\"" << fmt(ly - 4) << "\" x2=\"" << fmt(lx + 22)
            << "\" y2=\"" << fmt(ly - 4) << "\" stroke=\"" << kPalette[ci % 6]
            << "\" stroke-width=\"2\"/>\n";
        out << "<text x=\"" << fmt(lx + 27) << "\" y=\"" << fmt(ly) << "\" font-size=\"11\">"
            << curves[ci].label << "</text>\n";
    }

    if (zoom) {
        const Partition& part = curves.front().spline->partition;
        const double zx0 = part.knot(options.zoom_interval);
        const double zx1 = part.knot(options.zoom_interval + 1);
        double zy_lo = std::numeric_limits<double>::infinity(), zy_hi = -zy_lo;
        for (const auto& curve : samples)
            for (const auto& [x, y] : curve)
                if (x >= zx0 && x <= zx1) {
                    zy_lo = std::min(zy_lo, y);
                    zy_hi = std::max(zy_hi, y);
                }
        const double zpad = 0.08 * std::max(zy_hi - zy_lo, 1e-12);
        Viewport zoomed{zx0, zx1, zy_lo - zpad, zy_hi + zpad,
                        52, 28 + main_h + 42, w - 72, h - 70 - main_h - 42};
        out << "<text x=\"" << fmt(zoomed.px) << "\" y=\"" << fmt(zoomed.py - 8)
            << "\" font-size=\"12\">magnified [" << fmt(zx0) << ", " << fmt(zx1) << "]</text>\n";
        draw_frame(out, zoomed);
        draw_curves(out, zoomed, samples);
        draw_points(out, zoomed, data);
    }

    out << "</svg>\n";
    if (!out) throw std::runtime_error("write_spline_svg: write failed for " + path);
}

}  // namespace nnspline
