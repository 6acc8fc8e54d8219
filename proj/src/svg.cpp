#include "bvlab/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <stdexcept>

#include "bvlab/io.hpp"

namespace bvlab {

namespace {

// fixed-notation tick labels; %g flips to exponents which read poorly on axes
std::string tick_label(double v) {
    char buf[48];
    std::snprintf(buf, sizeof(buf), "%.4g", v);
    return buf;
}

std::string xml_escape(const std::string& text) {
    std::string out;
    for (char c : text) {
        switch (c) {
            case '&': out += "&amp;"; break;
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            default: out += c;
        }
    }
    return out;
}

struct Range {
    double lo, hi;
};

Range padded_range(double lo, double hi) {
    if (lo == hi) {
        const double pad = std::max(0.5, std::abs(lo) * 0.1);
        return {lo - pad, hi + pad};
    }
    const double pad = 0.05 * (hi - lo);
    return {lo - pad, hi + pad};
}

}  // namespace

std::string render_plot_svg(const PlotSpec& spec, const std::vector<PlotPoint>& points) {
    if (points.empty()) throw std::invalid_argument("render_plot_svg: no points");
    constexpr double W = 640, H = 480;
    constexpr double ML = 78, MR = 24, MT = 44, MB = 58;

    double xlo = points[0].x, xhi = points[0].x, ylo = points[0].y, yhi = points[0].y;
    for (const PlotPoint& p : points) {
        xlo = std::min(xlo, p.x);
        xhi = std::max(xhi, p.x);
        ylo = std::min(ylo, p.y);
        yhi = std::max(yhi, p.y);
    }
    const Range xr = padded_range(xlo, xhi);
    const Range yr = padded_range(ylo, yhi);

    auto px = [&](double x) {
        return ML + (x - xr.lo) / (xr.hi - xr.lo) * (W - ML - MR);
    };
    auto py = [&](double y) {
        return H - MB - (y - yr.lo) / (yr.hi - yr.lo) * (H - MT - MB);
    };
    auto num = [](double v) {
        char buf[32];
        std::snprintf(buf, sizeof(buf), "%.2f", v);
        return std::string(buf);
    };

    std::string s;
    s += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"640\" height=\"480\" "
         "viewBox=\"0 0 640 480\">\n";
    s += "<rect width=\"640\" height=\"480\" fill=\"#ffffff\"/>\n";
    s += "<text x=\"320\" y=\"26\" text-anchor=\"middle\" font-family=\"sans-serif\" "
         "font-size=\"16\" fill=\"#222222\">" + xml_escape(spec.title) + "</text>\n";

    constexpr int kTicks = 5;
    for (int i = 0; i < kTicks; ++i) {
        const double fx = xr.lo + (xr.hi - xr.lo) * i / (kTicks - 1);
        const double fy = yr.lo + (yr.hi - yr.lo) * i / (kTicks - 1);
        const std::string gx = num(px(fx));
        const std::string gy = num(py(fy));
        s += "<line x1=\"" + gx + "\" y1=\"" + num(MT) + "\" x2=\"" + gx + "\" y2=\"" +
             num(H - MB) + "\" stroke=\"#dddddd\" stroke-width=\"1\"/>\n";
        s += "<line x1=\"" + num(ML) + "\" y1=\"" + gy + "\" x2=\"" + num(W - MR) +
             "\" y2=\"" + gy + "\" stroke=\"#dddddd\" stroke-width=\"1\"/>\n";
        s += "<text x=\"" + gx + "\" y=\"" + num(H - MB + 18) +
             "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"11\" "
             "fill=\"#444444\">" + tick_label(fx) + "</text>\n";
        s += "<text x=\"" + num(ML - 8) + "\" y=\"" + num(py(fy) + 4) +
             "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\" "
             "fill=\"#444444\">" + tick_label(fy) + "</text>\n";
    }

    s += "<rect x=\"" + num(ML) + "\" y=\"" + num(MT) + "\" width=\"" + num(W - ML - MR) +
         "\" height=\"" + num(H - MT - MB) +
         "\" fill=\"none\" stroke=\"#333333\" stroke-width=\"1\"/>\n";
    s += "<text x=\"" + num(ML + (W - ML - MR) / 2) + "\" y=\"" + num(H - 14) +
         "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\" "
         "fill=\"#222222\">" + xml_escape(spec.x_label) + "</text>\n";
    s += "<text x=\"20\" y=\"" + num(MT + (H - MT - MB) / 2) +
         "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\" "
         "fill=\"#222222\" transform=\"rotate(-90 20 " + num(MT + (H - MT - MB) / 2) +
         ")\">" + xml_escape(spec.y_label) + "</text>\n";

    if (spec.connect && points.size() > 1) {
        s += "<polyline fill=\"none\" stroke=\"#d62728\" stroke-width=\"1.5\" points=\"";
        for (std::size_t i = 0; i < points.size(); ++i) {
            if (i) s += ' ';
            s += num(px(points[i].x)) + "," + num(py(points[i].y));
        }
        s += "\"/>\n";
    }
    for (const PlotPoint& p : points)
        s += "<circle cx=\"" + num(px(p.x)) + "\" cy=\"" + num(py(p.y)) +
             "\" r=\"3\" fill=\"#1f77b4\" fill-opacity=\"0.75\"/>\n";
    s += "</svg>\n";
    return s;
}

void write_plot_with_csv_twin(const std::string& svg_path, const std::string& csv_path,
                              const PlotSpec& spec, const std::vector<PlotPoint>& points) {
    write_text_file(svg_path, render_plot_svg(spec, points));
    std::string csv = csv_escape(spec.x_label) + "," + csv_escape(spec.y_label) + "\n";
    for (const PlotPoint& p : points)
        csv += format_double(p.x) + "," + format_double(p.y) + "\n";
    write_text_file(csv_path, csv);
}

}  // namespace bvlab
