#include "addrhash/plot.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <ostream>

namespace addrhash {

namespace {

constexpr double kWidth = 720, kHeight = 480;
constexpr double kLeft = 70, kRight = 130, kTop = 40, kBottom = 60;

constexpr std::array<const char*, 10> kPalette{"#1f77b4", "#ff7f0e", "#2ca02c", "#d62728",
                                               "#9467bd", "#8c564b", "#e377c2", "#7f7f7f",
                                               "#bcbd22", "#17becf"};

std::string escape(const std::string& s) {
    std::string out;
    for (char c : s) {
        switch (c) {
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '&': out += "&amp;"; break;
            default: out += c;
        }
    }
    return out;
}

std::string num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", v);
    return buf;
}

std::string tick_label(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%g", v);
    return buf;
}

}  // namespace

void write_line_chart(std::ostream& out, const PlotAxes& axes, const std::vector<PlotSeries>& series) {
    const double plot_w = kWidth - kLeft - kRight;
    const double plot_h = kHeight - kTop - kBottom;
    auto tx = [&](double x) {
        double lo = axes.x_min, hi = axes.x_max;
        if (axes.log_x) {
            x = std::log2(std::max(x, 1e-300));
            lo = std::log2(lo);
            hi = std::log2(hi);
        }
        const double span = hi > lo ? hi - lo : 1;
        return kLeft + (x - lo) / span * plot_w;
    };
    auto ty = [&](double y) {
        const double span = axes.y_max > axes.y_min ? axes.y_max - axes.y_min : 1;
        return kTop + plot_h - (y - axes.y_min) / span * plot_h;
    };

    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\""
        << kHeight << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
    out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    out << "<text x=\"" << num(kWidth / 2) << "\" y=\"20\" text-anchor=\"middle\" font-size=\"14\">"
        << escape(axes.title) << "</text>\n";
    out << "<rect x=\"" << num(kLeft) << "\" y=\"" << num(kTop) << "\" width=\"" << num(plot_w)
        << "\" height=\"" << num(plot_h) << "\" fill=\"none\" stroke=\"black\"/>\n";

    constexpr int kTicks = 8;
    for (int t = 0; t <= kTicks; ++t) {
        const double y = axes.y_min + (axes.y_max - axes.y_min) * t / kTicks;
        out << "<text x=\"" << num(kLeft - 6) << "\" y=\"" << num(ty(y) + 4)
            << "\" text-anchor=\"end\">" << tick_label(y) << "</text>\n";
        double x;
        if (axes.log_x)
            x = std::exp2(std::log2(axes.x_min) +
                          (std::log2(axes.x_max) - std::log2(axes.x_min)) * t / kTicks);
        else
            x = axes.x_min + (axes.x_max - axes.x_min) * t / kTicks;
        out << "<text x=\"" << num(tx(x)) << "\" y=\"" << num(kTop + plot_h + 16)
            << "\" text-anchor=\"middle\">" << tick_label(std::round(x * 100) / 100) << "</text>\n";
    }
    out << "<text x=\"" << num(kLeft + plot_w / 2) << "\" y=\"" << num(kHeight - 15)
        << "\" text-anchor=\"middle\">" << escape(axes.x_label) << "</text>\n";
    out << "<text transform=\"translate(18," << num(kTop + plot_h / 2)
        << ") rotate(-90)\" text-anchor=\"middle\">" << escape(axes.y_label) << "</text>\n";

    for (std::size_t s = 0; s < series.size(); ++s) {
        const char* colour = kPalette[s % kPalette.size()];
        out << "<polyline fill=\"none\" stroke=\"" << colour << "\" stroke-width=\"1.5\" points=\"";
        for (std::size_t i = 0; i < series[s].points.size(); ++i) {
            const auto& [x, y] = series[s].points[i];
            out << (i ? " " : "") << num(tx(x)) << ',' << num(ty(y));
        }
        out << "\"/>\n";
        const double ly = kTop + 14 + 16 * static_cast<double>(s);
        out << "<line x1=\"" << num(kWidth - kRight + 10) << "\" y1=\"" << num(ly - 4) << "\" x2=\""
            << num(kWidth - kRight + 30) << "\" y2=\"" << num(ly - 4) << "\" stroke=\"" << colour
            << "\" stroke-width=\"2\"/>\n";
        out << "<text x=\"" << num(kWidth - kRight + 34) << "\" y=\"" << num(ly) << "\">"
            << escape(series[s].label) << "</text>\n";
    }
    out << "</svg>\n";
}

}  // namespace addrhash
