// svg.hpp — Minimal static line plots: axes, polylines, and a text legend.

#pragma once

#include "csv.hpp"

#include <algorithm>
#include <ostream>
#include <string>
#include <vector>

namespace causalbench::cli {

struct SvgCurve {
    std::string label;
    std::string color;
    bool dashed = false;
    std::vector<std::pair<double, double>> points;
};

class SvgPlot {
public:
    SvgPlot(std::string title, std::string x_label, std::string y_label)
        : title_(std::move(title)), x_label_(std::move(x_label)), y_label_(std::move(y_label)) {}

    void add_curve(SvgCurve curve) { curves_.push_back(std::move(curve)); }

    void render(std::ostream& os) const {
        constexpr double w = 720, h = 480, ml = 70, mr = 160, mt = 40, mb = 50;
        double x0 = 1e300, x1 = -1e300, y0 = 1e300, y1 = -1e300;
        for (const auto& c : curves_)
            for (const auto& [x, y] : c.points) {
                x0 = std::min(x0, x);
                x1 = std::max(x1, x);
                y0 = std::min(y0, y);
                y1 = std::max(y1, y);
            }
        if (x0 >= x1) x1 = x0 + 1;
        if (y0 >= y1) y1 = y0 + 1;
        const double ypad = 0.05 * (y1 - y0);
        y0 -= ypad;
        y1 += ypad;
        auto px = [&](double x) { return ml + (x - x0) / (x1 - x0) * (w - ml - mr); };
        auto py = [&](double y) { return h - mb - (y - y0) / (y1 - y0) * (h - mt - mb); };

        os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << w << "\" height=\"" << h
           << "\" viewBox=\"0 0 " << w << " " << h << "\">\n";
        os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
        os << "<text x=\"" << w / 2 << "\" y=\"24\" text-anchor=\"middle\" font-size=\"16\">"
           << title_ << "</text>\n";

        // axes and ticks
        os << "<line x1=\"" << ml << "\" y1=\"" << h - mb << "\" x2=\"" << w - mr << "\" y2=\""
           << h - mb << "\" stroke=\"black\"/>\n";
        os << "<line x1=\"" << ml << "\" y1=\"" << mt << "\" x2=\"" << ml << "\" y2=\"" << h - mb
           << "\" stroke=\"black\"/>\n";
        for (int t = 0; t <= 4; ++t) {
            const double xv = x0 + (x1 - x0) * t / 4.0;
            const double yv = y0 + (y1 - y0) * t / 4.0;
            os << "<text x=\"" << px(xv) << "\" y=\"" << h - mb + 18
               << "\" text-anchor=\"middle\" font-size=\"11\">" << format_double(round3(xv))
               << "</text>\n";
            os << "<text x=\"" << ml - 6 << "\" y=\"" << py(yv) + 4
               << "\" text-anchor=\"end\" font-size=\"11\">" << format_double(round3(yv))
               << "</text>\n";
        }
        os << "<text x=\"" << (ml + w - mr) / 2 << "\" y=\"" << h - 12
           << "\" text-anchor=\"middle\" font-size=\"13\">" << x_label_ << "</text>\n";
        os << "<text x=\"16\" y=\"" << (mt + h - mb) / 2
           << "\" text-anchor=\"middle\" font-size=\"13\" transform=\"rotate(-90 16 "
           << (mt + h - mb) / 2 << ")\">" << y_label_ << "</text>\n";

        int li = 0;
        for (const auto& c : curves_) {
            os << "<polyline fill=\"none\" stroke=\"" << c.color << "\" stroke-width=\"1.5\"";
            if (c.dashed) os << " stroke-dasharray=\"6 4\"";
            os << " points=\"";
            for (const auto& [x, y] : c.points)
                os << format_double(round2(px(x))) << ',' << format_double(round2(py(y))) << ' ';
            os << "\"/>\n";
            const double ly = mt + 16 + 18 * li++;
            os << "<line x1=\"" << w - mr + 10 << "\" y1=\"" << ly << "\" x2=\"" << w - mr + 34
               << "\" y2=\"" << ly << "\" stroke=\"" << c.color << "\" stroke-width=\"1.5\""
               << (c.dashed ? " stroke-dasharray=\"6 4\"" : "") << "/>\n";
            os << "<text x=\"" << w - mr + 40 << "\" y=\"" << ly + 4 << "\" font-size=\"12\">"
               << c.label << "</text>\n";
        }
        os << "</svg>\n";
    }

private:
    static double round2(double v) { return std::round(v * 100.0) / 100.0; }
    static double round3(double v) { return std::round(v * 1000.0) / 1000.0; }

    std::string title_, x_label_, y_label_;
    std::vector<SvgCurve> curves_;
};

}  // namespace causalbench::cli
