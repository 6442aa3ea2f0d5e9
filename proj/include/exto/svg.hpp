#pragma once

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <string>

#include "exto/errors.hpp"
#include "exto/extremogram.hpp"
#include "exto/permutation.hpp"

namespace exto {

/// Bar-and-band extremogram plot. Dependency-free SVG text output with
/// fixed formatting so golden-file tests diff cleanly.
struct SvgPlotOptions {
    int width = 900;
    int height = 420;
    int margin_left = 60;
    int margin_right = 20;
    int margin_top = 30;
    int margin_bottom = 50;
    std::string title;
    std::string bar_color = "#2c5f8a";
    std::string band_color = "#c0392b";
};

namespace svgdetail {

inline std::string num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.3f", v);
    return buf;
}

} // namespace svgdetail

inline std::string render_extremogram_svg(const ExtremogramCurve& curve,
                                          const PermutationBands* bands,
                                          const SvgPlotOptions& opt = {}) {
    const double plot_w =
        static_cast<double>(opt.width - opt.margin_left - opt.margin_right);
    const double plot_h =
        static_cast<double>(opt.height - opt.margin_top - opt.margin_bottom);
    double ymax = 0.0;
    for (double v : curve.values) ymax = std::max(ymax, v);
    if (bands) ymax = std::max(ymax, bands->flat_upper);
    ymax = std::max(ymax * 1.1, 1e-6);

    const std::size_t nbars = curve.lags.size();
    const double bar_w = plot_w / static_cast<double>(nbars);

    auto x_of = [&](std::size_t i) {
        return opt.margin_left + static_cast<double>(i) * bar_w;
    };
    auto y_of = [&](double v) {
        return opt.margin_top + plot_h * (1.0 - v / ymax);
    };

    std::string s;
    s += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" +
         std::to_string(opt.width) + "\" height=\"" +
         std::to_string(opt.height) + "\">\n";
    s += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    if (!opt.title.empty())
        s += "<text x=\"" + std::to_string(opt.width / 2) +
             "\" y=\"20\" text-anchor=\"middle\" font-family=\"sans-serif\" "
             "font-size=\"14\">" + opt.title + "</text>\n";

    // axes
    s += "<line x1=\"" + std::to_string(opt.margin_left) + "\" y1=\"" +
         svgdetail::num(y_of(0)) + "\" x2=\"" +
         std::to_string(opt.width - opt.margin_right) + "\" y2=\"" +
         svgdetail::num(y_of(0)) + "\" stroke=\"black\"/>\n";
    s += "<line x1=\"" + std::to_string(opt.margin_left) + "\" y1=\"" +
         std::to_string(opt.margin_top) + "\" x2=\"" +
         std::to_string(opt.margin_left) + "\" y2=\"" +
         svgdetail::num(y_of(0)) + "\" stroke=\"black\"/>\n";

    // y tick labels at 0, ymax/2, ymax
    for (double frac : {0.0, 0.5, 1.0}) {
        const double v = frac * ymax;
        s += "<text x=\"" + std::to_string(opt.margin_left - 6) + "\" y=\"" +
             svgdetail::num(y_of(v) + 4) +
             "\" text-anchor=\"end\" font-family=\"sans-serif\" "
             "font-size=\"11\">" + svgdetail::num(v) + "</text>\n";
    }

    // bars, one per lag
    for (std::size_t i = 0; i < nbars; ++i) {
        const double v = curve.values[i];
        s += "<rect x=\"" + svgdetail::num(x_of(i) + 0.1 * bar_w) + "\" y=\"" +
             svgdetail::num(y_of(v)) + "\" width=\"" +
             svgdetail::num(0.8 * bar_w) + "\" height=\"" +
             svgdetail::num(y_of(0) - y_of(v)) + "\" fill=\"" +
             opt.bar_color + "\"/>\n";
    }

    // x tick labels: first, middle, last lag
    for (std::size_t i : {std::size_t{0}, nbars / 2, nbars - 1}) {
        s += "<text x=\"" + svgdetail::num(x_of(i) + 0.5 * bar_w) + "\" y=\"" +
             svgdetail::num(y_of(0) + 16) +
             "\" text-anchor=\"middle\" font-family=\"sans-serif\" "
             "font-size=\"11\">" + std::to_string(curve.lags[i]) + "</text>\n";
    }
    s += "<text x=\"" + std::to_string(opt.width / 2) + "\" y=\"" +
         std::to_string(opt.height - 12) +
         "\" text-anchor=\"middle\" font-family=\"sans-serif\" "
         "font-size=\"12\">lag</text>\n";

    // horizontal flat-band lines
    if (bands) {
        for (double level : {bands->flat_upper, bands->flat_lower}) {
            s += "<line x1=\"" + std::to_string(opt.margin_left) +
                 "\" y1=\"" + svgdetail::num(y_of(level)) + "\" x2=\"" +
                 std::to_string(opt.width - opt.margin_right) + "\" y2=\"" +
                 svgdetail::num(y_of(level)) + "\" stroke=\"" +
                 opt.band_color + "\" stroke-dasharray=\"6,4\"/>\n";
        }
    }
    s += "</svg>\n";
    return s;
}

inline void write_extremogram_svg(const ExtremogramCurve& curve,
                                  const PermutationBands* bands,
                                  const std::string& path,
                                  const SvgPlotOptions& opt = {}) {
    std::ofstream out(path);
    if (!out) throw data_error("cannot write file: " + path);
    out << render_extremogram_svg(curve, bands, opt);
}

} // namespace exto
