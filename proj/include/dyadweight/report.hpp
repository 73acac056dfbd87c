#pragma once

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <string>
#include <vector>

#include "dyadweight/errors.hpp"
#include "dyadweight/experiments.hpp"

namespace dyadweight {

// Deterministic log-log SVG plot of (delta, norm-1) records with the fitted
// power law overlaid. No timestamps or randomness in the drawing.
inline std::string render_sweep_svg(const std::vector<SweepResult>& results) {
    std::vector<const SweepResult*> useful;
    for (const auto& r : results)
        for (const auto& rec : r.records)
            if (rec.delta > 0.0 && rec.norm > 1.0) {
                useful.push_back(&r);
                break;
            }
    if (useful.empty()) throw insufficient_data_error("svg: no positive records to plot");

    double xmin = 1e300, xmax = -1e300, ymin = 1e300, ymax = -1e300;
    for (const auto* r : useful)
        for (const auto& rec : r->records) {
            if (!(rec.delta > 0.0) || !(rec.norm > 1.0)) continue;
            xmin = std::min(xmin, std::log10(rec.delta));
            xmax = std::max(xmax, std::log10(rec.delta));
            ymin = std::min(ymin, std::log10(rec.norm - 1.0));
            ymax = std::max(ymax, std::log10(rec.norm - 1.0));
        }
    if (xmax <= xmin) { xmin -= 0.5; xmax += 0.5; }
    if (ymax <= ymin) { ymin -= 0.5; ymax += 0.5; }
    const double padx = 0.06 * (xmax - xmin), pady = 0.08 * (ymax - ymin);
    xmin -= padx; xmax += padx; ymin -= pady; ymax += pady;

    const double W = 640, H = 480, ML = 70, MR = 20, MT = 20, MB = 50;
    auto px = [&](double lx) { return ML + (lx - xmin) / (xmax - xmin) * (W - ML - MR); };
    auto py = [&](double ly) { return H - MB - (ly - ymin) / (ymax - ymin) * (H - MT - MB); };
    char buf[256];
    std::string svg;
    auto emit = [&](const char* fmt, auto... args) {
        std::snprintf(buf, sizeof buf, fmt, args...);
        svg += buf;
    };

    emit("<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"%.0f\" height=\"%.0f\" "
         "viewBox=\"0 0 %.0f %.0f\">\n", W, H, W, H);
    svg += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    emit("<rect x=\"%.1f\" y=\"%.1f\" width=\"%.1f\" height=\"%.1f\" fill=\"none\" "
         "stroke=\"black\"/>\n", ML, MT, W - ML - MR, H - MT - MB);

    // decade ticks
    for (int d = int(std::ceil(xmin)); d <= int(std::floor(xmax)); ++d) {
        emit("<line x1=\"%.2f\" y1=\"%.1f\" x2=\"%.2f\" y2=\"%.1f\" stroke=\"#cccccc\"/>\n",
             px(d), MT, px(d), H - MB);
        emit("<text x=\"%.2f\" y=\"%.1f\" font-size=\"12\" text-anchor=\"middle\">1e%d</text>\n",
             px(d), H - MB + 18.0, d);
    }
    for (int d = int(std::ceil(ymin)); d <= int(std::floor(ymax)); ++d) {
        emit("<line x1=\"%.1f\" y1=\"%.2f\" x2=\"%.1f\" y2=\"%.2f\" stroke=\"#cccccc\"/>\n",
             ML, py(d), W - MR, py(d));
        emit("<text x=\"%.1f\" y=\"%.2f\" font-size=\"12\" text-anchor=\"end\">1e%d</text>\n",
             ML - 6.0, py(d) + 4.0, d);
    }
    emit("<text x=\"%.1f\" y=\"%.1f\" font-size=\"13\" text-anchor=\"middle\">delta</text>\n",
         ML + (W - ML - MR) / 2, H - 12.0);
    emit("<text x=\"16\" y=\"%.1f\" font-size=\"13\" text-anchor=\"middle\" "
         "transform=\"rotate(-90 16 %.1f)\">norm - 1</text>\n", MT + (H - MT - MB) / 2,
         MT + (H - MT - MB) / 2);

    static const char* palette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e"};
    int series_idx = 0;
    double legend_y = MT + 18.0;
    for (const auto* r : useful) {
        const char* color = palette[series_idx % 5];
        for (const auto& rec : r->records) {
            if (!(rec.delta > 0.0) || !(rec.norm > 1.0)) continue;
            emit("<circle cx=\"%.2f\" cy=\"%.2f\" r=\"3.5\" fill=\"%s\"/>\n",
                 px(std::log10(rec.delta)), py(std::log10(rec.norm - 1.0)), color);
        }
        if (r->fit) {
            // fitted line log(norm-1) = log c + b log delta over the data span
            double lx0 = 1e300, lx1 = -1e300;
            for (const auto& rec : r->records)
                if (rec.delta > 0.0 && rec.norm > 1.0) {
                    lx0 = std::min(lx0, std::log10(rec.delta));
                    lx1 = std::max(lx1, std::log10(rec.delta));
                }
            auto ly = [&](double lx) { return std::log10(r->fit->c) + r->fit->b * lx; };
            emit("<line x1=\"%.2f\" y1=\"%.2f\" x2=\"%.2f\" y2=\"%.2f\" stroke=\"%s\" "
                 "stroke-dasharray=\"6 3\"/>\n", px(lx0), py(ly(lx0)), px(lx1), py(ly(lx1)), color);
        }
        std::string label = (r->config.experiment == ExperimentKind::Martingale ? "martingale "
                                                                                : "hilbert ") +
                            to_string(r->config.family);
        if (r->fit) {
            std::snprintf(buf, sizeof buf, " c=%.3g b=%.3g R2=%.3g", r->fit->c, r->fit->b,
                          r->fit->r2);
            label += buf;
        }
        emit("<circle cx=\"%.1f\" cy=\"%.2f\" r=\"3.5\" fill=\"%s\"/>\n", ML + 12.0, legend_y - 4.0,
             color);
        emit("<text x=\"%.1f\" y=\"%.2f\" font-size=\"12\">%s</text>\n", ML + 22.0, legend_y,
             label.c_str());
        legend_y += 16.0;
        ++series_idx;
    }
    svg += "</svg>\n";
    return svg;
}

} // namespace dyadweight
