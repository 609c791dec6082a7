#include <algorithm>
#include <cmath>
#include <cstdio>
#include <string>
#include <vector>

#include "equifair/plots.hpp"

namespace equifair {

namespace {

constexpr int kWidth = 800;
constexpr int kHeight = 600;
constexpr double kMargin = 60.0;

const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                          "#ff7f0e", "#8c564b", "#17becf", "#7f7f7f"};

std::string fmt(double v) {
    char buf[48];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

std::string escape(const std::string& s) {
    std::string out;
    for (char c : s) {
        switch (c) {
            case '&': out += "&amp;"; break;
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '"': out += "&quot;"; break;
            default: out += c;
        }
    }
    return out;
}

struct Scale {
    double lo, hi, px0, px1;
    double operator()(double v) const {
        if (hi == lo) return 0.5 * (px0 + px1);
        return px0 + (v - lo) / (hi - lo) * (px1 - px0);
    }
};

void bounds(const std::vector<double>& v, double& lo, double& hi) {
    for (double x : v) {
        lo = std::min(lo, x);
        hi = std::max(hi, x);
    }
}

void pad(double& lo, double& hi) {
    if (hi <= lo) {
        lo -= 0.5;
        hi += 0.5;
        return;
    }
    const double p = 0.06 * (hi - lo);
    lo -= p;
    hi += p;
}

void axes(std::string& out, const Scale& sx, const Scale& sy, const std::string& xl,
          const std::string& yl) {
    char buf[512];
    std::snprintf(buf, sizeof buf,
                  "<line x1=\"%s\" y1=\"%s\" x2=\"%s\" y2=\"%s\" stroke=\"black\"/>\n",
                  fmt(sx.px0).c_str(), fmt(sy.px0).c_str(), fmt(sx.px1).c_str(),
                  fmt(sy.px0).c_str());
    out += buf;
    std::snprintf(buf, sizeof buf,
                  "<line x1=\"%s\" y1=\"%s\" x2=\"%s\" y2=\"%s\" stroke=\"black\"/>\n",
                  fmt(sx.px0).c_str(), fmt(sy.px0).c_str(), fmt(sx.px0).c_str(),
                  fmt(sy.px1).c_str());
    out += buf;
    for (int k = 0; k <= 4; ++k) {
        const double tx = sx.lo + (sx.hi - sx.lo) * k / 4.0;
        const double ty = sy.lo + (sy.hi - sy.lo) * k / 4.0;
        std::snprintf(buf, sizeof buf,
                      "<text x=\"%s\" y=\"%s\" font-family=\"monospace\" font-size=\"10\" "
                      "text-anchor=\"middle\">%s</text>\n",
                      fmt(sx(tx)).c_str(), fmt(sy.px0 + 14).c_str(), fmt(tx).c_str());
        out += buf;
        std::snprintf(buf, sizeof buf,
                      "<text x=\"%s\" y=\"%s\" font-family=\"monospace\" font-size=\"10\" "
                      "text-anchor=\"end\">%s</text>\n",
                      fmt(sx.px0 - 4).c_str(), fmt(sy(ty) + 3).c_str(), fmt(ty).c_str());
        out += buf;
    }
    std::snprintf(buf, sizeof buf,
                  "<text x=\"%s\" y=\"%s\" font-family=\"monospace\" font-size=\"12\" "
                  "text-anchor=\"middle\">%s</text>\n",
                  fmt(0.5 * (sx.px0 + sx.px1)).c_str(), fmt(sy.px0 + 32).c_str(),
                  escape(xl).c_str());
    out += buf;
    std::snprintf(buf, sizeof buf,
                  "<text x=\"%s\" y=\"%s\" font-family=\"monospace\" font-size=\"12\" "
                  "text-anchor=\"middle\" transform=\"rotate(-90 %s %s)\">%s</text>\n",
                  fmt(sx.px0 - 44).c_str(), fmt(0.5 * (sy.px0 + sy.px1)).c_str(),
                  fmt(sx.px0 - 44).c_str(), fmt(0.5 * (sy.px0 + sy.px1)).c_str(),
                  escape(yl).c_str());
    out += buf;
}

void render_paths(std::string& out, const PlotSpec& spec) {
    double xlo = 1e300, xhi = -1e300, ylo = 1e300, yhi = -1e300;
    for (const auto& s : spec.series) {
        bounds(s.x, xlo, xhi);
        bounds(s.y, ylo, yhi);
    }
    pad(xlo, xhi);
    pad(ylo, yhi);
    const Scale sx{xlo, xhi, kMargin, kWidth - kMargin};
    const Scale sy{ylo, yhi, kHeight - kMargin, kMargin};
    axes(out, sx, sy, spec.x_label, spec.y_label);

    char buf[512];
    for (std::size_t si = 0; si < spec.series.size(); ++si) {
        const auto& s = spec.series[si];
        const char* color = kPalette[si % 8];
        std::string pts;
        for (std::size_t i = 0; i < s.x.size(); ++i)
            pts += fmt(sx(s.x[i])) + "," + fmt(sy(s.y[i])) + " ";
        std::snprintf(buf, sizeof buf,
                      "<polyline points=\"%s\" fill=\"none\" stroke=\"%s\" stroke-width=\"1.5\" "
                      "marker-end=\"url(#arrowhead)\"/>\n",
                      pts.c_str(), color);
        out += buf;
        for (std::size_t i = 0; i < s.x.size(); ++i) {
            std::snprintf(buf, sizeof buf, "<circle cx=\"%s\" cy=\"%s\" r=\"3\" fill=\"%s\"/>\n",
                          fmt(sx(s.x[i])).c_str(), fmt(sy(s.y[i])).c_str(), color);
            out += buf;
            if (i < s.labels.size()) {
                std::snprintf(buf, sizeof buf,
                              "<text x=\"%s\" y=\"%s\" font-family=\"monospace\" "
                              "font-size=\"10\">%s</text>\n",
                              fmt(sx(s.x[i]) + 5).c_str(), fmt(sy(s.y[i]) - 5).c_str(),
                              escape(s.labels[i]).c_str());
                out += buf;
            }
        }
        std::snprintf(buf, sizeof buf,
                      "<text x=\"%s\" y=\"%s\" font-family=\"monospace\" font-size=\"11\" "
                      "fill=\"%s\">%s</text>\n",
                      fmt(kWidth - kMargin - 180).c_str(), fmt(kMargin + 14.0 * si).c_str(), color,
                      escape(s.name).c_str());
        out += buf;
    }
}

void render_waterfall(std::string& out, const PlotSpec& spec) {
    // Floating bars: running level before/after each signed step.
    double ylo = 0.0, yhi = 0.0;
    std::size_t nbars = 0;
    for (const auto& s : spec.series) {
        double level = 0.0;
        for (std::size_t i = 0; i < s.y.size(); ++i) {
            if (i == 0 || i + 1 == s.y.size()) {
                yhi = std::max(yhi, s.y[i]);
            } else {
                const double from = (i == 1) ? s.y[0] : level;
                level = from + s.y[i];
                yhi = std::max({yhi, from, level});
                ylo = std::min({ylo, from, level});
            }
            if (i == 1) level = s.y[0] + s.y[1];
        }
        nbars = std::max(nbars, s.y.size());
    }
    pad(ylo, yhi);
    const Scale sy{ylo, yhi, kHeight - kMargin, kMargin};
    const double plot_w = kWidth - 2 * kMargin;
    const double group_w = plot_w / static_cast<double>(nbars);
    const double bar_w = group_w / (static_cast<double>(spec.series.size()) + 0.5);

    const Scale sx{0.0, static_cast<double>(nbars), kMargin, kWidth - kMargin};
    axes(out, sx, sy, spec.x_label, spec.y_label);

    char buf[512];
    for (std::size_t si = 0; si < spec.series.size(); ++si) {
        const auto& s = spec.series[si];
        const char* color = kPalette[si % 8];
        double level = s.y.empty() ? 0.0 : s.y[0];
        for (std::size_t i = 0; i < s.y.size(); ++i) {
            double lo, hi;
            if (i == 0 || i + 1 == s.y.size()) {
                lo = 0.0;
                hi = s.y[i];
            } else {
                const double next = level + s.y[i];
                lo = std::min(level, next);
                hi = std::max(level, next);
                level = next;
            }
            const double x = kMargin + group_w * static_cast<double>(i) + bar_w * (0.25 + si);
            std::snprintf(buf, sizeof buf,
                          "<rect x=\"%s\" y=\"%s\" width=\"%s\" height=\"%s\" fill=\"%s\" "
                          "fill-opacity=\"0.8\"/>\n",
                          fmt(x).c_str(), fmt(sy(hi)).c_str(), fmt(bar_w).c_str(),
                          fmt(std::max(1.0, sy(lo) - sy(hi))).c_str(), color);
            out += buf;
            if (si == 0 && i < s.labels.size()) {
                std::snprintf(buf, sizeof buf,
                              "<text x=\"%s\" y=\"%s\" font-family=\"monospace\" font-size=\"9\" "
                              "text-anchor=\"middle\">%s</text>\n",
                              fmt(kMargin + group_w * (i + 0.5)).c_str(),
                              fmt(kHeight - kMargin + 26).c_str(), escape(s.labels[i]).c_str());
                out += buf;
            }
        }
        std::snprintf(buf, sizeof buf,
                      "<text x=\"%s\" y=\"%s\" font-family=\"monospace\" font-size=\"11\" "
                      "fill=\"%s\">%s</text>\n",
                      fmt(kWidth - kMargin - 180).c_str(), fmt(kMargin + 14.0 * si).c_str(), color,
                      escape(s.name).c_str());
        out += buf;
    }
}

void render_density(std::string& out, const PlotSpec& spec) {
    int nrows = 0, ncols = 0;
    for (const auto& s : spec.series) {
        nrows = std::max(nrows, s.row + 1);
        ncols = std::max(ncols, s.col + 1);
    }
    const double pw = (kWidth - 2 * kMargin) / std::max(1, ncols);
    const double ph = (kHeight - 2 * kMargin) / std::max(1, nrows);

    char buf[512];
    for (int r = 0; r < nrows; ++r) {
        for (int c = 0; c < ncols; ++c) {
            double xlo = 1e300, xhi = -1e300, yhi = 0.0;
            bool any = false;
            for (const auto& s : spec.series)
                if (s.row == r && s.col == c) {
                    any = true;
                    bounds(s.x, xlo, xhi);
                    for (double v : s.y) yhi = std::max(yhi, v);
                }
            if (!any) continue;
            pad(xlo, xhi);
            if (yhi <= 0.0) yhi = 1.0;
            const double px0 = kMargin + pw * c + 8;
            const double px1 = kMargin + pw * (c + 1) - 8;
            const double py0 = kMargin + ph * (r + 1) - 12;
            const double py1 = kMargin + ph * r + 12;
            const Scale sx{xlo, xhi, px0, px1};
            const Scale sy{0.0, 1.08 * yhi, py0, py1};
            std::snprintf(buf, sizeof buf,
                          "<rect x=\"%s\" y=\"%s\" width=\"%s\" height=\"%s\" fill=\"none\" "
                          "stroke=\"#cccccc\"/>\n",
                          fmt(px0).c_str(), fmt(py1).c_str(), fmt(px1 - px0).c_str(),
                          fmt(py0 - py1).c_str());
            out += buf;
            int ci = 0;
            for (const auto& s : spec.series) {
                if (s.row != r || s.col != c) continue;
                std::string pts;
                for (std::size_t i = 0; i < s.x.size(); ++i)
                    pts += fmt(sx(s.x[i])) + "," + fmt(sy(s.y[i])) + " ";
                std::snprintf(buf, sizeof buf,
                              "<polyline points=\"%s\" fill=\"none\" stroke=\"%s\" "
                              "stroke-width=\"1\"/>\n",
                              pts.c_str(), kPalette[ci % 8]);
                out += buf;
                if (r == 0) {
                    std::snprintf(buf, sizeof buf,
                                  "<text x=\"%s\" y=\"%s\" font-family=\"monospace\" "
                                  "font-size=\"9\" fill=\"%s\">%s</text>\n",
                                  fmt(px0 + 4).c_str(), fmt(py1 + 10.0 + 10.0 * ci).c_str(),
                                  kPalette[ci % 8], escape(s.name).c_str());
                    out += buf;
                }
                ++ci;
            }
        }
    }
}

}  // namespace

std::string render_svg(const PlotSpec& spec) {
    std::string out;
    char buf[256];
    std::snprintf(buf, sizeof buf,
                  "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"%d\" "
                  "height=\"%d\" viewBox=\"0 0 %d %d\">\n",
                  kWidth, kHeight, kWidth, kHeight);
    out += buf;
    out += "<defs><marker id=\"arrowhead\" markerWidth=\"8\" markerHeight=\"6\" refX=\"7\" "
           "refY=\"3\" orient=\"auto\"><polygon points=\"0 0, 8 3, 0 6\"/></marker></defs>\n";
    out += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";

    switch (spec.kind) {
        case PlotKind::arrow:
        case PlotKind::multiple_arrow: render_paths(out, spec); break;
        case PlotKind::waterfall: render_waterfall(out, spec); break;
        case PlotKind::density: render_density(out, spec); break;
    }
    out += "</svg>\n";
    return out;
}

}  // namespace equifair
