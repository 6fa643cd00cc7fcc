#include "volspill/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>
#include <stdexcept>

namespace volspill {

namespace {

const char* kPalette[] = {"#3465a4", "#cc0000", "#4e9a06", "#f57900",
                          "#75507b", "#c17d11", "#06989a", "#555753"};
constexpr int kPaletteSize = 8;

std::string esc(const std::string& s) {
    std::string out;
    out.reserve(s.size());
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

std::string num(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.4g", v);
    return buf;
}

std::string coord(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.2f", v);
    return buf;
}

struct Extent {
    double lo = 0, hi = 1;
    bool any = false;
};

Extent value_extent(const std::vector<LineChart::Series>& series) {
    Extent e;
    for (const auto& s : series) {
        for (Eigen::Index i = 0; i < s.values.size(); ++i) {
            const double v = s.values(i);
            if (!std::isfinite(v)) continue;
            if (!e.any) {
                e.lo = e.hi = v;
                e.any = true;
            } else {
                e.lo = std::min(e.lo, v);
                e.hi = std::max(e.hi, v);
            }
        }
    }
    if (!e.any) {
        e.lo = 0;
        e.hi = 1;
    }
    if (e.hi - e.lo < 1e-12) {
        e.lo -= 0.5;
        e.hi += 0.5;
    }
    const double pad = 0.05 * (e.hi - e.lo);
    e.lo -= pad;
    e.hi += pad;
    return e;
}

// Body of one chart, drawn into a plot box of the given size; the caller
// wraps it in the svg element (and a translate for grid layouts).
void render_panel(std::ostringstream& out, const LineChart& chart, int width, int height,
                  bool with_legend) {
    const int ml = 52, mr = 12, mt = chart.title.empty() ? 10 : 26, mb = 34;
    const double pw = width - ml - mr;
    const double ph = height - mt - mb;
    const Eigen::Index n = chart.series.empty() ? 0 : chart.series.front().values.size();
    for (const auto& s : chart.series)
        if (s.values.size() != n)
            throw std::invalid_argument("svg: series lengths disagree");
    if (static_cast<Eigen::Index>(chart.x_labels.size()) != n)
        throw std::invalid_argument("svg: x labels do not match the series length");

    const Extent ext = value_extent(chart.series);
    const auto x_at = [&](Eigen::Index i) {
        return n > 1 ? ml + pw * static_cast<double>(i) / static_cast<double>(n - 1)
                     : ml + 0.5 * pw;
    };
    const auto y_at = [&](double v) { return mt + ph * (1.0 - (v - ext.lo) / (ext.hi - ext.lo)); };

    out << "<rect x=\"" << ml << "\" y=\"" << mt << "\" width=\"" << coord(pw) << "\" height=\""
        << coord(ph) << "\" fill=\"#ffffff\" stroke=\"#aaaaaa\" stroke-width=\"1\"/>\n";
    if (!chart.title.empty())
        out << "<text x=\"" << ml << "\" y=\"" << mt - 9
            << "\" font-family=\"sans-serif\" font-size=\"13\" fill=\"#222222\">"
            << esc(chart.title) << "</text>\n";

    // Horizontal grid plus y tick labels.
    const int y_ticks = 4;
    for (int k = 0; k <= y_ticks; ++k) {
        const double v = ext.lo + (ext.hi - ext.lo) * k / y_ticks;
        const double y = y_at(v);
        out << "<line x1=\"" << ml << "\" y1=\"" << coord(y) << "\" x2=\"" << coord(ml + pw)
            << "\" y2=\"" << coord(y) << "\" stroke=\"#e0e0e0\" stroke-width=\"1\"/>\n";
        out << "<text x=\"" << ml - 6 << "\" y=\"" << coord(y + 4)
            << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"10\" "
               "fill=\"#444444\">"
            << num(v) << "</text>\n";
    }
    // Dashed zero line when zero is inside the range.
    if (ext.lo < 0 && ext.hi > 0)
        out << "<line x1=\"" << ml << "\" y1=\"" << coord(y_at(0)) << "\" x2=\""
            << coord(ml + pw) << "\" y2=\"" << coord(y_at(0))
            << "\" stroke=\"#888888\" stroke-width=\"1\" stroke-dasharray=\"4 3\"/>\n";

    // A handful of x labels.
    if (n > 0) {
        const int x_ticks = std::min<Eigen::Index>(5, n - 1 > 0 ? 5 : 1);
        for (int k = 0; k <= x_ticks; ++k) {
            const Eigen::Index i =
                x_ticks == 0 ? 0 : (n - 1) * static_cast<Eigen::Index>(k) / x_ticks;
            out << "<text x=\"" << coord(x_at(i)) << "\" y=\"" << coord(mt + ph + 14)
                << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"9\" "
                   "fill=\"#444444\">"
                << esc(chart.x_labels[static_cast<std::size_t>(i)]) << "</text>\n";
        }
    }

    for (std::size_t si = 0; si < chart.series.size(); ++si) {
        const auto& s = chart.series[si];
        const char* color = kPalette[si % kPaletteSize];
        std::vector<Eigen::Index> run;
        const auto flush = [&] {
            if (run.size() >= 2) {
                out << "<polyline fill=\"none\" stroke=\"" << color
                    << "\" stroke-width=\"1.3\" points=\"";
                for (Eigen::Index i : run)
                    out << coord(x_at(i)) << "," << coord(y_at(s.values(i))) << " ";
                out << "\"/>\n";
            } else if (run.size() == 1) {
                out << "<circle cx=\"" << coord(x_at(run[0])) << "\" cy=\""
                    << coord(y_at(s.values(run[0]))) << "\" r=\"1.6\" fill=\"" << color
                    << "\"/>\n";
            }
            run.clear();
        };
        for (Eigen::Index i = 0; i < n; ++i) {
            if (std::isfinite(s.values(i)))
                run.push_back(i);
            else
                flush();
        }
        flush();
    }

    if (with_legend && chart.series.size() > 1) {
        double lx = ml + 8;
        for (std::size_t si = 0; si < chart.series.size(); ++si) {
            const char* color = kPalette[si % kPaletteSize];
            out << "<rect x=\"" << coord(lx) << "\" y=\"" << mt + 6
                << "\" width=\"10\" height=\"3\" fill=\"" << color << "\"/>\n";
            out << "<text x=\"" << coord(lx + 14) << "\" y=\"" << mt + 11
                << "\" font-family=\"sans-serif\" font-size=\"10\" fill=\"#333333\">"
                << esc(chart.series[si].name) << "</text>\n";
            lx += 18 + 6.5 * static_cast<double>(chart.series[si].name.size());
        }
    }
}

}  // namespace

std::string render_line_chart(const LineChart& chart, int width, int height) {
    std::ostringstream out;
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\""
        << height << "\" viewBox=\"0 0 " << width << " " << height << "\">\n";
    out << "<rect width=\"" << width << "\" height=\"" << height << "\" fill=\"#fbfbfb\"/>\n";
    render_panel(out, chart, width, height, true);
    out << "</svg>\n";
    return out.str();
}

std::string render_small_multiples(const std::string& title,
                                   const std::vector<LineChart>& panels, int columns,
                                   int panel_width, int panel_height) {
    if (panels.empty()) throw std::invalid_argument("svg: no panels to draw");
    if (columns < 1) throw std::invalid_argument("svg: need at least one column");
    const int rows = (static_cast<int>(panels.size()) + columns - 1) / columns;
    const int header = title.empty() ? 8 : 30;
    const int width = columns * panel_width;
    const int height = rows * panel_height + header;

    std::ostringstream out;
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\""
        << height << "\" viewBox=\"0 0 " << width << " " << height << "\">\n";
    out << "<rect width=\"" << width << "\" height=\"" << height << "\" fill=\"#fbfbfb\"/>\n";
    if (!title.empty())
        out << "<text x=\"" << width / 2 << "\" y=\"20\" text-anchor=\"middle\" "
               "font-family=\"sans-serif\" font-size=\"15\" fill=\"#222222\">"
            << esc(title) << "</text>\n";
    for (std::size_t k = 0; k < panels.size(); ++k) {
        const int r = static_cast<int>(k) / columns;
        const int c = static_cast<int>(k) % columns;
        out << "<g transform=\"translate(" << c * panel_width << ","
            << header + r * panel_height << ")\">\n";
        render_panel(out, panels[k], panel_width, panel_height, false);
        out << "</g>\n";
    }
    out << "</svg>\n";
    return out.str();
}

}  // namespace volspill
