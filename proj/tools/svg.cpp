#include "svg.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>

namespace peq::cli {

namespace {

std::string esc(const std::string& s) {
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

std::string num(double v) { return fmt::format("{:.2f}", v); }

const char* kCurveColors[] = {"#000000", "#1b7837", "#762a83", "#e08214", "#01665e"};
const char* kDash[] = {"", "6,3", "2,2", "8,3,2,3", "4,4"};

}  // namespace

std::string verdict_color(Verdict v) {
    switch (v) {
        case Verdict::Positive:
        case Verdict::Increasing: return "#4a7bd0";
        case Verdict::Negative:
        case Verdict::Decreasing: return "#d64545";
        case Verdict::Boundary: return "#555555";
        case Verdict::Indeterminate: return "#e3e3e3";
    }
    return "#ffffff";
}

std::string render_region_svg(const std::string& title, const std::vector<SvgPanel>& panels,
                              const std::vector<SvgLegendEntry>& legend, int width, int height) {
    const int n = std::max<int>(1, static_cast<int>(panels.size()));
    std::vector<std::string> labels;
    for (const auto& panel : panels)
        for (const auto& c : panel.curves)
            if (std::find(labels.begin(), labels.end(), c.label) == labels.end()) labels.push_back(c.label);
    auto label_index = [&](const std::string& l) {
        return static_cast<std::size_t>(std::find(labels.begin(), labels.end(), l) - labels.begin());
    };
    const double W = width, H = height;
    const double top = 40.0, left = 55.0, gap = 50.0, right = 15.0;
    const double legend_h = 16.0 * static_cast<double>(legend.size() + labels.size()) + 10.0;
    const double pw = (W - left - right - gap * (n - 1)) / n;
    const double ph = H - top - legend_h - 45.0;

    std::string s;
    s += "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
    s += fmt::format(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"{}\" height=\"{}\" viewBox=\"0 0 {} {}\">\n",
        width, height, width, height);
    s += fmt::format("<rect x=\"0\" y=\"0\" width=\"{}\" height=\"{}\" fill=\"#ffffff\"/>\n", width, height);
    s += fmt::format("<text x=\"{}\" y=\"20\" font-family=\"sans-serif\" font-size=\"14\" text-anchor=\"middle\">{}</text>\n",
                     num(W / 2), esc(title));

    for (int p = 0; p < static_cast<int>(panels.size()); ++p) {
        const SvgPanel& panel = panels[p];
        const GridSpec& g = panel.grid.spec;
        const double x0 = left + p * (pw + gap), y0 = top;
        const double cw = pw / g.n_phi, ch = ph / g.n_beta;
        auto px = [&](double phi) { return x0 + (phi - g.phi_min) / (g.phi_max - g.phi_min) * pw; };
        auto py = [&](double beta) { return y0 + ph - (beta - g.beta_min) / (g.beta_max - g.beta_min) * ph; };

        s += fmt::format("<g id=\"panel{}\">\n", p);
        s += fmt::format("<text x=\"{}\" y=\"{}\" font-family=\"sans-serif\" font-size=\"11\" text-anchor=\"middle\">{}</text>\n",
                         num(x0 + pw / 2), num(y0 - 5), esc(panel.title));
        s += "<g shape-rendering=\"crispEdges\">\n";
        // Raster, with equal-colored runs in a row merged into one rect.
        for (int j = 0; j < g.n_beta; ++j) {
            int i = 0;
            while (i < g.n_phi) {
                const std::string color = verdict_color(panel.grid.at(i, j).verdict);
                int k = i + 1;
                while (k < g.n_phi && verdict_color(panel.grid.at(k, j).verdict) == color) ++k;
                s += fmt::format("<rect x=\"{}\" y=\"{}\" width=\"{}\" height=\"{}\" fill=\"{}\"/>\n", num(x0 + i * cw),
                                 num(y0 + ph - (j + 1) * ch), num((k - i) * cw + 0.3), num(ch + 0.3), color);
                i = k;
            }
        }
        s += "</g>\n";
        s += "<g fill=\"none\" stroke-width=\"1.6\">\n";
        for (const auto& c : panel.curves) {
            const std::size_t ci = label_index(c.label);
            std::string pts;
            for (const auto& [phi, beta] : c.points) pts += num(px(phi)) + "," + num(py(beta)) + " ";
            s += fmt::format("<polyline stroke=\"{}\"{} points=\"{}\"><title>{}</title></polyline>\n",
                             kCurveColors[ci % 5],
                             ci % 5 ? fmt::format(" stroke-dasharray=\"{}\"", kDash[ci % 5]) : std::string(), pts,
                             esc(c.label));
        }
        s += "</g>\n";

        // Axes and ticks.
        s += fmt::format("<rect x=\"{}\" y=\"{}\" width=\"{}\" height=\"{}\" fill=\"none\" stroke=\"#000000\"/>\n",
                         num(x0), num(y0), num(pw), num(ph));
        for (int t = 0; t <= 4; ++t) {
            const double phi = g.phi_min + (g.phi_max - g.phi_min) * t / 4.0;
            const double beta = g.beta_min + (g.beta_max - g.beta_min) * t / 4.0;
            s += fmt::format("<line x1=\"{0}\" y1=\"{1}\" x2=\"{0}\" y2=\"{2}\" stroke=\"#000000\"/>\n", num(px(phi)),
                             num(y0 + ph), num(y0 + ph + 4));
            s += fmt::format("<text x=\"{}\" y=\"{}\" font-family=\"sans-serif\" font-size=\"10\" text-anchor=\"middle\">{:g}</text>\n",
                             num(px(phi)), num(y0 + ph + 15), phi);
            s += fmt::format("<line x1=\"{0}\" y1=\"{2}\" x2=\"{1}\" y2=\"{2}\" stroke=\"#000000\"/>\n", num(x0 - 4),
                             num(x0), num(py(beta)));
            s += fmt::format("<text x=\"{}\" y=\"{}\" font-family=\"sans-serif\" font-size=\"10\" text-anchor=\"end\">{:g}</text>\n",
                             num(x0 - 6), num(py(beta) + 3), beta);
        }
        s += fmt::format("<text x=\"{}\" y=\"{}\" font-family=\"sans-serif\" font-size=\"11\" text-anchor=\"middle\">phi</text>\n",
                         num(x0 + pw / 2), num(y0 + ph + 30));
        s += fmt::format(
            "<text x=\"{0}\" y=\"{1}\" font-family=\"sans-serif\" font-size=\"11\" text-anchor=\"middle\" transform=\"rotate(-90 {0} {1})\">beta</text>\n",
            num(x0 - 38), num(y0 + ph / 2));
        s += "</g>\n";
    }

    // Legend: region colors, then one row per threshold curve.
    double ly = H - legend_h + 5.0;
    s += "<g id=\"legend\" font-family=\"sans-serif\" font-size=\"11\">\n";
    for (const auto& e : legend) {
        s += fmt::format("<rect x=\"{}\" y=\"{}\" width=\"12\" height=\"12\" fill=\"{}\" stroke=\"#000000\"/>\n", num(left),
                         num(ly), e.color);
        s += fmt::format("<text x=\"{}\" y=\"{}\">{}</text>\n", num(left + 18), num(ly + 10), esc(e.text));
        ly += 16.0;
    }
    for (std::size_t ci = 0; ci < labels.size(); ++ci) {
        s += fmt::format("<line x1=\"{0}\" y1=\"{2}\" x2=\"{1}\" y2=\"{2}\" stroke=\"{3}\" stroke-width=\"1.6\"{4}/>\n",
                         num(left - 4), num(left + 14), num(ly + 6), kCurveColors[ci % 5],
                         ci % 5 ? fmt::format(" stroke-dasharray=\"{}\"", kDash[ci % 5]) : std::string());
        s += fmt::format("<text x=\"{}\" y=\"{}\">{}</text>\n", num(left + 18), num(ly + 10), esc(labels[ci]));
        ly += 16.0;
    }
    s += "</g>\n</svg>\n";
    return s;
}

}  // namespace peq::cli
