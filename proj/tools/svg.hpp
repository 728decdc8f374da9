#pragma once

#include <string>
#include <vector>

#include "platform_eq/regions.hpp"

namespace peq::cli {

struct SvgPanel {
    std::string title;
    RegionGrid grid;
    std::vector<ThresholdCurve> curves;
};

struct SvgLegendEntry {
    std::string color;
    std::string text;
};

// Colors are fixed: blue for positive/increasing, red for negative/decreasing.
std::string verdict_color(Verdict v);

// Self-contained SVG 1.1: one raster panel per grid with axes, curves and a shared legend.
std::string render_region_svg(const std::string& title, const std::vector<SvgPanel>& panels,
                              const std::vector<SvgLegendEntry>& legend, int width, int height);

}  // namespace peq::cli
