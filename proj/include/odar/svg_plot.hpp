#pragma once

#include <span>
#include <string>

namespace odar {

/// 800x800 SVG 1.1 scatter plot with 5% margins and axes autoscaled to the
/// data extent. Points listed in `outliers` are drawn orange, the rest in a
/// neutral gray. Output is deterministic for identical inputs; `description`
/// is embedded in a <desc> element.
std::string plot_svg(std::span<const double> points2d, int n, std::span<const int> outliers,
                     const std::string& description = "");

} // namespace odar
