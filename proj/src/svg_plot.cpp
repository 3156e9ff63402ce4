#include "odar/svg_plot.hpp"

#include <algorithm>
#include <cstdio>
#include <sstream>
#include <stdexcept>
#include <vector>

namespace odar {

namespace {
constexpr double kCanvas = 800.0;
constexpr double kMargin = 0.05 * kCanvas;
constexpr const char* kOutlierColor = "#ff8c00";
constexpr const char* kNeutralColor = "#7f7f7f";

std::string escape_xml(const std::string& s) {
    std::string out;
    for (char c : s) {
        switch (c) {
        case '&': out += "&amp;"; break;
        case '<': out += "&lt;"; break;
        case '>': out += "&gt;"; break;
        default: out += c;
        }
    }
    return out;
}
} // namespace

std::string plot_svg(std::span<const double> points2d, int n, std::span<const int> outliers,
                     const std::string& description) {
    if (n < 1 || points2d.size() != static_cast<std::size_t>(n) * 2)
        throw std::invalid_argument("plot_svg expects an N x 2 matrix");

    double xmin = points2d[0], xmax = points2d[0];
    double ymin = points2d[1], ymax = points2d[1];
    for (int i = 0; i < n; ++i) {
        xmin = std::min(xmin, points2d[2 * static_cast<std::size_t>(i)]);
        xmax = std::max(xmax, points2d[2 * static_cast<std::size_t>(i)]);
        ymin = std::min(ymin, points2d[2 * static_cast<std::size_t>(i) + 1]);
        ymax = std::max(ymax, points2d[2 * static_cast<std::size_t>(i) + 1]);
    }
    const double xr = xmax - xmin, yr = ymax - ymin;
    const double inner = kCanvas - 2.0 * kMargin;
    auto map_x = [&](double x) {
        return xr > 0.0 ? kMargin + (x - xmin) / xr * inner : kCanvas / 2.0;
    };
    auto map_y = [&](double y) { // SVG y grows downward
        return yr > 0.0 ? kCanvas - kMargin - (y - ymin) / yr * inner : kCanvas / 2.0;
    };

    std::vector<std::uint8_t> flagged(n, 0);
    for (int idx : outliers) {
        if (idx < 0 || idx >= n) throw std::invalid_argument("outlier index out of range");
        flagged[idx] = 1;
    }

    std::ostringstream os;
    os << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
       << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"800\" "
          "height=\"800\" viewBox=\"0 0 800 800\">\n";
    if (!description.empty()) os << "<desc>" << escape_xml(description) << "</desc>\n";
    os << "<rect width=\"800\" height=\"800\" fill=\"#ffffff\"/>\n";
    char buf[128];
    for (int i = 0; i < n; ++i) {
        std::snprintf(buf, sizeof buf, "<circle cx=\"%.2f\" cy=\"%.2f\" r=\"3\" fill=\"%s\"/>\n",
                      map_x(points2d[2 * static_cast<std::size_t>(i)]),
                      map_y(points2d[2 * static_cast<std::size_t>(i) + 1]),
                      flagged[i] ? kOutlierColor : kNeutralColor);
        os << buf;
    }
    os << "</svg>\n";
    return os.str();
}

} // namespace odar
