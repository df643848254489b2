#include "moran/cli/svg.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>

#include "moran/cli/format.hpp"

namespace moran::cli {

namespace {

struct Rgb {
    double r, g, b;
};

constexpr std::array<Rgb, 8> kRamp{{
    {68, 1, 84},
    {70, 50, 127},
    {54, 92, 141},
    {39, 127, 142},
    {31, 161, 135},
    {74, 194, 109},
    {159, 218, 58},
    {253, 231, 37},
}};

std::string color(double t) {
    t = std::clamp(t, 0.0, 1.0) * (kRamp.size() - 1);
    const std::size_t i = std::min<std::size_t>(static_cast<std::size_t>(t), kRamp.size() - 2);
    const double f = t - static_cast<double>(i);
    auto mix = [&](double a, double b) { return static_cast<int>(std::lround(a + (b - a) * f)); };
    char buf[8];
    std::snprintf(buf, sizeof buf, "#%02x%02x%02x", mix(kRamp[i].r, kRamp[i + 1].r), mix(kRamp[i].g, kRamp[i + 1].g),
                  mix(kRamp[i].b, kRamp[i + 1].b));
    return buf;
}

std::string num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3f", v);
    return buf;
}

}  // namespace

std::string render_heatmap(const std::vector<HeatCell>& cells, double dx, double dy, const std::string& title) {
    constexpr double kPlot = 480.0, kMargin = 40.0;
    std::string out;
    out += "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
    out += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + num(kPlot + 2 * kMargin) + "\" height=\"" +
           num(kPlot + 2 * kMargin + 20) + "\">\n";
    out += "<title>" + title + "</title>\n";
    if (cells.empty()) return out + "</svg>\n";

    double x0 = cells.front().x, x1 = x0, y0 = cells.front().y, y1 = y0;
    double vmin = cells.front().value, vmax = vmin;
    for (const HeatCell& c : cells) {
        x0 = std::min(x0, c.x), x1 = std::max(x1, c.x);
        y0 = std::min(y0, c.y), y1 = std::max(y1, c.y);
        vmin = std::min(vmin, c.value), vmax = std::max(vmax, c.value);
    }
    const double span_x = x1 - x0 + dx, span_y = y1 - y0 + dy;
    const double lmin = std::log(vmin), lmax = std::log(vmax);
    const double w = kPlot * dx / span_x, h = kPlot * dy / span_y;

    out += "<g id=\"cells\">\n";
    for (const HeatCell& c : cells) {
        const double px = kMargin + kPlot * (c.x - x0) / span_x;
        // y grows upward in the plot.
        const double py = kMargin + kPlot - kPlot * (c.y - y0 + dy) / span_y;
        const double t = lmax > lmin ? (std::log(c.value) - lmin) / (lmax - lmin) : 0.5;
        out += "<rect x=\"" + num(px) + "\" y=\"" + num(py) + "\" width=\"" + num(w) + "\" height=\"" + num(h) +
               "\" fill=\"" + color(t) + "\"><title>" + format_double(c.x) + "," + format_double(c.y) + ": " +
               format_double(c.value) + "</title></rect>\n";
    }
    out += "</g>\n";
    out += "<text x=\"" + num(kMargin) + "\" y=\"" + num(kPlot + 2 * kMargin + 10) +
           "\" font-family=\"sans-serif\" font-size=\"12\">a (horizontal) vs b (vertical); min " + num(vmin) +
           ", max " + num(vmax) + " (log color scale)</text>\n";
    out += "</svg>\n";
    return out;
}

}  // namespace moran::cli
