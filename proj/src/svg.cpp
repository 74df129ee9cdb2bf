#include "nutaxis/svg.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "nutaxis/errors.hpp"

namespace nutaxis {

namespace {

constexpr double kW = 860, kH = 520;
constexpr double kL = 70, kR = 180, kT = 40, kB = 50; // margins (legend on the right)

const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                          "#ff7f0e", "#8c564b", "#17becf", "#7f7f7f"};

// Round tick spacing to 1/2/5 * 10^k.
double nice_step(double span, int target) {
    const double raw = span / std::max(1, target);
    const double mag = std::pow(10.0, std::floor(std::log10(raw)));
    for (double m : {1.0, 2.0, 5.0, 10.0})
        if (raw <= m * mag * (1.0 + 1e-12)) return m * mag;
    return 10.0 * mag;
}

std::string num_label(double x) {
    std::ostringstream os;
    os.precision(6);
    os << x;
    return os.str();
}

} // namespace

void write_line_chart(const std::string& path, const std::string& title,
                      const std::vector<double>& xs,
                      const std::vector<std::vector<double>>& series,
                      const std::vector<std::string>& labels) {
    if (series.empty() || labels.size() != series.size())
        throw RangeError("write_line_chart: series/labels mismatch");
    if (xs.size() < 2)
        throw RangeError("write_line_chart: need at least 2 points");
    for (const auto& s : series)
        if (s.size() != xs.size())
            throw RangeError("write_line_chart: series length mismatch");

    double x0 = xs.front(), x1 = xs.back();
    double y0 = series[0][0], y1 = y0;
    for (const auto& s : series)
        for (double v : s) {
            if (!std::isfinite(v)) continue;
            y0 = std::min(y0, v);
            y1 = std::max(y1, v);
        }
    if (x1 == x0) x1 = x0 + 1.0;
    if (y1 == y0) {
        y0 -= 1.0;
        y1 += 1.0;
    }
    const double pad = 0.05 * (y1 - y0);
    y0 -= pad;
    y1 += pad;

    const double pw = kW - kL - kR, ph = kH - kT - kB;
    auto px = [&](double x) { return kL + (x - x0) / (x1 - x0) * pw; };
    auto py = [&](double y) { return kT + (y1 - y) / (y1 - y0) * ph; };

    std::ofstream os(path);
    if (!os)
        throw ConfigError("write_line_chart: cannot open " + path);
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"0 0 " << kW << ' ' << kH
       << "\" font-family=\"monospace\" font-size=\"12\">\n";
    os << "<rect width=\"" << kW << "\" height=\"" << kH << "\" fill=\"white\"/>\n";
    os << "<text x=\"" << kL << "\" y=\"24\" font-size=\"15\">" << title << "</text>\n";

    // axes
    os << "<line x1=\"" << kL << "\" y1=\"" << kT + ph << "\" x2=\"" << kL + pw
       << "\" y2=\"" << kT + ph << "\" stroke=\"black\"/>\n";
    os << "<line x1=\"" << kL << "\" y1=\"" << kT << "\" x2=\"" << kL << "\" y2=\""
       << kT + ph << "\" stroke=\"black\"/>\n";

    const double sx = nice_step(x1 - x0, 6);
    for (double x = std::ceil(x0 / sx) * sx; x <= x1 + 1e-12 * (x1 - x0); x += sx) {
        os << "<line x1=\"" << px(x) << "\" y1=\"" << kT + ph << "\" x2=\"" << px(x)
           << "\" y2=\"" << kT + ph + 5 << "\" stroke=\"black\"/>\n";
        os << "<text x=\"" << px(x) << "\" y=\"" << kT + ph + 20
           << "\" text-anchor=\"middle\">" << num_label(x) << "</text>\n";
    }
    const double sy = nice_step(y1 - y0, 6);
    for (double y = std::ceil(y0 / sy) * sy; y <= y1 + 1e-12 * (y1 - y0); y += sy) {
        os << "<line x1=\"" << kL - 5 << "\" y1=\"" << py(y) << "\" x2=\"" << kL
           << "\" y2=\"" << py(y) << "\" stroke=\"black\"/>\n";
        os << "<text x=\"" << kL - 8 << "\" y=\"" << py(y) + 4
           << "\" text-anchor=\"end\">" << num_label(y) << "</text>\n";
    }

    for (std::size_t s = 0; s < series.size(); ++s) {
        const char* color = kPalette[s % (sizeof kPalette / sizeof *kPalette)];
        os << "<path fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.5\" d=\"";
        bool pen_up = true;
        for (std::size_t k = 0; k < xs.size(); ++k) {
            const double v = series[s][k];
            if (!std::isfinite(v)) {
                pen_up = true;
                continue;
            }
            os << (pen_up ? 'M' : 'L') << px(xs[k]) << ' ' << py(v) << ' ';
            pen_up = false;
        }
        os << "\"/>\n";
        const double ly = kT + 16.0 * (static_cast<double>(s) + 1);
        os << "<line x1=\"" << kL + pw + 12 << "\" y1=\"" << ly - 4 << "\" x2=\""
           << kL + pw + 34 << "\" y2=\"" << ly - 4 << "\" stroke=\"" << color
           << "\" stroke-width=\"2\"/>\n";
        os << "<text x=\"" << kL + pw + 40 << "\" y=\"" << ly << "\">" << labels[s]
           << "</text>\n";
    }
    os << "</svg>\n";
    if (!os)
        throw ConfigError("write_line_chart: write failed for " + path);
}

} // namespace nutaxis
