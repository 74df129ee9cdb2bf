#include "nutaxis/series.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>

#include "nutaxis/errors.hpp"

namespace nutaxis {

namespace {

void check_series(const std::vector<double>& t, const std::vector<double>& y) {
    if (t.size() != y.size())
        throw RangeError("series: times and values differ in length");
    if (t.size() < 2)
        throw RangeError("series: need at least 2 samples");
    for (std::size_t k = 1; k < t.size(); ++k)
        if (!(t[k] > t[k - 1]))
            throw RangeError("series: times must be strictly increasing");
}

double interp(const std::vector<double>& t, const std::vector<double>& y,
              std::size_t k, double x) {
    const double w = (x - t[k]) / (t[k + 1] - t[k]);
    return y[k] + w * (y[k + 1] - y[k]);
}

} // namespace

double series_integral(const std::vector<double>& t, const std::vector<double>& y,
                       double a, double b) {
    check_series(t, y);
    if (b < a)
        throw RangeError("series_integral: b < a");
    const double span = t.back() - t.front();
    const double slack = 1e-12 * std::max(1.0, span);
    if (a < t.front() - slack || b > t.back() + slack)
        throw RangeError("series_integral: window not covered by series");
    a = std::clamp(a, t.front(), t.back());
    b = std::clamp(b, t.front(), t.back());
    if (a == b) return 0.0;

    double acc = 0.0;
    for (std::size_t k = 0; k + 1 < t.size(); ++k) {
        const double lo = std::max(a, t[k]);
        const double hi = std::min(b, t[k + 1]);
        if (hi <= lo) continue;
        const double ylo = interp(t, y, k, lo);
        const double yhi = interp(t, y, k, hi);
        acc += 0.5 * (ylo + yhi) * (hi - lo);
    }
    return acc;
}

double series_window_sup(const std::vector<double>& t, const std::vector<double>& y,
                         double tau) {
    check_series(t, y);
    if (!(tau >= 0.0))
        throw RangeError("series_window_sup: tau must be >= 0");
    const double slack = 1e-12 * std::max(1.0, t.back() - t.front());
    bool any = false;
    double sup = 0.0;
    for (std::size_t k = 0; k < t.size(); ++k) {
        if (t[k] + tau > t.back() + slack) break;
        const double w = series_integral(t, y, t[k], std::min(t[k] + tau, t.back()));
        sup = any ? std::max(sup, w) : w;
        any = true;
    }
    if (!any)
        throw RangeError("series_window_sup: no admissible window start");
    return sup;
}

std::vector<double> series_cumulative(const std::vector<double>& t,
                                      const std::vector<double>& y) {
    check_series(t, y);
    std::vector<double> out(t.size(), 0.0);
    for (std::size_t k = 1; k < t.size(); ++k)
        out[k] = out[k - 1] + 0.5 * (y[k] + y[k - 1]) * (t[k] - t[k - 1]);
    return out;
}

} // namespace nutaxis
