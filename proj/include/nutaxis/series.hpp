#pragma once
#include <vector>

namespace nutaxis {

// Trapezoid integral of the piecewise-linear interpolant of (t, y) over [a, b].
// [a, b] must be inside [t.front(), t.back()] (small tolerance for roundoff);
// throws RangeError otherwise. a == b gives 0.
double series_integral(const std::vector<double>& t, const std::vector<double>& y,
                       double a, double b);

// max over window starts t_k (with t_k + tau <= t.back()) of the window integral.
// Throws RangeError if no admissible window start exists.
double series_window_sup(const std::vector<double>& t, const std::vector<double>& y,
                         double tau);

// Cumulative trapezoid from t.front() to each t_k (same length as t, first entry 0).
std::vector<double> series_cumulative(const std::vector<double>& t,
                                      const std::vector<double>& y);

} // namespace nutaxis
