#include "nutaxis/ode_lemmas.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "nutaxis/errors.hpp"
#include "nutaxis/series.hpp"

namespace nutaxis {

namespace {

constexpr double kDiffSlack = 1e-6;      // relative slack for z' checks
constexpr double kConclusionSlack = 1e-9;

const std::vector<double>& need_aux(const LemmaSeries& s, const char* name) {
    auto it = s.aux.find(name);
    if (it == s.aux.end())
        throw RangeError(std::string("LemmaSeries: missing aux series '") + name + "'");
    return it->second;
}

// Forward-difference bias allowance: |z''| dt / 2 estimated from the second
// difference around k (one-sided at the ends).
double curvature_allowance(const std::vector<double>& t, const std::vector<double>& z,
                           std::size_t k) {
    const std::size_t n = t.size();
    if (n < 3) return 0.0;
    const std::size_t m = std::min(std::max<std::size_t>(k, 1), n - 2);
    const double dtm = t[m] - t[m - 1];
    const double dtp = t[m + 1] - t[m];
    const double sd = (z[m + 1] - z[m]) / dtp - (z[m] - z[m - 1]) / dtm; // ~ z'' dt
    return std::fabs(sd);
}

} // namespace

void LemmaSeries::validate(Lemma which) const {
    if (times.size() < 2 || z.size() != times.size())
        throw RangeError("LemmaSeries: need times and z of equal length >= 2");
    for (std::size_t k = 1; k < times.size(); ++k)
        if (!(times[k] > times[k - 1]))
            throw RangeError("LemmaSeries: times must be strictly increasing");
    if (!(tau > 0.0) || !(tau < times.back() - times.front()))
        throw RangeError("LemmaSeries: tau must lie in (0, T)");
    const char* const* names = nullptr;
    static const char* n21[] = {"h", nullptr};
    static const char* n22[] = {"a", "b", nullptr};
    static const char* n23[] = {"a", "b", "c", nullptr};
    switch (which) {
        case Lemma::L21: names = n21; break;
        case Lemma::L22: names = n22; break;
        case Lemma::L23: names = n23; break;
    }
    for (; *names; ++names)
        if (need_aux(*this, *names).size() != times.size())
            throw RangeError("LemmaSeries: aux series length mismatch");
}

double lemma21_bound(double z0, double a, double b, double tau) {
    if (!(a > 0.0) || !(b > 0.0) || !(tau > 0.0))
        throw RangeError("lemma21_bound: need a, b, tau > 0");
    return std::max(z0 + b, b / (a * tau) + 2.0 * b);
}

double lemma22_bound(double a1, double a2, double a3, double tau) {
    if (a1 < 0.0 || a2 < 0.0 || a3 < 0.0 || !(tau > 0.0))
        throw RangeError("lemma22_bound: need a1, a2, a3 >= 0 and tau > 0");
    return (a3 / tau + a2) * std::exp(a1);
}

double lemma23_bound(double z0, double b1, double c1, double rho) {
    if (z0 < 0.0 || b1 < 0.0 || c1 < 0.0 || !(rho > 0.0))
        throw RangeError("lemma23_bound: need z0, b1, c1 >= 0 and rho > 0");
    return z0 * std::exp(b1) + c1 * std::exp(2.0 * b1) / (1.0 - std::exp(-rho)) +
           c1 * std::exp(b1);
}

LemmaValidation validate(const LemmaSeries& s, Lemma which, double a_const) {
    s.validate(which);
    LemmaValidation out;
    const std::vector<double>& t = s.times;
    const std::vector<double>& z = s.z;
    const std::size_t n = t.size();

    bool diff_ok = true;
    std::size_t diff_bad = 0;
    auto check_diff = [&](auto&& rhs_at) {
        for (std::size_t k = 0; k + 1 < n; ++k) {
            const double dt = t[k + 1] - t[k];
            const double fd = (z[k + 1] - z[k]) / dt;
            const double lhs = fd;
            const double rhs = rhs_at(k);
            const double slack = kDiffSlack * std::max({1.0, std::fabs(lhs), std::fabs(rhs)}) +
                                 0.5 * curvature_allowance(t, z, k);
            if (lhs > rhs + slack) {
                diff_ok = false;
                diff_bad = k;
                return;
            }
        }
    };

    switch (which) {
        case Lemma::L21: {
            if (!(a_const > 0.0))
                throw RangeError("validate(L21): needs constant a > 0");
            const std::vector<double>& h = need_aux(s, "h");
            check_diff([&](std::size_t k) { return h[k] - a_const * z[k]; });
            const double b = series_window_sup(t, h, s.tau);
            out.window_sups["b"] = b;
            const double b_eff = std::max(b, 1e-300); // lemma needs b > 0
            out.bound = lemma21_bound(z.front(), a_const, b_eff, s.tau);
            break;
        }
        case Lemma::L22: {
            const std::vector<double>& a = need_aux(s, "a");
            const std::vector<double>& b = need_aux(s, "b");
            check_diff([&](std::size_t k) { return a[k] * z[k] + b[k]; });
            const double a1 = series_window_sup(t, a, s.tau);
            const double a2 = series_window_sup(t, b, s.tau);
            const double a3 = series_window_sup(t, z, s.tau);
            out.window_sups["a1"] = a1;
            out.window_sups["a2"] = a2;
            out.window_sups["a3"] = a3;
            if (a1 < 0.0 || a2 < 0.0 || a3 < 0.0) {
                diff_ok = false;
                out.detail = "window suprema must be nonnegative";
                out.bound = std::numeric_limits<double>::quiet_NaN();
            } else {
                out.bound = lemma22_bound(a1, a2, a3, s.tau);
            }
            break;
        }
        case Lemma::L23: {
            const std::vector<double>& a = need_aux(s, "a");
            const std::vector<double>& b = need_aux(s, "b");
            const std::vector<double>& c = need_aux(s, "c");
            check_diff([&](std::size_t k) { return (b[k] - a[k]) * z[k] + c[k]; });
            const double b1 = series_window_sup(t, b, s.tau);
            const double c1 = series_window_sup(t, c, s.tau);
            // rho: the worst-case window gap int a - int b
            const double start_slack = 1e-12 * std::max(1.0, t.back() - t.front());
            double rho = std::numeric_limits<double>::infinity();
            for (std::size_t k = 0; k < n && t[k] + s.tau <= t.back() + start_slack; ++k) {
                const double hi = std::min(t[k] + s.tau, t.back());
                const double gap = series_integral(t, a, t[k], hi) -
                                   series_integral(t, b, t[k], hi);
                rho = std::min(rho, gap);
            }
            out.window_sups["b1"] = b1;
            out.window_sups["c1"] = c1;
            out.window_sups["rho"] = rho;
            if (!(rho > 0.0)) {
                diff_ok = false;
                out.detail = "window gap int a - int b is not positive";
                out.bound = std::numeric_limits<double>::quiet_NaN();
            } else {
                out.bound = lemma23_bound(std::max(z.front(), 0.0), std::max(b1, 0.0),
                                          std::max(c1, 0.0), rho);
            }
            break;
        }
    }

    out.hypotheses_hold = diff_ok && out.detail.empty();
    if (!diff_ok && out.detail.empty()) {
        std::ostringstream os;
        os << "differential inequality fails at sample " << diff_bad
           << " (t = " << t[diff_bad] << ")";
        out.detail = os.str();
    }

    if (std::isfinite(out.bound)) {
        const double zmax = *std::max_element(z.begin(), z.end());
        out.conclusion_holds = zmax <= out.bound * (1.0 + kConclusionSlack);
        out.max_violation = std::max(0.0, zmax - out.bound);
    } else {
        out.conclusion_holds = false;
        out.max_violation = std::numeric_limits<double>::quiet_NaN();
    }
    return out;
}

} // namespace nutaxis
