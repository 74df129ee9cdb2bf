#include "nutaxis/monitors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "nutaxis/series.hpp"

namespace nutaxis {

void MonitorConfig::validate() const {
    for (double p : p_list)
        if (!(p > 1.0))
            throw ConfigError("MonitorConfig: every p must be > 1");
    if (!(b_weight > 0.0))
        throw ConfigError("MonitorConfig: b_weight must be positive");
    if (!(window_tau > 0.0))
        throw ConfigError("MonitorConfig: window_tau must be positive");
}

namespace {

std::string p_suffix(double p) {
    std::ostringstream os;
    os << p;
    return os.str();
}

double quad(const Grid2D& g, const std::vector<double>& cellvals) {
    return g.hx * g.hy * pairwise_sum(cellvals);
}

} // namespace

MonitorRecord record(const State& s, const MonitorConfig& cfg) {
    cfg.validate();
    for (double x : s.v.values)
        if (!(x > 0.0))
            throw NonpositiveField("record: v must be strictly positive");
    s.validate();
    const Grid2D& g = s.grid();
    const std::size_t n = s.u.values.size();
    const double* u = s.u.values.data();
    const double* v = s.v.values.data();

    MonitorRecord r;
    r.t = s.t;
    r.mass_u = integrate(s.u);
    r.mass_v = integrate(s.v);
    r.sup_u = *std::max_element(u, u + n);
    r.sup_v = *std::max_element(v, v + n);
    r.inf_v = *std::min_element(v, v + n);

    for (double p : cfg.p_list)
        r.norm_u_p.push_back(lp_norm(s.u, p));

    const std::vector<double> gusq = cell_grad_squared(s.u);
    const std::vector<double> gvsq = cell_grad_squared(s.v);

    std::vector<double> tmp(n);
    for (std::size_t k = 0; k < n; ++k) tmp[k] = (u[k] > 0.0) ? u[k] * std::log(u[k]) : 0.0;
    r.entropy = quad(g, tmp);

    for (std::size_t k = 0; k < n; ++k) tmp[k] = gvsq[k] / v[k];
    r.fisher_v = quad(g, tmp);

    for (std::size_t k = 0; k < n; ++k) {
        const double q = gvsq[k];
        tmp[k] = q * q / (v[k] * v[k] * v[k]);
    }
    r.w4 = quad(g, tmp);

    for (std::size_t k = 0; k < n; ++k) {
        const double q = gvsq[k];
        const double v2 = v[k] * v[k];
        tmp[k] = q * q * q / (v2 * v2 * v[k]);
    }
    r.w6 = quad(g, tmp);

    for (std::size_t k = 0; k < n; ++k) tmp[k] = u[k] * v[k];
    r.cross_uv = quad(g, tmp);

    for (std::size_t k = 0; k < n; ++k) tmp[k] = v[k] * gusq[k];
    r.diss_u = quad(g, tmp);

    for (std::size_t k = 0; k < n; ++k) tmp[k] = (u[k] / v[k]) * gvsq[k];
    r.diss_mixed = quad(g, tmp);

    double gmax = 0.0;
    for (std::size_t k = 0; k < n; ++k) gmax = std::max(gmax, gvsq[k]);
    r.sup_grad_v = std::sqrt(gmax);

    r.energy_F = 4.0 * cfg.b_weight * r.entropy + r.w4;
    r.lyap_y = r.entropy - r.cross_uv + 0.5 * r.fisher_v;
    return r;
}

std::vector<std::string> monitor_columns(const MonitorConfig& cfg) {
    std::vector<std::string> cols{"t", "mass_u", "mass_v", "sup_u", "sup_v", "inf_v"};
    for (double p : cfg.p_list) cols.push_back("norm_u_p" + p_suffix(p));
    for (const char* c : {"entropy", "fisher_v", "w4", "w6", "cross_uv", "diss_u",
                          "diss_mixed", "sup_grad_v", "energy_F", "lyap_y"})
        cols.emplace_back(c);
    return cols;
}

double record_field(const MonitorRecord& r, const MonitorConfig& cfg, const std::string& name) {
    if (name == "t") return r.t;
    if (name == "mass_u") return r.mass_u;
    if (name == "mass_v") return r.mass_v;
    if (name == "sup_u") return r.sup_u;
    if (name == "sup_v") return r.sup_v;
    if (name == "inf_v") return r.inf_v;
    if (name == "entropy") return r.entropy;
    if (name == "fisher_v") return r.fisher_v;
    if (name == "w4") return r.w4;
    if (name == "w6") return r.w6;
    if (name == "cross_uv") return r.cross_uv;
    if (name == "diss_u") return r.diss_u;
    if (name == "diss_mixed") return r.diss_mixed;
    if (name == "sup_grad_v") return r.sup_grad_v;
    if (name == "energy_F") return r.energy_F;
    if (name == "lyap_y") return r.lyap_y;
    for (std::size_t k = 0; k < cfg.p_list.size(); ++k)
        if (name == "norm_u_p" + p_suffix(cfg.p_list[k])) {
            if (k >= r.norm_u_p.size())
                throw RangeError("record_field: record lacks norm for p index");
            return r.norm_u_p[k];
        }
    throw RangeError("record_field: unknown column '" + name + "'");
}

double window_integral(const std::vector<MonitorRecord>& series, const MonitorConfig& cfg,
                       const std::string& name, double t, double tau) {
    if (series.size() < 2)
        throw RangeError("window_integral: need at least 2 records");
    if (tau == 0.0) return 0.0;
    std::vector<double> ts, ys;
    ts.reserve(series.size());
    ys.reserve(series.size());
    for (const MonitorRecord& r : series) {
        ts.push_back(r.t);
        ys.push_back(record_field(r, cfg, name));
    }
    return series_integral(ts, ys, t, t + tau);
}

bool BoundReport::all_required_pass() const {
    for (const BoundEntry& e : entries)
        if (e.verdict == "fail") return false;
    return true;
}

const BoundEntry* BoundReport::find(const std::string& name) const {
    for (const BoundEntry& e : entries)
        if (e.name == name) return &e;
    return nullptr;
}

namespace {

constexpr double kAbsTol = 1e-8;
constexpr double kRelTol = 1e-6;
constexpr double kTimeTol = 1e-4; // B3, B4 (trapezoid in time)

BoundEntry upper_bound_entry(const std::string& name, double asserted, double observed) {
    BoundEntry e{name, "", asserted, observed, 0.0};
    const double allowance = kAbsTol + kRelTol * std::fabs(asserted);
    e.verdict = (observed <= asserted + allowance) ? "pass" : "fail";
    e.margin = asserted - observed;
    return e;
}

BoundEntry info_entry(const std::string& name, double observed) {
    return BoundEntry{name, "info", std::numeric_limits<double>::infinity(), observed,
                      std::numeric_limits<double>::infinity()};
}

} // namespace

BoundReport check_bounds(const std::vector<MonitorRecord>& series,
                         const Field& u0, const Field& v0,
                         const ModelParams& p, const MonitorConfig& cfg) {
    cfg.validate();
    p.validate();
    if (series.empty())
        throw RangeError("check_bounds: empty monitor series");
    BoundReport rep;

    const std::size_t n = series.size();
    std::vector<double> ts(n);
    for (std::size_t k = 0; k < n; ++k) ts[k] = series[k].t;

    auto sup_of = [&](auto getter) {
        double s = getter(series[0]);
        for (const MonitorRecord& r : series) s = std::max(s, getter(r));
        return s;
    };

    // B1: maximum principle for v.
    const double v0_sup = *std::max_element(v0.values.begin(), v0.values.end());
    rep.entries.push_back(upper_bound_entry(
        "B1_sup_v", v0_sup, sup_of([](const MonitorRecord& r) { return r.sup_v; })));

    // B2: mass bound, m = |Omega| + integral of u0.
    const double m = u0.grid.area + integrate(u0);
    rep.entries.push_back(upper_bound_entry(
        "B2_mass_u", m, sup_of([](const MonitorRecord& r) { return r.mass_u; })));

    // B3: conservation of mass_v(t) + cumulative consumption. Equality check:
    // the report carries the worst total as `observed` against asserted = mass_v(0).
    {
        const double v0_mass = integrate(v0);
        BoundEntry e{"B3_conservation", "pass", v0_mass, v0_mass, 0.0};
        if (n >= 2) {
            std::vector<double> cons(n);
            for (std::size_t k = 0; k < n; ++k) cons[k] = series[k].cross_uv;
            const std::vector<double> cum = series_cumulative(ts, cons);
            double worst = 0.0;
            double worst_total = v0_mass;
            for (std::size_t k = 0; k < n; ++k) {
                const double total = series[k].mass_v + cum[k];
                const double dev = std::fabs(total - v0_mass);
                if (dev > worst) {
                    worst = dev;
                    worst_total = total;
                }
            }
            const double allowance = kTimeTol * std::max(1.0, std::fabs(v0_mass));
            e.observed = worst_total;
            e.margin = allowance - worst;
            e.verdict = (worst <= allowance) ? "pass" : "fail";
        }
        rep.entries.push_back(e);
    }

    // B4: window integral of u^2 over tau, bounded by 2m.
    {
        BoundEntry e{"B4_window_u2", "info", 2.0 * m, 0.0, 0.0};
        auto p2 = std::find(cfg.p_list.begin(), cfg.p_list.end(), 2.0);
        if (p2 == cfg.p_list.end())
            throw RangeError("check_bounds: B4 needs p = 2 in p_list");
        const std::size_t ip = static_cast<std::size_t>(p2 - cfg.p_list.begin());
        if (n >= 2 && ts.back() - ts.front() >= cfg.window_tau) {
            std::vector<double> u2(n);
            for (std::size_t k = 0; k < n; ++k)
                u2[k] = series[k].norm_u_p[ip] * series[k].norm_u_p[ip];
            const double sup = series_window_sup(ts, u2, cfg.window_tau);
            e.observed = sup;
            e.margin = 2.0 * m - sup;
            e.verdict = (sup <= 2.0 * m * (1.0 + kTimeTol)) ? "pass" : "fail";
        }
        rep.entries.push_back(e);
    }

    // B5: comparison-principle lower bound on v with c1 the observed sup of u.
    // The exact discrete analog of inf v0 * exp(-c1 t) under explicit stepping
    // is the product inf v0 * prod(1 - c1 dt); by the Weierstrass product
    // inequality the record-cadence product is a valid (slightly weaker) bound
    // for any step subdivision, so it is checkable at monitor cadence.
    // Lower-bound check: observed is the worst ratio inf_v / bound, asserted 1.
    {
        const double v0_inf = *std::min_element(v0.values.begin(), v0.values.end());
        const double c1 = sup_of([](const MonitorRecord& r) { return r.sup_u; });
        double worst_ratio = std::numeric_limits<double>::infinity();
        double lower = v0_inf;
        for (std::size_t k = 0; k < n; ++k) {
            if (k > 0)
                lower *= std::max(0.0, 1.0 - c1 * (ts[k] - ts[k - 1]));
            const double ratio = (lower > 0.0) ? series[k].inf_v / lower
                                               : std::numeric_limits<double>::infinity();
            worst_ratio = std::min(worst_ratio, ratio);
        }
        BoundEntry e{"B5_v_lower", "", 1.0, worst_ratio, worst_ratio - 1.0};
        e.verdict = (worst_ratio >= 1.0 - kAbsTol - kRelTol) ? "pass" : "fail";
        rep.entries.push_back(e);
    }

    // B6: informational suprema (the paper-side constants are non-constructive).
    rep.entries.push_back(info_entry("B6_sup_entropy",
        sup_of([](const MonitorRecord& r) { return r.entropy; })));
    rep.entries.push_back(info_entry("B6_sup_w4",
        sup_of([](const MonitorRecord& r) { return r.w4; })));
    rep.entries.push_back(info_entry("B6_sup_w6",
        sup_of([](const MonitorRecord& r) { return r.w6; })));
    for (std::size_t k = 0; k < cfg.p_list.size(); ++k)
        rep.entries.push_back(info_entry("B6_sup_norm_u_p" + p_suffix(cfg.p_list[k]),
            sup_of([&](const MonitorRecord& r) { return r.norm_u_p[k]; })));
    rep.entries.push_back(info_entry("B6_sup_u",
        sup_of([](const MonitorRecord& r) { return r.sup_u; })));
    rep.entries.push_back(info_entry("B6_sup_grad_v",
        sup_of([](const MonitorRecord& r) { return r.sup_grad_v; })));

    return rep;
}

} // namespace nutaxis
