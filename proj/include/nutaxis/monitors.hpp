#pragma once
#include <string>
#include <vector>

#include "nutaxis/model.hpp"

namespace nutaxis {

struct MonitorConfig {
    std::vector<double> p_list{2.0, 3.0, 4.0}; // exponents for ||u||_p tracking
    double b_weight = 1.0;                     // weight b in energy_F
    double window_tau = 1.0;                   // tau for window integrals

    void validate() const;
};

// One time-stamped row of every tracked functional.
struct MonitorRecord {
    double t = 0.0;
    double mass_u = 0.0;     // integral of u
    double mass_v = 0.0;     // integral of v
    double sup_u = 0.0;
    double sup_v = 0.0;
    double inf_v = 0.0;
    std::vector<double> norm_u_p; // ||u||_p, aligned with MonitorConfig::p_list
    double entropy = 0.0;    // integral of u ln u (0 ln 0 := 0)
    double fisher_v = 0.0;   // integral of |grad v|^2 / v
    double w4 = 0.0;         // integral of |grad v|^4 / v^3
    double w6 = 0.0;         // integral of |grad v|^6 / v^5
    double cross_uv = 0.0;   // integral of u v
    double diss_u = 0.0;     // integral of v |grad u|^2
    double diss_mixed = 0.0; // integral of (u/v) |grad v|^2
    double sup_grad_v = 0.0; // max cell |grad v|
    double energy_F = 0.0;   // 4 b entropy + w4
    double lyap_y = 0.0;     // entropy - cross_uv + fisher_v / 2
};

MonitorRecord record(const State& s, const MonitorConfig& cfg);

// CSV column names, in file order.
std::vector<std::string> monitor_columns(const MonitorConfig& cfg);

// Value of a named column; throws RangeError for unknown names.
double record_field(const MonitorRecord& r, const MonitorConfig& cfg, const std::string& name);

// Trapezoid integral of the named column over [t, t+tau]; the series must
// cover the window.
double window_integral(const std::vector<MonitorRecord>& series, const MonitorConfig& cfg,
                       const std::string& name, double t, double tau);

struct BoundEntry {
    std::string name;
    std::string verdict; // "pass" | "fail" | "info"
    double asserted = 0.0;
    double observed = 0.0;
    double margin = 0.0;
};

struct BoundReport {
    std::vector<BoundEntry> entries;
    bool all_required_pass() const;
    const BoundEntry* find(const std::string& name) const;
};

// Verdicts for the tracked a-priori bounds:
//   B1 sup_t sup v <= ||v0||_inf
//   B2 sup_t mass_u <= m = |Omega| + integral of u0
//   B3 mass_v(t) + int_0^t cross_uv = mass_v(0)   (trapezoid in time, 1e-4 rel)
//   B4 window integral of u^2 over tau <= 2m      (requires p = 2 tracked)
//   B5 inf v(t) >= (inf v0) exp(-c1 t), c1 = sup_t sup_u
//   B6 suprema of entropy, w4, w6, ||u||_p, sup_u, sup_grad_v (informational)
BoundReport check_bounds(const std::vector<MonitorRecord>& series,
                         const Field& u0, const Field& v0,
                         const ModelParams& p, const MonitorConfig& cfg);

} // namespace nutaxis
