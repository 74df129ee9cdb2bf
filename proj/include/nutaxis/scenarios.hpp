#pragma once
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "nutaxis/stepper.hpp"

namespace nutaxis {

// A named initial-value problem: grid, field presets, model and run settings.
struct Scenario {
    std::string name = "scenario";
    int nx = 64, ny = 64;
    double lx = 1.0, ly = 1.0;
    ModelParams params;
    StepControl control;
    RunConfig runcfg;
    MonitorConfig moncfg;
    std::string u0_expr = "uniform(1)";
    std::string v0_expr = "uniform(1)";
    std::uint64_t seed = 0;
    std::string outdir = "out";
};

struct BuiltScenario {
    State state; // u0 + epsilon, v0, t = 0
    ModelParams params;
    StepControl control;
    RunConfig runcfg;
    MonitorConfig moncfg;
};

// Evaluate a field preset expression at cell centers. Presets:
//   uniform(c) | zero() | gaussian(amp,cx,cy,sigma) |
//   two_bumps(a1,x1,y1,s1,a2,x2,y2,s2) | random_perturbation(base,amp) |
//   cosine(base,amp,kx,ky)
Field eval_preset(const std::string& expr, const Grid2D& g, std::uint64_t seed);

// Constructs fields, adds epsilon to u0 and validates admissibility
// (u0 >= 0, u0 not identically 0 unless the preset is zero(), v0 > 0).
// Throws BadScenario naming the violated clause.
BuiltScenario build(const Scenario& sc);

// Flat "key = value" config file with '#' comments; exact keys
//   name nx ny lx ly epsilon rho mu kappa cfl dt_max scheme t_end
//   snapshot_every monitor_every window_tau u0 v0 seed outdir
Scenario parse_scenario_text(const std::string& text, const std::string& name_hint);
Scenario parse_scenario_file(const std::string& path);

// Named scenario presets.
Scenario make_uniform(double u, double v);
Scenario make_gaussian(double amp, double cx, double cy, double sigma, double vconst);
Scenario make_two_bumps(double a1, double x1, double y1, double s1,
                        double a2, double x2, double y2, double s2, double vconst);
Scenario make_random_perturbation(std::uint64_t seed, double amp);
Scenario make_heat_only(int mode);
// The gaussian reference scenario (amp 5, sigma 0.1, v0 = 1, eps 1e-3,
// 128x128, t_end 50) used by the acceptance suite.
Scenario make_reference();

struct SweepRow {
    double epsilon = 0.0;
    Termination reason = Termination::completed;
    double sup_u = 0.0, sup_entropy = 0.0, sup_w4 = 0.0, sup_w6 = 0.0, sup_grad_v = 0.0;
};

struct SweepReport {
    std::vector<SweepRow> rows;               // in eps_list order
    std::map<std::string, double> ratios;     // per-monitor max/min across eps
    bool all_completed() const;
};

// Runs the scenario once per epsilon and reports per-monitor suprema spreads.
SweepReport epsilon_sweep(const Scenario& sc, const std::vector<double>& eps_list);

} // namespace nutaxis
