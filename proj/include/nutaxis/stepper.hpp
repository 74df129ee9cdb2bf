#pragma once
#include <functional>
#include <string>

#include "nutaxis/monitors.hpp"

namespace nutaxis {

enum class Scheme { euler, heun };

struct StepControl {
    double cfl = 0.4;
    double dt_min = 1e-12;
    double dt_max = 1e-2;
    Scheme scheme = Scheme::euler;
    double blowup_threshold = 1e6; // sup-norm stand-in for finite-time blow-up

    void validate() const;
};

struct RunConfig {
    double t_end = 1.0;
    double snapshot_every = 0.1; // time between snapshots
    int monitor_every = 10;      // steps between monitor rows
    double window_tau = 0.0;     // 0 -> min(1, t_end/2)

    void validate() const;
    double effective_tau() const;
};

// clamp(cfl * min(h^2/(4 D_max), h^2/4, 1/R_max, h/(2 W_max)), dt_min, dt_max)
// with h = min(hx, hy), D_max the largest face coefficient A(u)A(v), R_max the
// reaction Lipschitz budget rho + mu*kappa*(max u)^(kappa-1), and W_max the
// largest taxis drift speed |U_up A(v) grad v|. Throws StepCollapse when the
// unclamped value falls below dt_min.
double stable_dt(const State& s, const ModelParams& p, const StepControl& c);

// One explicit step (euler or heun per c.scheme). Positivity violations abort
// with the offending cell; nothing is clamped.
State step(const State& s, double dt, const ModelParams& p, const StepControl& c);

enum class Termination { completed, step_collapse, positivity_violation, non_finite, blow_up };
const char* to_string(Termination r);

struct RunSinks {
    std::function<void(const State&, long)> on_snapshot; // state, step index
    std::function<void(const MonitorRecord&)> on_record;
};

struct RunResult {
    State final_state;
    Termination reason = Termination::completed;
    std::string message;
    std::vector<MonitorRecord> monitors;
    long steps = 0;
};

// Advance s0 with adaptive dt until t_end, emitting monitor rows and snapshots
// at the configured cadence. Runtime failures are recorded as the termination
// reason, not thrown.
RunResult run(const State& s0, const ModelParams& p, const StepControl& c,
              const RunConfig& rc, const MonitorConfig& mc, const RunSinks& sinks = {});

} // namespace nutaxis
