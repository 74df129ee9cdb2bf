#include "nutaxis/stepper.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace nutaxis {

void StepControl::validate() const {
    if (!(cfl > 0.0) || !(cfl <= 1.0))
        throw ConfigError("StepControl: cfl must be in (0,1]");
    if (!(dt_min > 0.0) || !(dt_min <= dt_max))
        throw ConfigError("StepControl: need 0 < dt_min <= dt_max");
    if (!(blowup_threshold > 0.0))
        throw ConfigError("StepControl: blowup_threshold must be positive");
}

void RunConfig::validate() const {
    if (!(t_end > 0.0))
        throw ConfigError("RunConfig: t_end must be positive");
    if (!(snapshot_every > 0.0))
        throw ConfigError("RunConfig: snapshot_every must be positive");
    if (monitor_every < 1)
        throw ConfigError("RunConfig: monitor_every must be >= 1");
    if (window_tau < 0.0 || (window_tau != 0.0 && window_tau >= t_end))
        throw ConfigError("RunConfig: window_tau must lie in (0, t_end)");
}

double RunConfig::effective_tau() const {
    return window_tau > 0.0 ? window_tau : std::min(1.0, 0.5 * t_end);
}

const char* to_string(Termination r) {
    switch (r) {
        case Termination::completed: return "completed";
        case Termination::step_collapse: return "step_collapse";
        case Termination::positivity_violation: return "positivity_violation";
        case Termination::non_finite: return "non_finite";
        case Termination::blow_up: return "blow_up";
    }
    return "unknown";
}

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double raw_budget(const Grid2D& g, const detail::FaceMaxima& fm, double max_u,
                  const ModelParams& p, const StepControl& c) {
    const double h = std::min(g.hx, g.hy);
    const double b_diff_u = fm.d_max > 0.0 ? h * h / (4.0 * fm.d_max) : kInf;
    const double b_diff_v = h * h / 4.0;
    const double r_max = p.rho + p.mu * p.kappa *
        (p.kappa == 2.0 ? max_u : std::pow(max_u, p.kappa - 1.0));
    const double b_react = 1.0 / r_max;
    const double b_drift = fm.w_max > 0.0 ? h / (2.0 * fm.w_max) : kInf;
    return c.cfl * std::min(std::min(b_diff_u, b_diff_v), std::min(b_react, b_drift));
}

struct UpdateDiag {
    double min_u = kInf, min_v = kInf, max_u = -kInf;
    double checksum = 0.0; // non-finite iff any output is
};

// out = base + dt * rate, with positivity/finiteness diagnostics.
UpdateDiag axpy_update(std::size_t n, const double* base_u, const double* base_v,
                       const double* rate_u, const double* rate_v, double dt,
                       double* out_u, double* out_v) {
    double min_u = kInf, min_v = kInf, max_u = -kInf, checksum = 0.0;
#ifdef NUTAXIS_OPENMP
#pragma omp parallel for schedule(static) \
    reduction(min : min_u, min_v) reduction(max : max_u) reduction(+ : checksum)
#endif
    for (std::ptrdiff_t k = 0; k < static_cast<std::ptrdiff_t>(n); ++k) {
        const double un = base_u[k] + dt * rate_u[k];
        const double vn = base_v[k] + dt * rate_v[k];
        out_u[k] = un;
        out_v[k] = vn;
        if (un < min_u) min_u = un;
        if (vn < min_v) min_v = vn;
        if (un > max_u) max_u = un;
        checksum += un + vn;
    }
    return UpdateDiag{min_u, min_v, max_u, checksum};
}

std::string locate_violation(const Grid2D& g, const double* u, const double* v) {
    for (int j = 0; j < g.ny; ++j)
        for (int i = 0; i < g.nx; ++i) {
            const std::size_t k = static_cast<std::size_t>(g.idx(i, j));
            if (u[k] < 0.0 || !(v[k] > 0.0)) {
                std::ostringstream os;
                os << "cell (" << i << "," << j << "): u = " << u[k] << ", v = " << v[k];
                return os.str();
            }
        }
    return "no offending cell located";
}

// Internal stepper: shared by step() and run(). Holds reusable buffers.
struct Advancer {
    Grid2D g;
    ModelParams p;
    StepControl c;
    detail::RhsWorkspace ws;
    std::vector<double> ru0, rv0, u1, v1; // heun stages
    double max_u = 0.0;                   // of the current state

    Advancer(const Grid2D& grid, const ModelParams& params, const StepControl& ctrl)
        : g(grid), p(params), c(ctrl) {
        ws.resize(g);
        if (c.scheme == Scheme::heun) {
            const std::size_t n = static_cast<std::size_t>(g.cells());
            ru0.resize(n);
            rv0.resize(n);
            u1.resize(n);
            v1.resize(n);
        }
    }

    detail::FaceMaxima faces(const double* u, const double* v) {
        return detail::compute_faces(g, u, v, ws);
    }

    // Advances (u, v) into (out_u, out_v); faces for the base state must have
    // been computed already (so a run step reuses the dt-budget pass).
    UpdateDiag advance(const double* u, const double* v, double dt,
                       double* out_u, double* out_v) {
        const std::size_t n = static_cast<std::size_t>(g.cells());
        detail::compute_rhs_cells(g, u, v, p, ws);
        if (c.scheme == Scheme::euler)
            return axpy_update(n, u, v, ws.ru.data(), ws.rv.data(), dt, out_u, out_v);

        // heun: full euler stage, then trapezoidal average of the two slopes
        ru0 = ws.ru;
        rv0 = ws.rv;
        const UpdateDiag stage = axpy_update(n, u, v, ru0.data(), rv0.data(), dt,
                                             u1.data(), v1.data());
        if (!std::isfinite(stage.checksum))
            throw NonFinite("heun stage produced non-finite values");
        if (stage.min_u < 0.0 || !(stage.min_v > 0.0))
            throw PositivityViolation("heun stage positivity failure at " +
                                      locate_violation(g, u1.data(), v1.data()));
        detail::compute_faces(g, u1.data(), v1.data(), ws);
        detail::compute_rhs_cells(g, u1.data(), v1.data(), p, ws);
        for (std::size_t k = 0; k < n; ++k) {
            ws.ru[k] = 0.5 * (ru0[k] + ws.ru[k]);
            ws.rv[k] = 0.5 * (rv0[k] + ws.rv[k]);
        }
        return axpy_update(n, u, v, ws.ru.data(), ws.rv.data(), dt, out_u, out_v);
    }
};

} // namespace

double stable_dt(const State& s, const ModelParams& p, const StepControl& c) {
    s.validate();
    p.validate();
    c.validate();
    detail::RhsWorkspace ws;
    ws.resize(s.grid());
    const detail::FaceMaxima fm =
        detail::compute_faces(s.grid(), s.u.values.data(), s.v.values.data(), ws);
    const double max_u = *std::max_element(s.u.values.begin(), s.u.values.end());
    const double raw = raw_budget(s.grid(), fm, max_u, p, c);
    if (raw < c.dt_min) {
        std::ostringstream os;
        os << "stable_dt collapsed: budget " << raw << " < dt_min " << c.dt_min;
        throw StepCollapse(os.str());
    }
    return std::min(raw, c.dt_max);
}

State step(const State& s, double dt, const ModelParams& p, const StepControl& c) {
    s.validate();
    p.validate();
    c.validate();
    if (!(dt > 0.0))
        throw RangeError("step: dt must be positive");
    Advancer adv(s.grid(), p, c);
    adv.faces(s.u.values.data(), s.v.values.data());
    State out;
    out.u = Field(s.grid());
    out.v = Field(s.grid());
    const UpdateDiag d = adv.advance(s.u.values.data(), s.v.values.data(), dt,
                                     out.u.values.data(), out.v.values.data());
    if (!std::isfinite(d.checksum))
        throw NonFinite("step produced non-finite values");
    if (d.min_u < 0.0 || !(d.min_v > 0.0))
        throw PositivityViolation("step positivity failure at " +
                                  locate_violation(s.grid(), out.u.values.data(),
                                                   out.v.values.data()));
    out.t = s.t + dt;
    return out;
}

RunResult run(const State& s0, const ModelParams& p, const StepControl& c,
              const RunConfig& rc, const MonitorConfig& mc, const RunSinks& sinks) {
    s0.validate();
    p.validate();
    c.validate();
    rc.validate();
    mc.validate();

    RunResult res;
    State cur = s0;
    const bool fused = (c.scheme == Scheme::euler);
    Advancer adv(cur.grid(), p, c);
    detail::FusedScratch scratch;
    if (fused) scratch.resize(cur.grid());
    Field next_u(cur.grid()), next_v(cur.grid());
    adv.max_u = *std::max_element(cur.u.values.begin(), cur.u.values.end());
    detail::FaceMaxima fm = detail::face_maxima(cur.grid(), cur.u.values.data(),
                                                cur.v.values.data());

    double last_record_t = -1.0;
    auto emit_record = [&]() {
        const MonitorRecord r = record(cur, mc);
        res.monitors.push_back(r);
        if (sinks.on_record) sinks.on_record(r);
        last_record_t = cur.t;
    };
    long last_snapshot_step = -1;
    auto emit_snapshot = [&](long step_no) {
        if (sinks.on_snapshot) sinks.on_snapshot(cur, step_no);
        last_snapshot_step = step_no;
    };

    emit_record();
    emit_snapshot(0);

    long snap_idx = 1;
    long step_no = 0;
    res.reason = Termination::completed;

    while (cur.t < rc.t_end) {
        if (!fused)
            fm = adv.faces(cur.u.values.data(), cur.v.values.data());
        const double raw = raw_budget(cur.grid(), fm, adv.max_u, p, c);
        if (raw < c.dt_min) {
            std::ostringstream os;
            os << "step collapse at t = " << cur.t << ": budget " << raw
               << " < dt_min " << c.dt_min;
            res.reason = Termination::step_collapse;
            res.message = os.str();
            break;
        }
        double dt = std::min(raw, c.dt_max);

        // land exactly on the next snapshot time / horizon
        double next_snap = static_cast<double>(snap_idx) * rc.snapshot_every;
        const double event = std::min(next_snap, rc.t_end);
        bool land = false;
        if (event - cur.t <= dt * (1.0 + 1e-9)) {
            dt = event - cur.t;
            land = true;
        }

        UpdateDiag d;
        try {
            if (fused) {
                const detail::StepDiag sd = detail::fused_euler_step(
                    cur.grid(), cur.u.values.data(), cur.v.values.data(), p, dt,
                    next_u.values.data(), next_v.values.data(), scratch);
                d = UpdateDiag{sd.min_u, sd.min_v, sd.max_u, sd.checksum};
                fm = sd.next;
            } else {
                d = adv.advance(cur.u.values.data(), cur.v.values.data(), dt,
                                next_u.values.data(), next_v.values.data());
            }
        } catch (const PositivityViolation& e) {
            res.reason = Termination::positivity_violation;
            res.message = e.what();
            break;
        } catch (const NonFinite& e) {
            res.reason = Termination::non_finite;
            res.message = e.what();
            break;
        }
        ++step_no;

        if (!std::isfinite(d.checksum)) {
            res.reason = Termination::non_finite;
            res.message = "non-finite state after step " + std::to_string(step_no);
            break;
        }
        if (d.min_u < 0.0 || !(d.min_v > 0.0)) {
            res.reason = Termination::positivity_violation;
            res.message = "positivity failure after step " + std::to_string(step_no) +
                          " at " + locate_violation(cur.grid(), next_u.values.data(),
                                                    next_v.values.data());
            break;
        }

        std::swap(cur.u.values, next_u.values);
        std::swap(cur.v.values, next_v.values);
        cur.t = land ? event : cur.t + dt;
        adv.max_u = d.max_u;

        if (d.max_u > c.blowup_threshold) {
            std::ostringstream os;
            os << "sup u = " << d.max_u << " exceeded blow-up threshold "
               << c.blowup_threshold << " at t = " << cur.t;
            res.reason = Termination::blow_up;
            res.message = os.str();
            break;
        }

        if (land && event == next_snap) {
            ++snap_idx;
            emit_snapshot(step_no);
        }
        if (step_no % rc.monitor_every == 0 || cur.t >= rc.t_end)
            emit_record();
    }

    if (res.reason == Termination::completed) {
        if (last_record_t != cur.t) emit_record();
        if (last_snapshot_step != step_no) emit_snapshot(step_no);
    } else if (res.reason == Termination::step_collapse && last_record_t != cur.t) {
        emit_record(); // state is still valid on collapse
    }

    res.final_state = std::move(cur);
    res.steps = step_no;
    return res;
}

} // namespace nutaxis
