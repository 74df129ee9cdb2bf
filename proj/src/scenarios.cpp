#include "nutaxis/scenarios.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <sstream>

#include "nutaxis/io.hpp"

namespace nutaxis {

namespace {

constexpr double kPi = 3.14159265358979323846;

struct PresetCall {
    std::string name;
    std::vector<double> args;
};

PresetCall parse_call(const std::string& expr) {
    const auto lp = expr.find('(');
    const auto rp = expr.rfind(')');
    if (lp == std::string::npos || rp == std::string::npos || rp < lp)
        throw ConfigError("preset expression must look like name(args): '" + expr + "'");
    PresetCall c;
    c.name = expr.substr(0, lp);
    // trim
    c.name.erase(0, c.name.find_first_not_of(" \t"));
    c.name.erase(c.name.find_last_not_of(" \t") + 1);
    std::string inner = expr.substr(lp + 1, rp - lp - 1);
    std::stringstream ss(inner);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        tok.erase(0, tok.find_first_not_of(" \t"));
        tok.erase(tok.find_last_not_of(" \t") + 1);
        if (tok.empty()) continue;
        try {
            std::size_t pos = 0;
            const double v = std::stod(tok, &pos);
            if (pos != tok.size()) throw std::invalid_argument(tok);
            c.args.push_back(v);
        } catch (const std::exception&) {
            throw ConfigError("bad numeric argument '" + tok + "' in '" + expr + "'");
        }
    }
    return c;
}

void need_args(const PresetCall& c, std::size_t n) {
    if (c.args.size() != n) {
        std::ostringstream os;
        os << "preset " << c.name << " expects " << n << " arguments, got " << c.args.size();
        throw ConfigError(os.str());
    }
}

// Band-limited noise in [-1, 1]-ish from low cosine modes with random phases.
Field noise_field(const Grid2D& g, std::uint64_t seed) {
    std::mt19937_64 rng(seed == 0 ? 0x9e3779b97f4a7c15ull : seed);
    std::uniform_real_distribution<double> coef(-1.0, 1.0), phase(0.0, 2.0 * kPi);
    struct Mode { double ax, ay, c, px, py; };
    std::vector<Mode> modes;
    for (int jx = 0; jx <= 3; ++jx)
        for (int jy = 0; jy <= 3; ++jy) {
            if (jx == 0 && jy == 0) continue;
            modes.push_back({jx * kPi / g.lx, jy * kPi / g.ly,
                             coef(rng) / (1.0 + jx * jx + jy * jy), phase(rng), phase(rng)});
        }
    return make_field(g, [&](double x, double y) {
        double s = 0.0;
        for (const Mode& m : modes)
            s += m.c * std::cos(m.ax * x + m.px) * std::cos(m.ay * y + m.py);
        return s;
    });
}

} // namespace

Field eval_preset(const std::string& expr, const Grid2D& g, std::uint64_t seed) {
    const PresetCall c = parse_call(expr);
    if (c.name == "uniform") {
        need_args(c, 1);
        return Field(g, c.args[0]);
    }
    if (c.name == "zero") {
        need_args(c, 0);
        return Field(g, 0.0);
    }
    if (c.name == "gaussian") {
        need_args(c, 4);
        const double amp = c.args[0], cx = c.args[1], cy = c.args[2], s = c.args[3];
        if (!(s > 0.0)) throw ConfigError("gaussian: sigma must be positive");
        return make_field(g, [&](double x, double y) {
            const double dx = x - cx, dy = y - cy;
            return amp * std::exp(-(dx * dx + dy * dy) / (2.0 * s * s));
        });
    }
    if (c.name == "two_bumps") {
        need_args(c, 8);
        return make_field(g, [&](double x, double y) {
            double acc = 0.0;
            for (int b = 0; b < 2; ++b) {
                const double amp = c.args[4 * b], cx = c.args[4 * b + 1],
                             cy = c.args[4 * b + 2], s = c.args[4 * b + 3];
                if (!(s > 0.0)) throw ConfigError("two_bumps: sigma must be positive");
                const double dx = x - cx, dy = y - cy;
                acc += amp * std::exp(-(dx * dx + dy * dy) / (2.0 * s * s));
            }
            return acc;
        });
    }
    if (c.name == "random_perturbation") {
        need_args(c, 2);
        const double base = c.args[0], amp = c.args[1];
        Field noise = noise_field(g, seed);
        for (double& v : noise.values) v = base + amp * v;
        return noise;
    }
    if (c.name == "cosine") {
        need_args(c, 4);
        const double base = c.args[0], amp = c.args[1];
        const int kx = static_cast<int>(c.args[2]), ky = static_cast<int>(c.args[3]);
        return make_field(g, [&](double x, double y) {
            return base + amp * std::cos(kx * kPi * x / g.lx) * std::cos(ky * kPi * y / g.ly);
        });
    }
    throw ConfigError("unknown preset '" + c.name + "'");
}

BuiltScenario build(const Scenario& sc) {
    sc.params.validate();
    sc.control.validate();
    sc.runcfg.validate();
    sc.moncfg.validate();
    const Grid2D g(sc.nx, sc.ny, sc.lx, sc.ly);

    Field u0 = eval_preset(sc.u0_expr, g, sc.seed);
    Field v0 = eval_preset(sc.v0_expr, g, sc.seed + 1);
    const bool zero_u_allowed = parse_call(sc.u0_expr).name == "zero";

    for (double& x : u0.values) x += sc.params.epsilon;
    require_finite(u0, "u0");
    require_finite(v0, "v0");

    double u_min = std::numeric_limits<double>::infinity(), u_max = 0.0;
    for (double x : u0.values) {
        u_min = std::min(u_min, x);
        u_max = std::max(u_max, x);
    }
    if (u_min < 0.0)
        throw BadScenario("scenario '" + sc.name + "': u0 >= 0 violated (min " +
                          fmt17(u_min) + ")");
    if (u_max == 0.0 && !zero_u_allowed)
        throw BadScenario("scenario '" + sc.name + "': u0 must not vanish identically");
    const double v_min = *std::min_element(v0.values.begin(), v0.values.end());
    if (!(v_min > 0.0))
        throw BadScenario("scenario '" + sc.name + "': v0 > 0 violated (min " +
                          fmt17(v_min) + ")");

    BuiltScenario out;
    out.state.u = std::move(u0);
    out.state.v = std::move(v0);
    out.state.t = 0.0;
    out.params = sc.params;
    out.control = sc.control;
    out.runcfg = sc.runcfg;
    out.moncfg = sc.moncfg;
    if (out.runcfg.window_tau > 0.0)
        out.moncfg.window_tau = out.runcfg.window_tau;
    else
        out.moncfg.window_tau = out.runcfg.effective_tau();
    return out;
}

Scenario parse_scenario_text(const std::string& text, const std::string& name_hint) {
    Scenario sc;
    sc.name = name_hint;
    bool have_snapshot_every = false;
    std::istringstream is(text);
    std::string line;
    int lineno = 0;
    while (std::getline(is, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            std::ostringstream os;
            os << "config line " << lineno << ": expected key = value";
            throw ConfigError(os.str());
        }
        std::string key = line.substr(0, eq);
        std::string val = line.substr(eq + 1);
        auto trim = [](std::string& s) {
            s.erase(0, s.find_first_not_of(" \t\r"));
            s.erase(s.find_last_not_of(" \t\r") + 1);
        };
        trim(key);
        trim(val);
        auto num = [&]() {
            try {
                return std::stod(val);
            } catch (const std::exception&) {
                throw ConfigError("config key '" + key + "': bad number '" + val + "'");
            }
        };

        if (key == "name") sc.name = val;
        else if (key == "nx") sc.nx = static_cast<int>(num());
        else if (key == "ny") sc.ny = static_cast<int>(num());
        else if (key == "lx") sc.lx = num();
        else if (key == "ly") sc.ly = num();
        else if (key == "epsilon") sc.params.epsilon = num();
        else if (key == "rho") sc.params.rho = num();
        else if (key == "mu") sc.params.mu = num();
        else if (key == "kappa") sc.params.kappa = num();
        else if (key == "cfl") sc.control.cfl = num();
        else if (key == "dt_max") sc.control.dt_max = num();
        else if (key == "scheme") {
            if (val == "euler") sc.control.scheme = Scheme::euler;
            else if (val == "heun") sc.control.scheme = Scheme::heun;
            else throw ConfigError("config: scheme must be euler or heun, got '" + val + "'");
        }
        else if (key == "t_end") sc.runcfg.t_end = num();
        else if (key == "snapshot_every") { sc.runcfg.snapshot_every = num(); have_snapshot_every = true; }
        else if (key == "monitor_every") sc.runcfg.monitor_every = static_cast<int>(num());
        else if (key == "window_tau") sc.runcfg.window_tau = num();
        else if (key == "u0") sc.u0_expr = val;
        else if (key == "v0") sc.v0_expr = val;
        else if (key == "seed") sc.seed = static_cast<std::uint64_t>(num());
        else if (key == "outdir") sc.outdir = val;
        else throw ConfigError("config: unknown key '" + key + "'");
    }
    if (!have_snapshot_every)
        sc.runcfg.snapshot_every = sc.runcfg.t_end / 10.0;
    return sc;
}

Scenario parse_scenario_file(const std::string& path) {
    std::string stem = path;
    const auto slash = stem.find_last_of("/\\");
    if (slash != std::string::npos) stem.erase(0, slash + 1);
    const auto dot = stem.find_last_of('.');
    if (dot != std::string::npos) stem.erase(dot);
    return parse_scenario_text(read_text_file(path), stem);
}

namespace {

Scenario base_scenario(const std::string& name) {
    Scenario sc;
    sc.name = name;
    sc.nx = sc.ny = 64;
    sc.runcfg.t_end = 1.0;
    sc.runcfg.snapshot_every = 0.1;
    sc.runcfg.monitor_every = 10;
    return sc;
}

std::string call1(const char* f, double a) {
    std::ostringstream os;
    os << f << '(' << fmt17(a) << ')';
    return os.str();
}

} // namespace

Scenario make_uniform(double u, double v) {
    Scenario sc = base_scenario("uniform");
    sc.u0_expr = call1("uniform", u);
    sc.v0_expr = call1("uniform", v);
    return sc;
}

Scenario make_gaussian(double amp, double cx, double cy, double sigma, double vconst) {
    Scenario sc = base_scenario("gaussian");
    std::ostringstream os;
    os << "gaussian(" << fmt17(amp) << ", " << fmt17(cx) << ", " << fmt17(cy) << ", "
       << fmt17(sigma) << ')';
    sc.u0_expr = os.str();
    sc.v0_expr = call1("uniform", vconst);
    return sc;
}

Scenario make_two_bumps(double a1, double x1, double y1, double s1,
                        double a2, double x2, double y2, double s2, double vconst) {
    Scenario sc = base_scenario("two_bumps");
    std::ostringstream os;
    os << "two_bumps(" << fmt17(a1) << ", " << fmt17(x1) << ", " << fmt17(y1) << ", "
       << fmt17(s1) << ", " << fmt17(a2) << ", " << fmt17(x2) << ", " << fmt17(y2)
       << ", " << fmt17(s2) << ')';
    sc.u0_expr = os.str();
    sc.v0_expr = call1("uniform", vconst);
    return sc;
}

Scenario make_random_perturbation(std::uint64_t seed, double amp) {
    Scenario sc = base_scenario("random_perturbation");
    std::ostringstream os;
    os << "random_perturbation(1, " << fmt17(amp) << ')';
    sc.u0_expr = os.str();
    sc.v0_expr = call1("uniform", 1.0);
    sc.seed = seed;
    return sc;
}

Scenario make_heat_only(int mode) {
    Scenario sc = base_scenario("heat_only");
    sc.u0_expr = "zero()";
    std::ostringstream os;
    // v0 = 1 + 0.1 cos(mode pi x), min 0.9 (well above the 1e-3 preset floor)
    os << "cosine(1, 0.1, " << mode << ", 0)";
    sc.v0_expr = os.str();
    return sc;
}

Scenario make_reference() {
    Scenario sc = make_gaussian(5.0, 0.5, 0.5, 0.1, 1.0);
    sc.name = "reference";
    sc.nx = sc.ny = 128;
    sc.params.epsilon = 1e-3;
    sc.runcfg.t_end = 50.0;
    sc.runcfg.snapshot_every = 1.0;
    sc.runcfg.monitor_every = 1500;
    sc.runcfg.window_tau = 1.0;
    sc.seed = 1;
    return sc;
}

bool SweepReport::all_completed() const {
    for (const SweepRow& r : rows)
        if (r.reason != Termination::completed) return false;
    return true;
}

SweepReport epsilon_sweep(const Scenario& sc, const std::vector<double>& eps_list) {
    if (eps_list.empty())
        throw RangeError("epsilon_sweep: eps_list must not be empty");
    for (double e : eps_list)
        if (!(e > 0.0) || !(e < 1.0))
            throw RangeError("epsilon_sweep: every epsilon must lie in (0,1)");

    SweepReport rep;
    for (double eps : eps_list) {
        Scenario local = sc;
        local.params.epsilon = eps;
        const BuiltScenario b = build(local);
        const RunResult rr = run(b.state, b.params, b.control, b.runcfg, b.moncfg);
        SweepRow row;
        row.epsilon = eps;
        row.reason = rr.reason;
        if (!rr.monitors.empty()) {
            const MonitorRecord& f = rr.monitors.front();
            row.sup_u = f.sup_u;
            row.sup_entropy = f.entropy;
            row.sup_w4 = f.w4;
            row.sup_w6 = f.w6;
            row.sup_grad_v = f.sup_grad_v;
            for (const MonitorRecord& r : rr.monitors) {
                row.sup_u = std::max(row.sup_u, r.sup_u);
                row.sup_entropy = std::max(row.sup_entropy, r.entropy);
                row.sup_w4 = std::max(row.sup_w4, r.w4);
                row.sup_w6 = std::max(row.sup_w6, r.w6);
                row.sup_grad_v = std::max(row.sup_grad_v, r.sup_grad_v);
            }
        }
        rep.rows.push_back(row);
    }

    auto ratio_of = [&](auto getter) {
        double lo = getter(rep.rows.front()), hi = lo;
        for (const SweepRow& r : rep.rows) {
            lo = std::min(lo, getter(r));
            hi = std::max(hi, getter(r));
        }
        if (lo > 0.0) return hi / lo;
        if (hi < 0.0) return lo / hi;
        return (lo == hi) ? 1.0 : std::numeric_limits<double>::infinity();
    };
    rep.ratios["sup_u"] = ratio_of([](const SweepRow& r) { return r.sup_u; });
    rep.ratios["entropy"] = ratio_of([](const SweepRow& r) { return r.sup_entropy; });
    rep.ratios["w4"] = ratio_of([](const SweepRow& r) { return r.sup_w4; });
    rep.ratios["w6"] = ratio_of([](const SweepRow& r) { return r.sup_w6; });
    rep.ratios["sup_grad_v"] = ratio_of([](const SweepRow& r) { return r.sup_grad_v; });
    return rep;
}

} // namespace nutaxis
