#include "nutaxis/inequalities.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

namespace nutaxis {

namespace {

constexpr double kPi = 3.14159265358979323846;

double quad(const Grid2D& g, const std::vector<double>& cellvals) {
    return g.hx * g.hy * pairwise_sum(cellvals);
}

void require_positive(const Field& f, const char* what) {
    for (double x : f.values)
        if (!(x > 0.0))
            throw NonpositiveField(std::string(what) + ": field must be strictly positive");
}

// Low mode count keeps the family band-limited so that face-gradient
// quadrature error stays O(h^2) uniformly.
Field trig_sample(const Grid2D& g, std::mt19937_64& rng, double floor_, int max_mode) {
    std::uniform_real_distribution<double> coef(-1.0, 1.0);
    struct Mode { int jx, jy; double c; };
    std::vector<Mode> modes;
    for (int jx = 0; jx <= max_mode; ++jx)
        for (int jy = 0; jy <= max_mode; ++jy) {
            if (jx == 0 && jy == 0) continue;
            modes.push_back({jx, jy, coef(rng) / (1.0 + jx * jx + jy * jy)});
        }
    Field f = make_field(g, [&](double x, double y) {
        double s = 0.0;
        for (const Mode& m : modes)
            s += m.c * std::cos(m.jx * kPi * x / g.lx) * std::cos(m.jy * kPi * y / g.ly);
        return s;
    });
    const double lo = *std::min_element(f.values.begin(), f.values.end());
    for (double& v : f.values) v = (v - lo) + floor_ + 0.25;
    return f;
}

Field bumps_sample(const Grid2D& g, std::mt19937_64& rng, double floor_) {
    std::uniform_real_distribution<double> ux(0.15, 0.85), amp(0.5, 3.0), wid(0.08, 0.25);
    std::uniform_int_distribution<int> nb(1, 3);
    struct Bump { double a, cx, cy, s; };
    std::vector<Bump> bs;
    const int n = nb(rng);
    for (int k = 0; k < n; ++k)
        bs.push_back({amp(rng), ux(rng) * g.lx, ux(rng) * g.ly, wid(rng) * std::min(g.lx, g.ly)});
    return make_field(g, [&](double x, double y) {
        double s = floor_;
        for (const Bump& b : bs) {
            const double dx = x - b.cx, dy = y - b.cy;
            s += b.a * std::exp(-(dx * dx + dy * dy) / (2.0 * b.s * b.s));
        }
        return s;
    });
}

} // namespace

FamilyKind family_kind_from_string(const std::string& s) {
    if (s == "trig") return FamilyKind::trig;
    if (s == "bumps") return FamilyKind::bumps;
    if (s == "noise") return FamilyKind::noise;
    throw ConfigError("unknown family kind '" + s + "'");
}

std::vector<Field> generate_family(const FieldFamily& fam, const Grid2D& g) {
    if (fam.count < 1)
        throw RangeError("generate_family: count must be >= 1");
    if (!(fam.positivity_floor > 0.0))
        throw RangeError("generate_family: positivity floor must be > 0");
    std::mt19937_64 rng(fam.seed);
    std::vector<Field> out;
    out.reserve(static_cast<std::size_t>(fam.count));
    for (int k = 0; k < fam.count; ++k) {
        switch (fam.kind) {
            case FamilyKind::trig:
                out.push_back(trig_sample(g, rng, fam.positivity_floor, 3));
                break;
            case FamilyKind::bumps:
                out.push_back(bumps_sample(g, rng, fam.positivity_floor));
                break;
            case FamilyKind::noise:
                out.push_back(trig_sample(g, rng, fam.positivity_floor, 6));
                break;
        }
    }
    return out;
}

double estimate_sobolev_c1(const FieldFamily& fam, const Grid2D& g) {
    const std::vector<Field> family = generate_family(fam, g);
    double best = 0.0;
    for (const Field& rho : family) {
        const std::vector<double> gsq = cell_grad_squared(rho);
        std::vector<double> tmp(rho.values.size());
        for (std::size_t k = 0; k < tmp.size(); ++k) tmp[k] = rho.values[k] * rho.values[k];
        const double num = quad(g, tmp);
        for (std::size_t k = 0; k < tmp.size(); ++k) tmp[k] = std::sqrt(gsq[k]);
        const double grad_l1 = quad(g, tmp);
        for (std::size_t k = 0; k < tmp.size(); ++k) tmp[k] = std::fabs(rho.values[k]);
        const double l1 = quad(g, tmp);
        const double den = grad_l1 * grad_l1 + l1 * l1;
        if (!(den > 1e-300))
            throw DegenerateSample("estimate_sobolev_c1: vanishing denominator");
        best = std::max(best, num / den);
    }
    return best;
}

InequalityEntry check_lemma41(const Field& phi, const Field& psi, double p, double c1) {
    if (!(p >= 1.0))
        throw RangeError("check_lemma41: p must be >= 1");
    require_positive(phi, "check_lemma41 phi");
    require_positive(psi, "check_lemma41 psi");
    const Grid2D& g = phi.grid;
    const std::size_t n = phi.values.size();
    const std::vector<double> gphi = cell_grad_squared(phi);
    const std::vector<double> gpsi = cell_grad_squared(psi);

    std::vector<double> tmp(n);
    auto phi_pow = [&](double q, std::vector<double>& dst) {
        for (std::size_t k = 0; k < n; ++k) dst[k] = std::pow(phi.values[k], q);
    };

    for (std::size_t k = 0; k < n; ++k)
        tmp[k] = std::pow(phi.values[k], p + 1.0) * psi.values[k];
    const double lhs = quad(g, tmp);

    for (std::size_t k = 0; k < n; ++k) tmp[k] = psi.values[k] * gphi[k];
    const double diss_phi = quad(g, tmp);
    for (std::size_t k = 0; k < n; ++k)
        tmp[k] = (phi.values[k] / psi.values[k]) * gpsi[k];
    const double mixed = quad(g, tmp);
    for (std::size_t k = 0; k < n; ++k) tmp[k] = phi.values[k] * psi.values[k];
    const double cross = quad(g, tmp);
    phi_pow(p, tmp);
    const double phi_p = quad(g, tmp);

    const double half = 0.5 * (p + 1.0) * (p + 1.0) * c1;
    const double c = std::max({half, half * g.area, c1});
    const double rhs = c * (diss_phi + mixed + cross) * phi_p + c * diss_phi;

    InequalityEntry e;
    e.name = "lemma41";
    e.lhs = lhs;
    e.rhs = rhs;
    e.ratio = (rhs > 0.0) ? lhs / rhs : (lhs > 0.0 ? std::numeric_limits<double>::infinity() : 0.0);
    const double base = (diss_phi + mixed + cross) * phi_p + diss_phi;
    e.fitted_constant = (base > 0.0) ? lhs / base : 0.0;
    e.pass = lhs <= rhs;
    return e;
}

InequalityEntry check_lemma42(const Field& phi, const Field& psi, double p, double eta,
                              double c) {
    if (!(p >= 1.0))
        throw RangeError("check_lemma42: p must be >= 1");
    if (!(eta > 0.0))
        throw RangeError("check_lemma42: eta must be > 0");
    require_positive(phi, "check_lemma42 phi");
    require_positive(psi, "check_lemma42 psi");
    const Grid2D& g = phi.grid;
    const std::size_t n = phi.values.size();
    const std::vector<double> gphi = cell_grad_squared(phi);
    const std::vector<double> gpsi = cell_grad_squared(psi);

    std::vector<double> tmp(n);
    for (std::size_t k = 0; k < n; ++k)
        tmp[k] = std::pow(phi.values[k], p + 1.0) * psi.values[k] * gpsi[k];
    const double lhs = quad(g, tmp);

    for (std::size_t k = 0; k < n; ++k)
        tmp[k] = std::pow(phi.values[k], p - 1.0) * psi.values[k] * gphi[k];
    const double t1 = quad(g, tmp);

    const double psi_inf = *std::max_element(psi.values.begin(), psi.values.end());

    for (std::size_t k = 0; k < n; ++k)
        tmp[k] = std::pow(phi.values[k], p + 1.0) * psi.values[k];
    const double phi_p1_psi = quad(g, tmp);

    for (std::size_t k = 0; k < n; ++k) {
        const double q = gpsi[k];
        const double w = psi.values[k];
        tmp[k] = q * q / (w * w * w);
    }
    const double w4psi = quad(g, tmp);

    const double phi_mass = integrate(phi);
    for (std::size_t k = 0; k < n; ++k) tmp[k] = phi.values[k] * psi.values[k];
    const double cross = quad(g, tmp);

    const double t2 = (psi_inf + psi_inf * psi_inf * psi_inf / eta) * phi_p1_psi * w4psi;
    const double t3 = psi_inf * psi_inf * std::pow(phi_mass, 2.0 * p + 1.0) * w4psi;
    const double t4 = psi_inf * psi_inf * cross;
    const double cterms = t2 + t3 + t4;

    InequalityEntry e;
    e.name = "lemma42";
    e.fitted_constant = (cterms > 0.0) ? std::max(0.0, (lhs - eta * t1) / cterms) : 0.0;
    const double c_used = (c < 0.0) ? e.fitted_constant : c;
    e.lhs = lhs;
    e.rhs = eta * t1 + c_used * cterms;
    e.ratio = (e.rhs > 0.0) ? lhs / e.rhs
                            : (lhs > 0.0 ? std::numeric_limits<double>::infinity() : 0.0);
    e.pass = lhs <= e.rhs * (1.0 + 1e-12);
    return e;
}

TrajectoryInequality check_lemma52_trajectory(const std::vector<State>& snaps, int q) {
    if (q < 2 || q % 2 != 0)
        throw RangeError("check_lemma52_trajectory: q must be an even integer >= 2");
    if (snaps.size() < 10)
        throw RangeError("check_lemma52_trajectory: need at least 10 snapshots");

    const Grid2D& g = snaps.front().grid();
    const std::size_t n = snaps.front().u.values.size();
    struct Point { double t, G, D, R; };
    std::vector<Point> pts;
    pts.reserve(snaps.size());
    std::vector<double> tmp(n);

    for (const State& s : snaps) {
        require_positive(s.v, "check_lemma52_trajectory v");
        const std::vector<double> gv = cell_grad_squared(s.v);
        // G_q = int v^{1-q} |grad v|^q
        for (std::size_t k = 0; k < n; ++k)
            tmp[k] = std::pow(s.v.values[k], 1.0 - q) * std::pow(gv[k], 0.5 * q);
        const double G = quad(g, tmp);
        // dissipation int v^{-q-1} |grad v|^{q+2}
        for (std::size_t k = 0; k < n; ++k)
            tmp[k] = std::pow(s.v.values[k], -1.0 - q) * std::pow(gv[k], 0.5 * (q + 2));
        const double D = quad(g, tmp);
        // forcing int u^{(q+2)/2} v + int v
        for (std::size_t k = 0; k < n; ++k)
            tmp[k] = std::pow(s.u.values[k], 0.5 * (q + 2)) * s.v.values[k] + s.v.values[k];
        const double R = quad(g, tmp);
        pts.push_back({s.t, G, D, R});
    }

    TrajectoryInequality out;
    out.name = "lemma52_q" + std::to_string(q);
    out.gamma_structural = q / (8.0 * (q + std::sqrt(2.0)) * (q + std::sqrt(2.0)));
    out.intervals = static_cast<int>(pts.size()) - 1;

    // Per interval the admissible gammas satisfy gamma^2 D + gamma dG/dt - R <= 0.
    double gamma = std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k + 1 < pts.size(); ++k) {
        const double dt = pts[k + 1].t - pts[k].t;
        if (!(dt > 0.0))
            throw RangeError("check_lemma52_trajectory: snapshot times must increase");
        const double dG = (pts[k + 1].G - pts[k].G) / dt;
        const double D = 0.5 * (pts[k].D + pts[k + 1].D);
        const double R = 0.5 * (pts[k].R + pts[k + 1].R);
        double cap;
        if (D > 0.0) {
            cap = (-dG + std::sqrt(dG * dG + 4.0 * D * R)) / (2.0 * D);
        } else if (dG > 0.0) {
            cap = R / dG;
        } else {
            cap = std::numeric_limits<double>::infinity();
        }
        gamma = std::min(gamma, cap);
    }
    out.gamma_empirical = gamma;
    out.pass = gamma > 0.0;
    return out;
}

} // namespace nutaxis
