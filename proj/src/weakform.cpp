#include "nutaxis/weakform.hpp"

#include <cmath>

namespace nutaxis {

namespace {

constexpr double kPi = 3.14159265358979323846;

double join(double s) { return s > 0.0 ? std::exp(-1.0 / s) : 0.0; }

struct SpatialIntegrals {
    const Grid2D* g = nullptr;
    std::vector<double> S, Sx, Sy; // test-function factor and gradient at centers
    std::vector<double> tmp;

    explicit SpatialIntegrals(const Grid2D& grid, const TestFunction& tf) : g(&grid) {
        const std::size_t n = static_cast<std::size_t>(grid.cells());
        S.resize(n);
        Sx.resize(n);
        Sy.resize(n);
        tmp.resize(n);
        for (int j = 0; j < grid.ny; ++j)
            for (int i = 0; i < grid.nx; ++i) {
                const std::size_t k = static_cast<std::size_t>(grid.idx(i, j));
                const double x = grid.cx(i), y = grid.cy(j);
                S[k] = tf.spatial(grid, x, y);
                Sx[k] = tf.spatial_dx(grid, x, y);
                Sy[k] = tf.spatial_dy(grid, x, y);
            }
    }

    double quad() { return g->hx * g->hy * pairwise_sum(tmp); }
};

// Face gradients averaged back to cell centers.
void cell_gradient(const Grid2D& g, const FaceGradients& fg,
                   std::vector<double>& gx, std::vector<double>& gy) {
    gx.resize(static_cast<std::size_t>(g.cells()));
    gy.resize(gx.size());
    for (int j = 0; j < g.ny; ++j)
        for (int i = 0; i < g.nx; ++i) {
            const std::size_t k = static_cast<std::size_t>(g.idx(i, j));
            gx[k] = 0.5 * (fg.gx[static_cast<std::size_t>(j) * (g.nx + 1) + i] +
                           fg.gx[static_cast<std::size_t>(j) * (g.nx + 1) + i + 1]);
            gy[k] = 0.5 * (fg.gy[static_cast<std::size_t>(j) * g.nx + i] +
                           fg.gy[static_cast<std::size_t>(j + 1) * g.nx + i]);
        }
}

void check_trajectory(const std::vector<State>& snaps, const TestFunction& tf) {
    tf.validate();
    if (snaps.size() < 2)
        throw RangeError("weakform: need at least 2 snapshots");
    if (std::fabs(snaps.front().t) > 1e-12)
        throw RangeError("weakform: trajectory must start at t = 0");
    for (std::size_t k = 1; k < snaps.size(); ++k) {
        if (!(snaps[k].t > snaps[k - 1].t))
            throw RangeError("weakform: snapshot times must be strictly increasing");
        if (!(snaps[k].grid() == snaps.front().grid()))
            throw RangeError("weakform: snapshots must share one grid");
    }
    if (snaps.back().t < tf.t_cut - 1e-12)
        throw RangeError("weakform: snapshots do not cover [0, t_cut]");
}

// Abel-summed telescoping quadrature of int int f phi_t:
//   sum_k (F_k + F_{k+1})/2 (eta_{k+1} - eta_k)
// with F_k the spatial integral of f(t_k) S. Exact cancellation against the
// initial term for constant-in-time trajectories.
double phi_t_term(const std::vector<double>& F, const std::vector<double>& eta) {
    const std::size_t K = F.size();
    std::vector<double> Fbar(K - 1);
    for (std::size_t k = 0; k + 1 < K; ++k) Fbar[k] = 0.5 * (F[k] + F[k + 1]);
    double acc = Fbar[K - 2] * eta[K - 1] - Fbar[0] * eta[0];
    for (std::size_t k = 1; k + 1 < K; ++k) acc -= (Fbar[k] - Fbar[k - 1]) * eta[k];
    return acc;
}

double time_trapezoid(const std::vector<double>& t, const std::vector<double>& x) {
    double acc = 0.0;
    for (std::size_t k = 0; k + 1 < t.size(); ++k)
        acc += 0.5 * (x[k] + x[k + 1]) * (t[k + 1] - t[k]);
    return acc;
}

} // namespace

TestFunction::TestFunction(int kx_, int ky_, double t_cut_, double w_)
    : kx(kx_), ky(ky_), t_cut(t_cut_), w(w_ < 0.0 ? 0.1 * t_cut_ : w_) {
    validate();
}

void TestFunction::validate() const {
    if (kx < 0 || ky < 0)
        throw RangeError("TestFunction: wavenumbers must be >= 0");
    if (!(w > 0.0) || !(t_cut - w > 0.0))
        throw RangeError("TestFunction: need 0 < w < t_cut");
}

double TestFunction::eta(double t) const {
    if (t <= t_cut - w) return 1.0;
    if (t >= t_cut) return 0.0;
    const double s = (t_cut - t) / w;
    const double f = join(s);
    return f / (f + join(1.0 - s));
}

double TestFunction::spatial(const Grid2D& g, double x, double y) const {
    return std::cos(kx * kPi * x / g.lx) * std::cos(ky * kPi * y / g.ly);
}

double TestFunction::spatial_dx(const Grid2D& g, double x, double y) const {
    const double ax = kx * kPi / g.lx;
    return -ax * std::sin(ax * x) * std::cos(ky * kPi * y / g.ly);
}

double TestFunction::spatial_dy(const Grid2D& g, double x, double y) const {
    const double ay = ky * kPi / g.ly;
    return -std::cos(kx * kPi * x / g.lx) * ay * std::sin(ay * y);
}

double residual_u(const std::vector<State>& snaps, const TestFunction& tf) {
    check_trajectory(snaps, tf);
    const Grid2D& g = snaps.front().grid();
    const std::size_t n = static_cast<std::size_t>(g.cells());
    const std::size_t K = snaps.size();
    SpatialIntegrals si(g, tf);

    std::vector<double> times(K), eta(K), F(K), A(K), B(K), C(K), D(K);
    std::vector<double> usq(n), gx(n), gy(n), gvx(n), gvy(n);
    Field usq_field;
    usq_field.grid = g;

    for (std::size_t s = 0; s < K; ++s) {
        const State& st = snaps[s];
        times[s] = st.t;
        eta[s] = tf.eta(st.t);
        const double* u = st.u.values.data();
        const double* v = st.v.values.data();

        for (std::size_t k = 0; k < n; ++k) si.tmp[k] = u[k] * si.S[k];
        F[s] = si.quad();

        for (std::size_t k = 0; k < n; ++k) usq[k] = u[k] * u[k];
        usq_field.values = usq;
        cell_gradient(g, face_gradients(usq_field), gx, gy);
        cell_gradient(g, face_gradients(st.v), gvx, gvy);

        // A = int v grad(u^2).grad(phi), B = int u^2 v grad(v).grad(phi)
        for (std::size_t k = 0; k < n; ++k)
            si.tmp[k] = v[k] * (gx[k] * si.Sx[k] + gy[k] * si.Sy[k]);
        A[s] = si.quad() * eta[s];
        for (std::size_t k = 0; k < n; ++k)
            si.tmp[k] = usq[k] * v[k] * (gvx[k] * si.Sx[k] + gvy[k] * si.Sy[k]);
        B[s] = si.quad() * eta[s];
        for (std::size_t k = 0; k < n; ++k) si.tmp[k] = u[k] * si.S[k];
        C[s] = si.quad() * eta[s];
        for (std::size_t k = 0; k < n; ++k) si.tmp[k] = usq[k] * si.S[k];
        D[s] = si.quad() * eta[s];
    }

    const double lhs = -phi_t_term(F, eta) - F[0] * eta[0];
    const double rhs = -0.5 * time_trapezoid(times, A) + time_trapezoid(times, B) +
                       time_trapezoid(times, C) - time_trapezoid(times, D);
    return std::fabs(lhs - rhs) / std::max(1.0, std::fabs(lhs));
}

double residual_v(const std::vector<State>& snaps, const TestFunction& tf) {
    check_trajectory(snaps, tf);
    const Grid2D& g = snaps.front().grid();
    const std::size_t n = static_cast<std::size_t>(g.cells());
    const std::size_t K = snaps.size();
    SpatialIntegrals si(g, tf);

    std::vector<double> times(K), eta(K), F(K), A(K), B(K);
    std::vector<double> gvx(n), gvy(n);

    for (std::size_t s = 0; s < K; ++s) {
        const State& st = snaps[s];
        times[s] = st.t;
        eta[s] = tf.eta(st.t);
        const double* u = st.u.values.data();
        const double* v = st.v.values.data();

        for (std::size_t k = 0; k < n; ++k) si.tmp[k] = v[k] * si.S[k];
        F[s] = si.quad();

        cell_gradient(g, face_gradients(st.v), gvx, gvy);
        for (std::size_t k = 0; k < n; ++k)
            si.tmp[k] = gvx[k] * si.Sx[k] + gvy[k] * si.Sy[k];
        A[s] = si.quad() * eta[s];
        for (std::size_t k = 0; k < n; ++k) si.tmp[k] = u[k] * v[k] * si.S[k];
        B[s] = si.quad() * eta[s];
    }

    const double lhs = phi_t_term(F, eta) + F[0] * eta[0];
    const double rhs = time_trapezoid(times, A) + time_trapezoid(times, B);
    return std::fabs(lhs - rhs) / std::max(1.0, std::fabs(lhs));
}

} // namespace nutaxis
