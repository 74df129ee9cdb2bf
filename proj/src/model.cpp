#include "nutaxis/model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#ifdef NUTAXIS_OPENMP
#include <omp.h>
#endif

namespace nutaxis {

void ModelParams::validate() const {
    if (!(epsilon >= 0.0) || !(epsilon < 1.0))
        throw ConfigError("ModelParams: epsilon must be in [0,1)");
    if (!(rho > 0.0) || !(mu > 0.0))
        throw ConfigError("ModelParams: rho and mu must be positive");
    if (!(kappa >= 2.0))
        throw ConfigError("ModelParams: kappa must be >= 2");
}

void State::validate() const {
    if (!(u.grid == v.grid))
        throw RangeError("State: u and v must share the same grid");
    if (u.values.size() != static_cast<std::size_t>(u.grid.cells()) ||
        v.values.size() != static_cast<std::size_t>(v.grid.cells()))
        throw RangeError("State: field size does not match grid");
    if (!(t >= 0.0))
        throw RangeError("State: t must be >= 0");
    require_finite(u, "State.u");
    require_finite(v, "State.v");
    for (std::size_t k = 0; k < u.values.size(); ++k) {
        if (u.values[k] < 0.0) {
            std::ostringstream os;
            os << "State: u < 0 at cell " << k << " (u = " << u.values[k] << ")";
            throw PositivityViolation(os.str());
        }
        if (!(v.values[k] > 0.0)) {
            std::ostringstream os;
            os << "State: v <= 0 at cell " << k << " (v = " << v.values[k] << ")";
            throw PositivityViolation(os.str());
        }
    }
}

namespace detail {

void RhsWorkspace::resize(const Grid2D& g) {
    fx.assign(static_cast<std::size_t>((g.nx + 1) * g.ny), 0.0);
    fy.assign(static_cast<std::size_t>(g.nx * (g.ny + 1)), 0.0);
    gvx.assign(fx.size(), 0.0);
    gvy.assign(fy.size(), 0.0);
    ru.assign(static_cast<std::size_t>(g.cells()), 0.0);
    rv.assign(static_cast<std::size_t>(g.cells()), 0.0);
}

double reaction_term(double u, const ModelParams& p) {
    const double decay = (p.kappa == 2.0) ? u * u : std::pow(u, p.kappa);
    return p.rho * u - p.mu * decay;
}

FaceMaxima compute_faces(const Grid2D& g, const double* u, const double* v,
                         RhsWorkspace& ws) {
    const int nx = g.nx, ny = g.ny;
    const double inv_hx = 1.0 / g.hx, inv_hy = 1.0 / g.hy;
    double d_max = 0.0, w_max = 0.0;

#ifdef NUTAXIS_OPENMP
#pragma omp parallel for schedule(static) reduction(max : d_max, w_max)
#endif
    for (int j = 0; j < ny; ++j) {
        const double* uj = u + static_cast<std::size_t>(j) * nx;
        const double* vj = v + static_cast<std::size_t>(j) * nx;
        double* fxr = ws.fx.data() + static_cast<std::size_t>(j) * (nx + 1);
        double* gvr = ws.gvx.data() + static_cast<std::size_t>(j) * (nx + 1);
        for (int i = 1; i < nx; ++i) {
            const double ul = uj[i - 1], ur = uj[i];
            const double vl = vj[i - 1], vr = vj[i];
            const double gu = (ur - ul) * inv_hx;
            const double gv = (vr - vl) * inv_hx;
            const double au = 0.5 * (ul + ur);
            const double av = 0.5 * (vl + vr);
            const double up = (gv > 0.0) ? ul : ur;
            const double diff = au * av;
            const double drift = up * av * gv;
            fxr[i] = diff * gu - up * drift;
            gvr[i] = gv;
            if (diff > d_max) d_max = diff;
            const double wabs = std::fabs(drift);
            if (wabs > w_max) w_max = wabs;
        }
    }

#ifdef NUTAXIS_OPENMP
#pragma omp parallel for schedule(static) reduction(max : d_max, w_max)
#endif
    for (int j = 1; j < ny; ++j) {
        const double* uj = u + static_cast<std::size_t>(j) * nx;
        const double* ujm = u + static_cast<std::size_t>(j - 1) * nx;
        const double* vj = v + static_cast<std::size_t>(j) * nx;
        const double* vjm = v + static_cast<std::size_t>(j - 1) * nx;
        double* fyr = ws.fy.data() + static_cast<std::size_t>(j) * nx;
        double* gvr = ws.gvy.data() + static_cast<std::size_t>(j) * nx;
        for (int i = 0; i < nx; ++i) {
            const double ud = ujm[i], uu = uj[i];
            const double vd = vjm[i], vu = vj[i];
            const double gu = (uu - ud) * inv_hy;
            const double gv = (vu - vd) * inv_hy;
            const double au = 0.5 * (ud + uu);
            const double av = 0.5 * (vd + vu);
            const double up = (gv > 0.0) ? ud : uu;
            const double diff = au * av;
            const double drift = up * av * gv;
            fyr[i] = diff * gu - up * drift;
            gvr[i] = gv;
            if (diff > d_max) d_max = diff;
            const double wabs = std::fabs(drift);
            if (wabs > w_max) w_max = wabs;
        }
    }
    return FaceMaxima{d_max, w_max};
}

void compute_rhs_cells(const Grid2D& g, const double* u, const double* v,
                       const ModelParams& p, RhsWorkspace& ws) {
    const int nx = g.nx, ny = g.ny;
    const double inv_hx = 1.0 / g.hx, inv_hy = 1.0 / g.hy;

#ifdef NUTAXIS_OPENMP
#pragma omp parallel for schedule(static)
#endif
    for (int j = 0; j < ny; ++j) {
        const double* uj = u + static_cast<std::size_t>(j) * nx;
        const double* vj = v + static_cast<std::size_t>(j) * nx;
        const double* fxr = ws.fx.data() + static_cast<std::size_t>(j) * (nx + 1);
        const double* gvxr = ws.gvx.data() + static_cast<std::size_t>(j) * (nx + 1);
        const double* fyd = ws.fy.data() + static_cast<std::size_t>(j) * nx;
        const double* fyu = ws.fy.data() + static_cast<std::size_t>(j + 1) * nx;
        const double* gvyd = ws.gvy.data() + static_cast<std::size_t>(j) * nx;
        const double* gvyu = ws.gvy.data() + static_cast<std::size_t>(j + 1) * nx;
        double* ru = ws.ru.data() + static_cast<std::size_t>(j) * nx;
        double* rv = ws.rv.data() + static_cast<std::size_t>(j) * nx;
        for (int i = 0; i < nx; ++i) {
            const double div_f = (fxr[i + 1] - fxr[i]) * inv_hx + (fyu[i] - fyd[i]) * inv_hy;
            const double lap_v = (gvxr[i + 1] - gvxr[i]) * inv_hx + (gvyu[i] - gvyd[i]) * inv_hy;
            ru[i] = div_f + reaction_term(uj[i], p);
            rv[i] = lap_v - uj[i] * vj[i];
        }
    }
}

FaceMaxima face_maxima(const Grid2D& g, const double* u, const double* v) {
    const int nx = g.nx, ny = g.ny;
    const double inv_hx = 1.0 / g.hx, inv_hy = 1.0 / g.hy;
    double d_max = 0.0, w_max = 0.0;
    for (int j = 0; j < ny; ++j) {
        const double* uj = u + static_cast<std::size_t>(j) * nx;
        const double* vj = v + static_cast<std::size_t>(j) * nx;
        for (int i = 1; i < nx; ++i) {
            const double gv = (vj[i] - vj[i - 1]) * inv_hx;
            const double diff = 0.5 * (uj[i - 1] + uj[i]) * 0.5 * (vj[i - 1] + vj[i]);
            const double up = (gv > 0.0) ? uj[i - 1] : uj[i];
            const double wabs = std::fabs(up * (0.5 * (vj[i - 1] + vj[i])) * gv);
            if (diff > d_max) d_max = diff;
            if (wabs > w_max) w_max = wabs;
        }
    }
    for (int j = 1; j < ny; ++j) {
        const double* uj = u + static_cast<std::size_t>(j) * nx;
        const double* ujm = u + static_cast<std::size_t>(j - 1) * nx;
        const double* vj = v + static_cast<std::size_t>(j) * nx;
        const double* vjm = v + static_cast<std::size_t>(j - 1) * nx;
        for (int i = 0; i < nx; ++i) {
            const double gv = (vj[i] - vjm[i]) * inv_hy;
            const double diff = 0.5 * (ujm[i] + uj[i]) * 0.5 * (vjm[i] + vj[i]);
            const double up = (gv > 0.0) ? ujm[i] : uj[i];
            const double wabs = std::fabs(up * (0.5 * (vjm[i] + vj[i])) * gv);
            if (diff > d_max) d_max = diff;
            if (wabs > w_max) w_max = wabs;
        }
    }
    return FaceMaxima{d_max, w_max};
}

void FusedScratch::resize(const Grid2D& g) {
    int workers = 1;
#ifdef NUTAXIS_OPENMP
    workers = std::max(1, omp_get_max_threads());
#endif
    rows.assign(static_cast<std::size_t>(4 * workers) * g.nx, 0.0);
}

namespace {

// Sequential fused sweep over rows [j0, j1): cell updates plus new-state face
// maxima for all faces whose contributing rows both lie inside the block.
// Seam y-faces between row blocks are handled by the caller.
struct BlockDiag {
    double min_u, min_v, max_u, checksum, d_max, w_max;
};

template <bool Kappa2>
BlockDiag fused_rows(const Grid2D& g, const double* u, const double* v,
                     const ModelParams& p, double dt, double* nu, double* nv,
                     double* fy_bot, double* fy_top, double* gvy_bot, double* gvy_top,
                     int j0, int j1) {
    const int nx = g.nx, ny = g.ny;
    const double inv_hx = 1.0 / g.hx, inv_hy = 1.0 / g.hy;
    const double rho = p.rho, mu = p.mu, kappa = p.kappa;
    constexpr double inf = std::numeric_limits<double>::infinity();
    BlockDiag d{inf, inf, -inf, 0.0, 0.0, 0.0};
    double cs0 = 0.0, cs1 = 0.0; // split checksum chains

    // bottom y-faces of the block (zero on the domain boundary)
    if (j0 == 0) {
        for (int i = 0; i < nx; ++i) fy_bot[i] = gvy_bot[i] = 0.0;
    } else {
        const double* uj = u + static_cast<std::size_t>(j0) * nx;
        const double* vj = v + static_cast<std::size_t>(j0) * nx;
        const double* um = u + static_cast<std::size_t>(j0 - 1) * nx;
        const double* vm = v + static_cast<std::size_t>(j0 - 1) * nx;
        for (int i = 0; i < nx; ++i) {
            const double gu = (uj[i] - um[i]) * inv_hy;
            const double gv = (vj[i] - vm[i]) * inv_hy;
            const double au = 0.5 * (um[i] + uj[i]);
            const double av = 0.5 * (vm[i] + vj[i]);
            const double up = (gv > 0.0) ? um[i] : uj[i];
            const double drift = up * av * gv;
            fy_bot[i] = au * av * gu - up * drift;
            gvy_bot[i] = gv;
        }
    }

    for (int j = j0; j < j1; ++j) {
        const double* uj = u + static_cast<std::size_t>(j) * nx;
        const double* vj = v + static_cast<std::size_t>(j) * nx;
        double* nuj = nu + static_cast<std::size_t>(j) * nx;
        double* nvj = nv + static_cast<std::size_t>(j) * nx;

        // top y-faces (between rows j, j+1); boundary row has zero faces
        if (j + 1 < ny) {
            const double* uq = u + static_cast<std::size_t>(j + 1) * nx;
            const double* vq = v + static_cast<std::size_t>(j + 1) * nx;
            for (int i = 0; i < nx; ++i) {
                const double gu = (uq[i] - uj[i]) * inv_hy;
                const double gv = (vq[i] - vj[i]) * inv_hy;
                const double au = 0.5 * (uj[i] + uq[i]);
                const double av = 0.5 * (vj[i] + vq[i]);
                const double up = (gv > 0.0) ? uj[i] : uq[i];
                const double drift = up * av * gv;
                fy_top[i] = au * av * gu - up * drift;
                gvy_top[i] = gv;
            }
        } else {
            for (int i = 0; i < nx; ++i) fy_top[i] = gvy_top[i] = 0.0;
        }

        // row sweep; x-faces carried in registers
        double fx_l = 0.0, gvx_l = 0.0;
        for (int i = 0; i < nx; ++i) {
            double fx_r = 0.0, gvx_r = 0.0;
            if (i + 1 < nx) {
                const double gu = (uj[i + 1] - uj[i]) * inv_hx;
                const double gv = (vj[i + 1] - vj[i]) * inv_hx;
                const double au = 0.5 * (uj[i] + uj[i + 1]);
                const double av = 0.5 * (vj[i] + vj[i + 1]);
                const double up = (gv > 0.0) ? uj[i] : uj[i + 1];
                const double drift = up * av * gv;
                fx_r = au * av * gu - up * drift;
                gvx_r = gv;
            }
            const double div_f = (fx_r - fx_l) * inv_hx + (fy_top[i] - fy_bot[i]) * inv_hy;
            const double lap_v = (gvx_r - gvx_l) * inv_hx + (gvy_top[i] - gvy_bot[i]) * inv_hy;
            const double decay = Kappa2 ? uj[i] * uj[i] : std::pow(uj[i], kappa);
            const double un = uj[i] + dt * (div_f + (rho * uj[i] - mu * decay));
            const double vn = vj[i] + dt * (lap_v - uj[i] * vj[i]);
            nuj[i] = un;
            nvj[i] = vn;
            if (un < d.min_u) d.min_u = un;
            if (vn < d.min_v) d.min_v = vn;
            if (un > d.max_u) d.max_u = un;
            if (i & 1) cs0 += un + vn; else cs1 += un + vn;
            fx_l = fx_r;
            gvx_l = gvx_r;
        }
        std::swap(fy_bot, fy_top);
        std::swap(gvy_bot, gvy_top);

        // face maxima of the updated state (in-block faces only)
        for (int i = 1; i < nx; ++i) {
            const double gv = (nvj[i] - nvj[i - 1]) * inv_hx;
            const double diff = 0.5 * (nuj[i - 1] + nuj[i]) * 0.5 * (nvj[i - 1] + nvj[i]);
            const double up = (gv > 0.0) ? nuj[i - 1] : nuj[i];
            const double wabs = std::fabs(up * (0.5 * (nvj[i - 1] + nvj[i])) * gv);
            if (diff > d.d_max) d.d_max = diff;
            if (wabs > d.w_max) d.w_max = wabs;
        }
        if (j > j0) {
            const double* num = nu + static_cast<std::size_t>(j - 1) * nx;
            const double* nvm = nv + static_cast<std::size_t>(j - 1) * nx;
            for (int i = 0; i < nx; ++i) {
                const double gv = (nvj[i] - nvm[i]) * inv_hy;
                const double diff = 0.5 * (num[i] + nuj[i]) * 0.5 * (nvm[i] + nvj[i]);
                const double up = (gv > 0.0) ? num[i] : nuj[i];
                const double wabs = std::fabs(up * (0.5 * (nvm[i] + nvj[i])) * gv);
                if (diff > d.d_max) d.d_max = diff;
                if (wabs > d.w_max) d.w_max = wabs;
            }
        }
    }
    d.checksum = cs0 + cs1;
    return d;
}

BlockDiag fused_rows_any(const Grid2D& g, const double* u, const double* v,
                         const ModelParams& p, double dt, double* nu, double* nv,
                         double* b0, double* b1, double* b2, double* b3, int j0, int j1) {
    return p.kappa == 2.0
               ? fused_rows<true>(g, u, v, p, dt, nu, nv, b0, b1, b2, b3, j0, j1)
               : fused_rows<false>(g, u, v, p, dt, nu, nv, b0, b1, b2, b3, j0, j1);
}

} // namespace

StepDiag fused_euler_step(const Grid2D& g, const double* u, const double* v,
                          const ModelParams& p, double dt,
                          double* nu, double* nv, FusedScratch& scr) {
    const int nx = g.nx, ny = g.ny;
    constexpr double inf = std::numeric_limits<double>::infinity();
    double min_u = inf, min_v = inf, max_u = -inf;
    double checksum = 0.0, d_max = 0.0, w_max = 0.0;
    int nblocks = 1;

#ifdef NUTAXIS_OPENMP
#pragma omp parallel reduction(min : min_u, min_v) \
    reduction(max : max_u, d_max, w_max) reduction(+ : checksum)
    {
        const int nth = omp_get_num_threads();
        const int tid = omp_get_thread_num();
#pragma omp single
        nblocks = nth;
        const int j0 = static_cast<int>(static_cast<long>(ny) * tid / nth);
        const int j1 = static_cast<int>(static_cast<long>(ny) * (tid + 1) / nth);
        if (j0 < j1) {
            double* buf = scr.rows.data() + static_cast<std::size_t>(4 * tid) * nx;
            const BlockDiag b = fused_rows_any(g, u, v, p, dt, nu, nv, buf, buf + nx,
                                               buf + 2 * nx, buf + 3 * nx, j0, j1);
            min_u = std::min(min_u, b.min_u);
            min_v = std::min(min_v, b.min_v);
            max_u = std::max(max_u, b.max_u);
            checksum += b.checksum;
            d_max = std::max(d_max, b.d_max);
            w_max = std::max(w_max, b.w_max);
        }
    }
#else
    {
        double* buf = scr.rows.data();
        const BlockDiag b = fused_rows_any(g, u, v, p, dt, nu, nv, buf, buf + nx,
                                           buf + 2 * nx, buf + 3 * nx, 0, ny);
        min_u = b.min_u;
        min_v = b.min_v;
        max_u = b.max_u;
        checksum = b.checksum;
        d_max = b.d_max;
        w_max = b.w_max;
    }
#endif

    // seam y-faces between row blocks (updated rows on both sides)
    if (nblocks > 1) {
        const double inv_hy = 1.0 / g.hy;
        for (int blk = 1; blk < nblocks; ++blk) {
            const int j = static_cast<int>(static_cast<long>(ny) * blk / nblocks);
            if (j <= 0 || j >= ny) continue;
            const double* nuj = nu + static_cast<std::size_t>(j) * nx;
            const double* nvj = nv + static_cast<std::size_t>(j) * nx;
            const double* num = nu + static_cast<std::size_t>(j - 1) * nx;
            const double* nvm = nv + static_cast<std::size_t>(j - 1) * nx;
            for (int i = 0; i < nx; ++i) {
                const double gv = (nvj[i] - nvm[i]) * inv_hy;
                const double diff = 0.5 * (num[i] + nuj[i]) * 0.5 * (nvm[i] + nvj[i]);
                const double up = (gv > 0.0) ? num[i] : nuj[i];
                const double wabs = std::fabs(up * (0.5 * (nvm[i] + nvj[i])) * gv);
                if (diff > d_max) d_max = diff;
                if (wabs > w_max) w_max = wabs;
            }
        }
    }

    return StepDiag{min_u, min_v, max_u, checksum, FaceMaxima{d_max, w_max}};
}

} // namespace detail

FaceFlux flux_u(const State& s) {
    s.validate();
    detail::RhsWorkspace ws;
    ws.resize(s.grid());
    detail::compute_faces(s.grid(), s.u.values.data(), s.v.values.data(), ws);
    FaceFlux out;
    out.gx = std::move(ws.fx);
    out.gy = std::move(ws.fy);
    return out;
}

Field rhs_u(const State& s, const ModelParams& p) {
    s.validate();
    p.validate();
    detail::RhsWorkspace ws;
    ws.resize(s.grid());
    detail::compute_faces(s.grid(), s.u.values.data(), s.v.values.data(), ws);
    detail::compute_rhs_cells(s.grid(), s.u.values.data(), s.v.values.data(), p, ws);
    Field out;
    out.grid = s.grid();
    out.values = std::move(ws.ru);
    return out;
}

Field rhs_v(const State& s) {
    s.validate();
    detail::RhsWorkspace ws;
    ws.resize(s.grid());
    detail::compute_faces(s.grid(), s.u.values.data(), s.v.values.data(), ws);
    detail::compute_rhs_cells(s.grid(), s.u.values.data(), s.v.values.data(), ModelParams{}, ws);
    Field out;
    out.grid = s.grid();
    out.values = std::move(ws.rv);
    return out;
}

Field reaction_u(const State& s, const ModelParams& p) {
    Field out(s.grid());
    for (std::size_t k = 0; k < out.values.size(); ++k)
        out.values[k] = detail::reaction_term(s.u.values[k], p);
    return out;
}

Field consumption_v(const State& s) {
    Field out(s.grid());
    for (std::size_t k = 0; k < out.values.size(); ++k)
        out.values[k] = s.u.values[k] * s.v.values[k];
    return out;
}

} // namespace nutaxis
