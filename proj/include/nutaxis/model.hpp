#pragma once
#include "nutaxis/grid.hpp"

namespace nutaxis {

// Parameters of the regularized system. epsilon only enters through the
// initial condition u0 + epsilon; the discrete operators take epsilon = 0
// states without modification. Defaults (rho, mu, kappa) = (1, 1, 2) give
// the source u - u^2.
struct ModelParams {
    double epsilon = 0.0;
    double rho = 1.0;
    double mu = 1.0;
    double kappa = 2.0;

    void validate() const;
};

// The pair (u, v) plus simulation clock. u >= 0, v > 0 cellwise; same grid.
struct State {
    Field u;
    Field v;
    double t = 0.0;

    const Grid2D& grid() const { return u.grid; }
    void validate() const;
};

using FaceFlux = FaceArrays;

// Total u-equation face flux F = (uv) grad u - u^2 v grad v, discretized with
// arithmetic face means for the degenerate coefficient and donor-cell upwinding
// of u^2 in the taxis part. Boundary faces carry flux 0 exactly.
FaceFlux flux_u(const State& s);

// div(flux_u) + rho*u - mu*u^kappa (conservative face-difference divergence).
Field rhs_u(const State& s, const ModelParams& p);

// 5-point Neumann Laplacian of v minus u*v.
Field rhs_v(const State& s);

// Pointwise pieces, used by the mass-identity oracles.
Field reaction_u(const State& s, const ModelParams& p); // rho*u - mu*u^kappa
Field consumption_v(const State& s);                    // u*v

namespace detail {

// Scratch buffers for the fused face/update passes.
struct RhsWorkspace {
    std::vector<double> fx, fy;   // u-equation face fluxes
    std::vector<double> gvx, gvy; // v face gradients
    std::vector<double> ru, rv;   // cellwise right-hand sides
    void resize(const Grid2D& g);
};

struct FaceMaxima {
    double d_max = 0.0; // max over faces of A(u) A(v)
    double w_max = 0.0; // max over faces of |U_up A(v) grad v|
};

// Fills fx, fy, gvx, gvy from (u, v); boundary faces stay 0.
FaceMaxima compute_faces(const Grid2D& g, const double* u, const double* v,
                         RhsWorkspace& ws);

// Fills ws.ru, ws.rv from the face arrays:
//   ru = div(F) + rho*u - mu*u^kappa,  rv = div(grad v) - u*v.
void compute_rhs_cells(const Grid2D& g, const double* u, const double* v,
                       const ModelParams& p, RhsWorkspace& ws);

// Face maxima only, no flux storage.
FaceMaxima face_maxima(const Grid2D& g, const double* u, const double* v);

double reaction_term(double u, const ModelParams& p);

struct StepDiag {
    double min_u = 0.0, min_v = 0.0, max_u = 0.0;
    double checksum = 0.0;   // non-finite iff any output is
    FaceMaxima next;         // face maxima of the updated state
};

struct FusedScratch {
    std::vector<double> rows; // 4 row buffers per worker thread
    void resize(const Grid2D& g);
};

// One fused euler update nu = u + dt*rhs_u, nv = v + dt*rhs_v in a single
// streaming sweep; bitwise identical to the compute_faces/compute_rhs_cells
// path. Also returns the face maxima of (nu, nv) for the next dt budget.
StepDiag fused_euler_step(const Grid2D& g, const double* u, const double* v,
                          const ModelParams& p, double dt,
                          double* nu, double* nv, FusedScratch& scr);

} // namespace detail

} // namespace nutaxis
