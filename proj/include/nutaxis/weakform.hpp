#pragma once
#include <vector>

#include "nutaxis/model.hpp"

namespace nutaxis {

// Neumann-compatible space-time test function
//   phi(x,y,t) = cos(kx pi x / lx) cos(ky pi y / ly) eta(t)
// with eta a C-infinity bump: 1 on [0, t_cut - w], 0 for t >= t_cut,
// monotone in between (exp(-1/s) joining).
struct TestFunction {
    int kx = 0, ky = 0;
    double t_cut = 1.0;
    double w = 0.1;

    TestFunction() = default;
    TestFunction(int kx_, int ky_, double t_cut_, double w_ = -1.0);

    double eta(double t) const;
    double spatial(const Grid2D& g, double x, double y) const;
    double spatial_dx(const Grid2D& g, double x, double y) const;
    double spatial_dy(const Grid2D& g, double x, double y) const;
    void validate() const;
};

// Normalized defect of the weak u-identity over the stored trajectory:
//   -int int u phi_t - int u0 phi(0)
//     = -1/2 int int v grad(u^2).grad(phi) + int int u^2 v grad(v).grad(phi)
//       + int int u phi - int int u^2 phi.
// Midpoint in space, trapezoid in time; the phi_t term is integrated in the
// telescoping product form so constant-in-time trajectories cancel exactly.
// Returns |lhs - rhs| / max(1, |lhs|).
double residual_u(const std::vector<State>& snaps, const TestFunction& tf);

// Same for the v-identity:
//   int int v phi_t + int v0 phi(0) = int int grad(v).grad(phi) + int int u v phi.
double residual_v(const std::vector<State>& snaps, const TestFunction& tf);

} // namespace nutaxis
