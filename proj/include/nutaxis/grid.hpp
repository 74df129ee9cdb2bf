#pragma once
#include <cstddef>
#include <functional>
#include <vector>

#include "nutaxis/errors.hpp"

namespace nutaxis {

// Uniform cell-centered rectangle [0,lx] x [0,ly], nx*ny cells, row-major
// (index j*nx + i, cell centers at ((i+1/2)hx, (j+1/2)hy)).
struct Grid2D {
    int nx = 0, ny = 0;
    double lx = 0.0, ly = 0.0;
    double hx = 0.0, hy = 0.0;
    double area = 0.0;

    Grid2D() = default;
    Grid2D(int nx_, int ny_, double lx_, double ly_);

    int cells() const { return nx * ny; }
    int idx(int i, int j) const { return j * nx + i; }
    double cx(int i) const { return (i + 0.5) * hx; }
    double cy(int j) const { return (j + 0.5) * hy; }

    bool operator==(const Grid2D& o) const {
        return nx == o.nx && ny == o.ny && lx == o.lx && ly == o.ly;
    }
};

// One scalar cell-centered function.
struct Field {
    Grid2D grid;
    std::vector<double> values;

    Field() = default;
    explicit Field(const Grid2D& g, double fill = 0.0)
        : grid(g), values(static_cast<std::size_t>(g.cells()), fill) {}

    double& operator()(int i, int j) { return values[static_cast<std::size_t>(grid.idx(i, j))]; }
    double operator()(int i, int j) const { return values[static_cast<std::size_t>(grid.idx(i, j))]; }
    std::size_t size() const { return values.size(); }
};

// Sample f(x,y) at cell centers.
Field make_field(const Grid2D& g, const std::function<double(double, double)>& f);

// Face arrays. x-face f in [0,nx] separates cells (f-1,j),(f,j), index j*(nx+1)+f;
// y-face g in [0,ny] separates cells (i,g-1),(i,g), index g*nx+i.
// Boundary faces always carry 0 (zero-flux ghost reflection).
struct FaceArrays {
    std::vector<double> gx; // (nx+1)*ny
    std::vector<double> gy; // nx*(ny+1)
};
using FaceGradients = FaceArrays;

// Deterministic pairwise summation (fixed order, O(log n) rounding growth).
double pairwise_sum(const double* x, std::size_t n);
inline double pairwise_sum(const std::vector<double>& x) { return pairwise_sum(x.data(), x.size()); }

// Midpoint quadrature: hx*hy * sum of cell values. Rejects non-finite fields.
double integrate(const Field& f);

FaceGradients face_gradients(const Field& f);

// (integral of f^p)^(1/p); requires f >= 0 cellwise.
double lp_norm(const Field& f, double p);

// |grad f|^2 per cell: mean of squared face gradients,
// (gxL^2+gxR^2)/2 + (gyD^2+gyU^2)/2.
std::vector<double> cell_grad_squared(const Grid2D& g, const FaceGradients& fg);
std::vector<double> cell_grad_squared(const Field& f);

// integral of |grad v|^a / v^b with |grad v|^a = (|grad v|^2)^(a/2).
// Requires v > 0 strictly (singular weight), a >= 2, b >= 0.
double weighted_gradient_functional(const Field& v, int a, int b);

// Throws NonFinite naming `what` if any entry is NaN/Inf.
void require_finite(const Field& f, const char* what);

} // namespace nutaxis
