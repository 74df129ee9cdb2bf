#include "nutaxis/grid.hpp"

#include <cmath>
#include <sstream>

namespace nutaxis {

Grid2D::Grid2D(int nx_, int ny_, double lx_, double ly_)
    : nx(nx_), ny(ny_), lx(lx_), ly(ly_) {
    if (nx < 2 || ny < 2)
        throw RangeError("Grid2D: nx and ny must be >= 2");
    if (!(lx > 0.0) || !(ly > 0.0))
        throw RangeError("Grid2D: lx and ly must be positive");
    hx = lx / nx;
    hy = ly / ny;
    area = lx * ly;
}

Field make_field(const Grid2D& g, const std::function<double(double, double)>& f) {
    Field out(g);
    for (int j = 0; j < g.ny; ++j)
        for (int i = 0; i < g.nx; ++i)
            out(i, j) = f(g.cx(i), g.cy(j));
    return out;
}

double pairwise_sum(const double* x, std::size_t n) {
    if (n <= 32) {
        double s = 0.0;
        for (std::size_t i = 0; i < n; ++i) s += x[i];
        return s;
    }
    const std::size_t h = n / 2;
    return pairwise_sum(x, h) + pairwise_sum(x + h, n - h);
}

double integrate(const Field& f) {
    const double s = pairwise_sum(f.values);
    if (!std::isfinite(s)) {
        require_finite(f, "integrate");
        throw NonFinite("integrate: non-finite sum");
    }
    return f.grid.hx * f.grid.hy * s;
}

FaceGradients face_gradients(const Field& f) {
    const Grid2D& g = f.grid;
    FaceGradients fg;
    fg.gx.assign(static_cast<std::size_t>((g.nx + 1) * g.ny), 0.0);
    fg.gy.assign(static_cast<std::size_t>(g.nx * (g.ny + 1)), 0.0);
    const double* v = f.values.data();
    for (int j = 0; j < g.ny; ++j) {
        double* row = fg.gx.data() + static_cast<std::size_t>(j) * (g.nx + 1);
        const double* cj = v + static_cast<std::size_t>(j) * g.nx;
        for (int i = 1; i < g.nx; ++i)
            row[i] = (cj[i] - cj[i - 1]) / g.hx;
    }
    for (int j = 1; j < g.ny; ++j) {
        double* row = fg.gy.data() + static_cast<std::size_t>(j) * g.nx;
        const double* cj = v + static_cast<std::size_t>(j) * g.nx;
        const double* cjm = v + static_cast<std::size_t>(j - 1) * g.nx;
        for (int i = 0; i < g.nx; ++i)
            row[i] = (cj[i] - cjm[i]) / g.hy;
    }
    return fg;
}

double lp_norm(const Field& f, double p) {
    if (!(p >= 1.0))
        throw RangeError("lp_norm: p must be >= 1");
    std::vector<double> powed(f.values.size());
    for (std::size_t k = 0; k < f.values.size(); ++k) {
        const double x = f.values[k];
        if (x < 0.0) {
            std::ostringstream os;
            os << "lp_norm: negative entry " << x << " at cell " << k;
            throw PositivityViolation(os.str());
        }
        powed[k] = (p == 2.0) ? x * x : std::pow(x, p);
    }
    Field tmp;
    tmp.grid = f.grid;
    tmp.values = std::move(powed);
    return std::pow(integrate(tmp), 1.0 / p);
}

std::vector<double> cell_grad_squared(const Grid2D& g, const FaceGradients& fg) {
    std::vector<double> out(static_cast<std::size_t>(g.cells()));
    for (int j = 0; j < g.ny; ++j) {
        const double* gxr = fg.gx.data() + static_cast<std::size_t>(j) * (g.nx + 1);
        const double* gyd = fg.gy.data() + static_cast<std::size_t>(j) * g.nx;
        const double* gyu = fg.gy.data() + static_cast<std::size_t>(j + 1) * g.nx;
        double* o = out.data() + static_cast<std::size_t>(j) * g.nx;
        for (int i = 0; i < g.nx; ++i) {
            const double a = gxr[i], b = gxr[i + 1];
            const double c = gyd[i], d = gyu[i];
            o[i] = 0.5 * (a * a + b * b) + 0.5 * (c * c + d * d);
        }
    }
    return out;
}

std::vector<double> cell_grad_squared(const Field& f) {
    return cell_grad_squared(f.grid, face_gradients(f));
}

namespace {

double int_pow(double x, int n) {
    double r = 1.0;
    for (; n > 0; --n) r *= x;
    return r;
}

} // namespace

double weighted_gradient_functional(const Field& v, int a, int b) {
    if (a < 2 || b < 0)
        throw RangeError("weighted_gradient_functional: need a >= 2, b >= 0");
    for (std::size_t k = 0; k < v.values.size(); ++k)
        if (!(v.values[k] > 0.0))
            throw NonpositiveField("weighted_gradient_functional: v must be strictly positive");
    const std::vector<double> gsq = cell_grad_squared(v);
    Field tmp;
    tmp.grid = v.grid;
    tmp.values.resize(gsq.size());
    const bool even = (a % 2 == 0);
    for (std::size_t k = 0; k < gsq.size(); ++k) {
        const double num = even ? int_pow(gsq[k], a / 2) : std::pow(gsq[k], 0.5 * a);
        const double den = (b == 0) ? 1.0 : int_pow(v.values[k], b);
        tmp.values[k] = num / den;
    }
    return integrate(tmp);
}

void require_finite(const Field& f, const char* what) {
    for (std::size_t k = 0; k < f.values.size(); ++k)
        if (!std::isfinite(f.values[k])) {
            std::ostringstream os;
            os << what << ": non-finite value " << f.values[k] << " at cell " << k;
            throw NonFinite(os.str());
        }
}

} // namespace nutaxis
