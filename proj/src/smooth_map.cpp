#include "sheafrig/smooth_map.hpp"

#include "sheafrig/error.hpp"

#include <algorithm>
#include <random>

namespace sheafrig {

Domain Domain::ball(const Vec& center, double radius)
{
    Domain d;
    d.kind = Kind::Ball;
    d.center = center;
    d.radius = radius;
    return d;
}

Domain Domain::box(const Vec& lo, const Vec& hi)
{
    if (lo.size() != hi.size())
        throw Error(ErrorCode::DimensionMismatch, "box corners differ in dimension");
    Domain d;
    d.kind = Kind::Box;
    d.lo = lo;
    d.hi = hi;
    return d;
}

bool Domain::contains(const Vec& x) const
{
    switch (kind) {
    case Kind::Whole: return true;
    case Kind::Ball: return (x - center).norm() < radius;
    case Kind::Box: return ((x - lo).array() > 0).all() && ((hi - x).array() > 0).all();
    }
    return false;
}

Mat central_difference_jacobian(const std::function<Vec(const Vec&)>& f, const Vec& x, double h)
{
    const Vec f0 = f(x);
    Mat J(f0.size(), x.size());
    for (int j = 0; j < x.size(); ++j) {
        const double s = h * std::max(1.0, std::abs(x[j]));
        Vec a = x, b = x;
        a[j] += s;
        b[j] -= s;
        J.col(j) = (f(a) - f(b)) / (2 * s);
    }
    return J;
}

Mat MapWithJacobian::jac(const Vec& x) const
{
    if (jacobian)
        return jacobian(x);
    return central_difference_jacobian(eval, x);
}

MapWithJacobian affine_map(const Mat& M, const Vec& b)
{
    if (M.rows() != M.cols() || b.size() != M.rows())
        throw Error(ErrorCode::DimensionMismatch, "affine map must be square");
    MapWithJacobian f;
    f.dim = static_cast<int>(M.rows());
    f.eval = [M, b](const Vec& x) -> Vec { return M * x + b; };
    f.jacobian = [M](const Vec&) -> Mat { return M; };
    return f;
}

MapWithJacobian affine_map(const Mat& M) { return affine_map(M, Vec::Zero(M.rows())); }

MapWithJacobian compose(const MapWithJacobian& f, const MapWithJacobian& g)
{
    if (f.dim != g.dim)
        throw Error(ErrorCode::DimensionMismatch, "compose: dimensions differ");
    MapWithJacobian h;
    h.dim = f.dim;
    h.domain = g.domain;
    h.eval = [f, g](const Vec& x) -> Vec { return f(g(x)); };
    h.jacobian = [f, g](const Vec& x) -> Mat { return f.jac(g(x)) * g.jac(x); };
    return h;
}

double jacobian_mismatch(const MapWithJacobian& f, const Vec& lo, const Vec& hi, int probes, std::uint64_t seed)
{
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    double worst = 0.0;
    for (int k = 0; k < probes; ++k) {
        Vec x(f.dim);
        for (int i = 0; i < f.dim; ++i)
            x[i] = lo[i] + (hi[i] - lo[i]) * u(rng);
        const Mat J = f.jac(x);
        const Mat Jfd = central_difference_jacobian(f.eval, x, 1e-5);
        const double scale = std::max(1.0, J.cwiseAbs().maxCoeff());
        worst = std::max(worst, (J - Jfd).cwiseAbs().maxCoeff() / scale);
    }
    return worst;
}

Vec TwistedGraph::point(const Vec& z) const
{
    const int n = half_dim();
    const Vec w = phi(z);
    Vec p(4 * n);
    p << z.head(n), w.head(n), z.tail(n), -w.tail(n);
    return p;
}

void TwistedGraph::add_sample(const Vec& z)
{
    const Vec w = phi(z);
    Vec s(2 * phi.dim);
    s << z, w;
    samples.push_back(s);
}

bool TwistedGraph::consistent(double tol) const
{
    const int d = phi.dim;
    for (const auto& s : samples)
        if ((phi(s.head(d)) - s.tail(d)).cwiseAbs().maxCoeff() > tol)
            return false;
    return true;
}

TwistedGraph make_twisted_graph(const MapWithJacobian& phi)
{
    if (phi.dim % 2 != 0)
        throw Error(ErrorCode::OddDimension, "twisted graph needs an even-dimensional phase space");
    TwistedGraph g;
    g.phi = phi;
    return g;
}

}  // namespace sheafrig
