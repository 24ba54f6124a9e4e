#include "numerics.hpp"
#include "sheafrig/error.hpp"
#include "sheafrig/symplectic.hpp"

#include <unsupported/Eigen/MatrixFunctions>

#include <algorithm>
#include <cmath>
#include <memory>
#include <numbers>

namespace sheafrig {

namespace {

double omega_pair(const Mat& O, const Vec& a, const Vec& b) { return a.dot(O * b); }

// Near-identity part phi~ with phi~(0) = 0 and d phi~(0) = Id, isotoped by
// the rescaling psi_s(z) = phi~(s z)/s.
struct RescaledStage {
    MapWithJacobian map;
    Mat O;
    std::vector<double> gx, gw;

    Vec psi(const Vec& z, double s) const { return map(s * z) / s; }

    Vec inverse(const Vec& y, double s) const
    {
        Vec z = y;
        for (int it = 0; it < 50; ++it) {
            const Vec res = psi(z, s) - y;
            if (res.norm() < 1e-14 * (1 + y.norm()))
                break;
            z -= map.jac(s * z).partialPivLu().solve(res);
        }
        return z;
    }

    // Y_s = (d/ds psi_s) o psi_s^{-1}
    Vec velocity(const Vec& y, double s) const
    {
        s = std::max(s, 1e-6);
        const Vec z = inverse(y, s);
        return (map.jac(s * z) * z - map(s * z) / s) / s;
    }

    Vec grad(const Vec& y, double s) const { return O * velocity(y, s); }

    // h(y) = int_0^1 -omega(Y(u y), y) du
    double potential(const Vec& y, double s) const
    {
        double acc = 0.0;
        for (std::size_t q = 0; q < gx.size(); ++q)
            acc -= gw[q] * omega_pair(O, velocity(gx[q] * y, s), y);
        return acc;
    }
};

// W-coordinates (x, xi') of graph points of a near-identity map, and the
// deviation f = F - <x, xi'> of its generating function F(x, xi').
struct GfChart {
    MapWithJacobian map;
    int n;

    // xi with map(x; xi)_xi' = eta
    Vec solve_xi(const Vec& x, const Vec& eta) const
    {
        Vec xi = eta;
        Vec z(2 * n);
        for (int it = 0; it < 50; ++it) {
            z << x, xi;
            const Vec res = map(z).tail(n) - eta;
            if (res.norm() < 1e-14 * (1 + eta.norm()))
                return xi;
            const Mat blk = map.jac(z).bottomRightCorner(n, n);
            if (std::abs(blk.determinant()) < 1e-6)
                throw Error(ErrorCode::GraphConditionFailed, "d xi'/d xi degenerates; no generating-function chart");
            xi -= blk.partialPivLu().solve(res);
        }
        z << x, xi;
        if ((map(z).tail(n) - eta).norm() > 1e-9)
            throw Error(ErrorCode::GraphConditionFailed, "generating-function chart inversion did not converge");
        return xi;
    }

    // grad f at w = (x, xi'): (xi - xi', x' - x)
    Vec grad_f(const Vec& w) const
    {
        const Vec x = w.head(n), eta = w.tail(n);
        const Vec xi = solve_xi(x, eta);
        Vec z(2 * n);
        z << x, xi;
        const Vec img = map(z);
        Vec g(2 * n);
        g << xi - eta, img.head(n) - x;
        return g;
    }

    double f(const Vec& w, const std::vector<double>& gx, const std::vector<double>& gw) const
    {
        double acc = 0.0;
        for (std::size_t q = 0; q < gx.size(); ++q)
            acc += gw[q] * grad_f(gx[q] * w).dot(w);
        return acc;
    }
};

}  // namespace

Vec HamiltonianIsotopy::field(const Vec& z, double t) const
{
    const Mat O = standard_omega(dim / 2);
    return -O * grad(z, t);
}

Vec HamiltonianIsotopy::flow(const Vec& z, double t0, double t1) const
{
    const int steps = std::max(1, static_cast<int>(std::ceil(rk_steps * std::abs(t1 - t0))));
    return detail::rk4([this](const Vec& y, double t) { return field(y, t); }, z, t0, t1, steps);
}

HamiltonianIsotopy ham_isotopy_from_map(const MapWithJacobian& phi, double r, double eps, const HamIsotopyOptions& opt)
{
    if (phi.dim % 2 != 0)
        throw Error(ErrorCode::OddDimension, "phase space must be even-dimensional");
    if (!(r > 0) || !(eps > 0))
        throw Error(ErrorCode::InvalidArgument, "need r > 0 and eps > 0");
    const int d = phi.dim, n = d / 2;
    const Mat O = standard_omega(n);
    const Vec zero = Vec::Zero(d);

    // phi = T_c o phi~ o L
    const Vec c = phi(zero);
    const Mat L = phi.jac(zero);
    if (symplectic_residual(L) > 1e-8)
        throw Error(ErrorCode::InvalidArgument, "d phi(0) is not symplectic");
    const Mat A0 = L.log();
    const Mat S = O * A0;
    if ((A0.exp() - L).norm() > 1e-9 * (1 + L.norm()) || (S - S.transpose()).norm() > 1e-8 * (1 + S.norm()))
        throw Error(ErrorCode::InvalidArgument, "d phi(0) has no real Hamiltonian logarithm");
    const Mat Sym = 0.5 * (S + S.transpose());
    const Mat Linv = L.inverse();

    MapWithJacobian tilde;
    tilde.dim = d;
    tilde.eval = [phi, Linv, c](const Vec& z) -> Vec { return phi(Linv * z) - c; };
    tilde.jacobian = [phi, Linv](const Vec& z) -> Mat { return phi.jac(Linv * z) * Linv; };

    const double r_work = 1.25 * L.norm() * r;
    bool nonlinear = false;
    for (const auto& z : detail::ball_samples(d, r_work, 64, 3))
        if ((tilde(z) - z).norm() > 1e-12 * (1 + z.norm()))
            nonlinear = true;

    HamiltonianIsotopy iso;
    iso.dim = d;
    iso.rk_steps = opt.rk_steps;
    iso.translation = c;
    iso.linear_log = A0;

    auto [gx, gw] = detail::gauss_legendre01(opt.quad_nodes);
    auto stage = std::make_shared<RescaledStage>(RescaledStage{tilde, O, gx, gw});

    if (nonlinear) {
        GfChart chart{tilde, n};
        for (const auto& z : detail::ball_samples(d, r_work, 64, 5))
            if (std::abs(tilde.jac(z).bottomRightCorner(n, n).determinant()) < 1e-3)
                throw Error(ErrorCode::GraphConditionFailed, "d xi'/d xi nearly singular on the working ball");
        // blend f' = <x, xi'> + b(|w|) f: identity on B_eta, f' = f outside B_2eta
        auto [fx, fw] = detail::gauss_legendre01(8);
        iso.eta = 0.0;
        for (int k = 0; k < 30 && iso.eta == 0.0; ++k) {
            const double eta = r_work / 4 * std::pow(0.5, k);
            double dev = 0.0;
            for (const auto& w : detail::ball_samples(d, 2 * eta, 48, 7)) {
                const double rho = w.norm();
                const double keep = 1 - detail::smooth_step(rho, eta, 2 * eta);  // the blended-away share
                const double dkeep = -detail::smooth_step_derivative(rho, eta, 2 * eta);
                const double fv = chart.f(w, fx, fw);
                const Vec gf = chart.grad_f(w);
                Vec gcorr = keep * gf;
                if (rho > 0)
                    gcorr += (fv * dkeep / rho) * w;
                dev = std::max({dev, std::abs(keep * fv), gcorr.norm()});
            }
            if (dev < eps) {
                iso.eta = eta;
                iso.blend_error = dev;
            }
        }
        if (iso.eta == 0.0)
            throw Error(ErrorCode::BlendWidthNotFound, "no blend width keeps the C^1 correction below eps");
    } else {
        iso.eta = r_work / 4;
        iso.blend_error = 0.0;
    }

    // stage potentials and gradients on s in [0, 1]
    auto h_stage = [=](int k, const Vec& y, double s) -> double {
        if (k == 0)
            return 0.5 * y.dot(Sym * y);
        if (k == 1)
            return nonlinear ? stage->potential(y, s) : 0.0;
        return (O * c).dot(y);
    };
    auto g_stage = [=](int k, const Vec& y, double s) -> Vec {
        if (k == 0)
            return Sym * y;
        if (k == 1)
            return nonlinear ? stage->grad(y, s) : Vec::Zero(y.size());
        return O * c;
    };

    // exact stage trajectories bound the region Z the isotopy must reach
    double zmax = 0.0;
    auto starts = detail::ball_samples(d, r, opt.check_samples, 9);
    for (int i = 0; i < 2 * d; ++i) {
        Vec e = Vec::Zero(d);
        e[i / 2] = (i % 2) ? r : -r;
        starts.push_back(0.999 * e);
    }
    for (const auto& z : starts) {
        for (int j = 0; j <= 16; ++j) {
            const double s = j / 16.0;
            zmax = std::max(zmax, ((s * A0).exp() * z).cwiseAbs().maxCoeff());
            const Vec y = L * z;
            if (nonlinear && s > 0)
                zmax = std::max(zmax, stage->psi(y, s).cwiseAbs().maxCoeff());
            zmax = std::max(zmax, (tilde(y) + s * c).cwiseAbs().maxCoeff());
        }
    }
    const double inner = 1.1 * zmax + 1e-3 * (1 + zmax);
    const double outer = 1.5 * inner;
    iso.inner = inner;
    iso.box_lo = Vec::Constant(d, -outer);
    iso.box_hi = Vec::Constant(d, outer);

    auto cutoff = [inner, outer](const Vec& z) {
        double v = 1.0;
        for (int i = 0; i < z.size(); ++i)
            v *= detail::smooth_step(std::abs(z[i]), inner, outer);
        return v;
    };
    auto cutoff_grad = [inner, outer](const Vec& z) {
        Vec g = Vec::Zero(z.size());
        for (int i = 0; i < z.size(); ++i) {
            double v = detail::smooth_step_derivative(std::abs(z[i]), inner, outer) * (z[i] < 0 ? -1.0 : 1.0);
            for (int j = 0; j < z.size(); ++j)
                if (j != i)
                    v *= detail::smooth_step(std::abs(z[j]), inner, outer);
            g[i] = v;
        }
        return g;
    };

    // three stages on [0,1/3], [1/3,2/3], [2/3,1], each slowed to rest at its ends
    struct Clock {
        int k;
        double s, rate;
    };
    auto clock = [](double t) {
        const int k = std::min(2, static_cast<int>(std::floor(3 * t)));
        const double u = 3 * t - k;
        return Clock{k, u - std::sin(2 * std::numbers::pi * u) / (2 * std::numbers::pi),
                     3 * (1 - std::cos(2 * std::numbers::pi * u))};
    };

    iso.H = [=](const Vec& z, double t) -> double {
        if (t <= 0 || t >= 1)
            return 0.0;
        const double chi = cutoff(z);
        if (chi == 0.0)
            return 0.0;
        const Clock ck = clock(t);
        if (ck.rate == 0.0)
            return 0.0;
        return chi * ck.rate * h_stage(ck.k, z, ck.s);
    };
    iso.grad = [=](const Vec& z, double t) -> Vec {
        Vec g = Vec::Zero(z.size());
        if (t <= 0 || t >= 1)
            return g;
        const double chi = cutoff(z);
        if (chi == 0.0)
            return g;
        const Clock ck = clock(t);
        if (ck.rate == 0.0)
            return g;
        g = chi * ck.rate * g_stage(ck.k, z, ck.s);
        if (chi < 1.0)
            g += ck.rate * h_stage(ck.k, z, ck.s) * cutoff_grad(z);
        return g;
    };

    for (const auto& z : starts)
        iso.flow_error = std::max(iso.flow_error, (iso.flow(z) - phi(z)).norm());
    if (iso.flow_error > eps)
        throw Error(ErrorCode::NumericBudgetExceeded,
                    "flow misses phi by " + std::to_string(iso.flow_error) + "; raise rk_steps");
    return iso;
}

// ---------------------------------------------------------------- generating functions

Vec GeneratingFunction::gradient(const Vec& x, const Vec& y) const
{
    if (grad)
        return grad(x, y);
    // five-point stencil: truncation h^4, rounding near 1e-13 at this h
    Vec g(2 * n);
    const double h = 1e-3;
    auto at = [&](int i, double t) {
        Vec xs = x, ys = y;
        (i < n ? xs[i] : ys[i - n]) += t;
        return S(xs, ys);
    };
    for (int i = 0; i < 2 * n; ++i)
        g[i] = (8 * (at(i, h) - at(i, -h)) - (at(i, 2 * h) - at(i, -2 * h))) / (12 * h);
    return g;
}

GfReport gf_quantization_check(const GeneratingFunction& gf, const MapWithJacobian& phi, const GfGrid& grid)
{
    const int n = gf.n, d = 2 * n;
    if (phi.dim != d)
        throw Error(ErrorCode::DimensionMismatch, "S and phi must share n");
    if (grid.per_axis < 2)
        throw Error(ErrorCode::InvalidArgument, "grid needs two points per axis");
    long total = 1;
    for (int i = 0; i < d; ++i)
        total *= grid.per_axis;
    auto point = [&](long i) {
        Vec p(d);
        for (int k = 0; k < d; ++k) {
            p[k] = grid.lo + (grid.hi - grid.lo) * static_cast<double>(i % grid.per_axis) / (grid.per_axis - 1);
            i /= grid.per_axis;
        }
        return p;
    };
    auto mixed = [&](const Vec& x, const Vec& y) {
        // d^2 S / dx dy by differencing the x-gradient in y
        Mat M(n, n);
        const double h = 1e-5;
        for (int j = 0; j < n; ++j) {
            Vec ya = y, yb = y;
            ya[j] += h;
            yb[j] -= h;
            M.col(j) = (gf.gradient(x, ya).head(n) - gf.gradient(x, yb).head(n)) / (2 * h);
        }
        return M;
    };

    GfReport rep;
    rep.min_mixed_det = std::numeric_limits<double>::infinity();
    double min_proj = std::numeric_limits<double>::infinity();
    for (long i = 0; i < total; ++i) {
        const Vec p = point(i);
        const Vec x = p.head(n), y = p.tail(n);
        const Vec g = gf.gradient(x, y);
        rep.min_mixed_det = std::min(rep.min_mixed_det, std::abs(mixed(x, y).determinant()));
        // forward: (x, y; -S_x, -S_y) should be (x, x'; xi, -xi') with (x'; xi') = phi(x; xi)
        Vec z(d);
        z << x, -g.head(n);
        const Vec img = phi(z);
        Vec target(d);
        target << y, g.tail(n);
        rep.forward = std::max(rep.forward, (img - target).norm());
        // backward: the graph point over (x; xi) = p
        const Vec w = phi(p);
        const Vec gb = gf.gradient(p.head(n), w.head(n));
        Vec diff(d);
        diff << p.tail(n) + gb.head(n), w.tail(n) - gb.tail(n);
        rep.backward = std::max(rep.backward, diff.norm());
        min_proj = std::min(min_proj, std::abs(phi.jac(p).topRightCorner(n, n).determinant()));
        ++rep.points;
    }
    if (min_proj < 1e-8)
        throw Error(ErrorCode::DegenerateGF, "Lambda_phi does not project onto (x, x'); no graph-type S");
    if (rep.min_mixed_det < 1e-8)
        throw Error(ErrorCode::DegenerateGF, "mixed Hessian of S degenerates on the grid");
    rep.discrepancy = std::max(rep.forward, rep.backward);
    rep.simple = true;
    rep.note = "SS(K) is the conormal of the graph {s = S(x,y)} with sigma > 0; K is simple along it";
    return rep;
}

}  // namespace sheafrig
