#include "numerics.hpp"
#include "sheafrig/error.hpp"
#include "sheafrig/parallel.hpp"
#include "sheafrig/symplectic.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>

namespace sheafrig {

namespace {

// Values on a uniform tensor grid, read back by Catmull-Rom interpolation.
class GridTable {
public:
    GridTable(int d, int m, double lo, double h, int comps)
        : d_(d), m_(m), lo_(lo), h_(h), comps_(comps)
    {
        long total = 1;
        for (int i = 0; i < d; ++i)
            total *= m;
        data_.assign(static_cast<std::size_t>(total) * comps, std::numeric_limits<double>::quiet_NaN());
    }

    long nodes() const { return static_cast<long>(data_.size()) / comps_; }
    Vec node(long idx) const
    {
        Vec z(d_);
        for (int k = 0; k < d_; ++k) {
            z[k] = lo_ + static_cast<double>(idx % m_) * h_;
            idx /= m_;
        }
        return z;
    }
    double* at(long idx) { return data_.data() + idx * comps_; }

    void eval(const Vec& z, double* out) const
    {
        int base[4];
        double w[4][4];
        for (int k = 0; k < d_; ++k) {
            const double u = (z[k] - lo_) / h_;
            int i = static_cast<int>(std::floor(u));
            i = std::clamp(i, 1, m_ - 3);
            const double f = u - i;
            const double f2 = f * f, f3 = f2 * f;
            w[k][0] = 0.5 * (-f3 + 2 * f2 - f);
            w[k][1] = 0.5 * (3 * f3 - 5 * f2 + 2);
            w[k][2] = 0.5 * (-3 * f3 + 4 * f2 + f);
            w[k][3] = 0.5 * (f3 - f2);
            base[k] = i - 1;
        }
        std::fill(out, out + comps_, 0.0);
        int combos = 1;
        for (int k = 0; k < d_; ++k)
            combos *= 4;
        for (int c = 0; c < combos; ++c) {
            int rest = c;
            long idx = 0, stride = 1;
            double weight = 1.0;
            for (int k = 0; k < d_; ++k) {
                const int o = rest % 4;
                rest /= 4;
                weight *= w[k][o];
                idx += (base[k] + o) * stride;
                stride *= m_;
            }
            const double* v = data_.data() + idx * comps_;
            for (int j = 0; j < comps_; ++j)
                out[j] += weight * v[j];
        }
    }

private:
    int d_, m_;
    double lo_, h_;
    int comps_;
    std::vector<double> data_;
};

struct Kernel {
    std::vector<Vec> offsets;  // in [-1, 1]^d
    std::vector<double> weights;
};

// product bump prod (1 - u_i^2)^3 sampled by Gauss-Legendre
Kernel product_bump(int d, int per_axis)
{
    auto [x, w] = detail::gauss_legendre01(per_axis);
    std::vector<double> nodes(per_axis), wts(per_axis);
    for (int i = 0; i < per_axis; ++i) {
        nodes[i] = 2 * x[i] - 1;
        wts[i] = w[i] * std::pow(1 - nodes[i] * nodes[i], 3);
    }
    Kernel k;
    long total = 1;
    for (int i = 0; i < d; ++i)
        total *= per_axis;
    double sum = 0;
    for (long c = 0; c < total; ++c) {
        long rest = c;
        Vec u(d);
        double wt = 1.0;
        for (int i = 0; i < d; ++i) {
            const int j = static_cast<int>(rest % per_axis);
            rest /= per_axis;
            u[i] = nodes[j];
            wt *= wts[j];
        }
        k.offsets.push_back(u);
        k.weights.push_back(wt);
        sum += wt;
    }
    for (auto& wt : k.weights)
        wt /= sum;
    return k;
}

Mat antisym_from(const double* v, int d)
{
    Mat B = Mat::Zero(d, d);
    int c = 0;
    for (int i = 0; i < d; ++i)
        for (int j = i + 1; j < d; ++j) {
            B(i, j) = v[c];
            B(j, i) = -v[c];
            ++c;
        }
    return B;
}

}  // namespace

MoserResult moser_correct(const MapWithJacobian& phi, double r, double R, double eps, const MoserOptions& opt)
{
    if (phi.dim % 2 != 0)
        throw Error(ErrorCode::OddDimension, "phase space must be even-dimensional");
    if (!(0 < r && r < R) || !(eps > 0))
        throw Error(ErrorCode::InvalidArgument, "need 0 < r < R and eps > 0");
    const int d = phi.dim, n = d / 2;
    const double sqd = std::sqrt(static_cast<double>(d));
    const Mat O = standard_omega(n);

    MoserResult out;
    out.r1 = (R + r) / 2;
    out.r2 = (out.r1 + r) / 2;
    const double r1 = out.r1, r2 = out.r2;

    const auto work_pts = detail::ball_samples(d, r1, opt.check_samples, 17);
    const double gate = symplectic_residual(phi, work_pts);
    if (gate > opt.input_gate)
        throw Error(ErrorCode::DegenerateOmegaT,
                    "input residual " + std::to_string(gate) + " exceeds the gate; omega_t may degenerate");

    auto check_pts = detail::ball_samples(d, r, opt.check_samples, 1);
    out.input_residual = symplectic_residual(phi, check_pts);

    // grid over [-r1, r1]^d with two extra nodes each side for the stencils
    const int m = std::max(8, static_cast<int>(std::lround(std::pow(opt.grid_nodes, 1.0 / d))));
    const double h = 2 * r1 / (m - 5);
    const double lo = -r1 - 2 * h;
    const double reach = r1 + 3 * h * sqd;

    // mollification width from the modulus of d phi
    std::function<double(double)> modulus = opt.modulus;
    if (!modulus) {
        double L2 = 0;
        for (const auto& z : detail::ball_samples(d, r1, 60, 101)) {
            for (int j = 0; j < d; ++j) {
                const double s = 1e-4;
                Vec a = z, b = z;
                a[j] += s;
                b[j] -= s;
                L2 = std::max(L2, (phi.jac(a) - phi.jac(b)).norm() / (2 * s));
            }
        }
        L2 *= sqd;
        modulus = [L2](double delta) { return L2 * delta; };
    }
    double delta = 0.9 * (R - reach) / sqd;
    if (!(delta > 0))
        throw Error(ErrorCode::MollificationTooCoarse, "no room between the working ball and the domain");
    while (modulus(delta * sqd) > eps / 4 || delta * sqd * modulus(delta * sqd) > eps / 4) {
        delta /= 2;
        if (delta < 1e-6)
            throw Error(ErrorCode::MollificationTooCoarse, "modulus of d phi forces a width below 1e-6");
    }
    out.width = delta;

    const Kernel K = product_bump(d, opt.kernel_nodes_per_axis);
    auto smooth = std::make_shared<MapWithJacobian>();
    smooth->dim = d;
    smooth->eval = [phi, K, delta](const Vec& z) -> Vec {
        Vec acc = Vec::Zero(z.size());
        for (std::size_t k = 0; k < K.weights.size(); ++k)
            acc += K.weights[k] * phi(z - delta * K.offsets[k]);
        return acc;
    };
    smooth->jacobian = [phi, K, delta](const Vec& z) -> Mat {
        Mat acc = Mat::Zero(z.size(), z.size());
        for (std::size_t k = 0; k < K.weights.size(); ++k)
            acc += K.weights[k] * phi.jac(z - delta * K.offsets[k]);
        return acc;
    };
    auto beta_exact = [smooth, O](const Vec& z) -> Mat {
        const Mat J = smooth->jac(z);
        return J.transpose() * O * J - O;
    };

    const int comps = d * (d - 1) / 2;
    auto table = std::make_shared<GridTable>(d, m, lo, h, comps);
    parallel_chunks(static_cast<std::size_t>(table->nodes()), 64, [&](std::size_t, std::size_t b, std::size_t e) {
        for (std::size_t idx = b; idx < e; ++idx) {
            const Vec z = table->node(static_cast<long>(idx));
            if (z.norm() > reach)
                continue;
            const Mat B = beta_exact(z);
            double* v = table->at(static_cast<long>(idx));
            int c = 0;
            for (int i = 0; i < d; ++i)
                for (int j = i + 1; j < d; ++j)
                    v[c++] = B(i, j);
        }
    });

    auto beta_tab = [table, d, comps](const Vec& z) -> Mat {
        std::vector<double> v(comps);
        table->eval(z, v.data());
        return antisym_from(v.data(), d);
    };
    auto [gx, gw] = detail::gauss_legendre01(opt.quad_nodes);
    // radial homotopy: sigma_z(v) = int_0^1 t beta_{tz}(z, v) dt
    auto sigma = [beta_tab, gx, gw](const Vec& z) -> Vec {
        Vec s = Vec::Zero(z.size());
        for (std::size_t q = 0; q < gx.size(); ++q)
            s += gw[q] * gx[q] * beta_tab(gx[q] * z).transpose() * z;
        return s;
    };
    // omega_t(X, .) = -sigma with omega_t = omega + t beta
    auto field = [beta_tab, sigma, O](const Vec& z, double t) -> Vec {
        const Mat Wt = O + t * beta_tab(z);
        return Wt.transpose().partialPivLu().solve(-sigma(z));
    };

    for (long idx = 0; idx < table->nodes(); ++idx) {
        const Vec z = table->node(idx);
        if (z.norm() > r1)
            continue;
        const Mat B = antisym_from(table->at(idx), d);
        for (double t : {0.5, 1.0}) {
            Eigen::JacobiSVD<Mat> svd(O + t * B);
            if (svd.singularValues().minCoeff() < 0.5)
                throw Error(ErrorCode::DegenerateOmegaT, "omega_t is near-singular on the working ball");
        }
    }
    for (const auto& z : work_pts)
        for (double t : {0.0, 0.5, 1.0})
            out.max_field = std::max(out.max_field, field(z, t).norm());
    if (out.max_field >= r1 - r2)
        throw Error(ErrorCode::DegenerateOmegaT, "Moser field would leave the working ball");

    const int steps = opt.rk_steps;
    auto flow = [field, steps](const Vec& z) { return detail::rk4(field, z, 0.0, 1.0, steps); };

    out.psi.dim = d;
    out.psi.domain = Domain::ball(Vec::Zero(d), r2);
    out.psi.eval = [smooth, flow](const Vec& z) -> Vec { return smooth->eval(flow(z)); };
    out.psi.jacobian = [smooth, flow](const Vec& z) -> Mat {
        const int dim = static_cast<int>(z.size());
        Mat DF(dim, dim);
        const double s = 1e-5;
        for (int j = 0; j < dim; ++j) {
            Vec a = z, b = z;
            a[j] += s;
            b[j] -= s;
            DF.col(j) = (flow(a) - flow(b)) / (2 * s);
        }
        return smooth->jac(flow(z)) * DF;
    };
    out.beta = beta_exact;
    out.sigma = sigma;
    out.mollified = [smooth](const Vec& z) -> Vec { return smooth->eval(z); };

    out.output_residual = symplectic_residual(out.psi, check_pts);
    for (const auto& z : check_pts)
        out.sup_distance = std::max(out.sup_distance, (phi(z) - out.psi(z)).norm());
    if (out.sup_distance > eps)
        throw Error(ErrorCode::MollificationTooCoarse,
                    "corrected map moved by " + std::to_string(out.sup_distance) + " > eps");
    return out;
}

double primitive_error(const MoserResult& m, int probes, std::uint64_t seed)
{
    const int d = m.psi.dim;
    const double hstep = 1e-4;
    double worst = 0.0;
    for (const auto& z : detail::ball_samples(d, 0.9 * m.r2, probes, static_cast<long>(seed))) {
        Mat Ds(d, d);
        for (int j = 0; j < d; ++j) {
            Vec a = z, b = z;
            a[j] += hstep;
            b[j] -= hstep;
            Ds.col(j) = (m.sigma(a) - m.sigma(b)) / (2 * hstep);
        }
        // d sigma(u, v) = v^T Ds u - u^T Ds v
        const Mat dsigma = Ds.transpose() - Ds;
        worst = std::max(worst, (dsigma - m.beta(z)).cwiseAbs().maxCoeff());
    }
    return worst;
}

}  // namespace sheafrig
