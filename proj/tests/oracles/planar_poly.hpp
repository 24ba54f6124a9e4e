#pragma once
// Planar test maps: z^k or conj(z)^k plus a small real quadratic, with exact
// Jacobians; shared by the degree unit tests and the acceptance run.

#include "oracles/winding_oracle.hpp"

#include "sheafrig/degree.hpp"

#include <cmath>
#include <complex>
#include <random>

namespace oracle {

using namespace sheafrig;


using cd = std::complex<double>;

inline Vec v2(double a, double b)
{
    Vec v(2);
    v << a, b;
    return v;
}

// z -> z^k (or conj(z)^k) plus a real polynomial perturbation of degree <= 2
struct PlanarPoly {
    int k = 1;
    bool conj = false;
    double c[2][6] = {};  // coefficients of 1, x, y, x^2, xy, y^2

    std::pair<double, double> operator()(double x, double y) const
    {
        cd z(x, conj ? -y : y);
        cd w = std::pow(z, k);
        const double m[6] = {1, x, y, x * x, x * y, y * y};
        double u = w.real(), v = w.imag();
        for (int i = 0; i < 6; ++i) {
            u += c[0][i] * m[i];
            v += c[1][i] * m[i];
        }
        return {u, v};
    }

    MapWithJacobian as_map() const
    {
        PlanarPoly p = *this;
        MapWithJacobian f;
        f.dim = 2;
        f.eval = [p](const Vec& x) -> Vec {
            auto [u, v] = p(x[0], x[1]);
            return v2(u, v);
        };
        f.jacobian = [p](const Vec& x) -> Mat {
            const double a = x[0], b = x[1];
            cd z(a, p.conj ? -b : b);
            cd dz = double(p.k) * std::pow(z, p.k - 1);
            Mat J(2, 2);
            // holomorphic part: [[Re, -Im], [Im, Re]] of dz, then the conj flip on y
            J << dz.real(), -dz.imag(), dz.imag(), dz.real();
            if (p.conj)
                J.col(1) *= -1;
            const double dm_dx[6] = {0, 1, 0, 2 * a, b, 0};
            const double dm_dy[6] = {0, 0, 1, 0, a, 2 * b};
            for (int i = 0; i < 6; ++i)
                for (int r = 0; r < 2; ++r) {
                    J(r, 0) += p.c[r][i] * dm_dx[i];
                    J(r, 1) += p.c[r][i] * dm_dy[i];
                }
            return J;
        };
        return f;
    }
};

// perturbation bounded by `size` on the box [-1.5, 1.5]^2
inline PlanarPoly random_poly(std::mt19937& rng, double size)
{
    std::uniform_int_distribution<int> kd(1, 3);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    PlanarPoly p;
    p.k = kd(rng);
    p.conj = u(rng) < 0;
    const double bound[6] = {1, 1.5, 1.5, 2.25, 2.25, 2.25};
    double total = 0;
    for (double b : bound)
        total += b;
    for (int r = 0; r < 2; ++r)
        for (int i = 0; i < 6; ++i)
            p.c[r][i] = u(rng) * size / (total * std::sqrt(2.0));
    return p;
}

inline Vec random_in_ball(std::mt19937& rng, double radius)
{
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (;;) {
        Vec y = v2(u(rng), u(rng)) * radius;
        if (y.norm() < radius)
            return y;
    }
}

inline int winding(const PlanarPoly& p, const Vec& y, double half)
{
    return winding_number([&](double a, double b) { return p(a, b); }, -half, half, -half, half, y[0],
                                  y[1]);
}

inline MapWithJacobian rotation(double theta)
{
    Mat R(2, 2);
    R << std::cos(theta), -std::sin(theta), std::sin(theta), std::cos(theta);
    return affine_map(R);
}

}  // namespace oracle
