#pragma once

// Small numeric helpers shared by the symplectic and bench sources.

#include "sheafrig/cones.hpp"

#include <cmath>
#include <numbers>
#include <utility>
#include <vector>

namespace sheafrig::detail {

// Gauss-Legendre nodes and weights on [0, 1]
inline std::pair<std::vector<double>, std::vector<double>> gauss_legendre01(int n)
{
    std::vector<double> x(n), w(n);
    for (int i = 0; i < n; ++i) {
        double z = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
        double dp = 1.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = z;
            for (int k = 2; k <= n; ++k) {
                double p2 = ((2 * k - 1) * z * p1 - (k - 1) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            if (n == 1)
                p0 = 1.0;
            dp = n * (z * p1 - p0) / (z * z - 1);
            double dz = p1 / dp;
            z -= dz;
            if (std::abs(dz) < 1e-16)
                break;
        }
        x[i] = 0.5 * (1 - z);
        w[i] = 1.0 / ((1 - z * z) * dp * dp);
    }
    return {x, w};
}

inline double halton(long index, int base)
{
    double f = 1.0, r = 0.0;
    while (index > 0) {
        f /= base;
        r += f * (index % base);
        index /= base;
    }
    return r;
}

// Deterministic points in the ball of radius `radius` in R^d (Halton + rejection).
inline std::vector<Vec> ball_samples(int d, double radius, int count, long offset = 1)
{
    static const int primes[] = {2, 3, 5, 7, 11, 13, 17, 19};
    std::vector<Vec> out;
    for (long k = offset; static_cast<int>(out.size()) < count && k < offset + 100L * count + 1000; ++k) {
        Vec z(d);
        for (int i = 0; i < d; ++i)
            z[i] = 2 * halton(k, primes[i]) - 1;
        if (z.norm() < 1)
            out.push_back(radius * z);
    }
    return out;
}

// C-infinity step: 1 for u <= a, 0 for u >= b
inline double smooth_step(double u, double a, double b)
{
    auto g = [](double v) { return v > 0 ? std::exp(-1.0 / v) : 0.0; };
    if (u <= a)
        return 1.0;
    if (u >= b)
        return 0.0;
    const double s = (u - a) / (b - a);
    const double p = g(1 - s), q = g(s);
    return p / (p + q);
}

inline double smooth_step_derivative(double u, double a, double b)
{
    if (u <= a || u >= b)
        return 0.0;
    const double s = (u - a) / (b - a);
    // d/ds of p/(p+q) with p = exp(-1/(1-s)), q = exp(-1/s)
    const double p = std::exp(-1.0 / (1 - s)), q = std::exp(-1.0 / s);
    const double dp = -p / ((1 - s) * (1 - s)), dq = q / (s * s);
    return (dp * q - p * dq) / ((p + q) * (p + q)) / (b - a);
}

template <class F>
Vec rk4(const F& field, Vec z, double t0, double t1, int steps)
{
    const double h = (t1 - t0) / steps;
    double t = t0;
    for (int i = 0; i < steps; ++i) {
        const Vec k1 = field(z, t);
        const Vec k2 = field(z + 0.5 * h * k1, t + 0.5 * h);
        const Vec k3 = field(z + 0.5 * h * k2, t + 0.5 * h);
        const Vec k4 = field(z + h * k3, t + h);
        z += h / 6 * (k1 + 2 * k2 + 2 * k3 + k4);
        t += h;
    }
    return z;
}

}  // namespace sheafrig::detail
