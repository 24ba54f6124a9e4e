#pragma once

// Brute-force membership in the W region for V = R^2: the four boundary rays
// through x are scanned for sign changes against the two surfaces of Z, each
// crossing is refined by bisection, and the covector condition is evaluated
// with explicit 2-vectors.

#include <algorithm>
#include <array>
#include <cmath>

namespace oracle {

struct WParams {
    double c, cp, r, delta, eps;
};

inline double ray_dist2(std::array<double, 2> dir, std::array<double, 2> xi)
{
    double n = std::hypot(dir[0], dir[1]);
    double p = std::max(0.0, (dir[0] * xi[0] + dir[1] * xi[1]) / n);
    return std::hypot(xi[0] - p * dir[0] / n, xi[1] - p * dir[1] / n);
}

inline bool w_member_2d(const WParams& w, double x1, double x2, double tmax = 50.0, int steps = 20000)
{
    double ax = std::abs(x1);
    if (!(ax < w.r && x2 > -w.delta - w.c * ax && x2 <= w.delta + w.c * ax))
        return false;
    if (x2 == w.delta + w.c * ax)
        return false;
    for (double sg : {1.0, -1.0})
        if (std::abs(sg * w.delta - x2) <= w.cp * ax)
            return false;
    for (double u : {1.0, -1.0}) {
        for (double s : {1.0, -1.0}) {
            auto point = [&](double t) { return std::array<double, 2>{x1 + t * u, x2 + s * w.cp * t}; };
            for (double sg : {1.0, -1.0}) {
                auto f = [&](double t) {
                    auto y = point(t);
                    return y[1] - sg * (w.delta + w.c * std::abs(y[0]));
                };
                double prev_t = 0, prev_f = f(0);
                for (int k = 1; k <= steps; ++k) {
                    double t = tmax * k / steps;
                    double ft = f(t);
                    if ((prev_f < 0) != (ft < 0) || ft == 0) {
                        double lo = prev_t, hi = t;
                        for (int it = 0; it < 200; ++it) {
                            double mid = 0.5 * (lo + hi);
                            if ((f(mid) < 0) == (prev_f < 0))
                                lo = mid;
                            else
                                hi = mid;
                        }
                        auto y = point(0.5 * (lo + hi));
                        if (!(std::abs(y[0]) < w.r))
                            return false;
                        double wy = y[0] > 0 ? 1.0 : -1.0;
                        std::array<double, 2> eta{s * w.cp * u, -1.0};
                        std::array<double, 2> ray{sg * w.c * wy, -1.0};
                        if (!(ray_dist2(ray, eta) < w.eps * std::hypot(eta[0], eta[1])))
                            return false;
                    }
                    prev_t = t;
                    prev_f = ft;
                }
            }
        }
    }
    return true;
}

}  // namespace oracle
