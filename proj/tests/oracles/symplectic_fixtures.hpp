#pragma once
// Random symplectic matrices, sample disks and noisy near-symplectic maps.

#include "oracles/symplectic_oracle.hpp"

#include "sheafrig/symplectic.hpp"

#include <unsupported/Eigen/MatrixFunctions>

#include <cmath>
#include <random>
#include <vector>

namespace oracle {

using namespace sheafrig;


inline Mat J1()
{
    Mat J(2, 2);
    J << 0, 1, -1, 0;
    return J;
}

// exp(-Omega S) for a random symmetric S of the given size
inline Mat random_symplectic(std::mt19937& rng, int n, double size)
{
    std::normal_distribution<double> g(0.0, size);
    Mat S(2 * n, 2 * n);
    for (int i = 0; i < 2 * n; ++i)
        for (int j = i; j < 2 * n; ++j)
            S(i, j) = S(j, i) = g(rng);
    Mat A = -standard_omega(n) * S;
    return A.exp();
}

inline Mat random_matrix(std::mt19937& rng, int rows, int cols)
{
    std::normal_distribution<double> g(0.0, 1.0);
    Mat M(rows, cols);
    for (int i = 0; i < rows; ++i)
        for (int j = 0; j < cols; ++j)
            M(i, j) = g(rng);
    return M;
}

inline Mat random_int_matrix(std::mt19937& rng, int rows, int cols)
{
    std::uniform_int_distribution<int> u(-3, 3);
    Mat M(rows, cols);
    for (;;) {
        for (int i = 0; i < rows; ++i)
            for (int j = 0; j < cols; ++j)
                M(i, j) = u(rng);
        if (rank(M) == cols)
            return M;
    }
}

inline std::vector<Vec> disk_points(int d, double radius, int count, unsigned seed)
{
    std::mt19937 rng(seed);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    std::vector<Vec> out;
    while (static_cast<int>(out.size()) < count) {
        Vec z(d);
        for (int i = 0; i < d; ++i)
            z[i] = u(rng);
        if (z.norm() < 1)
            out.push_back(radius * z);
    }
    return out;
}


// linear symplectic + 1e-3 smooth noise + a C^1 term |x|^2.5
inline MapWithJacobian noisy_map(std::mt19937& rng)
{
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    const Mat U = random_symplectic(rng, 1, 0.4);
    double a[6];
    for (double& v : a)
        v = 3 * u(rng);
    MapWithJacobian f;
    f.dim = 2;
    f.eval = [U, a0 = a[0], a1 = a[1], a2 = a[2], a3 = a[3], a4 = a[4], a5 = a[5]](const Vec& z) -> Vec {
        Vec w = U * z;
        w[0] += 1e-3 * (std::sin(a0 * z[0] + a1 * z[1]) + std::pow(std::abs(z[0]), 2.5));
        w[1] += 1e-3 * std::cos(a2 * z[0] + a3 * z[1] + a4) * (1 + 0.3 * std::sin(a5 * z[1]));
        return w;
    };
    return f;
}

}  // namespace oracle
