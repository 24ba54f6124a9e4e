#pragma once

// Direct linear-algebra oracles: W^{perp omega} as a kernel and containment
// by a rank comparison, without going through Gram-matrix ranks.

#include <Eigen/Dense>

namespace oracle {

using Mat = Eigen::MatrixXd;

inline Mat omega(int n)
{
    Mat O = Mat::Zero(2 * n, 2 * n);
    O.topRightCorner(n, n) = -Mat::Identity(n, n);
    O.bottomLeftCorner(n, n) = Mat::Identity(n, n);
    return O;
}

inline int rank(const Mat& M)
{
    if (M.cols() == 0)
        return 0;
    Eigen::FullPivLU<Mat> lu(M);
    lu.setThreshold(1e-9);
    return static_cast<int>(lu.rank());
}

inline Mat omega_orthogonal(const Mat& W, int n)
{
    // v with w^T Omega v = 0 for all columns w
    Eigen::FullPivLU<Mat> lu(W.transpose() * omega(n));
    lu.setThreshold(1e-9);
    return lu.kernel();
}

inline bool coisotropic(const Mat& W, int n)
{
    const Mat K = omega_orthogonal(W, n);
    if (K.cols() == 0 || (K.cols() == 1 && K.norm() == 0))
        return true;
    Mat both(W.rows(), W.cols() + K.cols());
    both << W, K;
    return rank(both) == rank(W);
}

}  // namespace oracle
