#include "sheafrig/symplectic.hpp"

#include "numerics.hpp"
#include "sheafrig/error.hpp"
#include "sheafrig/parallel.hpp"

#include <boost/multiprecision/cpp_int.hpp>
#include <unsupported/Eigen/MatrixFunctions>

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace sheafrig {

using detail::ball_samples;
using detail::gauss_legendre01;

Mat standard_omega(int n)
{
    Mat O = Mat::Zero(2 * n, 2 * n);
    O.topRightCorner(n, n) = -Mat::Identity(n, n);
    O.bottomLeftCorner(n, n) = Mat::Identity(n, n);
    return O;
}

Mat SymplecticSpace::omega() const { return standard_omega(n); }

double symplectic_residual(const Mat& J)
{
    if (J.rows() != J.cols())
        throw Error(ErrorCode::DimensionMismatch, "Jacobian must be square");
    if (J.rows() % 2 != 0)
        throw Error(ErrorCode::OddDimension, "symplectic residual needs even dimension");
    const Mat O = standard_omega(static_cast<int>(J.rows()) / 2);
    return (J.transpose() * O * J - O).cwiseAbs().maxCoeff();
}

double symplectic_residual(const MapWithJacobian& phi, const std::vector<Vec>& points)
{
    if (phi.dim % 2 != 0)
        throw Error(ErrorCode::OddDimension, "symplectic residual needs even dimension");
    double worst = 0.0;
    for (const auto& p : points)
        worst = std::max(worst, symplectic_residual(phi.jac(p)));
    return worst;
}

// ---------------------------------------------------------------- linear tests

namespace {

using boost::multiprecision::cpp_int;

// entries that are multiples of 2^-10 and not huge are treated as exact
bool small_dyadic(const Mat& W)
{
    for (int i = 0; i < W.rows(); ++i)
        for (int j = 0; j < W.cols(); ++j) {
            const double v = W(i, j) * 1024.0;
            if (!(std::abs(v) < 1e15) || v != std::round(v))
                return false;
        }
    return true;
}

std::vector<std::vector<cpp_int>> to_int(const Mat& M)
{
    std::vector<std::vector<cpp_int>> out(M.rows(), std::vector<cpp_int>(M.cols()));
    for (int i = 0; i < M.rows(); ++i)
        for (int j = 0; j < M.cols(); ++j)
            out[i][j] = cpp_int(static_cast<long long>(std::llround(M(i, j))));
    return out;
}

// fraction-free Gaussian elimination
int bareiss_rank(std::vector<std::vector<cpp_int>> a)
{
    const int rows = static_cast<int>(a.size());
    if (rows == 0)
        return 0;
    const int cols = static_cast<int>(a[0].size());
    cpp_int prev = 1;
    int rank = 0;
    for (int c = 0; c < cols && rank < rows; ++c) {
        int piv = -1;
        for (int r = rank; r < rows; ++r)
            if (a[r][c] != 0) {
                piv = r;
                break;
            }
        if (piv < 0)
            continue;
        std::swap(a[piv], a[rank]);
        for (int r = rank + 1; r < rows; ++r) {
            for (int k = c + 1; k < cols; ++k)
                a[r][k] = (a[r][k] * a[rank][c] - a[r][c] * a[rank][k]) / prev;
            a[r][c] = 0;
        }
        prev = a[rank][c];
        ++rank;
    }
    return rank;
}

int numeric_rank(const Mat& M, double tol)
{
    if (M.size() == 0)
        return 0;
    Eigen::JacobiSVD<Mat> svd(M);
    int r = 0;
    for (int i = 0; i < svd.singularValues().size(); ++i)
        if (svd.singularValues()[i] > tol)
            ++r;
    return r;
}

Mat orthonormal_basis(const Mat& W)
{
    Eigen::HouseholderQR<Mat> qr(W);
    return qr.householderQ() * Mat::Identity(W.rows(), W.cols());
}

// rank of W and of the Gram matrix W^T Omega W
std::pair<int, int> ranks(const Mat& W, int n)
{
    if (W.rows() != 2 * n)
        throw Error(ErrorCode::DimensionMismatch, "basis vectors must live in R^{2n}");
    const Mat O = standard_omega(n);
    if (small_dyadic(W)) {
        const Mat S = W * 1024.0;
        const Mat G = S.transpose() * O * S;
        return {bareiss_rank(to_int(S)), bareiss_rank(to_int(G))};
    }
    const double scale = std::max(1.0, W.cwiseAbs().maxCoeff());
    const int rw = numeric_rank(W / scale, 1e-10);
    if (rw < W.cols())
        return {rw, 0};
    const Mat Q = orthonormal_basis(W);
    return {rw, numeric_rank(Q.transpose() * O * Q, 1e-10)};
}

}  // namespace

// dim W^{perp omega} = 2n - k and W cap W^{perp omega} = ker(omega|_W) has
// dimension k - rank(G), so W is coisotropic iff rank(G) = 2k - 2n.
bool coisotropic_check(const Mat& W, const SymplecticSpace& space)
{
    const int k = static_cast<int>(W.cols());
    auto [rw, rg] = ranks(W, space.n);
    if (rw < k)
        throw Error(ErrorCode::RankDeficientBasis, "basis has rank " + std::to_string(rw) + " < " + std::to_string(k));
    return rg == 2 * k - 2 * space.n;
}

bool isotropic_check(const Mat& W, const SymplecticSpace& space)
{
    auto [rw, rg] = ranks(W, space.n);
    if (rw < W.cols())
        throw Error(ErrorCode::RankDeficientBasis, "basis is rank deficient");
    return rg == 0;
}

bool lagrangian_check(const Mat& W, const SymplecticSpace& space)
{
    return W.cols() == space.n && isotropic_check(W, space);
}

RhoLiftResult rho_lift_check(const Mat& S, double sigma0, const Vec& xi0)
{
    if (S.rows() % 2 != 0)
        throw Error(ErrorCode::OddDimension, "S must live in R^{2n}");
    const int n = static_cast<int>(S.rows()) / 2;
    if (xi0.size() != n)
        throw Error(ErrorCode::DimensionMismatch, "xi0 must have n entries");
    if (std::abs(sigma0) < 1e-12)
        throw Error(ErrorCode::ZeroSigma, "sigma0 must be nonzero");

    // d rho_q in coordinates (X, S; Xi, Sigma) -> (X; Xi/sigma0 - xi0 Sigma/sigma0^2)
    Mat D = Mat::Zero(2 * n, 2 * n + 2);
    D.topLeftCorner(n, n).setIdentity();
    D.block(n, n + 1, n, n) = Mat::Identity(n, n) / sigma0;
    D.block(n, 2 * n + 1, n, 1) = -xi0 / (sigma0 * sigma0);

    RhoLiftResult out;
    out.coisotropic_s = coisotropic_check(S, SymplecticSpace{n});

    // D^{-1}(S) = ker(N^T D) with N spanning the Euclidean complement of S
    Eigen::JacobiSVD<Mat> svd(S, Eigen::ComputeFullU);
    const int k = numeric_rank(S, 1e-10 * std::max(1.0, S.cwiseAbs().maxCoeff()));
    const Mat N = svd.matrixU().rightCols(2 * n - k);
    if (N.cols() == 0) {
        out.lift = Mat::Identity(2 * n + 2, 2 * n + 2);
    } else {
        const Mat C = N.transpose() * D;
        Eigen::JacobiSVD<Mat> cs(C, Eigen::ComputeFullV);
        const int rc = numeric_rank(C, 1e-12);
        out.lift = cs.matrixV().rightCols(2 * n + 2 - rc);
    }
    out.coisotropic_lift = coisotropic_check(out.lift, SymplecticSpace{n + 1});
    out.equal = out.coisotropic_s == out.coisotropic_lift;
    return out;
}

Mat lagrangian_complement(const Mat& L)
{
    if (L.rows() % 2 != 0)
        throw Error(ErrorCode::OddDimension, "L must live in R^{2n}");
    const int n = static_cast<int>(L.rows()) / 2;
    if (L.cols() != n || numeric_rank(L, 1e-10 * std::max(1.0, L.cwiseAbs().maxCoeff())) < n)
        throw Error(ErrorCode::NotLagrangian, "L must have dimension n");
    const Mat Q = orthonormal_basis(L);
    const Mat O = standard_omega(n);
    if ((Q.transpose() * O * Q).cwiseAbs().maxCoeff() > 1e-10)
        throw Error(ErrorCode::NotLagrangian, "L is not isotropic");
    return orthonormal_basis(O * Q);
}

// ---------------------------------------------------------------- normalization

namespace {

double min_singular(const Mat& M)
{
    Eigen::JacobiSVD<Mat> svd(M);
    return svd.singularValues().minCoeff();
}

// grid over B_r0 x B_Ar0 (cell centres of the bounding box)
template <class F>
void for_each_window_point(int n, double r0, double A, int m, F&& fn)
{
    const int d = 2 * n;
    long total = 1;
    for (int i = 0; i < d; ++i)
        total *= m;
    Vec z(d);
    for (long i = 0; i < total; ++i) {
        long rest = i;
        for (int k = 0; k < d; ++k) {
            const double half = k < n ? r0 : A * r0;
            z[k] = -half + (static_cast<double>(rest % m) + 0.5) * 2 * half / m;
            rest /= m;
        }
        if (z.head(n).norm() < r0 && z.tail(n).norm() < A * r0)
            fn(z);
    }
}

}  // namespace

bool gen_pos_holds(const MapWithJacobian& psi, double r0, double A, int grid_per_axis)
{
    const int n = psi.dim / 2;
    const double det0 = psi.jac(Vec::Zero(psi.dim)).topRightCorner(n, n).determinant();
    bool ok = true;
    for_each_window_point(n, r0, A, grid_per_axis, [&](const Vec& z) {
        if (!ok)
            return;
        const Vec w = psi(z);
        Vec base(2 * n), fiber(2 * n);
        base << z.head(n), w.head(n);
        fiber << z.tail(n), w.tail(n);
        if (base.norm() >= r0 || fiber.norm() >= A * r0)
            return;
        // graph bound for every r in (|base|, r0]
        if (fiber.norm() > A * base.norm() * (1 + 1e-9) + 1e-12) {
            ok = false;
            return;
        }
        // projection to the base stays a local diffeomorphism of the same orientation
        const double det = psi.jac(z).topRightCorner(n, n).determinant();
        if (det * det0 <= 0 || std::abs(det) < 0.1 * std::abs(det0))
            ok = false;
    });
    return ok;
}

NormalizationData gen_pos_normalize(const MapWithJacobian& phi, double R0, int grid_per_axis)
{
    if (phi.dim % 2 != 0)
        throw Error(ErrorCode::OddDimension, "phase space must be even-dimensional");
    if (!(R0 > 0) || !std::isfinite(R0))
        throw Error(ErrorCode::InvalidArgument, "domain radius must be positive and finite");
    const int d = phi.dim, n = d / 2;
    const Vec zero = Vec::Zero(d);
    if (phi(zero).norm() > 1e-9)
        throw Error(ErrorCode::InvalidArgument, "phi(0) must be 0");
    const Mat D = phi.jac(zero);
    const double scale = std::max(1.0, D.norm());
    if (min_singular(D) < 1e-10 * scale)
        throw Error(ErrorCode::SingularDifferential, "d phi(0) is not invertible");

    NormalizationData out;
    out.grid_per_axis = grid_per_axis;
    out.u = Mat::Identity(d, d);
    out.v = Mat::Identity(d, d);
    const double btol = 1e-8 * scale;
    if (min_singular(D.topRightCorner(n, n)) > btol) {
        out.passthrough = true;
    } else {
        // move a Lagrangian complement of L = d phi(0)(V x 0) onto V x 0
        const Mat P = lagrangian_complement(D.leftCols(n));
        Mat M(d, d);
        M << P, standard_omega(n) * P;
        out.v = M.transpose();
    }
    const Mat Dpsi = out.v * D * out.u;
    const Mat a = Dpsi.topLeftCorner(n, n), b = Dpsi.topRightCorner(n, n);
    const Mat c = Dpsi.bottomLeftCorner(n, n), dd = Dpsi.bottomRightCorner(n, n);
    if (min_singular(b) <= btol)
        throw Error(ErrorCode::SingularDifferential, "tangent graph of psi does not project onto V^2");
    const Mat binv = b.inverse();
    out.w.resize(d, d);
    out.w << -binv * a, binv, c - dd * binv * a, dd * binv;
    Eigen::JacobiSVD<Mat> ws(out.w);
    out.A = 2 * ws.singularValues()[0];

    out.psi = compose(affine_map(out.v), compose(phi, affine_map(out.u)));
    out.psi.domain = Domain::ball(zero, R0);

    // B_r0 x B_Ar0 must sit in the domain ball
    const double cap = R0 / std::sqrt(1 + out.A * out.A) * (1 - 1e-9);
    long pts = 0;
    for_each_window_point(n, cap, out.A, grid_per_axis, [&](const Vec&) { ++pts; });
    if (gen_pos_holds(out.psi, cap, out.A, grid_per_axis)) {
        out.r0 = cap;
    } else {
        double lo = 0.0, hi = cap;
        for (int it = 0; it < 40; ++it) {
            const double mid = 0.5 * (lo + hi);
            if (gen_pos_holds(out.psi, mid, out.A, grid_per_axis))
                lo = mid;
            else
                hi = mid;
        }
        if (lo <= cap * 1e-9)
            throw Error(ErrorCode::SingularDifferential, "no radius r0 satisfies the graph conditions");
        out.r0 = lo;
    }
    out.samples_checked = pts;
    return out;
}

// ---------------------------------------------------------------- window check

GraphWindowReport graph_window_check(const MapWithJacobian& psi, const MapWithJacobian& psi1, double r0, double A,
                                     double r, double eps, int samples)
{
    if (psi.dim != psi1.dim || psi.dim % 2 != 0)
        throw Error(ErrorCode::DimensionMismatch, "psi and psi1 must act on the same even-dimensional space");
    const int d = psi.dim, n = d / 2;
    if (!(0 < r && r < r0 / 4))
        throw Error(ErrorCode::PreconditionViolated, "0 < r < r0/4");
    if (!(0 < eps && eps < A * r / (A + 1)))
        throw Error(ErrorCode::PreconditionViolated, "0 < eps < Ar/(A+1)");
    if (!(r + eps < r0))
        throw Error(ErrorCode::PreconditionViolated, "r + eps < r0");
    if (!(A * r0 / 2 + eps < A * r0))
        throw Error(ErrorCode::PreconditionViolated, "A r0/2 + eps < A r0");
    if (!(A * (r + eps) + eps < 2 * A * r))
        throw Error(ErrorCode::PreconditionViolated, "A(r + eps) + eps < 2Ar");

    static const int primes[] = {2, 3, 5, 7, 11, 13, 17, 19};
    auto draw = [&](double rx, double rxi, int count) {
        std::vector<Vec> pts;
        for (long k = 1; static_cast<int>(pts.size()) < count && k < 200L * count; ++k) {
            Vec z(d);
            for (int i = 0; i < d; ++i)
                z[i] = (2 * detail::halton(k, primes[i]) - 1) * (i < n ? rx : rxi);
            if (z.head(n).norm() < rx && z.tail(n).norm() < rxi)
                pts.push_back(z);
        }
        return pts;
    };

    GraphWindowReport rep;
    for (const auto& p : draw(r0, A * r0, samples))
        rep.sup_distance = std::max(rep.sup_distance, (psi(p) - psi1(p)).norm());
    if (!(rep.sup_distance < eps))
        throw Error(ErrorCode::PreconditionViolated, "d(psi(p), psi1(p)) < eps on U");

    for (const auto& p : draw(r, A * r0 / 2, samples)) {
        const Vec y1 = psi1(p);
        Vec base(d), fiber(d);
        base << p.head(n), y1.head(n);
        fiber << p.tail(n), y1.tail(n);
        if (!(base.norm() < r && fiber.norm() < A * r0 / 2))
            continue;
        ++rep.samples;
        const bool in_u = p.head(n).norm() < r0 && p.tail(n).norm() < A * r0;
        const bool near = (psi(p) - y1).norm() < eps;
        const bool bounded = fiber.norm() < 2 * A * r;
        if (!(in_u && near && bounded))
            ++rep.failures;
    }
    rep.inclusion = rep.failures == 0;
    return rep;
}

}  // namespace sheafrig
