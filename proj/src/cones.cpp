#include "sheafrig/cones.hpp"

#include "sheafrig/error.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>

namespace sheafrig {

namespace {

constexpr double kPi = std::numbers::pi;

int numeric_rank(const Mat& m, double tol)
{
    if (m.rows() == 0 || m.cols() == 0)
        return 0;
    Eigen::JacobiSVD<Mat> svd(m);
    const auto& s = svd.singularValues();
    double scale = std::max(1.0, s(0));
    int r = 0;
    for (int i = 0; i < s.size(); ++i)
        if (s(i) > tol * scale)
            ++r;
    return r;
}

// orthonormal basis (columns) of the null space of m (cols = dim)
Mat null_space(const Mat& m, int dim, double tol)
{
    if (m.rows() == 0)
        return Mat::Identity(dim, dim);
    Eigen::JacobiSVD<Mat> svd(m, Eigen::ComputeFullV);
    const auto& s = svd.singularValues();
    double scale = std::max(1.0, s.size() ? s(0) : 0.0);
    int r = 0;
    for (int i = 0; i < s.size(); ++i)
        if (s(i) > tol * scale)
            ++r;
    return svd.matrixV().rightCols(dim - r);
}

void for_each_subset(int n, int k, const std::function<void(const std::vector<int>&)>& f)
{
    std::vector<int> idx(k);
    for (int i = 0; i < k; ++i)
        idx[i] = i;
    if (k > n)
        return;
    while (true) {
        f(idx);
        int i = k - 1;
        while (i >= 0 && idx[i] == n - k + i)
            --i;
        if (i < 0)
            return;
        ++idx[i];
        for (int j = i + 1; j < k; ++j)
            idx[j] = idx[j - 1] + 1;
    }
}

void push_unique(std::vector<Vec>& out, const Vec& v, double tol)
{
    for (const auto& w : out)
        if ((w - v).norm() < tol)
            return;
    out.push_back(v);
}

Mat rows_to_mat(const std::vector<Vec>& rows, int dim)
{
    Mat m(rows.size(), dim);
    for (size_t i = 0; i < rows.size(); ++i)
        m.row(i) = rows[i].transpose();
    return m;
}

double ray_distance(const Vec& dir, const Vec& xi)
{
    double n = dir.norm();
    if (n == 0)
        return xi.norm();
    Vec u = dir / n;
    double p = std::max(0.0, u.dot(xi));
    return (xi - p * u).norm();
}

void require_nonzero(const Vec& xi)
{
    if (xi.size() == 0 || xi.norm() == 0.0)
        throw Error(ErrorCode::ZeroCovector, "thickening membership needs a nonzero covector");
}

}  // namespace

void RoundCone::validate() const
{
    if (dim < 1)
        throw Error(ErrorCode::InvalidArgument, "round cone dimension must be >= 1");
    if (!(slope > 0) || !std::isfinite(slope))
        throw Error(ErrorCode::InvalidArgument, "round cone slope must be positive");
}

bool RoundCone::contains(const Vec& v, double tol) const
{
    double vn = v(dim - 1);
    double rad = v.head(dim - 1).norm();
    return sign() * vn <= -slope * rad + tol * std::max(1.0, v.norm());
}

Vec RoundCone::boundary_ray(const Vec& meridian_dir) const
{
    Vec out = Vec::Zero(dim);
    if (dim > 1) {
        Vec w = meridian_dir.head(dim - 1);
        double nw = w.norm();
        if (nw == 0) {
            w = Vec::Zero(dim - 1);
            w(0) = 1;
        } else {
            w /= nw;
        }
        out.head(dim - 1) = w;
    }
    out(dim - 1) = -sign() * slope;
    return out / out.norm();
}

Mat extreme_generators(const Mat& A, int dim, double tol)
{
    Mat lin = null_space(A, dim, tol);  // lineality space of {A v >= 0}
    std::vector<Vec> gens;
    for (int j = 0; j < lin.cols(); ++j) {
        gens.push_back(lin.col(j));
        gens.push_back(-lin.col(j));
    }
    int d = dim - static_cast<int>(lin.cols());
    if (d > 0) {
        std::vector<Vec> rays;
        int m = static_cast<int>(A.rows());
        for_each_subset(m, d - 1, [&](const std::vector<int>& idx) {
            Mat eq(idx.size() + lin.cols(), dim);
            for (size_t i = 0; i < idx.size(); ++i)
                eq.row(i) = A.row(idx[i]);
            for (int j = 0; j < lin.cols(); ++j)
                eq.row(idx.size() + j) = lin.col(j).transpose();
            Mat ns = null_space(eq, dim, tol);
            if (ns.cols() != 1)
                return;
            Vec v = ns.col(0);
            for (double s : {1.0, -1.0}) {
                Vec w = s * v;
                if (m == 0 || (A * w).minCoeff() >= -tol * std::max(1.0, A.norm())) {
                    push_unique(rays, w.normalized(), 1e-8);
                    break;
                }
            }
        });
        for (auto& r : rays)
            gens.push_back(r);
    }
    return rows_to_mat(gens, dim);
}

PolyhedralCone PolyhedralCone::from_normals(const Mat& normals, int dim)
{
    if (dim < 1 || (normals.rows() > 0 && normals.cols() != dim))
        throw Error(ErrorCode::DimensionMismatch, "normal vectors must have the cone dimension");
    PolyhedralCone c;
    c.dim = dim;
    c.normals = normals.rows() ? normals : Mat(0, dim);
    c.generators = extreme_generators(c.normals, dim);
    // redundant normals are dropped by recomputing facets from the generators
    c.normals = extreme_generators(c.generators, dim);
    return c;
}

PolyhedralCone PolyhedralCone::from_generators(const Mat& generators, int dim)
{
    if (dim < 1 || (generators.rows() > 0 && generators.cols() != dim))
        throw Error(ErrorCode::DimensionMismatch, "generators must have the cone dimension");
    Mat g = generators.rows() ? generators : Mat(0, dim);
    PolyhedralCone c;
    c.dim = dim;
    c.normals = extreme_generators(g, dim);
    c.generators = extreme_generators(c.normals, dim);
    return c;
}

bool PolyhedralCone::contains(const Vec& v, double tol) const
{
    if (normals.rows() == 0)
        return true;
    return (normals * v).minCoeff() >= -tol * std::max(1.0, v.norm());
}

bool PolyhedralCone::consistent(double tol) const
{
    if (generators.rows() == 0 || normals.rows() == 0)
        return true;
    return (generators * normals.transpose()).minCoeff() >= -tol;
}

int PolyhedralCone::lineality_dim() const
{
    return dim - numeric_rank(normals, 1e-10);
}

RoundCone polar(const RoundCone& c)
{
    c.validate();
    RoundCone p = c;
    p.slope = 1.0 / c.slope;
    return p;
}

PolyhedralCone polar(const PolyhedralCone& c)
{
    PolyhedralCone p;
    p.dim = c.dim;
    p.normals = c.generators;
    p.generators = c.normals;
    return p;
}

RoundCone antipode(const RoundCone& c)
{
    RoundCone a = c;
    a.orientation = c.orientation == RoundCone::Orientation::Down ? RoundCone::Orientation::Up
                                                                  : RoundCone::Orientation::Down;
    return a;
}

PolyhedralCone antipode(const PolyhedralCone& c)
{
    PolyhedralCone a = c;
    a.normals = -c.normals;
    a.generators = -c.generators;
    return a;
}

bool is_proper(const RoundCone&) { return true; }
bool is_proper(const PolyhedralCone& c) { return c.lineality_dim() == 0; }
bool interior_nonempty(const RoundCone&) { return true; }
bool interior_nonempty(const PolyhedralCone& c) { return numeric_rank(c.generators, 1e-10) == c.dim; }

double distance_to(const RoundConeBoundary& c, const Vec& xi)
{
    if (xi.size() != c.cone.dim)
        throw Error(ErrorCode::DimensionMismatch, "covector dimension differs from cone dimension");
    return ray_distance(c.cone.boundary_ray(xi), xi);
}

double distance_to(const RaySet& c, const Vec& xi)
{
    double best = xi.norm();
    for (const auto& r : c.rays) {
        if (r.size() != xi.size())
            throw Error(ErrorCode::DimensionMismatch, "ray dimension differs from covector dimension");
        best = std::min(best, ray_distance(r, xi));
    }
    return best;
}

double distance_to(const PolyhedralCone& c, const Vec& xi)
{
    if (xi.size() != c.dim)
        throw Error(ErrorCode::DimensionMismatch, "covector dimension differs from cone dimension");
    if (c.contains(xi, 1e-14))
        return 0.0;
    // the projection lies in the relative interior of a face spanned by
    // linearly independent generators
    double best = xi.norm();
    int g = static_cast<int>(c.generators.rows());
    for (int k = 1; k <= std::min(g, c.dim); ++k) {
        for_each_subset(g, k, [&](const std::vector<int>& idx) {
            Mat G(c.dim, idx.size());
            for (size_t i = 0; i < idx.size(); ++i)
                G.col(i) = c.generators.row(idx[i]).transpose();
            auto qr = G.colPivHouseholderQr();
            if (qr.rank() < static_cast<int>(idx.size()))
                return;
            Vec coef = qr.solve(xi);
            if (coef.minCoeff() < -1e-12)
                return;
            best = std::min(best, (xi - G * coef).norm());
        });
    }
    return best;
}

bool thicken_contains(const RoundConeBoundary& c, double eps, const Vec& xi)
{
    require_nonzero(xi);
    return distance_to(c, xi) < eps * xi.norm();
}

bool thicken_contains(const RaySet& c, double eps, const Vec& xi)
{
    require_nonzero(xi);
    return distance_to(c, xi) < eps * xi.norm();
}

bool thicken_contains(const PolyhedralCone& c, double eps, const Vec& xi)
{
    require_nonzero(xi);
    return distance_to(c, xi) < eps * xi.norm();
}

ConicHull conv_conic(const ConicSample& sample)
{
    int dim = sample.rays.empty() ? static_cast<int>(sample.basepoint.size())
                                  : static_cast<int>(sample.rays.front().size());
    if (dim < 1)
        throw Error(ErrorCode::DimensionMismatch, "conic sample has no dimension");
    for (const auto& r : sample.rays) {
        if (r.size() != dim)
            throw Error(ErrorCode::DimensionMismatch, "rays of a conic sample must share a dimension");
        if (r.norm() == 0)
            throw Error(ErrorCode::ZeroCovector, "conic sample contains a zero ray");
    }
    std::vector<Vec> unit;
    for (const auto& r : sample.rays)
        unit.push_back(r.normalized());
    ConicHull out;
    out.basepoint = sample.basepoint;
    out.hull = PolyhedralCone::from_generators(rows_to_mat(unit, dim), dim);
    out.proper = is_proper(out.hull);
    return out;
}

SGammaX::SGammaX(Vec x, RoundCone gamma, double tol) : x_(std::move(x)), gamma_(gamma), tol_(tol)
{
    gamma_.validate();
    if (x_.size() != gamma_.dim)
        throw Error(ErrorCode::DimensionMismatch, "basepoint dimension differs from cone dimension");
}

bool SGammaX::contains(const Vec& y, const Vec& eta) const
{
    const int n = gamma_.dim;
    if (y.size() != n || eta.size() != n)
        throw Error(ErrorCode::DimensionMismatch, "point and covector must live in the cone's space");
    if (eta.norm() == 0)
        return false;
    const double o = gamma_.sign();
    const double c = gamma_.slope;
    Vec d = y - x_;
    double scale = std::max(1.0, y.norm());
    double rad = d.head(n - 1).norm();
    double dn = d(n - 1);
    Vec e = eta.normalized();
    if (d.norm() <= tol_ * scale) {
        // apex: every nonzero covector on the boundary of the antipodal polar
        return std::abs(o * e(n - 1) - e.head(n - 1).norm() / c) <= tol_;
    }
    Vec u = Vec::Zero(n - 1);
    if (n > 1 && rad > 0)
        u = d.head(n - 1) / rad;
    auto matches = [&](const Vec& cand) { return (e - cand.normalized()).norm() <= std::sqrt(tol_); };
    // boundary of x + gamma: o * d_n + c |d'| = 0, candidate = gradient (c u, o)
    if (std::abs(o * dn + c * rad) <= tol_ * scale) {
        Vec cand(n);
        cand.head(n - 1) = c * u;
        cand(n - 1) = o;
        if (n == 1 || rad > 0)
            if (matches(cand))
                return true;
    }
    // boundary of x + gamma^a: -o * d_n + c |d'| = 0, candidate = (-c u, o)
    if (std::abs(-o * dn + c * rad) <= tol_ * scale) {
        Vec cand(n);
        cand.head(n - 1) = -c * u;
        cand(n - 1) = o;
        if (n == 1 || rad > 0)
            if (matches(cand))
                return true;
    }
    return false;
}

SGammaX s_gamma_x(const Vec& x, const RoundCone& gamma) { return SGammaX(x, gamma); }

void validate_region(const Region& region)
{
    auto bad = [](const char* msg) { throw Error(ErrorCode::InvalidRegionParameters, msg); };
    auto pos = [](double v) { return v > 0 && std::isfinite(v); };
    std::visit(
        [&](const auto& r) {
            using T = std::decay_t<decltype(r)>;
            if constexpr (std::is_same_v<T, ZRegion>) {
                if (!pos(r.c) || !pos(r.r) || !(r.delta > 0))
                    bad("Z region needs c, r, delta > 0");
            } else if constexpr (std::is_same_v<T, WRegion>) {
                if (!pos(r.c) || !pos(r.r) || !(r.delta > 0) || !pos(r.eps))
                    bad("W region needs c, r, delta, eps > 0");
                if (!(r.c_prime > r.c) || !std::isfinite(r.c_prime))
                    bad("W region needs c' > c");
                if (r.angle_samples < 2)
                    bad("W region needs at least two direction samples");
            } else if constexpr (std::is_same_v<T, URegion>) {
                if (!pos(r.c) || !pos(r.r) || !pos(r.s))
                    bad("U region needs c, r, s > 0");
                if (!(r.r < r.s / r.c))
                    bad("U region needs r < s / c");
            } else if constexpr (std::is_same_v<T, BallRegion>) {
                if (!pos(r.radius) || r.center.size() < 1)
                    bad("ball needs a center and a positive radius");
            } else {
                if (r.index < 0 || r.index > 3 || !pos(r.ladder.r1))
                    bad("ladder window index must be 0..3");
            }
        },
        region);
}

namespace {

bool in_z(double c, double r, double delta, double rad, double xn)
{
    return rad < r && xn > -delta - c * rad && xn <= delta + c * rad;
}

// Covector condition and ball condition for one line direction in V'.
// x' = (px, 0) in the plane spanned by x' and u = (cos phi, sin phi).
bool w_direction_ok(const WRegion& w, double px, double xn, double ux, double uy)
{
    const double c = w.c, cp = w.c_prime;
    const double A = cp * cp - c * c;
    const double pdot = px * ux;
    for (int s : {1, -1}) {          // nappe of the boundary double cone through x
        for (int sg : {1, -1}) {     // upper or lower surface of Z
            double a = xn - sg * w.delta;
            double B = 2.0 * (s * cp * a - c * c * pdot);
            double C = a * a - c * c * px * px;
            double disc = B * B - 4 * A * C;
            if (disc < 0)
                continue;
            double sq = std::sqrt(disc);
            for (double t : {(-B - sq) / (2 * A), (-B + sq) / (2 * A)}) {
                if (!(t > 0))
                    continue;
                double yn = xn + s * cp * t;
                double yx = px + t * ux, yy = t * uy;
                double yrad = std::hypot(yx, yy);
                double lhs = yn - sg * w.delta;
                if (sg * lhs < -1e-12 * std::max(1.0, std::abs(yn)))
                    continue;  // spurious root of the squared equation
                if (std::abs(lhs - sg * c * yrad) > 1e-9 * std::max(1.0, std::abs(yn)))
                    continue;
                if (!(yrad < w.r))
                    return false;
                if (yrad == 0)
                    return false;
                // antipodal S_x covector at y: (s c' u, -1)
                double ex = s * cp * ux, ey = s * cp * uy, en = -1.0;
                // SS(k_Z) ray at y: upper surface (c w, -1), lower (-c w, -1)
                double wx = yx / yrad, wy = yy / yrad;
                double rx = sg * c * wx, ry = sg * c * wy, rn = -1.0;
                double rnorm = std::sqrt(rx * rx + ry * ry + rn * rn);
                double proj = std::max(0.0, (ex * rx + ey * ry + en * rn) / rnorm);
                double dx = ex - proj * rx / rnorm, dy = ey - proj * ry / rnorm, dn = en - proj * rn / rnorm;
                double dist = std::sqrt(dx * dx + dy * dy + dn * dn);
                double enorm = std::sqrt(ex * ex + ey * ey + en * en);
                if (!(dist < w.eps * enorm))
                    return false;
            }
        }
    }
    return true;
}

bool w_contains(const WRegion& w, const Vec& x)
{
    const int n = static_cast<int>(x.size());
    if (n < 2)
        throw Error(ErrorCode::DimensionMismatch, "W regions live in dimension >= 2");
    double px = x.head(n - 1).norm();
    double xn = x(n - 1);
    if (!in_z(w.c, w.r, w.delta, px, xn))
        return false;
    // x on the closed upper boundary puts the apex into I; its fiber is a full cone
    if (std::abs(xn - w.delta - w.c * px) <= 1e-12 * std::max(1.0, std::abs(xn)))
        return false;
    // (0, +-delta) outside the closed double cone |y_n - x_n| <= c' |y' - x'|
    for (double sg : {1.0, -1.0})
        if (std::abs(sg * w.delta - xn) <= w.c_prime * px)
            return false;
    if (n == 2) {
        // V' = R: directions +-1, and x' may be negative; mirror to px >= 0
        return w_direction_ok(w, px, xn, 1.0, 0.0) && w_direction_ok(w, px, xn, -1.0, 0.0);
    }
    for (int k = 0; k < w.angle_samples; ++k) {
        double phi = kPi * k / (w.angle_samples - 1);
        if (!w_direction_ok(w, px, xn, std::cos(phi), std::sin(phi)))
            return false;
    }
    return true;
}

}  // namespace

bool window_contains(const Window& w, const Vec& point)
{
    const int n = static_cast<int>(point.size());
    if (n < 1)
        throw Error(ErrorCode::DimensionMismatch, "empty point");
    return point.head(n - 1).norm() < w.ball_radius && point(n - 1) > w.lo && point(n - 1) < w.hi;
}

bool region_contains(const Region& region, const Vec& point)
{
    validate_region(region);
    return std::visit(
        [&](const auto& r) -> bool {
            using T = std::decay_t<decltype(r)>;
            const int n = static_cast<int>(point.size());
            if constexpr (std::is_same_v<T, BallRegion>) {
                if (r.center.size() != n)
                    throw Error(ErrorCode::DimensionMismatch, "point and ball center differ in dimension");
                return (point - r.center).norm() < r.radius;
            } else if constexpr (std::is_same_v<T, LadderWindow>) {
                return window_contains(r.ladder.windows[r.index], point);
            } else {
                if (n < 1)
                    throw Error(ErrorCode::DimensionMismatch, "empty point");
                double rad = point.head(n - 1).norm();
                double xn = point(n - 1);
                if constexpr (std::is_same_v<T, ZRegion>)
                    return in_z(r.c, r.r, r.delta, rad, xn);
                else if constexpr (std::is_same_v<T, URegion>)
                    return rad < r.r && xn > -r.s && xn < r.s - r.c * rad;
                else
                    return w_contains(r, point);
            }
        },
        region);
}

CutoffParams cutoff_params(double c1, double c2)
{
    if (!(c1 > 0) || !(c2 > c1) || !std::isfinite(c2))
        throw Error(ErrorCode::InvalidArgument, "cutoff parameters need c2 > c1 > 0");
    // the boundary of gamma_s polar sits at angle atan(s) from -e_n
    double a1 = std::atan(c1), a2 = std::atan(c2);
    double mid = 0.5 * (a1 + a2);
    double margin = 0.5 * (a2 - a1);
    return {std::tan(mid), 2.0 * std::sin(margin / 4.0)};
}

bool verify_cutoff_inclusion(double c1, double c2, double c, double eps, int samples)
{
    double a1 = std::atan(c1), a2 = std::atan(c2), beta = std::atan(c);
    // unit covector at angle alpha from -e_n; distance to the boundary cone of
    // gamma_c polar is sin|alpha - beta| (or 1 past a right angle)
    auto dist = [&](double alpha) {
        double th = std::abs(alpha - beta);
        return th >= kPi / 2 ? 1.0 : std::sin(th);
    };
    auto check = [&](double alpha) { return !(dist(alpha) < eps) || (alpha >= a1 && alpha <= a2); };
    for (int k = 0; k <= samples; ++k)
        if (!check(kPi * k / samples))
            return false;
    if (eps < 1) {
        double half = std::asin(eps);
        for (int k = 0; k <= samples; ++k) {
            double alpha = beta - half + 2 * half * k / samples;
            if (!check(std::clamp(alpha, 0.0, kPi)))
                return false;
        }
        // just inside both band edges
        for (double sgn : {-1.0, 1.0}) {
            double alpha = beta + sgn * half * (1 - 1e-12);
            if (!check(std::clamp(alpha, 0.0, kPi)))
                return false;
        }
    }
    return true;
}

namespace {

// meridian half-disk of radius rho about (0, center_n); membership depends
// only on (|x'|, x_n) for the rotation-invariant regions
bool meridian_ball_inside(const Region& region, int dim, double center_n, double rho)
{
    constexpr int kRadii = 24, kAngles = 96;
    Vec p = Vec::Zero(dim);
    for (int i = 1; i <= kRadii; ++i) {
        double rr = rho * i / kRadii;
        for (int j = 0; j <= kAngles; ++j) {
            double th = kPi * j / kAngles;
            p.setZero();
            if (dim > 1)
                p(0) = rr * std::sin(th);
            p(dim - 1) = center_n + rr * std::cos(th);
            if (!region_contains(region, p))
                return false;
        }
    }
    return true;
}

template <class Pred>
double bisect_radius(Pred inside, double hi)
{
    if (inside(hi))
        return hi;
    double lo = 0;
    while (hi - lo > 1e-6 * hi) {
        double mid = 0.5 * (lo + hi);
        if (inside(mid))
            lo = mid;
        else
            hi = mid;
    }
    return lo;
}

}  // namespace

SplitRadius split_radius(double c1, double c2, double r, int dim)
{
    if (!(r > 0) || !std::isfinite(r))
        throw Error(ErrorCode::InvalidArgument, "split radius needs r > 0");
    if (dim < 2)
        throw Error(ErrorCode::InvalidArgument, "split radius needs dimension >= 2");
    auto cp = cutoff_params(c1, c2);
    SplitRadius out{};
    out.c = cp.c;
    out.eps = cp.eps;
    out.c_prime = cp.c + cp.eps / 2;
    out.delta = cp.eps * r / 4;
    Region w = WRegion{out.c, out.c_prime, r, out.delta, out.eps};
    Vec origin = Vec::Zero(dim);
    if (!region_contains(w, origin))
        throw Error(ErrorCode::InvalidRegionParameters, "origin is not in the W region");
    out.r1 = bisect_radius([&](double rho) { return meridian_ball_inside(w, dim, 0.0, rho); }, r);
    return out;
}

double inscribed_radius(const Region& region, const Vec& center, double hi)
{
    const int dim = static_cast<int>(center.size());
    if (!region_contains(region, center))
        return 0.0;
    auto inside = [&](double rho) {
        constexpr int kRadii = 16, kAngles = 128;
        Vec p(dim);
        for (int i = 1; i <= kRadii; ++i) {
            for (int j = 0; j < kAngles; ++j) {
                double th = 2 * kPi * j / kAngles;
                p = center;
                double rr = rho * i / kRadii;
                if (dim > 1)
                    p(0) += rr * std::sin(th);
                p(dim - 1) += rr * std::cos(th);
                if (!region_contains(region, p))
                    return false;
            }
        }
        return true;
    };
    return bisect_radius(inside, hi);
}

WindowLadder window_ladder(double r1, double c1)
{
    if (!(r1 > 0) || !(c1 > 0))
        throw Error(ErrorCode::InvalidArgument, "window ladder needs r1, c1 > 0");
    WindowLadder L;
    L.r1 = r1;
    L.c1 = c1;
    const double lo[4] = {-r1 / 8, -r1 / 4, -r1 / 2, -r1};
    const double hi[4] = {-r1 / 16, 0, r1 / 2, r1};
    double min_tp = INFINITY;
    for (int i = 0; i < 4; ++i) {
        L.t[i] = 0.5 * (lo[i] + hi[i]);
        L.t_prime[i] = 0.5 * (hi[i] - lo[i]);
        L.domains[i] = {0.0, lo[i], hi[i]};
        min_tp = std::min(min_tp, L.t_prime[i]);
    }
    L.rho = 0.5 * min_tp / c1;
    for (int i = 0; i < 4; ++i) {
        L.mu[i] = (5.0 - (i + 1)) / 100.0;
        L.eps[i] = (i + 1) * L.rho / 8.0;
        double half = L.t_prime[i] * (1 - L.mu[i]);
        L.windows[i] = {L.eps[i], L.t[i] - half, L.t[i] + half};
    }
    return L;
}

}  // namespace sheafrig
