#include "sheafrig/degree.hpp"

#include "sheafrig/error.hpp"
#include "sheafrig/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace sheafrig {

namespace {

constexpr int kPrimes[] = {2, 3, 5, 7, 11, 13};

double halton(long index, int base)
{
    double f = 1.0, r = 0.0;
    while (index > 0) {
        f /= base;
        r += f * (index % base);
        index /= base;
    }
    return r;
}

std::string fmt(const Vec& v)
{
    std::ostringstream os;
    os << "(";
    for (int i = 0; i < v.size(); ++i)
        os << (i ? ", " : "") << v[i];
    os << ")";
    return os.str();
}

void validate(const DegreeQuery& q)
{
    const int d = q.map.dim;
    if (d < 1 || d > 4)
        throw Error(ErrorCode::InvalidArgument, "degree supports dimensions 1 to 4");
    if (!q.map.eval)
        throw Error(ErrorCode::InvalidArgument, "map has no evaluator");
    if (q.target_center.size() != d || q.regular_value.size() != d || q.window_lo.size() != d ||
        q.window_hi.size() != d)
        throw Error(ErrorCode::DimensionMismatch, "query vectors must match the map dimension");
    if (!((q.window_hi - q.window_lo).array() > 0).all())
        throw Error(ErrorCode::InvalidArgument, "empty preimage window");
    if (!(q.target_radius > 0))
        throw Error(ErrorCode::InvalidArgument, "target radius must be positive");
    if ((q.regular_value - q.target_center).norm() >= q.target_radius)
        throw Error(ErrorCode::InvalidArgument, "regular value outside the target ball");
    if (q.options.seeds_per_axis < 1)
        throw Error(ErrorCode::InvalidArgument, "need at least one seed per axis");
}

bool lex_less(const Vec& a, const Vec& b)
{
    for (int i = 0; i < a.size(); ++i)
        if (a[i] != b[i])
            return a[i] < b[i];
    return false;
}

void dedup_into(std::vector<Vec>& kept, const Vec& x, double tol)
{
    for (const auto& k : kept)
        if ((k - x).cwiseAbs().maxCoeff() <= tol)
            return;
    kept.push_back(x);
}

}  // namespace

std::vector<Vec> box_boundary_samples(const Vec& lo, const Vec& hi, int count)
{
    const int d = static_cast<int>(lo.size());
    std::vector<Vec> out;
    out.reserve(count);
    const int faces = 2 * d;
    for (int k = 0; k < count; ++k) {
        const int face = k % faces;
        const long idx = k / faces + 1;
        const int axis = face / 2;
        Vec x(d);
        int b = 0;
        for (int i = 0; i < d; ++i) {
            if (i == axis)
                x[i] = (face % 2) ? hi[i] : lo[i];
            else
                x[i] = lo[i] + (hi[i] - lo[i]) * halton(idx, kPrimes[b++]);
        }
        out.push_back(x);
    }
    return out;
}

DegreeReport degree_report(const DegreeQuery& q)
{
    validate(q);
    const int d = q.map.dim;
    const auto& opt = q.options;
    DegreeReport rep;

    // properness on the window boundary
    rep.boundary_clearance = std::numeric_limits<double>::infinity();
    for (const auto& x : box_boundary_samples(q.window_lo, q.window_hi, opt.boundary_samples)) {
        if (q.admissible && !q.admissible(x))
            continue;
        ++rep.boundary_samples;
        const double gap = (q.map(x) - q.target_center).norm() - q.target_radius;
        rep.boundary_clearance = std::min(rep.boundary_clearance, gap);
        if (gap < 0)
            throw Error(ErrorCode::PropernessViolation,
                        "boundary point " + fmt(x) + " maps into the target ball");
    }

    const int m = opt.seeds_per_axis;
    long total = 1;
    for (int i = 0; i < d; ++i)
        total *= m;
    rep.seeds = total;
    const Vec h = (q.window_hi - q.window_lo) / m;
    const double half_diag = 0.5 * h.norm();
    const Vec slack = 0.25 * (q.window_hi - q.window_lo);
    const Vec far_lo = q.window_lo - slack, far_hi = q.window_hi + slack;
    const Vec edge = 1e-12 * (q.window_hi - q.window_lo);
    const double tol = opt.polish_tol * std::max(1.0, q.regular_value.norm());
    // full Newton sweeps up to 3-D; in 4-D only seeds whose residual is within
    // a first-order reach of a root are polished
    const bool prefilter = d >= 4;

    const std::size_t chunks = 64;
    std::vector<std::vector<Vec>> found(chunks);
    std::vector<long> runs(chunks, 0);
    parallel_chunks(static_cast<std::size_t>(total), chunks, [&](std::size_t c, std::size_t b, std::size_t e) {
        for (std::size_t i = b; i < e; ++i) {
            Vec x(d);
            std::size_t rest = i;
            for (int k = 0; k < d; ++k) {
                x[k] = q.window_lo[k] + (static_cast<double>(rest % m) + 0.5) * h[k];
                rest /= m;
            }
            if (!q.map.domain.contains(x))
                continue;
            Vec r = q.map(x) - q.regular_value;
            double nr = r.norm();
            if (prefilter && nr > 4.0 * half_diag * q.map.jac(x).norm())
                continue;
            ++runs[c];
            bool ok = false;
            for (int it = 0; it < opt.max_newton; ++it) {
                if (nr <= tol) {
                    ok = true;
                    break;
                }
                const Mat J = q.map.jac(x);
                Eigen::PartialPivLU<Mat> lu(J);
                if (std::abs(lu.determinant()) < 1e-300)
                    break;
                const Vec step = lu.solve(r);
                double lambda = 1.0;
                bool moved = false;
                while (lambda > 1.0 / 1024) {
                    Vec xn = x - lambda * step;
                    if (!q.map.domain.contains(xn))
                        break;
                    Vec rn = q.map(xn) - q.regular_value;
                    if (rn.norm() < nr) {
                        x = xn;
                        r = rn;
                        nr = rn.norm();
                        moved = true;
                        break;
                    }
                    lambda *= 0.5;
                }
                if (!moved)
                    break;
                if (((x - far_lo).array() < 0).any() || ((far_hi - x).array() < 0).any())
                    break;
            }
            if (!ok)
                continue;
            if (((x - q.window_lo + edge).array() < 0).any() || ((q.window_hi + edge - x).array() < 0).any())
                continue;
            if (q.admissible && !q.admissible(x))
                continue;
            dedup_into(found[c], x, opt.dedup_tol);
        }
    });

    std::vector<Vec> all;
    for (std::size_t c = 0; c < chunks; ++c) {
        rep.newton_runs += runs[c];
        for (auto& x : found[c])
            all.push_back(x);
    }
    std::sort(all.begin(), all.end(), lex_less);
    for (const auto& x : all)
        dedup_into(rep.preimages, x, opt.dedup_tol);
    std::sort(rep.preimages.begin(), rep.preimages.end(), lex_less);

    rep.min_abs_det = std::numeric_limits<double>::infinity();
    for (const auto& x : rep.preimages) {
        const double det = q.map.jac(x).determinant();
        rep.determinants.push_back(det);
        rep.min_abs_det = std::min(rep.min_abs_det, std::abs(det));
        if (std::abs(det) < opt.det_threshold)
            throw Error(ErrorCode::NearCriticalValue, "Jacobian determinant " + std::to_string(det) +
                                                          " at preimage " + fmt(x));
        rep.degree += det > 0 ? 1 : -1;
    }
    return rep;
}

int degree(const DegreeQuery& q) { return degree_report(q).degree; }

DegreeQuery box_query(const MapWithJacobian& f, const Vec& target_center, double target_radius,
                      const Vec& regular_value, double half_width)
{
    DegreeQuery q;
    q.map = f;
    q.target_center = target_center;
    q.target_radius = target_radius;
    q.regular_value = regular_value;
    q.window_lo = Vec::Constant(f.dim, -half_width);
    q.window_hi = Vec::Constant(f.dim, half_width);
    return q;
}

StabilityResult degree_stability(const MapWithJacobian& f, const MapWithJacobian& g, double r, double R,
                                 const DegreeQuery& base)
{
    if (!(r > 0) || !(r < R))
        throw Error(ErrorCode::InvalidArgument, "need 0 < r < R");
    if (f.dim != g.dim)
        throw Error(ErrorCode::DimensionMismatch, "f and g differ in dimension");
    DegreeQuery q = base;
    q.map = f;
    q.target_radius = r / 2;
    validate(q);
    const int d = f.dim;
    StabilityResult out;

    // f^-1(closed B_r) inside the window
    const auto boundary = box_boundary_samples(q.window_lo, q.window_hi, q.options.boundary_samples);
    for (const auto& x : boundary)
        if ((f(x) - q.target_center).norm() <= r)
            throw Error(ErrorCode::HypothesisUnverified,
                        "f sends boundary point " + fmt(x) + " into the closed r-ball");

    const int m = std::min(q.options.seeds_per_axis, d <= 2 ? 60 : (d == 3 ? 20 : 12));
    long total = 1;
    for (int i = 0; i < d; ++i)
        total *= m;
    const Vec h = (q.window_hi - q.window_lo) / std::max(1, m - 1);
    double sup = 0.0;
    auto probe = [&](const Vec& x) {
        sup = std::max(sup, (f(x) - g(x)).norm());
        ++out.samples;
    };
    for (long i = 0; i < total; ++i) {
        Vec x(d);
        long rest = i;
        for (int k = 0; k < d; ++k) {
            x[k] = q.window_lo[k] + static_cast<double>(rest % m) * h[k];
            rest /= m;
        }
        probe(x);
    }
    for (const auto& x : boundary)
        probe(x);
    out.sup_distance = sup;
    if (sup >= r / 2)
        throw Error(ErrorCode::HypothesisUnverified,
                    "sampled sup |f - g| = " + std::to_string(sup) + " is not below r/2");

    out.deg_f = degree(q);
    q.map = g;
    out.deg_g = degree(q);
    out.certified_equal = out.deg_f == out.deg_g;
    return out;
}

SliceResult slice_degree_invariance(const MapFamily& family, const DegreeQuery& base, int points)
{
    if (points < 2)
        throw Error(ErrorCode::InvalidArgument, "need at least two slices");
    SliceResult out;
    for (int k = 0; k < points; ++k) {
        const double t = static_cast<double>(k) / (points - 1);
        DegreeQuery q = base;
        q.map = family(t);
        out.t.push_back(t);
        out.degrees.push_back(degree(q));
    }
    out.all_equal = std::all_of(out.degrees.begin(), out.degrees.end(),
                                [&](int v) { return v == out.degrees.front(); });
    return out;
}

int graph_projection_degree(const TwistedGraph& graph, double r, double A, const GraphDegreeOptions& opt)
{
    const int n = graph.half_dim();
    const int d = 2 * n;
    if (graph.phi.dim != d || n < 1 || n > 2)
        throw Error(ErrorCode::InvalidArgument, "graph degree needs phase-space dimension 2 or 4");
    if (!(r > 0) || !(A > 0))
        throw Error(ErrorCode::InvalidArgument, "need r > 0 and A > 0");

    Vec lo(d), hi(d);
    lo << Vec::Constant(n, -r), Vec::Constant(n, -3 * A * r);
    hi = -lo;

    // Lambda cap (B_r x B_3Ar) must sit inside B_r x B_2Ar
    auto check = [&](const Vec& z) {
        const Vec p = graph.point(z);
        const double base = p.head(d).norm(), fiber = p.tail(d).norm();
        if (base < r && fiber < 3 * A * r && fiber >= 2 * A * r)
            throw Error(ErrorCode::WindowBoundViolated,
                        "graph point over " + fmt(z) + " has fiber norm " + std::to_string(fiber) +
                            " >= 2Ar = " + std::to_string(2 * A * r));
    };
    const int m = opt.window_samples_per_axis;
    long total = 1;
    for (int i = 0; i < d; ++i)
        total *= m;
    const Vec h = (hi - lo) / m;
    for (long i = 0; i < total; ++i) {
        Vec z(d);
        long rest = i;
        for (int k = 0; k < d; ++k) {
            z[k] = lo[k] + (static_cast<double>(rest % m) + 0.5) * h[k];
            rest /= m;
        }
        check(z);
    }
    for (const auto& s : graph.samples)
        check(s.head(d));

    MapWithJacobian phi = graph.phi;
    DegreeQuery q;
    q.map.dim = d;
    q.map.domain = phi.domain;
    q.map.eval = [phi, n](const Vec& z) -> Vec {
        Vec out(2 * n);
        out << z.head(n), phi(z).head(n);
        return out;
    };
    q.map.jacobian = [phi, n](const Vec& z) -> Mat {
        Mat J = Mat::Zero(2 * n, 2 * n);
        J.topLeftCorner(n, n).setIdentity();
        J.bottomRows(n) = phi.jac(z).topRows(n);
        return J;
    };
    q.admissible = [phi, n, A, r](const Vec& z) {
        const Vec w = phi(z);
        Vec fiber(2 * n);
        fiber << z.tail(n), w.tail(n);
        return fiber.norm() < 3 * A * r;
    };
    q.target_center = Vec::Zero(d);
    q.target_radius = r;
    q.regular_value = Vec::Zero(d);
    q.window_lo = lo;
    q.window_hi = hi;
    q.options = opt.degree;
    return degree(q);
}

}  // namespace sheafrig
