#pragma once

#include <Eigen/Dense>

#include <variant>
#include <vector>

namespace sheafrig {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

// gamma_c = {x_n <= -c |x'|} when down; its antipode when up.
struct RoundCone {
    enum class Orientation { Down, Up };
    int dim = 2;
    double slope = 1.0;
    Orientation orientation = Orientation::Down;

    void validate() const;
    double sign() const { return orientation == Orientation::Down ? 1.0 : -1.0; }
    bool contains(const Vec& v, double tol = 1e-12) const;
    // unit covector direction of the boundary ray through the meridian of v'
    Vec boundary_ray(const Vec& meridian_dir) const;
};

// Closed convex cone in R^n with both descriptions kept:
// {v : a_i . v >= 0} for the rows a_i of `normals`, and the conic span of the
// rows of `generators`. Lines are stored as a pair of opposite generators.
struct PolyhedralCone {
    int dim = 0;
    Mat normals;
    Mat generators;

    static PolyhedralCone from_normals(const Mat& normals, int dim);
    static PolyhedralCone from_generators(const Mat& generators, int dim);

    bool contains(const Vec& v, double tol = 1e-10) const;
    bool consistent(double tol = 1e-9) const;
    int lineality_dim() const;
};

// Extreme rays (plus +/- lineality basis) of {v : A v >= 0}. dim <= 4 expected.
Mat extreme_generators(const Mat& A, int dim, double tol = 1e-10);

RoundCone polar(const RoundCone& c);
PolyhedralCone polar(const PolyhedralCone& c);
RoundCone antipode(const RoundCone& c);
PolyhedralCone antipode(const PolyhedralCone& c);
bool is_proper(const RoundCone& c);
bool is_proper(const PolyhedralCone& c);
bool interior_nonempty(const RoundCone& c);
bool interior_nonempty(const PolyhedralCone& c);

struct RoundConeBoundary {
    RoundCone cone;
};
struct RaySet {
    std::vector<Vec> rays;
};

double distance_to(const RoundConeBoundary& c, const Vec& xi);
double distance_to(const RaySet& c, const Vec& xi);
double distance_to(const PolyhedralCone& c, const Vec& xi);

// xi in C<eps> = {d(xi, C) < eps |xi|}
bool thicken_contains(const RoundConeBoundary& c, double eps, const Vec& xi);
bool thicken_contains(const RaySet& c, double eps, const Vec& xi);
bool thicken_contains(const PolyhedralCone& c, double eps, const Vec& xi);

struct ConicSample {
    Vec basepoint;
    std::vector<Vec> rays;
    std::vector<int> tags;
};

struct ConicHull {
    Vec basepoint;
    PolyhedralCone hull;
    bool proper = true;
};

ConicHull conv_conic(const ConicSample& sample);

// S_x^gamma: pairs (y; eta) over the two boundary cones through x.
class SGammaX {
public:
    SGammaX(Vec x, RoundCone gamma, double tol = 1e-9);
    bool contains(const Vec& y, const Vec& eta) const;

private:
    Vec x_;
    RoundCone gamma_;
    double tol_;
};

SGammaX s_gamma_x(const Vec& x, const RoundCone& gamma);

struct ZRegion {
    double c, r, delta;
};
struct WRegion {
    double c, c_prime, r, delta, eps;
    int angle_samples = 37;  // directions per half-turn in V' when dim >= 3
};
struct URegion {
    double c, r, s;
};
struct BallRegion {
    Vec center;
    double radius;
};

struct Window {
    double ball_radius = 0;
    double lo = 0, hi = 0;
};

struct WindowLadder {
    double r1 = 0, c1 = 0, rho = 0;
    double t[4]{}, t_prime[4]{}, mu[4]{}, eps[4]{};
    Window windows[4];
    Window domains[4];  // D_i as (0, lo, hi)
};

struct LadderWindow {
    WindowLadder ladder;
    int index = 0;  // 0..3
};

using Region = std::variant<ZRegion, WRegion, URegion, BallRegion, LadderWindow>;

void validate_region(const Region& region);
bool region_contains(const Region& region, const Vec& point);

struct CutoffParams {
    double c, eps;
};

CutoffParams cutoff_params(double c1, double c2);
bool verify_cutoff_inclusion(double c1, double c2, double c, double eps, int samples = 10000);

struct SplitRadius {
    double r1;
    double c, eps, c_prime, delta;
};

// dim is the dimension of V = V' x R
SplitRadius split_radius(double c1, double c2, double r, int dim = 2);

// Largest sampled radius rho <= hi with Ball(center, rho) inside the region
// (bisection to relative 1e-6; dim 2 samples full circles).
double inscribed_radius(const Region& region, const Vec& center, double hi);

WindowLadder window_ladder(double r1, double c1);
bool window_contains(const Window& w, const Vec& point);

}  // namespace sheafrig
