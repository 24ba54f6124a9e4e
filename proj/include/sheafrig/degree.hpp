#pragma once

#include "sheafrig/smooth_map.hpp"

#include <functional>
#include <vector>

namespace sheafrig {

struct DegreeOptions {
    int seeds_per_axis = 40;
    double polish_tol = 1e-10;
    double dedup_tol = 1e-7;
    int boundary_samples = 2000;
    double det_threshold = 1e-8;
    int max_newton = 60;
};

// Signed preimage count of `regular_value` inside the box window.
// Properness is checked by sampling the window boundary: the image of every
// admissible boundary sample must stay outside the closed target ball.
struct DegreeQuery {
    MapWithJacobian map;
    Vec target_center;
    double target_radius = 1.0;
    Vec regular_value;
    Vec window_lo, window_hi;
    // optional: preimages (and boundary samples) failing this are ignored
    std::function<bool(const Vec&)> admissible;
    DegreeOptions options;
};

struct DegreeReport {
    int degree = 0;
    std::vector<Vec> preimages;  // sorted lexicographically
    std::vector<double> determinants;
    double min_abs_det = 0.0;
    // min over boundary samples of |f(x) - center| - radius; >= 0 on success
    double boundary_clearance = 0.0;
    int boundary_samples = 0;
    long seeds = 0;
    long newton_runs = 0;
};

DegreeReport degree_report(const DegreeQuery& q);
int degree(const DegreeQuery& q);

// Box around `center` with the given half-width in every coordinate.
DegreeQuery box_query(const MapWithJacobian& f, const Vec& target_center, double target_radius,
                      const Vec& regular_value, double half_width);

// Deterministic Halton samples on the boundary of the box [lo, hi].
std::vector<Vec> box_boundary_samples(const Vec& lo, const Vec& hi, int count);

struct StabilityResult {
    int deg_f = 0;
    int deg_g = 0;
    bool certified_equal = false;
    double sup_distance = 0.0;
    int samples = 0;
};

// Compares f and g on the window of `base` (center, regular value, options
// taken from it). Hypotheses: r < R, f^-1(closed B_r) inside the window, and
// sup |f - g| < r/2 on window samples. Both degrees are taken over B_{r/2};
// the regular value must lie there.
StabilityResult degree_stability(const MapWithJacobian& f, const MapWithJacobian& g, double r, double R,
                                 const DegreeQuery& base);

struct SliceResult {
    std::vector<double> t;
    std::vector<int> degrees;
    bool all_equal = false;
};

using MapFamily = std::function<MapWithJacobian(double)>;

// Degree of each slice f_t, t on an even grid of [0, 1]; window and target from `base`.
SliceResult slice_degree_invariance(const MapFamily& family, const DegreeQuery& base, int points = 11);

struct GraphDegreeOptions {
    int window_samples_per_axis = 24;
    DegreeOptions degree;
};

// Degree of Lambda^1 -> B_r^{V^2}, (x; xi) -> (x, x'), where
// Lambda^1 = Lambda_phi cap (B_r x B_{3Ar}). Fails with WindowBoundViolated
// when a sampled point of Lambda^1 has fiber norm >= 2Ar.
int graph_projection_degree(const TwistedGraph& graph, double r, double A, const GraphDegreeOptions& opt = {});

}  // namespace sheafrig
