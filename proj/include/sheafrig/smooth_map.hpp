#pragma once

#include "sheafrig/cones.hpp"

#include <cstdint>
#include <functional>
#include <vector>

namespace sheafrig {

// Where a map is defined. Whole means R^d.
struct Domain {
    enum class Kind { Whole, Ball, Box };
    Kind kind = Kind::Whole;
    Vec center;
    double radius = 0.0;
    Vec lo, hi;

    static Domain whole() { return {}; }
    static Domain ball(const Vec& center, double radius);
    static Domain box(const Vec& lo, const Vec& hi);
    bool contains(const Vec& x) const;
};

struct MapWithJacobian {
    int dim = 0;
    std::function<Vec(const Vec&)> eval;
    // may be left empty; central differences are used then
    std::function<Mat(const Vec&)> jacobian;
    Domain domain;

    Vec operator()(const Vec& x) const { return eval(x); }
    Mat jac(const Vec& x) const;
};

Mat central_difference_jacobian(const std::function<Vec(const Vec&)>& f, const Vec& x, double h = 1e-6);

// x -> M x + b
MapWithJacobian affine_map(const Mat& M, const Vec& b);
MapWithJacobian affine_map(const Mat& M);
// f o g
MapWithJacobian compose(const MapWithJacobian& f, const MapWithJacobian& g);

// Max over `probes` uniform points of the box of
// |J - J_fd|_max / max(1, |J|_max).
double jacobian_mismatch(const MapWithJacobian& f, const Vec& lo, const Vec& hi, int probes = 20,
                         std::uint64_t seed = 1);

// Lambda_phi = {(x, x'; xi, -xi') : (x'; xi') = phi(x; xi)}, phi acting on
// T*V = R^n x R^n in (x; xi) coordinates.
struct TwistedGraph {
    MapWithJacobian phi;
    std::vector<Vec> samples;  // (x, xi, x', xi')

    int half_dim() const { return phi.dim / 2; }
    // base-then-fiber point (x, x', xi, -xi') of Lambda_phi over z = (x; xi)
    Vec point(const Vec& z) const;
    void add_sample(const Vec& z);
    bool consistent(double tol = 1e-10) const;
};

TwistedGraph make_twisted_graph(const MapWithJacobian& phi);

}  // namespace sheafrig
