#include "oracles/planar_poly.hpp"

#include "sheafrig/degree.hpp"
#include "sheafrig/error.hpp"

#include <doctest.h>

#include <cmath>
#include <complex>
#include <numbers>
#include <random>

using namespace sheafrig;

namespace {

using namespace oracle;

}  // namespace

TEST_CASE("degree: worked examples")
{
    CHECK(degree(box_query(affine_map(Mat::Identity(2, 2)), v2(0, 0), 1.0, v2(0, 0), 2.0)) == 1);

    PlanarPoly sq;
    sq.k = 2;
    auto rep = degree_report(box_query(sq.as_map(), v2(1, 0), 0.5, v2(1, 0), 2.0));
    CHECK(rep.degree == 2);
    REQUIRE(rep.preimages.size() == 2);
    CHECK((rep.preimages[0] - v2(-1, 0)).norm() < 1e-9);
    CHECK((rep.preimages[1] - v2(1, 0)).norm() < 1e-9);
    for (double det : rep.determinants)
        CHECK(det == doctest::Approx(4.0).epsilon(1e-8));

    Mat refl(2, 2);
    refl << 1, 0, 0, -1;
    CHECK(degree(box_query(affine_map(refl), v2(0, 0), 1.0, v2(0.3, 0.4), 2.0)) == -1);
}

TEST_CASE("degree: error paths")
{
    PlanarPoly sq;
    sq.k = 2;
    CHECK_THROWS_WITH_AS(degree(box_query(sq.as_map(), v2(0, 0), 0.5, v2(0, 0), 2.0)),
                         doctest::Contains("NearCriticalValue"), Error);

    Mat flat(2, 2);
    flat << 1, 0, 0, 0.1;
    CHECK_THROWS_WITH_AS(degree(box_query(affine_map(flat), v2(0, 0), 0.5, v2(0.1, 0), 1.0)),
                         doctest::Contains("PropernessViolation"), Error);

    CHECK_THROWS_AS(degree(box_query(sq.as_map(), v2(0, 0), 0.5, v2(0.6, 0), 2.0)), Error);
    CHECK_THROWS_AS(degree(box_query(affine_map(Mat::Identity(5, 5)), Vec::Zero(5), 1.0, Vec::Zero(5), 2.0)),
                    Error);
}

TEST_CASE("degree: hand-written Jacobians agree with central differences")
{
    std::mt19937 rng(7);
    for (int i = 0; i < 20; ++i) {
        PlanarPoly p = random_poly(rng, 0.5);
        CHECK(jacobian_mismatch(p.as_map(), v2(-1.5, -1.5), v2(1.5, 1.5), 20, i + 1) < 1e-5);
    }
}

TEST_CASE("degree: z^k gives k at random regular values")
{
    std::mt19937 rng(11);
    for (int k = 1; k <= 4; ++k) {
        PlanarPoly p;
        p.k = k;
        for (int j = 0; j < 10; ++j) {
            Vec y = random_in_ball(rng, 0.9);
            // keep away from the critical value 0
            if (y.norm() < 0.05)
                y *= 0.05 / y.norm() + 1;
            CHECK(degree(box_query(p.as_map(), v2(0, 0), 1.0, y, 1.5)) == k);
            CHECK(winding(p, y, 1.5) == k);
        }
    }
}

TEST_CASE("degree: independent of the regular value, agrees with the winding number")
{
    std::mt19937 rng(23);
    int maps = 0;
    while (maps < 50) {
        PlanarPoly p = random_poly(rng, 0.5);
        const Vec y1 = random_in_ball(rng, 0.45), y2 = random_in_ball(rng, 0.45);
        int d1 = 0, d2 = 0;
        try {
            d1 = degree(box_query(p.as_map(), v2(0, 0), 0.5, y1, 1.5));
            d2 = degree(box_query(p.as_map(), v2(0, 0), 0.5, y2, 1.5));
        } catch (const Error& e) {
            // an unlucky draw near a critical value; draw again
            REQUIRE(e.code() == ErrorCode::NearCriticalValue);
            continue;
        }
        ++maps;
        CHECK(d1 == d2);
        CHECK(d1 == winding(p, y1, 1.5));
        CHECK(d1 == (p.conj ? -p.k : p.k));
    }
}

TEST_CASE("degree: precomposing with a reflection negates the degree")
{
    std::mt19937 rng(31);
    Mat refl(2, 2);
    refl << 1, 0, 0, -1;
    for (int i = 0; i < 20; ++i) {
        PlanarPoly p = random_poly(rng, 0.5);
        const Vec y = random_in_ball(rng, 0.45);
        try {
            const int d = degree(box_query(p.as_map(), v2(0, 0), 0.5, y, 1.5));
            const int dr = degree(box_query(compose(p.as_map(), affine_map(refl)), v2(0, 0), 0.5, y, 1.5));
            CHECK(dr == -d);
        } catch (const Error& e) {
            CHECK(e.code() == ErrorCode::NearCriticalValue);
        }
    }
}

TEST_CASE("degree: stability examples")
{
    DegreeQuery base = box_query(affine_map(Mat::Identity(2, 2)), v2(0, 0), 1.0, v2(0.1, 0.05), 2.0);
    MapWithJacobian g;
    g.dim = 2;
    g.eval = [](const Vec& x) -> Vec { return x + 0.01 * v2(std::sin(3 * x[0]), std::sin(2 * x[1])); };
    auto s = degree_stability(affine_map(Mat::Identity(2, 2)), g, 1.0, 2.0, base);
    CHECK(s.deg_f == 1);
    CHECK(s.deg_g == 1);
    CHECK(s.certified_equal);
    CHECK(s.sup_distance < 0.5);

    PlanarPoly sq, sq2;
    sq.k = sq2.k = 2;
    sq2.c[0][0] = 0.05;
    DegreeQuery b2 = box_query(sq.as_map(), v2(1, 0), 0.5, v2(1.02, 0.03), 2.0);
    auto s2 = degree_stability(sq.as_map(), sq2.as_map(), 0.5, 1.0, b2);
    CHECK(s2.deg_f == 2);
    CHECK(s2.deg_g == 2);
    CHECK(s2.certified_equal);

    PlanarPoly csq = sq;
    csq.conj = true;
    CHECK_THROWS_WITH_AS(degree_stability(sq.as_map(), csq.as_map(), 0.5, 1.0, b2),
                         doctest::Contains("HypothesisUnverified"), Error);
}

TEST_CASE("degree: stability on random certified pairs")
{
    std::mt19937 rng(41);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    int pairs = 0;
    while (pairs < 50) {
        PlanarPoly p = random_poly(rng, 0.3);
        const double r = 0.5;
        const double amp = 0.2 * r * std::abs(u(rng));
        const double fa = 1 + 3 * std::abs(u(rng)), fb = 1 + 3 * std::abs(u(rng));
        MapWithJacobian f = p.as_map(), g;
        g.dim = 2;
        g.eval = [f, amp, fa, fb](const Vec& x) -> Vec {
            return f(x) + amp * v2(std::sin(fa * x[1]), std::cos(fb * x[0]));
        };
        DegreeQuery base = box_query(f, v2(0, 0), r, random_in_ball(rng, 0.2), 1.5);
        try {
            auto s = degree_stability(f, g, r, 1.0, base);
            CHECK(s.certified_equal);
            CHECK(s.deg_f == s.deg_g);
            CHECK(s.sup_distance < r / 2);
            ++pairs;
        } catch (const Error& e) {
            REQUIRE(e.code() == ErrorCode::NearCriticalValue);
        }
    }
}

TEST_CASE("degree: slice invariance on homotopy families")
{
    DegreeQuery base = box_query(affine_map(Mat::Identity(2, 2)), v2(0, 0), 0.5, v2(0.2, 0.1), 1.5);
    auto rot = slice_degree_invariance([](double t) { return rotation(2 * std::numbers::pi * t); }, base);
    CHECK(rot.all_equal);
    CHECK(rot.degrees.size() == 11);
    CHECK(rot.degrees.front() == 1);

    auto sq = slice_degree_invariance(
        [](double t) {
            PlanarPoly p;
            p.k = 2;
            p.c[0][0] = 0.1 * t;
            return p.as_map();
        },
        base);
    CHECK(sq.all_equal);
    CHECK(sq.degrees.front() == 2);

    PlanarPoly c3;
    c3.k = 3;
    c3.conj = true;
    auto cst = slice_degree_invariance([&](double) { return c3.as_map(); }, base);
    CHECK(cst.all_equal);
    CHECK(cst.degrees.front() == degree([&] {
              DegreeQuery q = base;
              q.map = c3.as_map();
              return q;
          }()));
    CHECK(cst.degrees.front() == -3);
}

TEST_CASE("degree: four-dimensional product map")
{
    // (z, w) -> (z^2, w): degree 2, found through the prefiltered seed sweep
    MapWithJacobian f;
    f.dim = 4;
    f.eval = [](const Vec& x) -> Vec {
        Vec y(4);
        y << x[0] * x[0] - x[1] * x[1], 2 * x[0] * x[1], x[2], x[3];
        return y;
    };
    f.jacobian = [](const Vec& x) -> Mat {
        Mat J = Mat::Identity(4, 4);
        J(0, 0) = 2 * x[0];
        J(0, 1) = -2 * x[1];
        J(1, 0) = 2 * x[1];
        J(1, 1) = 2 * x[0];
        return J;
    };
    Vec y(4);
    y << 0.3, 0.2, -0.1, 0.15;
    DegreeQuery q = box_query(f, Vec::Zero(4), 0.8, y, 1.2);
    q.options.seeds_per_axis = 20;
    auto rep = degree_report(q);
    CHECK(rep.degree == 2);
    CHECK(rep.preimages.size() == 2);
    CHECK(rep.newton_runs < rep.seeds);
}

TEST_CASE("degree: base projection of twisted graphs")
{
    Mat Jm(2, 2);
    Jm << 0, 1, -1, 0;
    TwistedGraph J = make_twisted_graph(affine_map(Jm));
    CHECK(graph_projection_degree(J, 0.5, 2.0) == 1);

    // time-one map of H = (pi/2 + 0.05) |z|^2 / 2 is a rotation close to J
    TwistedGraph near = make_twisted_graph(rotation(-(std::numbers::pi / 2 + 0.05)));
    CHECK(graph_projection_degree(near, 0.5, 2.0) == 1);

    TwistedGraph id = make_twisted_graph(affine_map(Mat::Identity(2, 2)));
    CHECK_THROWS_WITH_AS(graph_projection_degree(id, 0.5, 2.0), doctest::Contains("WindowBoundViolated"), Error);

    // 4-D: J x J
    Mat J4 = Mat::Zero(4, 4);
    J4.topRightCorner(2, 2).setIdentity();
    J4.bottomLeftCorner(2, 2) = -Mat::Identity(2, 2);
    GraphDegreeOptions opt;
    opt.window_samples_per_axis = 10;
    opt.degree.seeds_per_axis = 16;
    CHECK(graph_projection_degree(make_twisted_graph(affine_map(J4)), 0.5, 2.0, opt) == 1);
}
