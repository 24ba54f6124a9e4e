#include "oracles/cutoff_tables.hpp"
#include "oracles/random_bars.hpp"

#include "sheafrig/convolution.hpp"
#include "sheafrig/error.hpp"

#include <doctest.h>

#include <cmath>
#include <limits>
#include <random>

using namespace sheafrig;

namespace {

using namespace oracle;

void check_against_oracle(const Bar& bar, HalfLine g, bool q)
{
    std::string first;
    const int bad = cutoff_table_mismatches(bar, g, q, &first);
    INFO(first);
    CHECK(bad == 0);
}

}  // namespace

TEST_CASE("P cut-off: examples")
{
    CHECK(p_cutoff_bar(of({co(0, 1)}), HalfLine::Left).bars == std::vector<Bar>{co(0, 1)});
    CHECK(p_cutoff_bar(of({oc(0, 1)}), HalfLine::Left).bars.empty());
    CHECK(p_cutoff_bar(of({}), HalfLine::Left).bars.empty());
    auto oo_out = p_cutoff_bar(of({oo(0, 1, 2)}), HalfLine::Left);
    REQUIRE(oo_out.bars.size() == 1);
    CHECK(oo_out.bars[0] == Bar{Endpoint::closed_at(1), Endpoint::pos_inf(), 1});
    // Right mirrors Left
    CHECK(p_cutoff_bar(of({oc(0, 1)}), HalfLine::Right).bars == std::vector<Bar>{oc(0, 1)});
    CHECK(p_cutoff_bar(of({cc(0, 1)}), HalfLine::Right).bars
          == std::vector<Bar>{{Endpoint::neg_inf(), Endpoint::closed_at(1), 0}});

    Barcode half;
    half.ambient = {0, 1};
    CHECK_THROWS_AS(p_cutoff_bar(half, HalfLine::Left), Error);
}

TEST_CASE("Q cut-off: examples")
{
    CHECK(q_cutoff_bar(of({co(0, 1)}), HalfLine::Left).bars == std::vector<Bar>{co(0, 1)});
    CHECK(q_cutoff_bar(of({full(3)}), HalfLine::Left).bars == std::vector<Bar>{full(3)});
    CHECK(q_cutoff_bar(of({}), HalfLine::Right).bars.empty());
}

TEST_CASE("cut-off tables agree with the lattice model")
{
    std::mt19937 rng(2024);
    std::uniform_real_distribution<double> pos(-5, 5), len(0.1, 3);
    std::uniform_int_distribution<int> deg(-1, 1);
    for (int draw = 0; draw < 50; ++draw) {
        double a = pos(rng);
        double b = a + len(rng);
        int d = deg(rng);
        for (const auto& bar : shapes(a, b, d))
            for (HalfLine g : {HalfLine::Left, HalfLine::Right})
                for (bool q : {false, true})
                    check_against_oracle(bar, g, q);
    }
}

TEST_CASE("cones of u and v fit their triangles")
{
    // Euler characteristics of sections are additive over P F -> F -> C(u)
    // and F -> Q F -> C(v), on every interval of the lattice model
    for (const auto& bar : shapes(-1.0, 2.0, 0)) {
        for (HalfLine g : {HalfLine::Left, HalfLine::Right}) {
            Barcode F = of({bar});
            Barcode P = p_cutoff_bar(F, g), Q = q_cutoff_bar(F, g);
            Barcode U = cone_of_u(F, g), Vc = cone_of_v(F, g);
            for (const auto& V : intervals(make_draw(bar))) {
                auto chi = [&](const Barcode& bc) {
                    int e = 0;
                    for (auto [h, n] : global_sections(bc, V))
                        e += (h % 2 == 0 ? 1 : -1) * n;
                    return e;
                };
                INFO(to_string(bar));
                CHECK(chi(F) == chi(P) + chi(U));
                CHECK(chi(Q) == chi(F) + chi(Vc));
            }
        }
    }
}

TEST_CASE("cut-off properties")
{
    std::mt19937 rng(31);
    std::uniform_int_distribution<int> shape(0, 9), deg(-2, 2);
    std::uniform_real_distribution<double> pos(-3, 3), len(0.2, 2);
    for (int t = 0; t < 100; ++t) {
        std::vector<Bar> bars;
        int k = 1 + t % 4;
        for (int i = 0; i < k; ++i) {
            double a = pos(rng);
            bars.push_back(shapes(a, a + len(rng), deg(rng))[shape(rng)]);
        }
        Barcode F = of(bars);
        for (HalfLine g : {HalfLine::Left, HalfLine::Right}) {
            Barcode P = p_cutoff_bar(F, g);
            CHECK(p_cutoff_bar(P, g).bars == P.bars);
            Barcode Q = q_cutoff_bar(F, g);
            CHECK(q_cutoff_bar(Q, g).bars == Q.bars);
            CHECK(cutoff_cone_check(F, g).pass());
        }
    }
    // pure-plus objects are fixed by both functors
    std::mt19937_64 rng64(32);
    for (int t = 0; t < 50; ++t) {
        Barcode F = oracle::random_sigma_positive_barcode(rng64, 4);
        CHECK(p_cutoff_bar(F, HalfLine::Left).bars == F.bars);
        CHECK(q_cutoff_bar(F, HalfLine::Left).bars == F.bars);
    }
}

TEST_CASE("cutoff_cone_check: bar examples")
{
    auto r1 = cutoff_cone_check(of({oc(0, 1)}), HalfLine::Left);
    CHECK(r1.pass());
    CHECK(cone_of_u(of({oc(0, 1)}), HalfLine::Left).bars == std::vector<Bar>{oc(0, 1)});
    auto r2 = cutoff_cone_check(of({co(0, 1)}), HalfLine::Left);
    CHECK(r2.pass());
    CHECK(cone_of_u(of({co(0, 1)}), HalfLine::Left).bars.empty());
}

namespace {

ConvexIndicator unit_square()
{
    ConvexIndicator B;
    B.A.resize(4, 2);
    B.A << 1, 0, -1, 0, 0, 1, 0, -1;
    B.b.resize(4);
    B.b << 1, 0, 1, 0;
    return B;
}

// 2-D oracle: (y + gamma) meets the polygon B, via vertices and edge/ray crossings
bool wedge_meets_polygon(const Eigen::Vector2d& y, const std::vector<Eigen::Vector2d>& gens,
                         const std::vector<Eigen::Vector2d>& poly)
{
    auto in_wedge = [&](const Eigen::Vector2d& p) {
        // p - y = s g1 + t g2 with s, t >= 0
        Eigen::Matrix2d G;
        G << gens[0], gens[1];
        Eigen::Vector2d st = G.partialPivLu().solve(p - y);
        return st.minCoeff() >= -1e-12;
    };
    auto in_poly = [&](const Eigen::Vector2d& p) {
        for (size_t i = 0; i < poly.size(); ++i) {
            Eigen::Vector2d e = poly[(i + 1) % poly.size()] - poly[i];
            Eigen::Vector2d w = p - poly[i];
            if (e.x() * w.y() - e.y() * w.x() < -1e-12)
                return false;
        }
        return true;
    };
    if (in_poly(y))
        return true;
    for (const auto& v : poly)
        if (in_wedge(v))
            return true;
    for (const auto& g : gens)
        for (size_t i = 0; i < poly.size(); ++i) {
            Eigen::Vector2d p = poly[i], q = poly[(i + 1) % poly.size()];
            Eigen::Matrix2d M;
            M << g, p - q;
            if (std::abs(M.determinant()) < 1e-14)
                continue;
            Eigen::Vector2d st = M.partialPivLu().solve(p - y);
            if (st(0) >= -1e-12 && st(1) >= -1e-12 && st(1) <= 1 + 1e-12)
                return true;
        }
    return false;
}

}  // namespace

TEST_CASE("cutoff_convex")
{
    // B = {0}: the result is gamma^a
    ConvexIndicator pt;
    pt.A.resize(4, 2);
    pt.A << 1, 0, -1, 0, 0, 1, 0, -1;
    pt.b = Eigen::Vector4d::Zero();
    RoundCone down{2, 1.0};
    auto s0 = cutoff_convex(pt, down);
    Eigen::Vector2d up(0.0, 1.0), side(1.0, 0.2);
    CHECK(s0.contains(up));
    CHECK_FALSE(s0.contains(side));
    CHECK(s0.A.rows() == 2);

    // bottom edge plus the two boundary rays of gamma^a; the vertical edges are swallowed
    auto sq = cutoff_convex(unit_square(), down);
    CHECK(sq.A.rows() == 3);

    ConvexIndicator seg;
    seg.A.resize(2, 1);
    seg.A << 1, -1;
    seg.b.resize(2);
    seg.b << 2, -1;  // [1, 2]
    auto s1 = cutoff_convex(seg, RoundCone{1, 1.0});
    CHECK(s1.A.rows() == 1);
    CHECK(s1.contains(Vec::Constant(1, 50.0)));
    CHECK(s1.contains(Vec::Constant(1, 1.0)));
    CHECK_FALSE(s1.contains(Vec::Constant(1, 0.99)));
    // matches the bar table: [1,2] -> [1, inf)
    CHECK(p_cutoff_bar(of({cc(1, 2)}), HalfLine::Left).bars
          == std::vector<Bar>{{Endpoint::closed_at(1), Endpoint::pos_inf(), 0}});

    CHECK_THROWS_AS(cutoff_convex(unit_square(), RoundCone{3, 1.0}), Error);

    // Minkowski soundness on a 20 x 20 grid, for a few polygons and cones
    std::vector<std::vector<Eigen::Vector2d>> polys{
        {{0, 0}, {1, 0}, {1, 1}, {0, 1}},
        {{0, 0}, {2, 0.5}, {0.5, 1.5}},
        {{-1, -0.5}, {0.5, -1}, {1, 0.2}, {0, 1}, {-0.8, 0.6}}};
    std::vector<double> slopes{0.5, 1.0, 2.5};
    for (const auto& poly : polys) {
        ConvexIndicator B;
        B.A.resize(poly.size(), 2);
        B.b.resize(poly.size());
        for (size_t i = 0; i < poly.size(); ++i) {
            Eigen::Vector2d e = poly[(i + 1) % poly.size()] - poly[i];
            Eigen::Vector2d nrm(e.y(), -e.x());  // outward for counter-clockwise order
            B.A.row(i) = nrm.transpose();
            B.b(i) = nrm.dot(poly[i]);
        }
        for (double c : slopes) {
            auto S = cutoff_convex(B, RoundCone{2, c});
            std::vector<Eigen::Vector2d> gens{{1, -c}, {-1, -c}};
            for (int i = 0; i < 20; ++i)
                for (int j = 0; j < 20; ++j) {
                    Eigen::Vector2d y(-3 + 6.0 * i / 19, -3 + 6.0 * j / 19);
                    CHECK(S.contains(y, 1e-9) == wedge_meets_polygon(y, gens, poly));
                }
            auto rep = cutoff_cone_check(B, RoundCone{2, c});
            CHECK(rep.pass());
            // every inward facet normal lies in gamma°a: <g, a> >= 0
            for (int r = 0; r < S.A.rows(); ++r)
                for (const auto& g : gens)
                    CHECK(g.dot(S.A.row(r).transpose()) >= -1e-12);
        }
    }
}

TEST_CASE("split_by_direction and mixed bars")
{
    Barcode bc = of({co(0, 1, 0), oc(2, 3, 1), full(0)});
    auto s = split_by_direction(bc);
    CHECK(s.plus.bars == std::vector<Bar>{co(0, 1, 0)});
    CHECK(s.minus.bars == std::vector<Bar>{oc(2, 3, 1)});
    CHECK(s.constant.bars == std::vector<Bar>{full(0)});
    CHECK_THROWS_AS(split_by_direction(of({cc(0, 1)})), Error);
    auto e = split_by_direction(of({}));
    CHECK(e.plus.bars.empty());
    CHECK(e.minus.bars.empty());
    CHECK(e.constant.bars.empty());

    CHECK(min_mixed_bar_length(of({cc(0, 1), oo(0, 0.2)})) == doctest::Approx(0.2));
    CHECK(std::isinf(min_mixed_bar_length(of({co(0, 1)}))));

    // windows shorter than the shortest mixed bar always split
    std::mt19937 rng(3);
    std::uniform_int_distribution<int> shape(0, 9);
    std::uniform_real_distribution<double> pos(-3, 3), len(0.3, 2);
    for (int t = 0; t < 40; ++t) {
        std::vector<Bar> bars;
        for (int i = 0; i < 4; ++i) {
            double a = pos(rng);
            bars.push_back(shapes(a, a + len(rng), 0)[shape(rng)]);
        }
        Barcode F = of(bars);
        double m = min_mixed_bar_length(F);
        if (m == 0)
            continue;
        double w = std::isinf(m) ? 1.0 : 0.99 * m;
        for (double lo = -5; lo < 5; lo += 0.05) {
            Barcode R = restrict_to(F, {lo, lo + w});
            CHECK_NOTHROW(split_by_direction(R));
        }
    }
}
