#include "oracles/symplectic_fixtures.hpp"

#include "sheafrig/error.hpp"
#include "sheafrig/symplectic.hpp"

#include <doctest.h>

#include <unsupported/Eigen/MatrixFunctions>

#include <chrono>
#include <cmath>
#include <numbers>
#include <random>

using namespace sheafrig;

using namespace oracle;

TEST_CASE("symplectic: residual examples")
{
    std::mt19937 rng(1);
    for (int n : {1, 2})
        CHECK(symplectic_residual(random_symplectic(rng, n, 0.5)) < 1e-13);
    Mat scale(2, 2);
    scale << 1, 0, 0, 2;
    CHECK(symplectic_residual(scale) == doctest::Approx(1.0));
    Mat shear(2, 2);
    shear << 1, 1, 0, 1;
    CHECK(symplectic_residual(shear) == 0.0);
    CHECK_THROWS_WITH_AS(symplectic_residual(Mat::Identity(3, 3)), doctest::Contains("OddDimension"), Error);
    CHECK(standard_omega(2) * standard_omega(2) == -Mat::Identity(4, 4));
}

TEST_CASE("symplectic: coisotropic catalog")
{
    SymplecticSpace r2{1}, r4{2};
    std::mt19937 rng(2);
    for (int i = 0; i < 20; ++i)
        CHECK(coisotropic_check(random_matrix(rng, 2, 1), r2));
    Mat ex1 = Mat::Zero(4, 1);
    ex1(0, 0) = 1;
    CHECK_FALSE(coisotropic_check(ex1, r4));
    CHECK(oracle::omega_orthogonal(ex1, 2).cols() == 3);
    for (int i = 0; i < 20; ++i) {
        CHECK(coisotropic_check(random_matrix(rng, 4, 3), r4));
        CHECK(coisotropic_check(random_int_matrix(rng, 6, 5), SymplecticSpace{3}));
    }
    Mat dup(4, 2);
    dup << 1, 2, 0, 0, 0, 0, 0, 0;
    CHECK_THROWS_WITH_AS(coisotropic_check(dup, r4), doctest::Contains("RankDeficientBasis"), Error);
}

TEST_CASE("symplectic: coisotropy agrees with the kernel oracle")
{
    std::mt19937 rng(3);
    for (int trial = 0; trial < 200; ++trial) {
        const int n = 1 + trial % 3;
        const int k = 1 + static_cast<int>(rng() % (2 * n));
        const bool exact = trial % 2 == 0;
        Mat W = exact ? random_int_matrix(rng, 2 * n, k) : random_matrix(rng, 2 * n, k);
        CHECK(coisotropic_check(W, SymplecticSpace{n}) == oracle::coisotropic(W, n));
    }
    // Lagrangians pass, anything below dimension n fails
    for (int trial = 0; trial < 50; ++trial) {
        const int n = 1 + trial % 3;
        const Mat U = random_symplectic(rng, n, 0.7);
        const Mat Lag = U.leftCols(n);
        CHECK(lagrangian_check(Lag, SymplecticSpace{n}));
        CHECK(coisotropic_check(Lag, SymplecticSpace{n}));
        if (n > 1)
            CHECK_FALSE(coisotropic_check(random_matrix(rng, 2 * n, n - 1), SymplecticSpace{n}));
    }
}

TEST_CASE("symplectic: coisotropy is monotone under inclusion")
{
    std::mt19937 rng(4);
    int coisotropic_small = 0;
    for (int trial = 0; trial < 100; ++trial) {
        const int n = 1 + trial % 2;
        // S = a Lagrangian or a random subspace; S' adds random vectors
        Mat S = trial % 2 ? random_symplectic(rng, n, 0.6).leftCols(n)
                          : random_matrix(rng, 2 * n, 1 + static_cast<int>(rng() % (2 * n)));
        const int extra = static_cast<int>(rng() % (2 * n - S.cols() + 1));
        Mat Sp(2 * n, S.cols() + extra);
        Sp << S, random_matrix(rng, 2 * n, extra);
        if (coisotropic_check(S, SymplecticSpace{n})) {
            ++coisotropic_small;
            CHECK(coisotropic_check(Sp, SymplecticSpace{n}));
        }
    }
    CHECK(coisotropic_small >= 50);
}

TEST_CASE("symplectic: rho lift examples and equivalence")
{
    auto whole = rho_lift_check(Mat::Identity(4, 4), 1.0, Vec::Zero(2));
    CHECK(whole.coisotropic_s);
    CHECK(whole.coisotropic_lift);
    CHECK(whole.equal);
    CHECK(whole.lift.cols() == 6);

    Mat graph(4, 2);  // Lagrangian graph xi = x
    graph << 1, 0, 0, 1, 1, 0, 0, 1;
    auto lag = rho_lift_check(graph, 1.0, Vec::Zero(2));
    CHECK(lag.coisotropic_s);
    CHECK(lag.coisotropic_lift);
    CHECK(lag.lift.cols() == 4);

    Mat line = Mat::Zero(4, 1);
    line(0, 0) = 1;
    auto bad = rho_lift_check(line, 1.0, Vec::Zero(2));
    CHECK_FALSE(bad.coisotropic_s);
    CHECK_FALSE(bad.coisotropic_lift);
    CHECK(bad.equal);

    CHECK_THROWS_WITH_AS(rho_lift_check(line, 0.0, Vec::Zero(2)), doctest::Contains("ZeroSigma"), Error);

    std::mt19937 rng(5);
    std::normal_distribution<double> g(0.0, 1.0);
    int disagreements = 0, positives = 0;
    for (double sigma0 : {0.5, 1.0, 2.0})
        for (int trial = 0; trial < 100; ++trial) {
            const int n = 1 + trial % 2;
            Vec xi0(n);
            for (int i = 0; i < n; ++i)
                xi0[i] = g(rng);
            Mat S = trial % 3 == 0 ? random_symplectic(rng, n, 0.5).leftCols(n)
                                   : random_matrix(rng, 2 * n, 1 + static_cast<int>(rng() % (2 * n)));
            auto res = rho_lift_check(S, sigma0, xi0);
            disagreements += !res.equal;
            positives += res.coisotropic_s;
            // the lift is d rho^{-1}(S): two dimensions more
            CHECK(res.lift.cols() == S.cols() + 2);
            CHECK(oracle::coisotropic(res.lift, n + 1) == res.coisotropic_lift);
        }
    CHECK(disagreements == 0);
    CHECK(positives > 50);
}

TEST_CASE("symplectic: Lagrangian complements")
{
    Mat V = Mat::Zero(4, 2);
    V.topRows(2).setIdentity();
    Mat C = lagrangian_complement(V);
    CHECK(C.topRows(2).norm() < 1e-14);
    CHECK(std::abs(std::abs(C.bottomRows(2).determinant()) - 1) < 1e-12);

    Mat L(2, 1);
    L << 1, 1;
    Mat Lc = lagrangian_complement(L);
    CHECK(std::abs(Lc(0, 0) + Lc(1, 0)) < 1e-14);
    Mat both(2, 2);
    both << L, Lc * std::sqrt(2.0);
    CHECK(std::abs(both.determinant()) == doctest::Approx(2.0));

    std::mt19937 rng(6);
    for (int trial = 0; trial < 30; ++trial) {
        const int n = 1 + trial % 3;
        const Mat Lag = random_symplectic(rng, n, 0.8).leftCols(n);
        const Mat Cmp = lagrangian_complement(Lag);
        CHECK(lagrangian_check(Cmp, SymplecticSpace{n}));
        Mat sum(2 * n, 2 * n);
        sum << Lag, Cmp;
        CHECK(oracle::rank(sum) == 2 * n);
    }
    Mat x1xi1 = Mat::Zero(4, 2);
    x1xi1(0, 0) = 1;
    x1xi1(2, 1) = 1;
    CHECK_THROWS_WITH_AS(lagrangian_complement(x1xi1), doctest::Contains("NotLagrangian"), Error);
}

TEST_CASE("symplectic: gen_pos normalization")
{
    auto J = gen_pos_normalize(affine_map(J1()), 1.0);
    CHECK(J.passthrough);
    CHECK(J.A == doctest::Approx(2.0));
    CHECK(J.r0 == doctest::Approx(1.0 / std::sqrt(5.0)).epsilon(1e-6));
    CHECK(symplectic_residual(J.u) < 1e-12);
    CHECK(symplectic_residual(J.v) < 1e-12);

    // identity: the tangent graph is the diagonal, v has to move it
    auto I = gen_pos_normalize(affine_map(Mat::Identity(2, 2)), 1.0);
    CHECK_FALSE(I.passthrough);
    CHECK(symplectic_residual(I.v) < 1e-12);
    CHECK(I.r0 > 0);

    Mat sing = Mat::Zero(2, 2);
    sing(0, 0) = 1;
    CHECK_THROWS_WITH_AS(gen_pos_normalize(affine_map(sing), 1.0), doctest::Contains("SingularDifferential"), Error);

    // nonlinear maps: psi fixes 0 and the graph conditions hold for r <= r0
    std::mt19937 rng(7);
    for (int trial = 0; trial < 6; ++trial) {
        const int n = 1 + trial % 2;
        const Mat U = random_symplectic(rng, n, 0.8);
        MapWithJacobian phi;
        phi.dim = 2 * n;
        phi.eval = [U](const Vec& z) -> Vec {
            Vec w = U * z;
            w[0] += 0.1 * z[0] * z[0];
            return w;
        };
        auto N = gen_pos_normalize(phi, 1.0, n == 1 ? 20 : 8);
        CHECK(N.psi(Vec::Zero(2 * n)).norm() < 1e-12);
        CHECK(symplectic_residual(N.v) < 1e-12);
        for (double f : {1.0, 0.5, 0.1})
            CHECK(gen_pos_holds(N.psi, f * N.r0, N.A, n == 1 ? 20 : 8));
    }
}

TEST_CASE("symplectic: graph window check")
{
    MapWithJacobian psi = affine_map(J1());
    const double r0 = 1.0, A = 2.0, r = 0.2;
    auto same = graph_window_check(psi, psi, r0, A, r, 0.1);
    CHECK(same.inclusion);
    CHECK(same.samples > 100);

    CHECK_THROWS_WITH_AS(graph_window_check(psi, psi, r0, A, r, A * r / (A + 1)),
                         doctest::Contains("0 < eps < Ar/(A+1)"), Error);
    CHECK_THROWS_WITH_AS(graph_window_check(psi, psi, r0, A, 0.25, 0.1), doctest::Contains("0 < r < r0/4"), Error);

    const double eps = 0.1;
    Vec shift = Vec::Constant(2, eps / 2 / std::sqrt(2.0));
    auto moved = graph_window_check(psi, affine_map(J1(), shift), r0, A, r, eps);
    CHECK(moved.inclusion);
    CHECK(moved.sup_distance == doctest::Approx(eps / 2));

    CHECK_THROWS_WITH_AS(graph_window_check(psi, affine_map(J1(), Vec::Constant(2, 0.2)), r0, A, r, eps),
                         doctest::Contains("d(psi(p), psi1(p)) < eps"), Error);
}

TEST_CASE("symplectic: Moser correction on noisy maps")
{
    std::mt19937 rng(8);
    const double r = 0.5, R = 1.0, eps = 1e-2;
    for (int trial = 0; trial < 4; ++trial) {
        MapWithJacobian phi = noisy_map(rng);
        const auto t0 = std::chrono::steady_clock::now();
        MoserResult m = moser_correct(phi, r, R, eps);
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        CHECK(m.input_residual > 1e-4);
        CHECK(m.output_residual <= m.input_residual / 100);
        CHECK(m.sup_distance <= eps);
        CHECK(primitive_error(m) <= 1e-6);
        CHECK(secs < 60);
        // an independent residual probe away from the check samples
        CHECK(symplectic_residual(m.psi, disk_points(2, r, 30, 100 + trial)) <= m.input_residual / 100);
    }
}

TEST_CASE("symplectic: Moser on symplectic inputs")
{
    auto id = moser_correct(affine_map(Mat::Identity(2, 2)), 0.5, 1.0, 1e-2);
    for (const auto& z : disk_points(2, 0.5, 20, 9))
        CHECK((id.psi(z) - z).norm() < 1e-8);
    CHECK(id.output_residual < 1e-8);

    // smooth symplectic nonlinear map: a shear in xi composed with a rotation
    MapWithJacobian phi;
    phi.dim = 2;
    phi.eval = [](const Vec& z) -> Vec {
        Vec w(2);
        const double x = z[0], xi = z[1] + 0.2 * z[0] * z[0];
        w << std::cos(0.3) * x + std::sin(0.3) * xi, -std::sin(0.3) * x + std::cos(0.3) * xi;
        return w;
    };
    auto sm = moser_correct(phi, 0.5, 1.0, 1e-2);
    CHECK(sm.input_residual < 1e-9);
    CHECK(sm.output_residual < 1e-8);
    CHECK(sm.sup_distance < 1e-2);

    MapWithJacobian far = affine_map(Mat::Identity(2, 2) * 1.1);
    CHECK_THROWS_WITH_AS(moser_correct(far, 0.5, 1.0, 1e-2), doctest::Contains("DegenerateOmegaT"), Error);
}

TEST_CASE("symplectic: Hamiltonian isotopies of linear maps")
{
    const double r = 0.5;
    auto id = ham_isotopy_from_map(affine_map(Mat::Identity(2, 2)), r, 1e-4);
    for (const auto& z : disk_points(2, 2.0, 30, 10))
        for (double t : {0.1, 0.4, 0.9})
            CHECK(id.H(z, t) == 0.0);

    std::mt19937 rng(11);
    std::normal_distribution<double> g(0.0, 0.3);
    for (int trial = 0; trial < 10; ++trial) {
        const int n = 1 + trial % 2;
        Mat S(2 * n, 2 * n);
        for (int i = 0; i < 2 * n; ++i)
            for (int j = i; j < 2 * n; ++j)
                S(i, j) = S(j, i) = g(rng);
        const Mat A = -standard_omega(n) * S;
        const Mat phi = A.exp();
        auto iso = ham_isotopy_from_map(affine_map(phi), r, 1e-4);
        double err = 0;
        for (const auto& z : disk_points(2 * n, r, 40, 20 + trial))
            err = std::max(err, (iso.flow(z) - phi * z).norm());
        CHECK(err <= 1e-4);
        // time average of H is the quadratic Hamiltonian Q = z^T S z / 2
        for (const auto& z : disk_points(2 * n, r, 10, 40 + trial)) {
            double avg = 0;
            const int k = 600;
            for (int i = 0; i < k; ++i)
                avg += iso.H(z, (i + 0.5) / k) / k;
            const double Q = 0.5 * z.dot(S * z);
            CHECK(std::abs(avg - Q) <= 1e-3 * std::max(1e-2, std::abs(Q)) + 1e-6);
        }
        // H vanishes outside the support box
        Vec far = Vec::Constant(2 * n, iso.box_hi[0] * 1.01);
        CHECK(iso.H(far, 0.2) == 0.0);
        CHECK(iso.grad(far, 0.2).norm() == 0.0);
    }

    Mat shear(2, 2);
    shear << 1, 1, 0, 1;
    auto sh = ham_isotopy_from_map(affine_map(shear), r, 1e-4);
    for (const auto& z : disk_points(2, r, 10, 50)) {
        CHECK((sh.flow(z) - shear * z).norm() < 1e-4);
        double avg = 0;
        for (int i = 0; i < 600; ++i)
            avg += sh.H(z, (i + 0.5) / 600) / 600;
        CHECK(avg == doctest::Approx(0.5 * z[1] * z[1]).epsilon(1e-3));
    }
}

TEST_CASE("symplectic: Hamiltonian isotopy of a nonlinear map")
{
    // time-one map of H = x^3/3 (pure translation in xi by -x^2) then a translation
    MapWithJacobian phi;
    phi.dim = 2;
    phi.eval = [](const Vec& z) -> Vec {
        Vec w(2);
        w << z[0] + 0.05, z[1] - 0.3 * z[0] * z[0];
        return w;
    };
    auto iso = ham_isotopy_from_map(phi, 0.5, 1e-3);
    CHECK(iso.eta > 0);
    CHECK(iso.blend_error < 1e-3);
    for (const auto& z : disk_points(2, 0.5, 10, 60))
        CHECK((iso.flow(z) - phi(z)).norm() < 1e-3);
    // grad H matches central differences of H inside the box
    for (const auto& z : disk_points(2, 0.4, 5, 61)) {
        const double t = 0.5;
        Vec fd(2);
        for (int i = 0; i < 2; ++i) {
            Vec a = z, b = z;
            a[i] += 1e-5;
            b[i] -= 1e-5;
            fd[i] = (iso.H(a, t) - iso.H(b, t)) / 2e-5;
        }
        CHECK((fd - iso.grad(z, t)).norm() < 1e-6);
    }
}

TEST_CASE("symplectic: generating-function quantization")
{
    GeneratingFunction S;
    S.n = 1;
    S.S = [](const Vec& x, const Vec& y) { return -x[0] * y[0]; };
    S.grad = [](const Vec& x, const Vec& y) -> Vec {
        Vec g(2);
        g << -y[0], -x[0];
        return g;
    };
    auto rep = gf_quantization_check(S, affine_map(J1()));
    CHECK(rep.discrepancy <= 1e-10);
    CHECK(rep.points == 2500);
    CHECK(rep.simple);

    GeneratingFunction P = S;
    P.S = [](const Vec& x, const Vec& y) { return -x[0] * y[0] + 1e-3 * x[0] * y[0] * y[0]; };
    P.grad = nullptr;
    auto pert = gf_quantization_check(P, affine_map(J1()));
    // |grad(1e-3 x y^2)| peaks at (1e-3 y^2, 2e-3 x y) on the unit square
    CHECK(pert.discrepancy > 5e-4);
    CHECK(pert.discrepancy < 5e-3);

    CHECK_THROWS_WITH_AS(gf_quantization_check(S, affine_map(Mat::Identity(2, 2))), doctest::Contains("DegenerateGF"),
                         Error);
}
