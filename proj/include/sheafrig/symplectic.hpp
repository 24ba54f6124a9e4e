#pragma once

#include "sheafrig/smooth_map.hpp"

#include <functional>
#include <memory>
#include <string>
#include <vector>

namespace sheafrig {

// R^{2n} with coordinates (x; xi) and omega = sum d xi_i ^ d x_i,
// omega(u, v) = u^T Omega v with Omega = [[0, -I], [I, 0]].
struct SymplecticSpace {
    int n = 1;
    Mat omega() const;
};

Mat standard_omega(int n);

// Hamiltonian vector field convention: iota_X omega = -dH, i.e. X = -Omega grad H.

// max-abs entry of J^T Omega J - Omega
double symplectic_residual(const Mat& J);
// max over points
double symplectic_residual(const MapWithJacobian& phi, const std::vector<Vec>& points);

// Columns of W span the subspace. True iff W^{perp omega} is inside W.
// Integer-valued (or small dyadic) bases use exact rank over Z, other inputs
// an SVD threshold of 1e-10 on an orthonormalized basis.
bool coisotropic_check(const Mat& W, const SymplecticSpace& space);
bool isotropic_check(const Mat& W, const SymplecticSpace& space);
bool lagrangian_check(const Mat& W, const SymplecticSpace& space);

struct RhoLiftResult {
    bool coisotropic_s = false;
    bool coisotropic_lift = false;
    bool equal = false;
    Mat lift;  // basis of d rho^{-1}(S) in T_q T*(M x R), coordinates (x, s; xi, sigma)
};

// S a linear subspace (columns) of T_p T*M with M = R^n; q = (x0, s0; xi0, sigma0).
RhoLiftResult rho_lift_check(const Mat& S, double sigma0, const Vec& xi0);

// Omega L, orthonormalized; raises NotLagrangian
Mat lagrangian_complement(const Mat& L);

struct NormalizationData {
    Mat u, v;  // symplectic; psi = v o phi o u
    double A = 0.0;
    double r0 = 0.0;
    Mat w;  // linear map (x, x') -> (xi, xi') whose graph is T_0 Gamma_psi
    bool passthrough = false;
    MapWithJacobian psi;
    int grid_per_axis = 20;
    long samples_checked = 0;
};

// R0: radius of the ball on which phi is defined. phi(0) = 0 is required.
NormalizationData gen_pos_normalize(const MapWithJacobian& phi, double R0, int grid_per_axis = 20);

// Does psi satisfy the graph bound and the projection condition on
// B_r0 x B_Ar0 at the sample grid?
bool gen_pos_holds(const MapWithJacobian& psi, double r0, double A, int grid_per_axis = 20);

struct GraphWindowReport {
    bool inclusion = false;
    double sup_distance = 0.0;  // sampled sup |psi - psi1| on U
    int samples = 0;            // graph samples that landed in the left-hand side
    int failures = 0;
};

GraphWindowReport graph_window_check(const MapWithJacobian& psi, const MapWithJacobian& psi1, double r0, double A,
                                     double r, double eps, int samples = 10000);

struct MoserOptions {
    // modulus of continuity of d phi; estimated from samples when empty
    std::function<double(double)> modulus;
    int grid_nodes = 10000;
    int quad_nodes = 32;
    int rk_steps = 8;
    int kernel_nodes_per_axis = 4;
    int check_samples = 400;
    double input_gate = 1e-2;
};

struct MoserResult {
    MapWithJacobian psi;
    double width = 0.0;  // mollification half-width
    double r1 = 0.0, r2 = 0.0;
    double input_residual = 0.0;
    double output_residual = 0.0;
    double sup_distance = 0.0;  // sampled |phi - psi| on B_r
    double max_field = 0.0;     // sampled |X_t|
    // primitive data on B_r1: beta = phi'^* omega - omega as a matrix,
    // sigma as a covector field with d sigma = beta
    std::function<Mat(const Vec&)> beta;
    std::function<Vec(const Vec&)> sigma;
    std::function<Vec(const Vec&)> mollified;
};

MoserResult moser_correct(const MapWithJacobian& phi, double r, double R, double eps, const MoserOptions& opt = {});

// max over probes of |d sigma - beta| with d sigma by central differences
double primitive_error(const MoserResult& m, int probes = 50, std::uint64_t seed = 5);

struct HamIsotopyOptions {
    int rk_steps = 300;
    int quad_nodes = 16;
    int check_samples = 64;
    double domain_radius = 0.0;  // radius where phi is defined; 0 means unbounded
};

struct HamiltonianIsotopy {
    int dim = 0;
    std::function<double(const Vec&, double)> H;
    std::function<Vec(const Vec&, double)> grad;
    Vec box_lo, box_hi;  // compact support C: H = 0 outside C x [0, 1]
    double inner = 0.0;  // cutoff is 1 on |z|_inf <= inner
    int rk_steps = 300;
    double eta = 0.0;          // blend width found for the near-identity part
    double blend_error = 0.0;  // sampled C^1 size of the blend correction
    double flow_error = 0.0;   // sampled sup |Phi_1 - phi| on B_r
    Vec translation;
    Mat linear_log;  // A0 with dphi(0) = exp(A0)

    Vec field(const Vec& z, double t) const;
    Vec flow(const Vec& z, double t0 = 0.0, double t1 = 1.0) const;
};

HamiltonianIsotopy ham_isotopy_from_map(const MapWithJacobian& phi, double r, double eps,
                                        const HamIsotopyOptions& opt = {});

// S(x, y) on R^n x R^n; xi = -d_x S, xi' = d_y S
struct GeneratingFunction {
    int n = 1;
    std::function<double(const Vec&, const Vec&)> S;
    // (d_x S, d_y S); central differences when empty
    std::function<Vec(const Vec&, const Vec&)> grad;

    Vec gradient(const Vec& x, const Vec& y) const;
};

struct GfGrid {
    double lo = -1.0, hi = 1.0;
    int per_axis = 50;
};

struct GfReport {
    double discrepancy = 0.0;  // max of the two one-sided distances
    double forward = 0.0;      // rho(SS(K)) to Lambda_phi
    double backward = 0.0;     // Lambda_phi to rho(SS(K))
    double min_mixed_det = 0.0;
    bool simple = false;  // SS(K) is the conormal of the smooth graph {s = S}
    long points = 0;
    std::string note;
};

GfReport gf_quantization_check(const GeneratingFunction& S, const MapWithJacobian& phi, const GfGrid& grid = {});

}  // namespace sheafrig
