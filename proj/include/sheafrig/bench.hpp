#pragma once

#include "sheafrig/cones.hpp"

#include <cmath>
#include <optional>
#include <string>
#include <vector>

namespace sheafrig {

// Everything a scenario run reads. Keys in the INI file match the member
// names, grouped into [scenario], [approximation], [window], [degree],
// [hull], [verdict].
struct ScenarioConfig {
    // [scenario]
    std::string family = "linear_rotation";  // linear_rotation | shear | oscillatory_hamiltonian | custom
    std::string hamiltonian;                 // custom family only, in x1.., xi1.. (x, xi when n = 1)
    int n = 1;                               // half-dimension
    int N = 50;                              // sequence length
    unsigned seed = 1;                       // offsets every sample sequence
    double amplitude = 0.05;                 // oscillatory family
    double flow_time = 1.0;                  // custom family: limit map is the time-flow_time map
    int integrator_steps = 64;
    double distortion = 0.0;                 // scales phi_n by 1 + distortion (breaks symplecticity)
    double symplectic_gate = 1e-6;
    // [approximation]
    std::string error_schedule = "inverse";  // inverse | power:p | constant:c
    int isotopy_rk_steps = 300;
    int isotopy_samples = 64;
    // [window]
    double domain_radius = 1.0;    // phi is examined on the ball of this radius
    double window_fraction = 0.2;  // r = window_fraction * r0
    int window_samples = 24;       // per axis, sampled window inclusion
    int lemma_samples = 4000;
    int normalization_grid = 20;
    // [degree]
    int seeds_per_axis = 40;
    int boundary_samples = 2000;
    // [hull]
    int hull_grid = 9;  // base points per axis
    double hull_tolerance = 1e-6;
    // [verdict]
    double plane_tolerance = 1e-6;
    int plane_samples = 400;
};

ScenarioConfig parse_config(const std::string& ini_text);
ScenarioConfig load_config(const std::string& path);
void validate_config(const ScenarioConfig& config);

// error bound e_n of the approximation step
double schedule_value(const ScenarioConfig& config, int n);
bool schedule_tends_to_zero(const ScenarioConfig& config);
std::string schedule_formula(const ScenarioConfig& config);

struct PerNRecord {
    int n = 0;
    double e_n = 0.0;
    double residual = 0.0;
    double approx_error = NAN;  // sup |psi_n - Phi_{n,1}| on the r0-ball
    double proximity = NAN;     // sup |psi_n - psi_inf| on U plus approx_error
    bool lemma_pass = false;    // proximity < eps and sampled lemma inclusion
    bool window_pass = false;   // sampled window inclusion
    long window_samples = 0;
    std::optional<int> degree;
    std::string note;           // first error met in this n, if any
    double hull_distance = NAN;
    int hull_points = 0;
    bool computed = false;
};

struct LadderReport {
    double c1 = 0, c2 = 0;
    double c = 0, eps = 0, c_prime = 0, delta = 0;
    double r1 = 0;
    WindowLadder ladder;
    double nesting_margin = 0;
    bool cutoff_inclusion = false;
};

struct TangentPlaneReport {
    Mat basis;  // columns, coordinates (x, x', xi, -xi')
    double radius = NAN;  // sampling ball actually used
    double residual = NAN;
    int samples = 0;
    double projection_sigma_min = 0;
    bool section = false;
    bool coisotropic = false;
    bool lagrangian = false;
};

enum class RunStatus { Verdict, GateFailure, NumericBudget };

struct RigidityReport {
    ScenarioConfig config;
    RunStatus status = RunStatus::GateFailure;
    std::string failed_step;  // set unless status == Verdict
    std::string failure_message;

    // normalization
    double A = 0, r0 = 0, r = 0, eps = 0;
    bool passthrough = false;
    Mat u, v;
    Vec translation;

    std::vector<PerNRecord> per_n;  // always N entries
    std::optional<int> N_r;
    std::optional<int> N_r_lemma;
    std::optional<LadderReport> ladder;
    bool hull_monotone = false;
    std::optional<TangentPlaneReport> plane;
    std::optional<std::string> verdict;

    std::vector<std::pair<std::string, double>> timings;  // seconds per stage
};

RigidityReport run_scenario(const ScenarioConfig& config);

// JSON with the determinism hash filled in; timings are excluded from it.
std::string report_json(const RigidityReport& report);
std::string report_csv(const RigidityReport& report);
// FNV-1a 64 of the JSON text without "timings" and "hash", as 16 hex digits
std::string report_hash(const RigidityReport& report);
// writes DIR/report.json or DIR/report.csv, returns the path
std::string emit_report(const RigidityReport& report, const std::string& dir, const std::string& format);

std::vector<std::string> list_scenarios();
std::vector<std::string> list_steps();
std::string describe(const std::string& step);

}  // namespace sheafrig
