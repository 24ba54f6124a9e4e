#include "sheafrig/bench.hpp"

#include "numerics.hpp"
#include "sheafrig/degree.hpp"
#include "sheafrig/error.hpp"
#include "sheafrig/expression.hpp"
#include "sheafrig/parallel.hpp"
#include "sheafrig/symplectic.hpp"

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>
#include <json.hpp>

#include <charconv>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

namespace sheafrig {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0)
{
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

// ---------------------------------------------------------------- config

template <class T>
T parse_number(const std::string& key, const std::string& text)
{
    const auto b = text.find_first_not_of(" \t"), e = text.find_last_not_of(" \t");
    T value{};
    if (b != std::string::npos) {
        const char* first = text.data() + b;
        const char* last = text.data() + e + 1;
        const auto [ptr, ec] = std::from_chars(first, last, value);
        if (ec == std::errc() && ptr == last)
            return value;
    }
    throw Error(ErrorCode::InvalidConfig, "key '" + key + "': cannot read '" + text + "'");
}

struct KeySpec {
    const char* section;
    const char* key;
    std::function<void(ScenarioConfig&, const std::string&)> set;
};

template <class T>
KeySpec number_key(const char* section, const char* key, T ScenarioConfig::*member)
{
    return {section, key, [key, member](ScenarioConfig& c, const std::string& v) {
                c.*member = parse_number<T>(key, v);
            }};
}

KeySpec string_key(const char* section, const char* key, std::string ScenarioConfig::*member)
{
    return {section, key, [member](ScenarioConfig& c, const std::string& v) { c.*member = v; }};
}

const std::vector<KeySpec>& key_specs()
{
    static const std::vector<KeySpec> specs = {
        string_key("scenario", "family", &ScenarioConfig::family),
        string_key("scenario", "hamiltonian", &ScenarioConfig::hamiltonian),
        number_key("scenario", "n", &ScenarioConfig::n),
        number_key("scenario", "N", &ScenarioConfig::N),
        number_key("scenario", "seed", &ScenarioConfig::seed),
        number_key("scenario", "amplitude", &ScenarioConfig::amplitude),
        number_key("scenario", "flow_time", &ScenarioConfig::flow_time),
        number_key("scenario", "integrator_steps", &ScenarioConfig::integrator_steps),
        number_key("scenario", "distortion", &ScenarioConfig::distortion),
        number_key("scenario", "symplectic_gate", &ScenarioConfig::symplectic_gate),
        string_key("approximation", "error_schedule", &ScenarioConfig::error_schedule),
        number_key("approximation", "isotopy_rk_steps", &ScenarioConfig::isotopy_rk_steps),
        number_key("approximation", "isotopy_samples", &ScenarioConfig::isotopy_samples),
        number_key("window", "domain_radius", &ScenarioConfig::domain_radius),
        number_key("window", "window_fraction", &ScenarioConfig::window_fraction),
        number_key("window", "window_samples", &ScenarioConfig::window_samples),
        number_key("window", "lemma_samples", &ScenarioConfig::lemma_samples),
        number_key("window", "normalization_grid", &ScenarioConfig::normalization_grid),
        number_key("degree", "seeds_per_axis", &ScenarioConfig::seeds_per_axis),
        number_key("degree", "boundary_samples", &ScenarioConfig::boundary_samples),
        number_key("hull", "hull_grid", &ScenarioConfig::hull_grid),
        number_key("hull", "hull_tolerance", &ScenarioConfig::hull_tolerance),
        number_key("verdict", "plane_tolerance", &ScenarioConfig::plane_tolerance),
        number_key("verdict", "plane_samples", &ScenarioConfig::plane_samples),
    };
    return specs;
}

struct Schedule {
    enum Kind { Inverse, Power, Constant } kind = Inverse;
    double p = 1.0;
};

Schedule parse_schedule(const std::string& text)
{
    Schedule s;
    if (text == "inverse")
        return s;
    const auto colon = text.find(':');
    const std::string head = text.substr(0, colon);
    if (colon == std::string::npos || (head != "power" && head != "constant"))
        throw Error(ErrorCode::InvalidConfig, "error_schedule must be inverse, power:p or constant:c, got '" + text + "'");
    s.kind = head == "power" ? Schedule::Power : Schedule::Constant;
    s.p = parse_number<double>("error_schedule", text.substr(colon + 1));
    if (!(s.p > 0) || !std::isfinite(s.p))
        throw Error(ErrorCode::InvalidConfig, "error_schedule parameter must be positive");
    return s;
}

// ---------------------------------------------------------------- families

Mat rotation_matrix(int n, double theta)
{
    const Mat I = Mat::Identity(n, n);
    Mat M(2 * n, 2 * n);
    M << std::cos(theta) * I, std::sin(theta) * I, -std::sin(theta) * I, std::cos(theta) * I;
    return M;
}

Mat shear_matrix(int n, double s)
{
    Mat M = Mat::Identity(2 * n, 2 * n);
    M.topRightCorner(n, n) = s * Mat::Identity(n, n);
    return M;
}

// Time-one map of H = |xi|^2/2 + |x|^2/2 + (a/k^2) sum cos(k x_i) by the
// fourth-order Yoshida composition, with its exact discrete Jacobian.
MapWithJacobian oscillatory_flow(int n, double a, int k, int steps)
{
    const double cbrt2 = std::cbrt(2.0);
    const double w1 = 1.0 / (2.0 - cbrt2), w0 = -cbrt2 * w1;
    const double c[4] = {w1 / 2, (w0 + w1) / 2, (w0 + w1) / 2, w1 / 2};
    const double dk[3] = {w1, w0, w1};
    const double h = 1.0 / steps;
    auto run = [=](const Vec& z, Mat* jac) {
        Vec x = z.head(n), xi = z.tail(n);
        Mat Jx, Jxi;
        if (jac) {
            Jx = Mat::Zero(n, 2 * n);
            Jxi = Mat::Zero(n, 2 * n);
            Jx.leftCols(n).setIdentity();
            Jxi.rightCols(n).setIdentity();
        }
        for (int s = 0; s < steps; ++s)
            for (int stage = 0; stage < 4; ++stage) {
                x += c[stage] * h * xi;
                if (jac)
                    Jx += c[stage] * h * Jxi;
                if (stage == 3)
                    break;
                for (int i = 0; i < n; ++i) {
                    const double grad = x[i] - a / k * std::sin(k * x[i]);
                    if (jac)
                        Jxi.row(i) -= dk[stage] * h * (1 - a * std::cos(k * x[i])) * Jx.row(i);
                    xi[i] -= dk[stage] * h * grad;
                }
            }
        if (jac) {
            jac->resize(2 * n, 2 * n);
            *jac << Jx, Jxi;
        }
        Vec out(2 * n);
        out << x, xi;
        return out;
    };
    MapWithJacobian f;
    f.dim = 2 * n;
    f.eval = [run](const Vec& z) { return run(z, nullptr); };
    f.jacobian = [run](const Vec& z) {
        Mat J;
        run(z, &J);
        return J;
    };
    return f;
}

// Time-T map of a Hamiltonian given by an expression; two-stage Gauss-Legendre
// (symplectic, order four) with fixed-point stage solves.
MapWithJacobian expression_flow(int n, const Expression& H, double T, int steps)
{
    const double s3 = std::sqrt(3.0);
    const double a11 = 0.25, a12 = 0.25 - s3 / 6, a21 = 0.25 + s3 / 6, a22 = 0.25;
    auto field = [H, n](const Vec& z) {
        const Vec g = H.gradient(z);
        Vec X(2 * n);
        X << g.tail(n), -g.head(n);
        return X;
    };
    MapWithJacobian f;
    f.dim = 2 * n;
    f.eval = [=](const Vec& z0) {
        const double h = T / steps;
        Vec z = z0;
        for (int s = 0; s < steps; ++s) {
            Vec k1 = field(z), k2 = k1;
            for (int it = 0; it < 100; ++it) {
                const Vec n1 = field(z + h * (a11 * k1 + a12 * k2));
                const Vec n2 = field(z + h * (a21 * k1 + a22 * k2));
                const double change = (n1 - k1).norm() + (n2 - k2).norm();
                k1 = n1;
                k2 = n2;
                if (change <= 1e-15 * (1 + k1.norm()))
                    break;
            }
            z += 0.5 * h * (k1 + k2);
        }
        return z;
    };
    return f;
}

struct FamilyMaps {
    std::function<MapWithJacobian(int)> member;  // phi_k, k >= 1
    MapWithJacobian limit;
};

FamilyMaps make_family(const ScenarioConfig& c)
{
    FamilyMaps F;
    const int n = c.n;
    if (c.family == "linear_rotation") {
        F.member = [n](int k) { return affine_map(rotation_matrix(n, 1.0 + 1.0 / k)); };
        F.limit = affine_map(rotation_matrix(n, 1.0));
    } else if (c.family == "shear") {
        F.member = [n](int k) { return affine_map(shear_matrix(n, 1.0 + 1.0 / k)); };
        F.limit = affine_map(shear_matrix(n, 1.0));
    } else if (c.family == "oscillatory_hamiltonian") {
        const double a = c.amplitude;
        const int steps = c.integrator_steps;
        F.member = [n, a, steps](int k) { return oscillatory_flow(n, a, k, steps); };
        F.limit = affine_map(rotation_matrix(n, 1.0));
    } else {
        const Expression H = Expression::parse(c.hamiltonian, phase_space_variables(n));
        const double T = c.flow_time;
        const int steps = c.integrator_steps;
        F.member = [n, H, T, steps](int k) { return expression_flow(n, H, T * (1.0 + 1.0 / k), steps); };
        F.limit = expression_flow(n, H, T, steps);
    }
    if (c.distortion != 0.0) {
        const double s = 1.0 + c.distortion;
        auto base = F.member;
        F.member = [base, s, n](int k) { return compose(affine_map(s * Mat::Identity(2 * n, 2 * n)), base(k)); };
    }
    return F;
}

long sample_offset(const ScenarioConfig& c, int stream)
{
    return 1 + static_cast<long>(c.seed) * 7919 + stream * 104729L;
}

// points of U = B_r0 x B_Ar0 (x and xi balls)
std::vector<Vec> window_samples(int n, double rx, double rxi, int count, long offset)
{
    static const int primes[] = {2, 3, 5, 7, 11, 13, 17, 19};
    std::vector<Vec> pts;
    for (long k = offset; static_cast<int>(pts.size()) < count && k < offset + 200L * count; ++k) {
        Vec z(2 * n);
        for (int i = 0; i < 2 * n; ++i)
            z[i] = (2 * detail::halton(k, primes[i]) - 1) * (i < n ? rx : rxi);
        if (z.head(n).norm() < rx && z.tail(n).norm() < rxi)
            pts.push_back(z);
    }
    return pts;
}

int effective_seeds(const ScenarioConfig& c)
{
    return c.n == 1 ? c.seeds_per_axis : std::min(c.seeds_per_axis, 14);
}

// Points of Lambda^1 over the base point y = (x, x'): fiber coordinates
// (xi, -xi') for every xi in the fiber window with psi(x, xi)_x = x'.
std::vector<Vec> fiber_points(const MapWithJacobian& psi, const Vec& y, double r, double A, const ScenarioConfig& c)
{
    const int n = psi.dim / 2;
    const Vec x = y.head(n), xp = y.tail(n);
    DegreeQuery q;
    q.map.dim = n;
    q.map.eval = [psi, x, n](const Vec& xi) -> Vec {
        Vec z(2 * n);
        z << x, xi;
        return psi(z).head(n);
    };
    q.map.jacobian = [psi, x, n](const Vec& xi) -> Mat {
        Vec z(2 * n);
        z << x, xi;
        return psi.jac(z).topRightCorner(n, n);
    };
    q.admissible = [psi, x, n, A, r](const Vec& xi) {
        Vec z(2 * n);
        z << x, xi;
        Vec fib(2 * n);
        fib << xi, psi(z).tail(n);
        return fib.norm() < 3 * A * r;
    };
    q.target_center = xp;
    q.target_radius = 1e-9 * std::max(1.0, r);
    q.regular_value = xp;
    q.window_lo = Vec::Constant(n, -3 * A * r);
    q.window_hi = Vec::Constant(n, 3 * A * r);
    q.options.seeds_per_axis = c.n == 1 ? c.seeds_per_axis : effective_seeds(c);
    q.options.boundary_samples = std::max(16, c.boundary_samples / 20);
    const DegreeReport rep = degree_report(q);
    std::vector<Vec> out;
    for (const Vec& xi : rep.preimages) {
        Vec z(2 * n);
        z << x, xi;
        Vec p(2 * n);
        p << xi, -psi(z).tail(n);
        out.push_back(p);
    }
    return out;
}

std::vector<Vec> hull_base_grid(int n, double r, int m)
{
    const int d = 2 * n;
    long total = 1;
    for (int i = 0; i < d; ++i)
        total *= m;
    std::vector<Vec> out;
    for (long idx = 0; idx < total; ++idx) {
        Vec y(d);
        long rest = idx;
        for (int k = 0; k < d; ++k) {
            y[k] = r * (2 * ((rest % m) + 0.5) / m - 1);
            rest /= m;
        }
        if (y.norm() < 0.95 * r)
            out.push_back(y);
    }
    return out;
}

TangentPlaneReport fit_plane_at(const TwistedGraph& G, int n, double rho, double lip, const ScenarioConfig& c)
{
    const int d = 2 * n;
    TangentPlaneReport out;
    Mat C = Mat::Zero(2 * d, 2 * d);
    std::vector<std::pair<Vec, double>> pts;
    double wsum = 0;
    // antipodal pairs cancel the even (curvature) part of the graph in C
    for (const Vec& z : detail::ball_samples(d, rho / lip * 2, 4 * c.plane_samples, sample_offset(c, 3))) {
        const Vec pp = G.point(z), pm = G.point(-z);
        if (pp.norm() > rho || pm.norm() > rho)
            continue;
        for (const Vec& p : {pp, pm}) {
            const double w = std::exp(-p.squaredNorm() / (2 * 0.25 * rho * rho));
            C += w * p * p.transpose();
            wsum += w;
            pts.emplace_back(p, w);
        }
        if (static_cast<int>(pts.size()) >= c.plane_samples)
            break;
    }
    out.samples = static_cast<int>(pts.size());
    if (out.samples < 4 * d)
        throw Error(ErrorCode::NumericBudgetExceeded, "too few graph samples near the origin for a plane fit");
    Eigen::SelfAdjointEigenSolver<Mat> es(C / wsum);
    out.basis = es.eigenvectors().rightCols(d);  // largest eigenvalues
    const Mat P = out.basis * out.basis.transpose();
    double num = 0, den = 0;
    for (const auto& [p, w] : pts) {
        num += w * (p - P * p).squaredNorm();
        den += w * p.squaredNorm();
    }
    out.residual = std::sqrt(num / den);
    Eigen::JacobiSVD<Mat> svd(out.basis.topRows(d));
    out.projection_sigma_min = svd.singularValues()[d - 1];
    out.section = out.projection_sigma_min > 1e-6;
    out.coisotropic = coisotropic_check(out.basis, SymplecticSpace{d});
    out.lagrangian = lagrangian_check(out.basis, SymplecticSpace{d});
    out.radius = rho;
    return out;
}

// The symmetric fit leaves a tilt of order rho^2 on curved graphs; shrink the
// ball until the plane is resolved or two refinements are spent.
TangentPlaneReport fit_tangent_plane(const MapWithJacobian& psi, double r0, const ScenarioConfig& c)
{
    const int n = psi.dim / 2;
    const TwistedGraph G = make_twisted_graph(psi);
    const double lip = 1 + psi.jac(Vec::Zero(2 * n)).norm();
    double rho = 1e-2 * r0;
    TangentPlaneReport out = fit_plane_at(G, n, rho, lip, c);
    for (int k = 0; k < 2 && !out.coisotropic; ++k) {
        rho /= 10;
        out = fit_plane_at(G, n, rho, lip, c);
    }
    return out;
}

LadderReport build_ladder(double A, double r, int n)
{
    LadderReport L;
    L.c1 = 1.0 / (3 * A * r);
    L.c2 = 1.0 / (2 * A * r);
    const SplitRadius s = split_radius(L.c1, L.c2, r, 2 * n + 1);
    L.c = s.c;
    L.eps = s.eps;
    L.c_prime = s.c_prime;
    L.delta = s.delta;
    L.r1 = s.r1;
    L.cutoff_inclusion = verify_cutoff_inclusion(L.c1, L.c2, L.c, L.eps, 10000);
    L.ladder = window_ladder(L.r1, L.c1);
    double margin = INFINITY;
    for (int i = 0; i < 4; ++i) {
        const Window& w = L.ladder.windows[i];
        const Window& D = L.ladder.domains[i];
        margin = std::min({margin, w.lo - D.lo, D.hi - w.hi, w.hi - w.lo});
    }
    for (int i = 0; i < 3; ++i) {
        const Window& a = L.ladder.windows[i];
        const Window& b = L.ladder.windows[i + 1];
        margin = std::min({margin, b.ball_radius - a.ball_radius, a.lo - b.lo, b.hi - a.hi});
    }
    L.nesting_margin = margin;
    return L;
}

struct GateStop {
    RunStatus status;
    std::string step, message;
};

}  // namespace

// ---------------------------------------------------------------- config API

ScenarioConfig parse_config(const std::string& ini_text)
{
    namespace pt = boost::property_tree;
    pt::ptree tree;
    try {
        std::istringstream in(ini_text);
        pt::read_ini(in, tree);
    } catch (const pt::ini_parser_error& e) {
        throw Error(ErrorCode::InvalidConfig, "line " + std::to_string(e.line()) + ": " + e.message());
    }
    ScenarioConfig c;
    for (const auto& [section, body] : tree) {
        if (body.empty())
            throw Error(ErrorCode::InvalidConfig, "key '" + section + "' outside any section");
        for (const auto& [key, value] : body) {
            const KeySpec* spec = nullptr;
            for (const auto& s : key_specs())
                if (section == s.section && key == s.key)
                    spec = &s;
            if (!spec)
                throw Error(ErrorCode::InvalidConfig, "unknown key '" + key + "' in section [" + section + "]");
            spec->set(c, value.get_value<std::string>());
        }
    }
    validate_config(c);
    return c;
}

ScenarioConfig load_config(const std::string& path)
{
    std::ifstream in(path);
    if (!in)
        throw Error(ErrorCode::IoFailure, "cannot open config '" + path + "'");
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_config(buf.str());
}

void validate_config(const ScenarioConfig& c)
{
    auto fail = [](const std::string& why) { throw Error(ErrorCode::InvalidConfig, why); };
    const auto fams = list_scenarios();
    if (std::find(fams.begin(), fams.end(), c.family) == fams.end())
        fail("unknown family '" + c.family + "'");
    if (c.family == "custom") {
        if (c.hamiltonian.empty())
            fail("custom family needs a hamiltonian expression");
        Expression::parse(c.hamiltonian, phase_space_variables(c.n == 2 ? 2 : 1));
    } else if (!c.hamiltonian.empty()) {
        fail("hamiltonian is only read by the custom family");
    }
    if (c.n != 1 && c.n != 2)
        fail("n must be 1 or 2");
    if (c.N < 3)
        fail("N must be at least 3");
    if (!(c.window_fraction > 0 && c.window_fraction < 0.25))
        fail("window_fraction must lie in (0, 1/4) so that 0 < r < r0/4");
    if (!(c.domain_radius > 0) || !std::isfinite(c.domain_radius))
        fail("domain_radius must be positive");
    if (!(c.symplectic_gate > 0))
        fail("symplectic_gate must be positive");
    if (!(c.amplitude >= 0) || !(c.flow_time > 0) || !(c.distortion > -1))
        fail("amplitude >= 0, flow_time > 0 and distortion > -1 are required");
    if (!(c.hull_tolerance >= 0) || !(c.plane_tolerance > 0))
        fail("tolerances must be non-negative");
    for (int v : {c.integrator_steps, c.isotopy_rk_steps, c.isotopy_samples, c.window_samples, c.lemma_samples,
                  c.normalization_grid, c.seeds_per_axis, c.boundary_samples, c.hull_grid, c.plane_samples})
        if (v < 1)
            fail("sample counts and step counts must be positive");
    parse_schedule(c.error_schedule);
}

double schedule_value(const ScenarioConfig& c, int n)
{
    const Schedule s = parse_schedule(c.error_schedule);
    switch (s.kind) {
    case Schedule::Inverse: return 1.0 / n;
    case Schedule::Power: return std::pow(static_cast<double>(n), -s.p);
    case Schedule::Constant: return s.p;
    }
    return 0.0;
}

bool schedule_tends_to_zero(const ScenarioConfig& c)
{
    return parse_schedule(c.error_schedule).kind != Schedule::Constant;
}

std::string schedule_formula(const ScenarioConfig& c)
{
    const Schedule s = parse_schedule(c.error_schedule);
    std::ostringstream out;
    out.precision(17);
    switch (s.kind) {
    case Schedule::Inverse: return "e_n = 1/n";
    case Schedule::Power: out << "e_n = n^-" << s.p; break;
    case Schedule::Constant: out << "e_n = " << s.p; break;
    }
    return out.str();
}

// ---------------------------------------------------------------- pipeline

RigidityReport run_scenario(const ScenarioConfig& config)
{
    validate_config(config);
    const auto t_total = Clock::now();
    RigidityReport R;
    R.config = config;
    const ScenarioConfig& c = config;
    const int n = c.n, d = 2 * n, N = c.N;
    R.per_n.resize(N);
    for (int k = 1; k <= N; ++k) {
        R.per_n[k - 1].n = k;
        R.per_n[k - 1].e_n = schedule_value(c, k);
    }
    const FamilyMaps fam = make_family(c);
    std::vector<MapWithJacobian> members(N);
    for (int k = 1; k <= N; ++k)
        members[k - 1] = fam.member(k);

    auto stop = [&](RunStatus s, const std::string& step, const std::string& msg) { throw GateStop{s, step, msg}; };

    try {
        // inputs are symplectic on the domain ball
        auto t0 = Clock::now();
        const auto pts = detail::ball_samples(d, c.domain_radius, 32, sample_offset(c, 0));
        parallel_chunks(N, N, [&](std::size_t, std::size_t b, std::size_t e) {
            for (std::size_t i = b; i < e; ++i)
                R.per_n[i].residual = symplectic_residual(members[i], pts);
        });
        R.timings.emplace_back("symplectic-input", seconds_since(t0));
        for (const auto& rec : R.per_n)
            if (!(rec.residual <= c.symplectic_gate)) {
                std::ostringstream msg;
                msg << "symplectic residual " << rec.residual << " of phi_" << rec.n << " exceeds the gate "
                    << c.symplectic_gate;
                stop(RunStatus::GateFailure, "symplectic-input", msg.str());
            }

        // normalization of the limit
        t0 = Clock::now();
        R.translation = fam.limit(Vec::Zero(d));
        const MapWithJacobian shift = affine_map(Mat::Identity(d, d), -R.translation);
        NormalizationData norm;
        try {
            norm = gen_pos_normalize(compose(shift, fam.limit), c.domain_radius, c.normalization_grid);
        } catch (const Error& e) {
            stop(RunStatus::GateFailure, "normalization", e.what());
        }
        R.A = norm.A;
        R.r0 = norm.r0;
        R.u = norm.u;
        R.v = norm.v;
        R.passthrough = norm.passthrough;
        R.r = c.window_fraction * R.r0;
        R.eps = 0.99 * std::min({R.A * R.r / (R.A + 1), R.r0 - R.r, R.A * R.r0 / 2});
        R.timings.emplace_back("normalization", seconds_since(t0));
        const double A = R.A, r0 = R.r0, r = R.r, eps = R.eps;
        const MapWithJacobian psi_inf = norm.psi;
        auto normalize = [&](const MapWithJacobian& f) {
            MapWithJacobian g = compose(affine_map(norm.v), compose(shift, compose(f, affine_map(norm.u))));
            g.domain = Domain::ball(Vec::Zero(d), c.domain_radius);
            return g;
        };

        if (!schedule_tends_to_zero(c))
            stop(RunStatus::GateFailure, "approximation",
                 "error schedule " + schedule_formula(c) + " does not decrease to 0; no N_r can be certified");

        // limit fibers over the hull base grid
        t0 = Clock::now();
        const auto base = hull_base_grid(n, r, n == 1 ? c.hull_grid : std::min(c.hull_grid, 5));
        std::vector<Vec> limit_fiber(base.size());
        for (std::size_t i = 0; i < base.size(); ++i) {
            const auto f = fiber_points(psi_inf, base[i], r, A, c);
            if (f.size() != 1)
                stop(RunStatus::GateFailure, "section",
                     "the limit window has " + std::to_string(f.size()) + " points over a base point");
            limit_fiber[i] = f[0];
        }
        const auto u_samples = window_samples(n, r0, A * r0, std::max(100, c.lemma_samples / 4), sample_offset(c, 1));

        // per-n stages, independent across n
        parallel_chunks(N, N, [&](std::size_t, std::size_t b, std::size_t e) {
            for (std::size_t i = b; i < e; ++i) {
                PerNRecord& rec = R.per_n[i];
                auto note = [&rec](const std::string& s) {
                    if (rec.note.empty())
                        rec.note = s;
                };
                try {
                    const MapWithJacobian psi = normalize(members[i]);
                    try {
                        HamIsotopyOptions hopt;
                        hopt.rk_steps = c.isotopy_rk_steps;
                        hopt.check_samples = c.isotopy_samples;
                        hopt.domain_radius = c.domain_radius;
                        rec.approx_error = ham_isotopy_from_map(psi, r0, 1e300, hopt).flow_error;
                    } catch (const Error& err) {
                        note(std::string("approximation: ") + err.what());
                    }
                    double sup = 0;
                    for (const Vec& z : u_samples)
                        sup = std::max(sup, (psi(z) - psi_inf(z)).norm());
                    rec.proximity = sup + rec.approx_error;
                    if (rec.proximity < eps) {
                        try {
                            rec.lemma_pass = graph_window_check(psi_inf, psi, r0, A, r, eps, c.lemma_samples).inclusion;
                        } catch (const Error& err) {
                            note(std::string("window lemma: ") + err.what());
                        }
                    }
                    GraphDegreeOptions gopt;
                    gopt.window_samples_per_axis = c.window_samples;
                    gopt.degree.seeds_per_axis = effective_seeds(c);
                    gopt.degree.boundary_samples = c.boundary_samples;
                    rec.window_samples = 1;
                    for (int j = 0; j < d; ++j)
                        rec.window_samples *= c.window_samples;
                    try {
                        rec.degree = graph_projection_degree(make_twisted_graph(psi), r, A, gopt);
                        rec.window_pass = true;
                    } catch (const Error& err) {
                        rec.window_pass = err.code() != ErrorCode::WindowBoundViolated;
                        note(std::string("degree: ") + err.what());
                    }
                    double hull = 0;
                    for (std::size_t j = 0; j < base.size() && std::isfinite(hull); ++j) {
                        const auto f = fiber_points(psi, base[j], r, A, c);
                        rec.hull_points += static_cast<int>(f.size());
                        if (f.empty())
                            hull = INFINITY;
                        for (const Vec& p : f)
                            hull = std::max(hull, (p - limit_fiber[j]).norm());
                    }
                    rec.hull_distance = hull;
                } catch (const std::exception& err) {
                    note(err.what());
                }
                rec.computed = true;
            }
        });
        R.timings.emplace_back("per-n stages", seconds_since(t0));

        for (const auto& rec : R.per_n) {
            if (!std::isfinite(rec.approx_error))
                stop(RunStatus::GateFailure, "approximation", "n = " + std::to_string(rec.n) + ": " + rec.note);
            if (rec.approx_error > rec.e_n) {
                std::ostringstream msg;
                msg << "n = " << rec.n << ": sup |phi_n - Phi_n,1| = " << rec.approx_error << " exceeds e_n = " << rec.e_n;
                stop(RunStatus::NumericBudget, "approximation", msg.str());
            }
        }

        // N_r: least n from which the window inclusion holds on samples
        int first = N + 1;
        for (int k = N; k >= 1 && R.per_n[k - 1].window_pass; --k)
            first = k;
        if (first > N)
            stop(RunStatus::GateFailure, "window-bound",
                 "the window inclusion fails on samples at n = N; " + R.per_n.back().note);
        R.N_r = first;
        // the same index backed by the proximity hypothesis of the window lemma
        int lemma_first = N + 1;
        for (int k = N; k >= 1 && R.per_n[k - 1].window_pass && R.per_n[k - 1].lemma_pass; --k)
            lemma_first = k;
        if (lemma_first <= N)
            R.N_r_lemma = lemma_first;

        for (int k = first; k <= N; ++k) {
            const auto& rec = R.per_n[k - 1];
            if (!rec.degree || *rec.degree != 1)
                stop(RunStatus::GateFailure, "degree-gate",
                     "n = " + std::to_string(k) + ": degree " + (rec.degree ? std::to_string(*rec.degree) : "undefined") +
                         (rec.note.empty() ? "" : " (" + rec.note + ")"));
        }

        t0 = Clock::now();
        try {
            R.ladder = build_ladder(A, r, n);
        } catch (const Error& e) {
            stop(RunStatus::GateFailure, "ladder", e.what());
        }
        R.timings.emplace_back("ladder", seconds_since(t0));
        if (!(R.ladder->r1 > 0) || !(R.ladder->nesting_margin > 0) || !R.ladder->cutoff_inclusion)
            stop(RunStatus::GateFailure, "ladder", "split radius, nesting margins or cut-off inclusion failed");

        R.hull_monotone = true;
        for (int k = first; k <= N; ++k) {
            const double h = R.per_n[k - 1].hull_distance;
            if (!std::isfinite(h))
                stop(RunStatus::GateFailure, "hull-convergence", "n = " + std::to_string(k) + ": empty or undefined hull");
            if (k > first && h > R.per_n[k - 2].hull_distance + c.hull_tolerance)
                R.hull_monotone = false;
        }
        if (!R.hull_monotone)
            stop(RunStatus::GateFailure, "hull-convergence", "hull distance increases beyond N_r");
        if (!(R.per_n[N - 1].hull_distance < R.per_n[first - 1].hull_distance || R.per_n[N - 1].hull_distance <= c.hull_tolerance))
            stop(RunStatus::GateFailure, "hull-convergence", "hull distance does not decrease");

        t0 = Clock::now();
        try {
            R.plane = fit_tangent_plane(psi_inf, r0, c);
        } catch (const Error& e) {
            stop(e.code() == ErrorCode::NumericBudgetExceeded ? RunStatus::NumericBudget : RunStatus::GateFailure,
                 "section", e.what());
        }
        R.timings.emplace_back("tangent-plane", seconds_since(t0));
        if (!R.plane->section)
            stop(RunStatus::GateFailure, "section", "the tangent plane does not project onto the base");
        if (!(R.plane->residual <= c.plane_tolerance)) {
            std::ostringstream msg;
            msg << "plane-fit residual " << R.plane->residual << " exceeds " << c.plane_tolerance;
            stop(RunStatus::GateFailure, "verdict", msg.str());
        }
        if (!R.plane->coisotropic)
            stop(RunStatus::GateFailure, "verdict", "fitted tangent plane is not coisotropic");
        R.verdict = "coisotropic";
        R.status = RunStatus::Verdict;
    } catch (const GateStop& g) {
        R.status = g.status;
        R.failed_step = g.step;
        R.failure_message = g.message;
    }
    R.timings.emplace_back("total", seconds_since(t_total));
    return R;
}

// ---------------------------------------------------------------- serialization

namespace {

using nlohmann::json;

json number(double v)
{
    if (std::isnan(v))
        return "nan";
    if (std::isinf(v))
        return v > 0 ? "inf" : "-inf";
    return v;
}

json matrix(const Mat& M)
{
    json rows = json::array();
    for (int i = 0; i < M.rows(); ++i) {
        json row = json::array();
        for (int j = 0; j < M.cols(); ++j)
            row.push_back(number(M(i, j)));
        rows.push_back(row);
    }
    return rows;
}

json config_json(const ScenarioConfig& c)
{
    return {{"family", c.family},
            {"hamiltonian", c.hamiltonian},
            {"n", c.n},
            {"N", c.N},
            {"seed", c.seed},
            {"amplitude", c.amplitude},
            {"flow_time", c.flow_time},
            {"integrator_steps", c.integrator_steps},
            {"distortion", c.distortion},
            {"symplectic_gate", c.symplectic_gate},
            {"error_schedule", c.error_schedule},
            {"isotopy_rk_steps", c.isotopy_rk_steps},
            {"isotopy_samples", c.isotopy_samples},
            {"domain_radius", c.domain_radius},
            {"window_fraction", c.window_fraction},
            {"window_samples", c.window_samples},
            {"lemma_samples", c.lemma_samples},
            {"normalization_grid", c.normalization_grid},
            {"seeds_per_axis", c.seeds_per_axis},
            {"boundary_samples", c.boundary_samples},
            {"hull_grid", c.hull_grid},
            {"hull_tolerance", c.hull_tolerance},
            {"plane_tolerance", c.plane_tolerance},
            {"plane_samples", c.plane_samples}};
}

const char* status_name(RunStatus s)
{
    switch (s) {
    case RunStatus::Verdict: return "verdict";
    case RunStatus::GateFailure: return "gate-failure";
    case RunStatus::NumericBudget: return "numeric-budget";
    }
    return "?";
}

json report_body(const RigidityReport& R)
{
    json j;
    j["version"] = "1.0";
    j["config"] = config_json(R.config);
    j["constants"] = {
        {"error_schedule", schedule_formula(R.config)},
        {"c1", "(3Ar)^-1"},
        {"c2", "(2Ar)^-1"},
        {"window_inclusion", "Lambda_phi_n cap (B_r x B_3Ar) inside B_r x B_2Ar"},
        {"lemma_eps", "0 < eps < Ar/(A+1), r + eps < r0, A r0/2 + eps < A r0"},
        {"ladder_domains", {{"D1", "]-r1/8,-r1/16["}, {"D2", "]-r1/4,0["}, {"D3", "]-r1/2,r1/2["}, {"D4", "]-r1,r1["}}},
    };
    j["status"] = status_name(R.status);
    if (R.status != RunStatus::Verdict)
        j["gate_failure"] = {{"step", R.failed_step}, {"message", R.failure_message}};
    j["normalization"] = {{"A", number(R.A)},
                          {"r0", number(R.r0)},
                          {"r", number(R.r)},
                          {"eps", number(R.eps)},
                          {"passthrough", R.passthrough},
                          {"u", matrix(R.u)},
                          {"v", matrix(R.v)},
                          {"translation", matrix(R.translation.transpose())}};
    json per = json::array();
    for (const auto& rec : R.per_n) {
        json e = {{"n", rec.n},
                  {"e_n", number(rec.e_n)},
                  {"residual", number(rec.residual)},
                  {"computed", rec.computed}};
        if (rec.computed) {
            e["approx_error"] = number(rec.approx_error);
            e["proximity"] = number(rec.proximity);
            e["lemma_pass"] = rec.lemma_pass;
            e["window_pass"] = rec.window_pass;
            e["window_samples"] = rec.window_samples;
            e["degree"] = rec.degree ? json(*rec.degree) : json(nullptr);
            e["hull_distance"] = number(rec.hull_distance);
            e["hull_points"] = rec.hull_points;
            e["note"] = rec.note;
        }
        per.push_back(e);
    }
    j["perN"] = per;
    j["N_r"] = R.N_r ? json(*R.N_r) : json(nullptr);
    j["N_r_lemma"] = R.N_r_lemma ? json(*R.N_r_lemma) : json(nullptr);
    if (R.ladder) {
        const LadderReport& L = *R.ladder;
        json wins = json::array();
        for (int i = 0; i < 4; ++i)
            wins.push_back({{"index", i + 1},
                            {"t", number(L.ladder.t[i])},
                            {"t_prime", number(L.ladder.t_prime[i])},
                            {"mu", number(L.ladder.mu[i])},
                            {"eps", number(L.ladder.eps[i])},
                            {"ball_radius", number(L.ladder.windows[i].ball_radius)},
                            {"lo", number(L.ladder.windows[i].lo)},
                            {"hi", number(L.ladder.windows[i].hi)},
                            {"domain", {number(L.ladder.domains[i].lo), number(L.ladder.domains[i].hi)}}});
        j["ladder"] = {{"c1", number(L.c1)},
                       {"c2", number(L.c2)},
                       {"c", number(L.c)},
                       {"eps", number(L.eps)},
                       {"c_prime", number(L.c_prime)},
                       {"delta", number(L.delta)},
                       {"r1", number(L.r1)},
                       {"rho", number(L.ladder.rho)},
                       {"windows", wins},
                       {"nesting_margin", number(L.nesting_margin)},
                       {"cutoff_inclusion", L.cutoff_inclusion}};
    } else {
        j["ladder"] = nullptr;
    }
    j["hull"] = {{"monotone", R.hull_monotone}, {"tolerance", R.config.hull_tolerance}};
    if (R.plane)
        j["tangent_plane"] = {{"basis", matrix(R.plane->basis)},
                              {"coordinates", "(x, x', xi, -xi')"},
                              {"residual", number(R.plane->residual)},
                              {"samples", R.plane->samples},
                              {"projection_sigma_min", number(R.plane->projection_sigma_min)},
                              {"radius", number(R.plane->radius)},
                              {"section", R.plane->section},
                              {"coisotropic", R.plane->coisotropic},
                              {"lagrangian", R.plane->lagrangian}};
    else
        j["tangent_plane"] = nullptr;
    if (R.verdict)
        j["verdict"] = *R.verdict;
    j["surrogates"] = {
        "the limit sheaf built from the product/coproduct of the L_n is not constructed; hull convergence of the "
        "windows Lambda^1_n stands in for its nonempty microsupport",
        "properness of projections is checked on sampled window boundaries only",
        "the tangent cone of the limit graph is taken to be its tangent plane (smooth case), fitted by weighted "
        "least squares on antipodal sample pairs within 1e-2 r0 of the origin; the ball shrinks tenfold, at most "
        "twice, while the fitted plane fails the coisotropy check",
        "N_r is read off sampled window inclusions; N_r_lemma is the index from which the proximity hypothesis "
        "d(psi_n, psi_inf) < eps on U also holds"};
    return j;
}

std::string fnv1a(const std::string& s)
{
    std::uint64_t h = 1469598103934665603ULL;
    for (unsigned char ch : s) {
        h ^= ch;
        h *= 1099511628211ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

std::string csv_number(double v)
{
    if (std::isnan(v))
        return "";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

}  // namespace

std::string report_hash(const RigidityReport& report)
{
    return fnv1a(report_body(report).dump());
}

std::string report_json(const RigidityReport& report)
{
    json j = report_body(report);
    j["hash"] = fnv1a(j.dump());
    json t = json::object();
    for (const auto& [name, secs] : report.timings)
        t[name] = secs;
    j["timings"] = t;
    return j.dump(2) + "\n";
}

std::string report_csv(const RigidityReport& report)
{
    std::ostringstream out;
    out << "n,approx_error,residual,degree,window_pass,hull_distance\n";
    for (const auto& rec : report.per_n) {
        out << rec.n << ',' << (rec.computed ? csv_number(rec.approx_error) : "") << ',' << csv_number(rec.residual)
            << ',' << (rec.degree ? std::to_string(*rec.degree) : "") << ','
            << (rec.computed ? (rec.window_pass ? "1" : "0") : "") << ','
            << (rec.computed ? csv_number(rec.hull_distance) : "") << '\n';
    }
    return out.str();
}

std::string emit_report(const RigidityReport& report, const std::string& dir, const std::string& format)
{
    if (format != "json" && format != "csv")
        throw Error(ErrorCode::InvalidArgument, "format must be json or csv");
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec)
        throw Error(ErrorCode::IoFailure, "cannot create '" + dir + "': " + ec.message());
    const std::string path = (std::filesystem::path(dir) / ("report." + format)).string();
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw Error(ErrorCode::IoFailure, "cannot write '" + path + "'");
    out << (format == "json" ? report_json(report) : report_csv(report));
    if (!out)
        throw Error(ErrorCode::IoFailure, "write to '" + path + "' failed");
    return path;
}

// ---------------------------------------------------------------- discovery

std::vector<std::string> list_scenarios()
{
    return {"linear_rotation", "shear", "oscillatory_hamiltonian", "custom"};
}

std::vector<std::string> list_steps()
{
    return {"symplectic-input", "normalization", "approximation", "window-bound", "degree-gate",
            "ladder",           "hull-convergence", "section",     "verdict"};
}

std::string describe(const std::string& step)
{
    static const std::map<std::string, std::string> text = {
        {"symplectic-input",
         "Input gate: every phi_n is symplectic. The residual max|J^T Omega J - Omega| of phi_n is sampled on "
         "the domain ball and must stay below symplectic_gate. Runs before any sheaf step."},
        {"normalization",
         "Translate so that phi_inf(0) = 0, then choose linear symplectic u, v with psi = v o phi o u in general "
         "position: the twisted graph projects to V^2 near 0 with fiber bound A and radius r0."},
        {"approximation",
         "Replace phi_n by the time-one map of a compactly supported Hamiltonian isotopy Phi_n with "
         "sup |phi_n - Phi_n,1| <= e_n on the closed r0-ball. The error schedule must decrease to 0."},
        {"window-bound",
         "N_r is the least n from which Lambda_phi_n cap (B_r x B_3Ar) lies in B_r x B_2Ar on samples. The report "
         "also gives N_r_lemma, from which the proximity hypothesis d(psi_n, psi_inf) < eps < Ar/(A+1) on U holds."},
        {"degree-gate",
         "For n >= N_r the projection Lambda^1_n -> B_r has degree 1: signed preimage count at a regular value, "
         "with fiber points restricted to B_3Ar."},
        {"ladder",
         "Cut-off constants c1 = (3Ar)^-1 and c2 = (2Ar)^-1, the split radius r1 they produce at radius r, and the "
         "window ladder D1 = ]-r1/8,-r1/16[, D2 = ]-r1/4,0[, D3 = ]-r1/2,r1/2[, D4 = ]-r1,r1[ with W1..W4 "
         "nested inside them."},
        {"hull-convergence",
         "Fiberwise convex hulls Conv(Lambda^1_n) approach the limit window Lambda^1_inf: the largest distance "
         "over a base grid must be finite and non-increasing for n >= N_r."},
        {"section",
         "Lambda^1_inf is a section of the projection to the base: one fiber point over each grid point and a "
         "tangent plane with nondegenerate projection Jacobian."},
        {"verdict",
         "Fit the tangent plane of Lambda_phi_inf at 0 by weighted least squares on antipodal pairs and test it "
         "with the coisotropy check; the verdict is \"coisotropic\" when the fit residual is within plane_tolerance."},
    };
    const auto it = text.find(step);
    if (it == text.end())
        throw Error(ErrorCode::UnknownStep, "no step named '" + step + "'");
    return step + ": " + it->second;
}

}  // namespace sheafrig
