#include "sheafrig/sheafrig.h"

#include "sheafrig/bench.hpp"
#include "sheafrig/degree.hpp"
#include "sheafrig/error.hpp"
#include "sheafrig/parallel.hpp"
#include "sheafrig/symplectic.hpp"

#include <cstdlib>
#include <cstring>
#include <string>

struct sr_config {
    sheafrig::ScenarioConfig c;
};

struct sr_report {
    sheafrig::RigidityReport r;
};

namespace {

thread_local std::string last_error;

template <class F>
sr_status guarded(F&& body)
{
    try {
        body();
        last_error.clear();
        return SR_OK;
    } catch (const sheafrig::Error& e) {
        last_error = e.what();
        return static_cast<sr_status>(static_cast<int>(e.code()));
    } catch (const std::exception& e) {
        last_error = e.what();
        return SR_INTERNAL;
    } catch (...) {
        last_error = "unknown failure";
        return SR_INTERNAL;
    }
}

char* dup(const std::string& s)
{
    char* out = static_cast<char*>(std::malloc(s.size() + 1));
    if (out)
        std::memcpy(out, s.c_str(), s.size() + 1);
    return out;
}

void need(bool ok, const char* what)
{
    if (!ok)
        throw sheafrig::Error(sheafrig::ErrorCode::InvalidArgument, what);
}

std::string join(const std::vector<std::string>& v)
{
    std::string out;
    for (const auto& s : v)
        out += s + "\n";
    return out;
}

sheafrig::Mat row_major(const double* m, int rows, int cols)
{
    need(m && rows > 0 && cols > 0, "matrix pointer and positive sizes required");
    sheafrig::Mat M(rows, cols);
    for (int i = 0; i < rows; ++i)
        for (int j = 0; j < cols; ++j)
            M(i, j) = m[i * cols + j];
    return M;
}

}  // namespace

extern "C" {

const char* sr_status_name(sr_status status)
{
    if (status == SR_OK)
        return "Ok";
    if (status == SR_INTERNAL)
        return "Internal";
    return sheafrig::error_code_name(static_cast<sheafrig::ErrorCode>(static_cast<int>(status)));
}

const char* sr_last_error(void) { return last_error.c_str(); }

void sr_string_free(char* s) { std::free(s); }

void sr_set_max_threads(int n) { sheafrig::set_max_threads(n); }

sr_status sr_config_default(sr_config** out)
{
    return guarded([&] {
        need(out, "out is null");
        *out = new sr_config{};
    });
}

sr_status sr_config_parse(const char* ini_text, sr_config** out)
{
    return guarded([&] {
        need(ini_text && out, "null argument");
        *out = new sr_config{sheafrig::parse_config(ini_text)};
    });
}

sr_status sr_config_load(const char* path, sr_config** out)
{
    return guarded([&] {
        need(path && out, "null argument");
        *out = new sr_config{sheafrig::load_config(path)};
    });
}

void sr_config_free(sr_config* config) { delete config; }

sr_status sr_run_scenario(const sr_config* config, sr_report** out)
{
    return guarded([&] {
        need(config && out, "null argument");
        *out = new sr_report{sheafrig::run_scenario(config->c)};
    });
}

void sr_report_free(sr_report* report) { delete report; }

sr_outcome sr_report_outcome(const sr_report* report)
{
    switch (report->r.status) {
    case sheafrig::RunStatus::Verdict: return SR_OUTCOME_VERDICT;
    case sheafrig::RunStatus::NumericBudget: return SR_OUTCOME_NUMERIC_BUDGET;
    default: return SR_OUTCOME_GATE_FAILURE;
    }
}

const char* sr_report_failed_step(const sr_report* report) { return report->r.failed_step.c_str(); }

const char* sr_report_failure_message(const sr_report* report) { return report->r.failure_message.c_str(); }

int sr_report_n_r(const sr_report* report) { return report->r.N_r ? *report->r.N_r : -1; }

sr_status sr_report_json(const sr_report* report, char** out)
{
    return guarded([&] {
        need(report && out, "null argument");
        *out = dup(sheafrig::report_json(report->r));
    });
}

sr_status sr_report_csv(const sr_report* report, char** out)
{
    return guarded([&] {
        need(report && out, "null argument");
        *out = dup(sheafrig::report_csv(report->r));
    });
}

sr_status sr_report_hash(const sr_report* report, char** out)
{
    return guarded([&] {
        need(report && out, "null argument");
        *out = dup(sheafrig::report_hash(report->r));
    });
}

sr_status sr_report_emit(const sr_report* report, const char* dir, const char* format)
{
    return guarded([&] {
        need(report && dir && format, "null argument");
        sheafrig::emit_report(report->r, dir, format);
    });
}

sr_status sr_list_scenarios(char** out)
{
    return guarded([&] {
        need(out, "out is null");
        *out = dup(join(sheafrig::list_scenarios()));
    });
}

sr_status sr_list_steps(char** out)
{
    return guarded([&] {
        need(out, "out is null");
        *out = dup(join(sheafrig::list_steps()));
    });
}

sr_status sr_describe(const char* step, char** out)
{
    return guarded([&] {
        need(step && out, "null argument");
        *out = dup(sheafrig::describe(step));
    });
}

sr_status sr_symplectic_residual(const double* m, int dim, double* out)
{
    return guarded([&] {
        need(out, "out is null");
        *out = sheafrig::symplectic_residual(row_major(m, dim, dim));
    });
}

sr_status sr_coisotropic_check(const double* w, int rows, int cols, int* out)
{
    return guarded([&] {
        need(out, "out is null");
        need(rows % 2 == 0, "ambient dimension must be even");
        *out = sheafrig::coisotropic_check(row_major(w, rows, cols), sheafrig::SymplecticSpace{rows / 2});
    });
}

sr_status sr_rho_lift_check(const double* s, int rows, int cols, double sigma0, const double* xi0,
                            int* coisotropic_s, int* coisotropic_lift)
{
    return guarded([&] {
        need(xi0 && coisotropic_s && coisotropic_lift, "null argument");
        need(rows % 2 == 0, "ambient dimension must be even");
        const int n = rows / 2;
        const auto res = sheafrig::rho_lift_check(row_major(s, rows, cols), sigma0, Eigen::Map<const sheafrig::Vec>(xi0, n));
        *coisotropic_s = res.coisotropic_s;
        *coisotropic_lift = res.coisotropic_lift;
    });
}

sr_status sr_degree(sr_map_fn f, void* user, int dim, const double* lo, const double* hi, const double* center,
                    double radius, const double* y, int* out)
{
    return guarded([&] {
        need(f && lo && hi && center && y && out && dim > 0, "null argument or bad dimension");
        using sheafrig::Vec;
        sheafrig::DegreeQuery q;
        q.map.dim = dim;
        q.map.eval = [f, user, dim](const Vec& x) {
            Vec r(dim);
            f(x.data(), r.data(), user);
            return r;
        };
        q.window_lo = Eigen::Map<const Vec>(lo, dim);
        q.window_hi = Eigen::Map<const Vec>(hi, dim);
        q.target_center = Eigen::Map<const Vec>(center, dim);
        q.target_radius = radius;
        q.regular_value = Eigen::Map<const Vec>(y, dim);
        *out = sheafrig::degree(q);
    });
}

}  // extern "C"
