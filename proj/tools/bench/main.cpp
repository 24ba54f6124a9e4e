// bench: run scenarios, list them, describe pipeline steps.
// Exit codes: 0 verdict, 2 gate failure, 3 numeric budget, 1 usage/config/io.

#include "sheafrig/sheafrig.h"

#include <CLI11.hpp>

#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <string>

namespace {

int fail()
{
    std::fprintf(stderr, "bench: %s\n", sr_last_error());
    return 1;
}

void apply_thread_cap()
{
    const char* env = std::getenv("BENCH_THREADS");
    if (!env || !*env)
        return;
    char* end = nullptr;
    const long n = std::strtol(env, &end, 10);
    if (*end != '\0' || n < 0) {
        std::fprintf(stderr, "bench: ignoring BENCH_THREADS='%s'\n", env);
        return;
    }
    sr_set_max_threads(static_cast<int>(n));
}

}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Symplectic rigidity testbench"};
    app.require_subcommand(1);

    std::string config_path, out_dir = ".", format = "json";
    auto* run = app.add_subcommand("run", "run a scenario and write its report");
    run->add_option("--config", config_path, "scenario INI file")->required()->check(CLI::ExistingFile);
    run->add_option("--out", out_dir, "output directory")->required();
    run->add_option("--format", format, "json or csv")->check(CLI::IsMember({"json", "csv"}));

    auto* list = app.add_subcommand("list", "list built-in scenario families and pipeline steps");

    std::string step;
    auto* desc = app.add_subcommand("describe", "explain one pipeline step");
    desc->add_option("step", step, "step name, see `bench list`")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        // --help and friends keep exit 0; every usage error maps to 1
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 1;
    }
    apply_thread_cap();

    if (*list) {
        char *fams = nullptr, *steps = nullptr;
        if (sr_list_scenarios(&fams) != SR_OK)
            return fail();
        if (sr_list_steps(&steps) != SR_OK)
            return fail();
        std::printf("scenarios:\n");
        for (const char* p = fams; *p;) {
            const char* nl = std::strchr(p, '\n');
            std::printf("  %.*s\n", static_cast<int>(nl - p), p);
            p = nl + 1;
        }
        std::printf("steps:\n");
        for (const char* p = steps; *p;) {
            const char* nl = std::strchr(p, '\n');
            std::printf("  %.*s\n", static_cast<int>(nl - p), p);
            p = nl + 1;
        }
        sr_string_free(fams);
        sr_string_free(steps);
        return 0;
    }

    if (*desc) {
        char* text = nullptr;
        if (sr_describe(step.c_str(), &text) != SR_OK)
            return fail();
        std::printf("%s\n", text);
        sr_string_free(text);
        return 0;
    }

    sr_config* cfg = nullptr;
    if (sr_config_load(config_path.c_str(), &cfg) != SR_OK)
        return fail();
    sr_report* rep = nullptr;
    const sr_status s = sr_run_scenario(cfg, &rep);
    sr_config_free(cfg);
    if (s == SR_NUMERIC_BUDGET_EXCEEDED) {
        std::fprintf(stderr, "bench: %s\n", sr_last_error());
        return 3;
    }
    if (s != SR_OK)
        return fail();
    if (sr_report_emit(rep, out_dir.c_str(), format.c_str()) != SR_OK) {
        sr_report_free(rep);
        return fail();
    }
    char* hash = nullptr;
    sr_report_hash(rep, &hash);
    const sr_outcome outcome = sr_report_outcome(rep);
    if (outcome == SR_OUTCOME_VERDICT)
        std::printf("verdict: coisotropic (N_r = %d, hash %s)\n", sr_report_n_r(rep), hash);
    else
        std::printf("%s at %s: %s (hash %s)\n", outcome == SR_OUTCOME_GATE_FAILURE ? "gate failure" : "numeric budget",
                    sr_report_failed_step(rep), sr_report_failure_message(rep), hash);
    sr_string_free(hash);
    sr_report_free(rep);
    return static_cast<int>(outcome);
}
