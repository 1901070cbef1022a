// Command-line front end; talks to the core exclusively through the shared
// C API. Exit codes: 0 success, 1 usage/config error, 2 validation failure,
// 3 numeric abort.

#include <cstdint>
#include <cstdio>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "evoscale/evoscale.h"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitValidation = 2;
constexpr int kExitNumeric = 3;

int exit_code_for(evs_status status) {
    switch (status) {
        case EVS_OK: return kExitOk;
        case EVS_ERR_INVALID_ARGUMENT:
        case EVS_ERR_PARSE:
        case EVS_ERR_IO: return kExitUsage;
        case EVS_ERR_VALIDATION_FAILED: return kExitValidation;
        case EVS_ERR_NUMERIC:
        case EVS_ERR_EVENT_CAP: return kExitNumeric;
    }
    return kExitNumeric;
}

struct ConfigHandle {
    evs_config* cfg = nullptr;
    ~ConfigHandle() { evs_config_destroy(cfg); }
};

struct ReportHandle {
    evs_report* report = nullptr;
    ~ReportHandle() { evs_report_destroy(report); }
};

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"evoscale: birth-death-competition populations, substitution dynamics and "
                 "the trait diffusion"};
    app.require_subcommand(1);

    std::string config_path;
    std::string out_dir = "out";
    std::vector<std::string> overrides;
    uint64_t seed = 0;
    bool seed_given = false;
    int jobs = 0;

    app.add_option("--config", config_path, "configuration file (json, schema_version 1)")
        ->required();
    app.add_option("--out", out_dir, "artifact directory");
    app.add_option("--jobs", jobs, "worker threads for replicate ensembles");
    app.add_option("--seed", seed, "override run.seed")->each([&](const std::string&) {
        seed_given = true;
    });
    app.add_option("--override", overrides,
                   "config override as path.to.key=value (repeatable)");

    const char* subcommands[] = {"simulate-micro", "fixation", "invasibility",
                                 "tss",            "diffusion", "validate"};
    for (const char* name : subcommands) app.add_subcommand(name);

    app.fallthrough(true);
    CLI11_PARSE(app, argc, argv);
    const std::string command = app.get_subcommands().front()->get_name();

    ConfigHandle config;
    evs_status status = evs_config_from_file(config_path.c_str(), &config.cfg);
    if (status != EVS_OK) {
        std::fprintf(stderr, "error (%s): %s\n", evs_status_name(status), evs_last_error());
        return exit_code_for(status);
    }
    for (const std::string& o : overrides) {
        status = evs_config_override(config.cfg, o.c_str());
        if (status != EVS_OK) {
            std::fprintf(stderr, "error (%s): %s\n", evs_status_name(status),
                         evs_last_error());
            return exit_code_for(status);
        }
    }
    if (seed_given) {
        status = evs_config_set_seed(config.cfg, seed);
        if (status != EVS_OK) {
            std::fprintf(stderr, "error (%s): %s\n", evs_status_name(status),
                         evs_last_error());
            return exit_code_for(status);
        }
    }

    ReportHandle report;
    status = evs_run(config.cfg, command.c_str(), out_dir.c_str(), jobs, &report.report);
    if (report.report) {
        evs_report_print(report.report, nullptr);
        std::printf("report: %s/report.csv\n", out_dir.c_str());
    }
    if (status != EVS_OK) {
        std::fprintf(stderr, "error (%s): %s\n", evs_status_name(status), evs_last_error());
        return exit_code_for(status);
    }
    std::printf("%s: artifacts in %s\n", command.c_str(), out_dir.c_str());
    return kExitOk;
}
