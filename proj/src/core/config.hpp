#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "model.hpp"

namespace evoscale {

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ScaleParams {
    std::vector<double> gamma;    // descending mutation-frequency scales
    std::vector<double> epsilon;  // descending step scales
};

struct SolverConfig {
    int n_max = 0;  // 0: automatic 8*max(theta, requested, 20)
    double residual_tol = 1e-10;
    int k_max = 10000;
    double tail_tol = 1e-12;
    bool sensitivity = true;
};

struct RunConfig {
    long replicates = 1000;
    double horizon = 10.0;
    uint64_t seed = 0;
    bool seed_set = false;
    std::vector<double> initial_trait{0.0};
    int jobs = 1;
    long event_cap = 1000000000L;
};

// Parsed experiment configuration (schema_version 1). The JSON text is kept
// for artifact metadata.
struct ExperimentConfig {
    Model model;
    ScaleParams scale;
    SolverConfig solver;
    RunConfig run;
    std::string json_text;

    Trait initial_trait() const;

    static ExperimentConfig from_file(const std::string& path);
    static ExperimentConfig from_string(const std::string& json_text);
    // dotted-path override, e.g. "model.birth.intercept=1.2"; the value part
    // is parsed as JSON (falling back to a string)
    static std::string apply_override(const std::string& json_text, const std::string& expr);
};

}  // namespace evoscale
