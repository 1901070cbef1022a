#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "config.hpp"

namespace evoscale {

// One verification row: what was checked, the mathematical statement it
// anchors to, the computed and reference values, and the verdict.
struct ValidationCheck {
    std::string name;
    std::string anchor;
    double computed = 0.0;
    double reference = 0.0;
    double tolerance = 0.0;
    bool passed = false;
    double runtime_s = 0.0;
    std::string details;
};

struct ValidationReport {
    std::vector<ValidationCheck> checks;

    bool all_passed() const;
    std::size_t failures() const;
    void append(const ValidationReport& other);
    void write_csv(std::ostream& os) const;
    void print(std::ostream& os) const;
};

// Cross-scale experiments; numbers of paths and replicates are pinned by the
// acceptance criteria, the landscape comes from the configuration. A nonempty
// out_dir receives the per-experiment comparison CSVs.
ValidationReport experiment_rare_mutation(const ExperimentConfig& cfg, int jobs,
                                          const std::string& out_dir = std::string());
ValidationReport experiment_small_steps(const ExperimentConfig& cfg, int jobs,
                                        const std::string& out_dir = std::string());
ValidationReport experiment_theorem51(const ExperimentConfig& cfg, int jobs,
                                      const std::string& out_dir = std::string());

// Acceptance criteria C1..C12; criterion = 0 runs all of them.
ValidationReport validate_criteria(const ExperimentConfig& cfg, int jobs, int criterion = 0);

// CLI pipelines; artifacts are CSV files under out_dir.
void run_simulate_micro(const ExperimentConfig& cfg, const std::string& out_dir);
void run_fixation(const ExperimentConfig& cfg, const std::string& out_dir);
void run_invasibility(const ExperimentConfig& cfg, const std::string& out_dir);
void run_tss(const ExperimentConfig& cfg, const std::string& out_dir);
void run_diffusion(const ExperimentConfig& cfg, const std::string& out_dir, int jobs);
ValidationReport run_validate(const ExperimentConfig& cfg, const std::string& out_dir, int jobs);

}  // namespace evoscale
