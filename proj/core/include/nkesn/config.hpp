#ifndef NKESN_CONFIG_HPP
#define NKESN_CONFIG_HPP

#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>

#include "nkesn/trainer.hpp"

namespace nkesn {

// Raised on any malformed or invalid config input; the message names the
// offending field.
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Batch experiment description, read from an INI-style file with [network],
// [physics] and [experiment] sections. Every default matches the benchmark
// baseline, so an empty file is a valid N=20 experiment.
struct ExperimentConfig {
    NetworkConfig network;
    PhysicsParams physics;
    SuccessDomain domain;
    int t_max = 1000;
    int steps_per_action = 1;
    int runs = 100;
    SolveMethod solver = SolveMethod::DynamicProgramming;
    int restarts = 50;  // local search only
    std::optional<int> top_m;
    std::uint64_t base_seed = 1;
    int jobs = 1;  // 0 = all hardware threads
    std::string output_dir;
    bool save_artifacts = false;

    // Cross-field rules (solver/neighborhood compatibility, top_m bounds,
    // enumeration size guard). Throws ConfigError.
    void validate() const;
};

ExperimentConfig parse_config_text(const std::string& text);
ExperimentConfig parse_config_file(const std::filesystem::path& path);

// Canonical rendering of every field; two configs hash equal iff they run
// identical experiments.
std::string canonical_config_text(const ExperimentConfig& config);
std::string config_hash(const ExperimentConfig& config);

// Setup for run number `run_index`, seeded with base_seed + run_index.
ExperimentSetup setup_for_run(const ExperimentConfig& config, int run_index);

}  // namespace nkesn

#endif
