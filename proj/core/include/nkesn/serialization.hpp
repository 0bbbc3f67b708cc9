#ifndef NKESN_SERIALIZATION_HPP
#define NKESN_SERIALIZATION_HPP

#include <filesystem>
#include <optional>
#include <string>

#include "nkesn/landscape.hpp"
#include "nkesn/network.hpp"
#include "nkesn/trainer.hpp"

namespace nkesn {

// All documents are JSON. Floating point values are written in
// shortest-round-trip form, so save -> load reproduces every weight
// bit-for-bit and replayed trajectories are identical.

std::string to_string(Neighborhood n);
Neighborhood neighborhood_from_string(const std::string& s);
std::string to_string(SolveMethod m);
SolveMethod solve_method_from_string(const std::string& s);

// Context stamped into every document a batch run produces, so each output
// file names the seed and config hash behind it and aggregation never needs
// the original config file.
struct RunMetadata {
    int run_index = 0;
    std::string config_hash;
    std::string model;  // "adjacent" or "random"
    int n_outputs = 0;
    int k = 0;
    int reservoir_size = 0;
    std::string solver;
    int t_max = 0;
};

std::string network_to_json(const EchoNetwork& network, const RunMetadata* meta = nullptr);
EchoNetwork network_from_json(const std::string& text);
void save_network(const EchoNetwork& network, const std::filesystem::path& path,
                  const RunMetadata* meta = nullptr);
EchoNetwork load_network(const std::filesystem::path& path);

std::string landscape_to_json(const NkLandscape& landscape, const RunMetadata* meta = nullptr);
NkLandscape landscape_from_json(const std::string& text);
void save_landscape(const NkLandscape& landscape, const std::filesystem::path& path,
                    const RunMetadata* meta = nullptr);
NkLandscape load_landscape(const std::filesystem::path& path);

std::string result_record_to_json(const RunMetadata& meta, const ExperimentResult& result);
void save_result_record(const RunMetadata& meta, const ExperimentResult& result,
                        const std::filesystem::path& path);

// Flat view of one record with the fields summary tables aggregate.
struct ResultRecord {
    int run_index = 0;
    std::uint64_t run_seed = 0;
    std::string config_hash;
    std::string model;
    int n_outputs = 0;
    int k = 0;
    std::string solver;
    long evaluation_count = 0;
    double best_single_f = 0.0;
    int best_single_generalization = 0;
    std::string x_star_bits;
    double x_star_value = 0.0;
    int ensemble_generalization = 0;
    std::optional<int> top_m;
    std::optional<int> top_m_generalization;
};

ResultRecord parse_result_record(const std::string& text);
ResultRecord load_result_record(const std::filesystem::path& path);

}  // namespace nkesn

#endif
