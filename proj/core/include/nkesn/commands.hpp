#ifndef NKESN_COMMANDS_HPP
#define NKESN_COMMANDS_HPP

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "nkesn/config.hpp"
#include "nkesn/serialization.hpp"

namespace nkesn {

// Exit codes shared by all commands.
inline constexpr int kExitOk = 0;
inline constexpr int kExitValidation = 1;
inline constexpr int kExitRuntime = 2;

// Environment variable consulted when the config leaves output_dir empty.
inline constexpr const char* kOutputDirEnv = "NKESN_OUTPUT_DIR";

// Executes the configured batch: one seeded experiment per run, one result
// record per run (plus network/landscape documents when save_artifacts is
// set), then a summary table. Re-running the same config overwrites the
// records with byte-identical content regardless of the jobs setting.
int cmd_run(const std::filesystem::path& config_file, std::ostream& out, std::ostream& err);

// Aggregates every result record in a directory into one table row per
// (model, K) group.
int cmd_table(const std::filesystem::path& results_dir, std::ostream& out, std::ostream& err);

struct ReplayOptions {
    std::filesystem::path network_file;
    std::string x_bits;
    std::optional<std::filesystem::path> landscape_file;  // ensemble weights source
    std::optional<int> single_output;                     // overrides the ensemble
    std::optional<CartPoleState> start;                   // default: training start
    int t_max = 1000;
};

// Prints the per-step trajectory (inputs, controller output, force, state)
// of one episode as tab-separated text.
int cmd_replay(const ReplayOptions& options, std::ostream& out, std::ostream& err);

// Summary rendering, exposed for cmd_run and tests.
std::string render_summary(const std::vector<ResultRecord>& records);
std::vector<ResultRecord> load_result_records(const std::filesystem::path& dir);

}  // namespace nkesn

#endif
