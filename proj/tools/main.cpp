// nkesn: trains echo state networks by probe-filter neuron selection on the
// two-pole balancing benchmark and reports generalization statistics.

#include <CLI11.hpp>

#include <iostream>
#include <sstream>
#include <string>

#include "nkesn/commands.hpp"

namespace {

bool parse_state_csv(const std::string& csv, nkesn::CartPoleState& state) {
    std::istringstream in(csv);
    double v[6];
    char sep = ',';
    for (int i = 0; i < 6; ++i) {
        if (!(in >> v[i])) return false;
        if (i < 5 && !(in >> sep && sep == ',')) return false;
    }
    std::string rest;
    if (in >> rest) return false;
    state = {v[0], v[1], v[2], v[3], v[4], v[5]};
    return true;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{
        "Neuron-selection trainer for echo state networks on double pole balancing.\n"
        "Learning only switches probe-filter neurons on or off; the resulting\n"
        "lookup-table model is solved exactly (dp, exhaustive) or by local search."};
    app.require_subcommand(1);

    std::string config_file;
    auto* run = app.add_subcommand("run", "Execute a seeded batch of experiments");
    run->add_option("config", config_file, "INI-style experiment config file")
        ->required()
        ->check(CLI::ExistingFile);

    std::string results_dir;
    auto* table = app.add_subcommand("table", "Summarize result records from a directory");
    table->add_option("dir", results_dir, "Directory containing run_*.json records")
        ->required()
        ->check(CLI::ExistingDirectory);

    nkesn::ReplayOptions replay_opts;
    std::string network_file;
    std::string landscape_file;
    int single_output = -1;
    std::string state_csv;
    auto* replay = app.add_subcommand("replay", "Dump one episode trajectory as TSV");
    replay->add_option("network", network_file, "Network document (JSON)")
        ->required()
        ->check(CLI::ExistingFile);
    replay->add_option("xstar", replay_opts.x_bits, "Probe on/off bits, e.g. 011010")->required();
    replay->add_option("--landscape", landscape_file,
                       "Landscape document; enables fitness-proportional ensemble weights");
    replay->add_option("--output", single_output, "Drive the cart with this single output neuron");
    replay->add_option("--state", state_csv,
                       "Start state cart_pos,cart_vel,pole1_angle,pole1_vel,pole2_angle,"
                       "pole2_vel (m, m/s, rad, rad/s); default: training start");
    replay->add_option("--steps", replay_opts.t_max, "Maximum control steps (default 1000)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? nkesn::kExitOk : nkesn::kExitValidation;
    }

    if (run->parsed()) return nkesn::cmd_run(config_file, std::cout, std::cerr);
    if (table->parsed()) return nkesn::cmd_table(results_dir, std::cout, std::cerr);

    replay_opts.network_file = network_file;
    if (!landscape_file.empty()) replay_opts.landscape_file = landscape_file;
    if (replay->count("--output") > 0) replay_opts.single_output = single_output;
    if (!state_csv.empty()) {
        nkesn::CartPoleState state;
        if (!parse_state_csv(state_csv, state)) {
            std::cerr << "error: --state expects six comma-separated numbers\n";
            return nkesn::kExitValidation;
        }
        replay_opts.start = state;
    }
    return nkesn::cmd_replay(replay_opts, std::cout, std::cerr);
}
