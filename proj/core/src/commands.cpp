#include "nkesn/commands.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <map>
#include <ostream>
#include <sstream>

namespace nkesn {

namespace {

std::filesystem::path resolve_output_dir(const ExperimentConfig& config) {
    if (!config.output_dir.empty()) return config.output_dir;
    if (const char* env = std::getenv(kOutputDirEnv); env && *env) return env;
    return "results";
}

std::string run_file_name(int run_index, const char* prefix, const char* ext = "json") {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%s_%05d.%s", prefix, run_index, ext);
    return buf;
}

struct Stats {
    double mean = 0.0;
    double stddev = 0.0;  // sample std (n-1); 0 for a single value
    double best = 0.0;
};

Stats stats_of(const std::vector<double>& values) {
    Stats s;
    if (values.empty()) return s;
    double sum = 0.0;
    for (double v : values) sum += v;
    s.mean = sum / static_cast<double>(values.size());
    if (values.size() > 1) {
        double sq = 0.0;
        for (double v : values) sq += (v - s.mean) * (v - s.mean);
        s.stddev = std::sqrt(sq / static_cast<double>(values.size() - 1));
    }
    s.best = *std::max_element(values.begin(), values.end());
    return s;
}

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.9f", v);
    return buf;
}

}  // namespace

std::vector<ResultRecord> load_result_records(const std::filesystem::path& dir) {
    std::vector<std::filesystem::path> files;
    for (const auto& entry : std::filesystem::directory_iterator(dir)) {
        if (entry.is_regular_file() && entry.path().extension() == ".json" &&
            entry.path().filename().string().rfind("run_", 0) == 0)
            files.push_back(entry.path());
    }
    std::sort(files.begin(), files.end());
    std::vector<ResultRecord> records;
    records.reserve(files.size());
    for (const auto& f : files) records.push_back(load_result_record(f));
    return records;
}

std::string render_summary(const std::vector<ResultRecord>& records) {
    struct Group {
        std::vector<double> eval;
        std::vector<double> bso_gen;
        std::vector<double> ens_gen;
        std::vector<double> topm_gen;
        long evals_per_run = 0;
    };
    std::map<std::pair<std::string, int>, Group> groups;
    for (const auto& r : records) {
        auto& g = groups[{r.model, r.k}];
        g.eval.push_back(r.best_single_f);
        g.bso_gen.push_back(r.best_single_generalization);
        g.ens_gen.push_back(r.ensemble_generalization);
        if (r.top_m_generalization) g.topm_gen.push_back(*r.top_m_generalization);
        g.evals_per_run = r.evaluation_count;
    }

    std::ostringstream out;
    out << "model\tk\truns\tevals_per_run\t"
        << "eval_mean\teval_std\t"
        << "bso_gen_mean\tbso_gen_std\tbso_gen_best\t"
        << "ens_gen_mean\tens_gen_std\tens_gen_best\t"
        << "topm_gen_mean\ttopm_gen_std\ttopm_gen_best\n";
    for (const auto& [key, g] : groups) {
        const Stats eval = stats_of(g.eval);
        const Stats bso = stats_of(g.bso_gen);
        const Stats ens = stats_of(g.ens_gen);
        out << key.first << '\t' << key.second << '\t' << g.eval.size() << '\t'
            << g.evals_per_run << '\t' << fmt(eval.mean) << '\t' << fmt(eval.stddev) << '\t'
            << fmt(bso.mean) << '\t' << fmt(bso.stddev) << '\t' << fmt(bso.best) << '\t'
            << fmt(ens.mean) << '\t' << fmt(ens.stddev) << '\t' << fmt(ens.best);
        if (!g.topm_gen.empty()) {
            const Stats top = stats_of(g.topm_gen);
            out << '\t' << fmt(top.mean) << '\t' << fmt(top.stddev) << '\t' << fmt(top.best);
        } else {
            out << "\t-\t-\t-";
        }
        out << '\n';
    }
    return out.str();
}

int cmd_run(const std::filesystem::path& config_file, std::ostream& out, std::ostream& err) {
    ExperimentConfig config;
    try {
        config = parse_config_file(config_file);
    } catch (const ConfigError& e) {
        err << "config error: " << e.what() << "\n";
        return kExitValidation;
    }

    const std::filesystem::path dir = resolve_output_dir(config);
    const std::string hash = config_hash(config);
    try {
        std::filesystem::create_directories(dir);

        std::vector<ResultRecord> records;
        for (int run = 0; run < config.runs; ++run) {
            ExperimentSetup setup = setup_for_run(config, run);
            setup.keep_artifacts = config.save_artifacts;
            const ExperimentResult result = run_experiment(setup);

            RunMetadata meta;
            meta.run_index = run;
            meta.config_hash = hash;
            meta.model = to_string(config.network.neighborhood);
            meta.n_outputs = config.network.n_outputs;
            meta.k = config.network.k;
            meta.reservoir_size = config.network.reservoir_size;
            meta.solver = to_string(config.solver);
            meta.t_max = config.t_max;

            const auto record_path = dir / run_file_name(run, "run");
            save_result_record(meta, result, record_path);
            if (config.save_artifacts) {
                save_network(*result.network, dir / run_file_name(run, "network"), &meta);
                save_landscape(*result.landscape, dir / run_file_name(run, "landscape"), &meta);
            }
            records.push_back(load_result_record(record_path));

            out << "run " << run + 1 << "/" << config.runs << " seed=" << result.run_seed
                << " best_f=" << fmt(result.best_single.f)
                << " bso_gen=" << result.best_single_generalization.successes
                << " ens_gen=" << result.ensemble_generalization.successes;
            if (result.top_m)
                out << " top" << *result.top_m
                    << "_gen=" << result.top_m_generalization.successes;
            out << "\n";
        }

        const std::string summary = render_summary(records);
        std::ofstream summary_file(dir / "summary.tsv", std::ios::binary | std::ios::trunc);
        summary_file << summary;
        out << summary;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kExitRuntime;
    }
    return kExitOk;
}

int cmd_table(const std::filesystem::path& results_dir, std::ostream& out, std::ostream& err) {
    std::vector<ResultRecord> records;
    try {
        records = load_result_records(results_dir);
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kExitRuntime;
    }
    if (records.empty()) {
        err << "error: no result records (run_*.json) in " << results_dir.string() << "\n";
        return kExitValidation;
    }
    out << render_summary(records);
    return kExitOk;
}

int cmd_replay(const ReplayOptions& options, std::ostream& out, std::ostream& err) {
    EchoNetwork network;
    try {
        network = load_network(options.network_file);
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kExitRuntime;
    }

    const int n = network.config.n_outputs;
    if (static_cast<int>(options.x_bits.size()) != n) {
        err << "error: bit vector length " << options.x_bits.size() << " != n_outputs " << n
            << "\n";
        return kExitValidation;
    }
    BitVector x(n);
    for (int i = 0; i < n; ++i) {
        const char c = options.x_bits[i];
        if (c != '0' && c != '1') {
            err << "error: bit vector must consist of 0/1 characters\n";
            return kExitValidation;
        }
        x[i] = static_cast<std::uint8_t>(c == '1');
    }

    Controller controller = Controller::single(0);
    try {
        if (options.single_output) {
            if (*options.single_output < 0 || *options.single_output >= n) {
                err << "error: --output index out of range\n";
                return kExitValidation;
            }
            controller = Controller::single(*options.single_output);
        } else if (options.landscape_file) {
            const NkLandscape landscape = load_landscape(*options.landscape_file);
            controller = Controller::ensemble(ensemble_weights(landscape, x));
        } else {
            // No fitness information available: plain average of the outputs.
            EnsembleWeights w;
            w.a.assign(n, 1.0 / n);
            controller = Controller::ensemble(w);
        }
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kExitRuntime;
    }

    EpisodeParams params;
    params.t_max = options.t_max;
    const CartPoleState start = options.start ? *options.start : standard_start_state();

    char line[512];
    out << "#t\tu_pos\tu_angle1\tu_angle2\toutput\tforce\tcart_pos\tcart_vel\t"
           "pole1_angle\tpole1_vel\tpole2_angle\tpole2_vel\n";
    const StepObserver print_step = [&](int t, const Eigen::VectorXd& u, double control,
                                        double force, const CartPoleState& s) {
        std::snprintf(line, sizeof line,
                      "%d\t%.17g\t%.17g\t%.17g\t%.17g\t%.17g\t%.17g\t%.17g\t%.17g\t%.17g\t%.17g"
                      "\t%.17g\n",
                      t, u(0), u(1), u(2), control, force, s.cart_pos, s.cart_vel, s.pole1_angle,
                      s.pole1_vel, s.pole2_angle, s.pole2_vel);
        out << line;
    };

    const FitnessComponents fc = run_episode(network, x, controller, start, params, print_step);
    std::snprintf(line, sizeof line, "#steps=%d f1=%.17g f_stable=%.17g f=%.17g\n",
                  fc.steps_survived, fc.f1, fc.f_stable, fc.f);
    out << line;
    return kExitOk;
}

}  // namespace nkesn
