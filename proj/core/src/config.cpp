#include "nkesn/config.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "nkesn/rng.hpp"
#include "nkesn/serialization.hpp"

namespace nkesn {

namespace {

std::string trim(const std::string& s) {
    const auto begin = s.find_first_not_of(" \t\r");
    if (begin == std::string::npos) return "";
    const auto end = s.find_last_not_of(" \t\r");
    return s.substr(begin, end - begin + 1);
}

double parse_double(const std::string& field, const std::string& value) {
    try {
        std::size_t used = 0;
        const double v = std::stod(value, &used);
        if (used != value.size()) throw std::invalid_argument(value);
        return v;
    } catch (const std::exception&) {
        throw ConfigError(field + ": expected a number, got '" + value + "'");
    }
}

long long parse_int(const std::string& field, const std::string& value) {
    try {
        std::size_t used = 0;
        const long long v = std::stoll(value, &used);
        if (used != value.size()) throw std::invalid_argument(value);
        return v;
    } catch (const std::exception&) {
        throw ConfigError(field + ": expected an integer, got '" + value + "'");
    }
}

std::uint64_t parse_uint(const std::string& field, const std::string& value) {
    try {
        std::size_t used = 0;
        const unsigned long long v = std::stoull(value, &used);
        if (used != value.size()) throw std::invalid_argument(value);
        return v;
    } catch (const std::exception&) {
        throw ConfigError(field + ": expected an unsigned integer, got '" + value + "'");
    }
}

bool parse_bool(const std::string& field, const std::string& value) {
    if (value == "true" || value == "1" || value == "yes") return true;
    if (value == "false" || value == "0" || value == "no") return false;
    throw ConfigError(field + ": expected true/false, got '" + value + "'");
}

void apply(ExperimentConfig& cfg, const std::string& section, const std::string& key,
           const std::string& value) {
    const std::string field = section + "." + key;
    if (section == "network") {
        if (key == "n_outputs") cfg.network.n_outputs = static_cast<int>(parse_int(field, value));
        else if (key == "k") cfg.network.k = static_cast<int>(parse_int(field, value));
        else if (key == "reservoir_size")
            cfg.network.reservoir_size = static_cast<int>(parse_int(field, value));
        else if (key == "density_alpha") cfg.network.density_alpha = parse_double(field, value);
        else if (key == "weight_range") cfg.network.weight_range = parse_double(field, value);
        else if (key == "spectral_radius")
            cfg.network.spectral_radius = parse_double(field, value);
        else if (key == "neighborhood") {
            try {
                cfg.network.neighborhood = neighborhood_from_string(value);
            } catch (const std::exception& e) {
                throw ConfigError(field + ": " + e.what());
            }
        } else if (key == "n_inputs")
            cfg.network.n_inputs = static_cast<int>(parse_int(field, value));
        else if (key == "probe_density") cfg.network.probe_density = parse_double(field, value);
        else
            throw ConfigError("unknown field '" + field + "'");
    } else if (section == "physics") {
        if (key == "cart_mass") cfg.physics.cart_mass = parse_double(field, value);
        else if (key == "pole1_mass") cfg.physics.pole1_mass = parse_double(field, value);
        else if (key == "pole2_mass") cfg.physics.pole2_mass = parse_double(field, value);
        else if (key == "pole1_length") cfg.physics.pole1_length = parse_double(field, value);
        else if (key == "pole2_length") cfg.physics.pole2_length = parse_double(field, value);
        else if (key == "mu_cart") cfg.physics.mu_cart = parse_double(field, value);
        else if (key == "mu_pole") cfg.physics.mu_pole = parse_double(field, value);
        else if (key == "gravity") cfg.physics.gravity = parse_double(field, value);
        else if (key == "dt") cfg.physics.dt = parse_double(field, value);
        else if (key == "x_limit") cfg.domain.x_limit = parse_double(field, value);
        else if (key == "angle_limit_deg")
            cfg.domain.angle_limit = deg_to_rad(parse_double(field, value));
        else
            throw ConfigError("unknown field '" + field + "'");
    } else if (section == "experiment") {
        if (key == "t_max") cfg.t_max = static_cast<int>(parse_int(field, value));
        else if (key == "steps_per_action")
            cfg.steps_per_action = static_cast<int>(parse_int(field, value));
        else if (key == "runs") cfg.runs = static_cast<int>(parse_int(field, value));
        else if (key == "solver") {
            try {
                cfg.solver = solve_method_from_string(value);
            } catch (const std::exception& e) {
                throw ConfigError(field + ": " + e.what());
            }
        } else if (key == "restarts")
            cfg.restarts = static_cast<int>(parse_int(field, value));
        else if (key == "top_m") cfg.top_m = static_cast<int>(parse_int(field, value));
        else if (key == "base_seed") cfg.base_seed = parse_uint(field, value);
        else if (key == "jobs") cfg.jobs = static_cast<int>(parse_int(field, value));
        else if (key == "output_dir") cfg.output_dir = value;
        else if (key == "save_artifacts") cfg.save_artifacts = parse_bool(field, value);
        else
            throw ConfigError("unknown field '" + field + "'");
    } else {
        throw ConfigError("unknown section '[" + section + "]'");
    }
}

}  // namespace

void ExperimentConfig::validate() const {
    try {
        network.validate();
    } catch (const std::invalid_argument& e) {
        throw ConfigError(e.what());
    }
    if (!physics.valid()) throw ConfigError("physics: masses, lengths, gravity and dt must be positive");
    if (!(domain.x_limit > 0.0)) throw ConfigError("physics.x_limit must be > 0");
    if (!(domain.angle_limit > 0.0)) throw ConfigError("physics.angle_limit_deg must be > 0");
    if (t_max < 1) throw ConfigError("experiment.t_max must be >= 1");
    if (steps_per_action < 1) throw ConfigError("experiment.steps_per_action must be >= 1");
    if (runs < 1) throw ConfigError("experiment.runs must be >= 1");
    if (restarts < 1) throw ConfigError("experiment.restarts must be >= 1");
    if (jobs < 0) throw ConfigError("experiment.jobs must be >= 0");
    if (top_m && (*top_m < 1 || *top_m > network.n_outputs))
        throw ConfigError("experiment.top_m must be in [1, network.n_outputs]");
    if (solver == SolveMethod::DynamicProgramming &&
        network.neighborhood != Neighborhood::Adjacent)
        throw ConfigError(
            "experiment.solver: dp requires network.neighborhood = adjacent; "
            "use solver = exhaustive or local_search for the random model");
    if (solver == SolveMethod::Exhaustive && network.n_outputs > 30)
        throw ConfigError(
            "experiment.solver: exhaustive enumeration is limited to n_outputs <= 30; "
            "use solver = local_search (warning: no global-optimality guarantee)");
}

ExperimentConfig parse_config_text(const std::string& text) {
    ExperimentConfig cfg;
    std::istringstream in(text);
    std::string line;
    std::string section;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const auto comment = line.find_first_of("#;");
        if (comment != std::string::npos) line = line.substr(0, comment);
        line = trim(line);
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']')
                throw ConfigError("line " + std::to_string(line_no) + ": malformed section header");
            section = trim(line.substr(1, line.size() - 2));
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError("line " + std::to_string(line_no) + ": expected key = value");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (section.empty())
            throw ConfigError("line " + std::to_string(line_no) + ": key '" + key +
                              "' outside any [section]");
        apply(cfg, section, key, value);
    }
    cfg.validate();
    return cfg;
}

ExperimentConfig parse_config_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot open config file " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_config_text(buf.str());
}

std::string canonical_config_text(const ExperimentConfig& config) {
    char num[64];
    std::ostringstream out;
    auto put = [&](const char* key, double v) {
        std::snprintf(num, sizeof num, "%.17g", v);
        out << key << "=" << num << "\n";
    };
    out << "network.n_outputs=" << config.network.n_outputs << "\n";
    out << "network.k=" << config.network.k << "\n";
    out << "network.reservoir_size=" << config.network.reservoir_size << "\n";
    put("network.density_alpha", config.network.density_alpha);
    put("network.weight_range", config.network.weight_range);
    put("network.spectral_radius", config.network.spectral_radius);
    out << "network.neighborhood=" << to_string(config.network.neighborhood) << "\n";
    out << "network.n_inputs=" << config.network.n_inputs << "\n";
    put("network.probe_density", config.network.probe_density);
    put("physics.cart_mass", config.physics.cart_mass);
    put("physics.pole1_mass", config.physics.pole1_mass);
    put("physics.pole2_mass", config.physics.pole2_mass);
    put("physics.pole1_length", config.physics.pole1_length);
    put("physics.pole2_length", config.physics.pole2_length);
    put("physics.mu_cart", config.physics.mu_cart);
    put("physics.mu_pole", config.physics.mu_pole);
    put("physics.gravity", config.physics.gravity);
    put("physics.dt", config.physics.dt);
    put("physics.x_limit", config.domain.x_limit);
    put("physics.angle_limit", config.domain.angle_limit);
    out << "experiment.t_max=" << config.t_max << "\n";
    out << "experiment.steps_per_action=" << config.steps_per_action << "\n";
    out << "experiment.runs=" << config.runs << "\n";
    out << "experiment.solver=" << to_string(config.solver) << "\n";
    out << "experiment.restarts=" << config.restarts << "\n";
    out << "experiment.top_m=" << (config.top_m ? std::to_string(*config.top_m) : "none") << "\n";
    out << "experiment.base_seed=" << config.base_seed << "\n";
    return out.str();
}

std::string config_hash(const ExperimentConfig& config) {
    const std::uint64_t h = fnv1a64(canonical_config_text(config));
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return std::string(buf);
}

ExperimentSetup setup_for_run(const ExperimentConfig& config, int run_index) {
    ExperimentSetup setup;
    setup.network = config.network;
    setup.episode.t_max = config.t_max;
    setup.episode.steps_per_action = config.steps_per_action;
    setup.episode.physics = config.physics;
    setup.episode.domain = config.domain;
    setup.solver = config.solver;
    setup.local_search_restarts = config.restarts;
    setup.top_m = config.top_m;
    setup.run_seed = config.base_seed + static_cast<std::uint64_t>(run_index);
    setup.jobs = config.jobs;
    return setup;
}

}  // namespace nkesn
