#include "nkesn/serialization.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace nkesn {

using ordered_json = nlohmann::ordered_json;

namespace {

ordered_json matrix_to_json(const Eigen::MatrixXd& m) {
    ordered_json j;
    j["rows"] = m.rows();
    j["cols"] = m.cols();
    std::vector<double> data;
    data.reserve(static_cast<std::size_t>(m.size()));
    for (Eigen::Index r = 0; r < m.rows(); ++r)
        for (Eigen::Index c = 0; c < m.cols(); ++c) data.push_back(m(r, c));
    j["data"] = std::move(data);
    return j;
}

Eigen::MatrixXd matrix_from_json(const ordered_json& j) {
    const auto rows = j.at("rows").get<Eigen::Index>();
    const auto cols = j.at("cols").get<Eigen::Index>();
    const auto data = j.at("data").get<std::vector<double>>();
    if (static_cast<Eigen::Index>(data.size()) != rows * cols)
        throw std::runtime_error("matrix: data length != rows*cols");
    Eigen::MatrixXd m(rows, cols);
    std::size_t idx = 0;
    for (Eigen::Index r = 0; r < rows; ++r)
        for (Eigen::Index c = 0; c < cols; ++c) m(r, c) = data[idx++];
    return m;
}

ordered_json vector_to_json(const Eigen::VectorXd& v) {
    std::vector<double> data(v.data(), v.data() + v.size());
    return ordered_json(data);
}

Eigen::VectorXd vector_from_json(const ordered_json& j) {
    const auto data = j.get<std::vector<double>>();
    Eigen::VectorXd v(static_cast<Eigen::Index>(data.size()));
    for (std::size_t i = 0; i < data.size(); ++i) v(static_cast<Eigen::Index>(i)) = data[i];
    return v;
}

std::string bits_to_string(const BitVector& bits) {
    std::string s(bits.size(), '0');
    for (std::size_t i = 0; i < bits.size(); ++i)
        if (bits[i]) s[i] = '1';
    return s;
}

std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

void write_file(const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << text;
    if (!out) throw std::runtime_error("write failed for " + path.string());
}

void expect_format(const ordered_json& j, const std::string& format) {
    if (!j.contains("format") || j.at("format").get<std::string>() != format)
        throw std::runtime_error("document is not a " + format + " file");
}

}  // namespace

std::string to_string(Neighborhood n) {
    return n == Neighborhood::Adjacent ? "adjacent" : "random";
}

Neighborhood neighborhood_from_string(const std::string& s) {
    if (s == "adjacent") return Neighborhood::Adjacent;
    if (s == "random") return Neighborhood::Random;
    throw std::runtime_error("unknown neighborhood '" + s + "' (adjacent|random)");
}

std::string to_string(SolveMethod m) {
    switch (m) {
        case SolveMethod::Exhaustive: return "exhaustive";
        case SolveMethod::DynamicProgramming: return "dp";
        case SolveMethod::LocalSearch: return "local_search";
    }
    return "dp";
}

SolveMethod solve_method_from_string(const std::string& s) {
    if (s == "exhaustive") return SolveMethod::Exhaustive;
    if (s == "dp") return SolveMethod::DynamicProgramming;
    if (s == "local_search") return SolveMethod::LocalSearch;
    throw std::runtime_error("unknown solver '" + s + "' (dp|exhaustive|local_search)");
}

namespace {

void stamp_provenance(ordered_json& j, const RunMetadata* meta) {
    if (!meta) return;
    j["run_index"] = meta->run_index;
    j["config_hash"] = meta->config_hash;
}

}  // namespace

std::string network_to_json(const EchoNetwork& net, const RunMetadata* meta) {
    ordered_json j;
    j["format"] = "nkesn-network";
    j["version"] = 1;
    stamp_provenance(j, meta);
    ordered_json cfg;
    cfg["n_outputs"] = net.config.n_outputs;
    cfg["k"] = net.config.k;
    cfg["reservoir_size"] = net.config.reservoir_size;
    cfg["density_alpha"] = net.config.density_alpha;
    cfg["weight_range"] = net.config.weight_range;
    cfg["spectral_radius"] = net.config.spectral_radius;
    cfg["neighborhood"] = to_string(net.config.neighborhood);
    cfg["n_inputs"] = net.config.n_inputs;
    cfg["seed"] = net.config.seed;
    cfg["probe_density"] = net.config.probe_density;
    j["config"] = std::move(cfg);
    j["input_weights"] = matrix_to_json(net.input_weights);
    j["reservoir_weights"] = matrix_to_json(net.reservoir_weights);
    j["probe_weights"] = matrix_to_json(net.probe_weights);
    j["output_weights"] = net.output_weights;
    j["reservoir_bias"] = vector_to_json(net.reservoir_bias);
    j["probe_bias"] = vector_to_json(net.probe_bias);
    j["masks"] = net.masks.rows;
    j["reservoir_state"] = vector_to_json(net.reservoir_state);
    return j.dump(2) + "\n";
}

EchoNetwork network_from_json(const std::string& text) {
    const ordered_json j = ordered_json::parse(text);
    expect_format(j, "nkesn-network");
    EchoNetwork net;
    const auto& cfg = j.at("config");
    net.config.n_outputs = cfg.at("n_outputs").get<int>();
    net.config.k = cfg.at("k").get<int>();
    net.config.reservoir_size = cfg.at("reservoir_size").get<int>();
    net.config.density_alpha = cfg.at("density_alpha").get<double>();
    net.config.weight_range = cfg.at("weight_range").get<double>();
    net.config.spectral_radius = cfg.at("spectral_radius").get<double>();
    net.config.neighborhood = neighborhood_from_string(cfg.at("neighborhood").get<std::string>());
    net.config.n_inputs = cfg.at("n_inputs").get<int>();
    net.config.seed = cfg.at("seed").get<std::uint64_t>();
    net.config.probe_density = cfg.at("probe_density").get<double>();
    net.config.validate();
    net.input_weights = matrix_from_json(j.at("input_weights"));
    net.reservoir_weights = matrix_from_json(j.at("reservoir_weights"));
    net.probe_weights = matrix_from_json(j.at("probe_weights"));
    net.output_weights = j.at("output_weights").get<std::vector<std::vector<double>>>();
    net.reservoir_bias = vector_from_json(j.at("reservoir_bias"));
    net.probe_bias = vector_from_json(j.at("probe_bias"));
    net.masks.rows = j.at("masks").get<std::vector<std::vector<int>>>();
    net.masks.validate();
    net.reservoir_state = vector_from_json(j.at("reservoir_state"));
    net.probe_state = Eigen::VectorXd::Zero(net.config.n_outputs);

    if (net.reservoir_weights.rows() != net.config.reservoir_size ||
        net.reservoir_weights.cols() != net.config.reservoir_size ||
        net.input_weights.rows() != net.config.reservoir_size ||
        net.input_weights.cols() != net.config.n_inputs ||
        net.probe_weights.rows() != net.config.n_outputs ||
        net.probe_weights.cols() != net.config.reservoir_size ||
        static_cast<int>(net.output_weights.size()) != net.config.n_outputs ||
        net.masks.size() != net.config.n_outputs ||
        net.reservoir_state.size() != net.config.reservoir_size)
        throw std::runtime_error("network document: dimension mismatch");
    return net;
}

void save_network(const EchoNetwork& network, const std::filesystem::path& path,
                  const RunMetadata* meta) {
    write_file(path, network_to_json(network, meta));
}

EchoNetwork load_network(const std::filesystem::path& path) {
    return network_from_json(read_file(path));
}

std::string landscape_to_json(const NkLandscape& landscape, const RunMetadata* meta) {
    ordered_json j;
    j["format"] = "nkesn-landscape";
    j["version"] = 1;
    stamp_provenance(j, meta);
    j["n"] = landscape.n;
    j["k"] = landscape.arity - 1;
    j["neighborhood"] = landscape.masks.is_adjacent() ? "adjacent" : "random";
    j["masks"] = landscape.masks.rows;
    j["tables"] = landscape.tables;
    return j.dump(2) + "\n";
}

NkLandscape landscape_from_json(const std::string& text) {
    const ordered_json j = ordered_json::parse(text);
    expect_format(j, "nkesn-landscape");
    NkLandscape landscape;
    landscape.n = j.at("n").get<int>();
    landscape.arity = j.at("k").get<int>() + 1;
    landscape.masks.rows = j.at("masks").get<std::vector<std::vector<int>>>();
    landscape.tables = j.at("tables").get<std::vector<std::vector<double>>>();
    landscape.validate();
    return landscape;
}

void save_landscape(const NkLandscape& landscape, const std::filesystem::path& path,
                    const RunMetadata* meta) {
    write_file(path, landscape_to_json(landscape, meta));
}

NkLandscape load_landscape(const std::filesystem::path& path) {
    return landscape_from_json(read_file(path));
}

std::string result_record_to_json(const RunMetadata& meta, const ExperimentResult& result) {
    ordered_json j;
    j["format"] = "nkesn-result";
    j["version"] = 1;
    j["run_index"] = meta.run_index;
    j["run_seed"] = result.run_seed;
    j["config_hash"] = meta.config_hash;
    j["model"] = meta.model;
    j["n_outputs"] = meta.n_outputs;
    j["k"] = meta.k;
    j["reservoir_size"] = meta.reservoir_size;
    j["solver"] = meta.solver;
    j["t_max"] = meta.t_max;
    j["evaluation_count"] = result.evaluation_count;

    ordered_json best;
    best["output"] = result.best_single.output;
    best["pattern"] = result.best_single.pattern_index;
    best["f"] = result.best_single.f;
    best["generalization"] = result.best_single_generalization.successes;
    best["per_state"] = bits_to_string(result.best_single_generalization.per_state);
    j["best_single"] = std::move(best);

    ordered_json xstar;
    xstar["bits"] = bits_to_string(result.x_star.bits);
    xstar["value"] = result.x_star.value;
    xstar["provenance"] = to_string(result.x_star.provenance);
    j["x_star"] = std::move(xstar);

    ordered_json ens;
    ens["weights"] = result.weights.a;
    ens["generalization"] = result.ensemble_generalization.successes;
    ens["per_state"] = bits_to_string(result.ensemble_generalization.per_state);
    j["ensemble"] = std::move(ens);

    if (result.top_m) {
        ordered_json top;
        top["m"] = *result.top_m;
        top["weights"] = result.top_m_weights.a;
        top["generalization"] = result.top_m_generalization.successes;
        top["per_state"] = bits_to_string(result.top_m_generalization.per_state);
        j["top_m"] = std::move(top);
    }
    return j.dump(2) + "\n";
}

void save_result_record(const RunMetadata& meta, const ExperimentResult& result,
                        const std::filesystem::path& path) {
    write_file(path, result_record_to_json(meta, result));
}

ResultRecord parse_result_record(const std::string& text) {
    const ordered_json j = ordered_json::parse(text);
    expect_format(j, "nkesn-result");
    ResultRecord r;
    r.run_index = j.at("run_index").get<int>();
    r.run_seed = j.at("run_seed").get<std::uint64_t>();
    r.config_hash = j.at("config_hash").get<std::string>();
    r.model = j.at("model").get<std::string>();
    r.n_outputs = j.at("n_outputs").get<int>();
    r.k = j.at("k").get<int>();
    r.solver = j.at("solver").get<std::string>();
    r.evaluation_count = j.at("evaluation_count").get<long>();
    r.best_single_f = j.at("best_single").at("f").get<double>();
    r.best_single_generalization = j.at("best_single").at("generalization").get<int>();
    r.x_star_bits = j.at("x_star").at("bits").get<std::string>();
    r.x_star_value = j.at("x_star").at("value").get<double>();
    r.ensemble_generalization = j.at("ensemble").at("generalization").get<int>();
    if (j.contains("top_m")) {
        r.top_m = j.at("top_m").at("m").get<int>();
        r.top_m_generalization = j.at("top_m").at("generalization").get<int>();
    }
    return r;
}

ResultRecord load_result_record(const std::filesystem::path& path) {
    return parse_result_record(read_file(path));
}

}  // namespace nkesn
