#include "nkesn/network.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "nkesn/rng.hpp"

namespace nkesn {

void NetworkConfig::validate() const {
    if (n_outputs < 1) throw std::invalid_argument("network.n_outputs must be >= 1");
    if (k < 0) throw std::invalid_argument("network.k must be >= 0");
    if (k + 1 > n_outputs)
        throw std::invalid_argument("network.k: K+1 must not exceed n_outputs");
    if (reservoir_size < 1) throw std::invalid_argument("network.reservoir_size must be >= 1");
    if (!(density_alpha > 0.0 && density_alpha <= 1.0))
        throw std::invalid_argument("network.density_alpha must be in (0, 1]");
    if (!(weight_range > 0.0)) throw std::invalid_argument("network.weight_range must be > 0");
    if (!(spectral_radius > 0.0))
        throw std::invalid_argument("network.spectral_radius must be > 0");
    if (n_inputs < 1) throw std::invalid_argument("network.n_inputs must be >= 1");
    if (!(probe_density > 0.0 && probe_density <= 1.0))
        throw std::invalid_argument("network.probe_density must be in (0, 1]");
}

bool MaskTable::is_adjacent() const {
    const int n = size();
    const int arity_ = arity();
    std::vector<int> expected;
    for (int i = 0; i < n; ++i) {
        expected.clear();
        for (int j = 0; j < arity_; ++j) expected.push_back((i + j) % n);
        std::sort(expected.begin(), expected.end());
        if (rows[i] != expected) return false;
    }
    return true;
}

void MaskTable::validate() const {
    const int n = size();
    const int arity_ = arity();
    for (int i = 0; i < n; ++i) {
        const auto& row = rows[i];
        if (static_cast<int>(row.size()) != arity_)
            throw std::invalid_argument("mask table: ragged rows");
        if (!std::is_sorted(row.begin(), row.end()))
            throw std::invalid_argument("mask table: row not sorted");
        if (std::adjacent_find(row.begin(), row.end()) != row.end())
            throw std::invalid_argument("mask table: duplicate index in row");
        if (row.front() < 0 || row.back() >= n)
            throw std::invalid_argument("mask table: index out of range");
        if (!std::binary_search(row.begin(), row.end(), i))
            throw std::invalid_argument("mask table: row " + std::to_string(i) +
                                        " does not contain its own index");
    }
}

MaskTable make_mask_table(const NetworkConfig& config) {
    const int n = config.n_outputs;
    const int k = config.k;
    MaskTable table;
    table.rows.resize(n);
    if (config.neighborhood == Neighborhood::Adjacent) {
        for (int i = 0; i < n; ++i) {
            auto& row = table.rows[i];
            for (int j = 0; j <= k; ++j) row.push_back((i + j) % n);
            std::sort(row.begin(), row.end());
        }
    } else {
        auto eng = seeded_engine(config.seed, "masks");
        for (int i = 0; i < n; ++i) {
            // K distinct partners from [0, n) \ {i}.
            auto partners = sample_without_replacement(eng, n - 1, k);
            auto& row = table.rows[i];
            row.push_back(i);
            for (int p : partners) row.push_back(p >= i ? p + 1 : p);
            std::sort(row.begin(), row.end());
        }
    }
    table.validate();
    return table;
}

double spectral_radius(const Eigen::MatrixXd& matrix) {
    Eigen::EigenSolver<Eigen::MatrixXd> solver(matrix, /*computeEigenvectors=*/false);
    return solver.eigenvalues().cwiseAbs().maxCoeff();
}

Eigen::MatrixXd scale_spectral_radius(const Eigen::MatrixXd& matrix, double target) {
    if (!(target > 0.0)) throw std::invalid_argument("spectral radius target must be > 0");
    const double rho = spectral_radius(matrix);
    if (rho <= 0.0)
        throw std::invalid_argument("cannot scale matrix with zero spectral radius");
    return matrix * (target / rho);
}

EchoNetwork build_network(const NetworkConfig& config) {
    config.validate();
    const int res = config.reservoir_size;
    const double w = config.weight_range;

    EchoNetwork net;
    net.config = config;
    net.masks = make_mask_table(config);

    auto weights = seeded_engine(config.seed, "weights");
    net.input_weights.resize(res, config.n_inputs);
    for (int r = 0; r < res; ++r)
        for (int c = 0; c < config.n_inputs; ++c)
            net.input_weights(r, c) = uniform_in(weights, -w, w);

    // Sparse recurrent matrix: each neuron reads exactly round(alpha * res)
    // sources, chosen without replacement.
    auto topology = seeded_engine(config.seed, "reservoir_topology");
    const int fan_in = std::max<int>(
        0, static_cast<int>(std::llround(config.density_alpha * res)));
    net.reservoir_weights = Eigen::MatrixXd::Zero(res, res);
    for (int r = 0; r < res; ++r) {
        auto sources = sample_without_replacement(topology, res, fan_in);
        std::sort(sources.begin(), sources.end());
        for (int src : sources) net.reservoir_weights(r, src) = uniform_in(weights, -w, w);
    }
    net.reservoir_weights = scale_spectral_radius(net.reservoir_weights, config.spectral_radius);

    auto probe_topology = seeded_engine(config.seed, "probe_topology");
    const int probe_fan_in = std::max<int>(
        1, static_cast<int>(std::llround(config.probe_density * res)));
    net.probe_weights = Eigen::MatrixXd::Zero(config.n_outputs, res);
    for (int q = 0; q < config.n_outputs; ++q) {
        if (probe_fan_in >= res) {
            for (int c = 0; c < res; ++c) net.probe_weights(q, c) = uniform_in(weights, -w, w);
        } else {
            auto sources = sample_without_replacement(probe_topology, res, probe_fan_in);
            std::sort(sources.begin(), sources.end());
            for (int src : sources) net.probe_weights(q, src) = uniform_in(weights, -w, w);
        }
    }

    auto output_stream = seeded_engine(config.seed, "output_weights");
    net.output_weights.resize(config.n_outputs);
    for (int i = 0; i < config.n_outputs; ++i) {
        net.output_weights[i].resize(config.arity());
        for (int j = 0; j < config.arity(); ++j)
            net.output_weights[i][j] = uniform_in(output_stream, -w, w);
    }

    auto thresholds = seeded_engine(config.seed, "thresholds");
    net.reservoir_bias.resize(res);
    for (int r = 0; r < res; ++r) net.reservoir_bias(r) = uniform_in(thresholds, -w, w);
    net.probe_bias.resize(config.n_outputs);
    for (int q = 0; q < config.n_outputs; ++q) net.probe_bias(q) = uniform_in(thresholds, -w, w);
    // Output neurons carry no bias: an all-off probe pattern must yield
    // exactly tanh(0) = 0.

    net.reservoir_state = Eigen::VectorXd::Zero(res);
    net.probe_state = Eigen::VectorXd::Zero(config.n_outputs);
    return net;
}

void EchoNetwork::reset_state() {
    reservoir_state.setZero();
    probe_state.setZero();
}

std::vector<double> EchoNetwork::step(const Eigen::VectorXd& input, const BitVector& x) {
    if (static_cast<int>(x.size()) != config.n_outputs)
        throw std::invalid_argument("step: bit vector length != n_outputs");
    if (input.size() != config.n_inputs)
        throw std::invalid_argument("step: input length != n_inputs");

    Eigen::VectorXd pre = input_weights * input + reservoir_weights * reservoir_state +
                          reservoir_bias;
    for (int r = 0; r < pre.size(); ++r) reservoir_state(r) = std::tanh(pre(r));

    Eigen::VectorXd probe_pre = probe_weights * reservoir_state + probe_bias;
    for (int q = 0; q < probe_pre.size(); ++q) probe_state(q) = std::tanh(probe_pre(q));

    std::vector<double> y(config.n_outputs);
    for (int i = 0; i < config.n_outputs; ++i) {
        double acc = 0.0;
        const auto& row = masks.rows[i];
        const auto& wout = output_weights[i];
        for (std::size_t j = 0; j < row.size(); ++j) {
            if (x[row[j]]) acc += wout[j] * probe_state(row[j]);
        }
        y[i] = std::tanh(acc);
    }
    return y;
}

Eigen::VectorXd scale_input(const CartPoleState& state, const SuccessDomain& domain) {
    Eigen::VectorXd u(3);
    u(0) = state.cart_pos / domain.x_limit;
    u(1) = state.pole1_angle / domain.angle_limit;
    u(2) = state.pole2_angle / domain.angle_limit;
    return u;
}

}  // namespace nkesn
