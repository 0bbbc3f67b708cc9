#ifndef NKESN_NETWORK_HPP
#define NKESN_NETWORK_HPP

#include <Eigen/Dense>

#include <cstdint>
#include <vector>

#include "nkesn/cartpole.hpp"

namespace nkesn {

// On/off pattern for the probe filter layer, one entry per probe neuron.
using BitVector = std::vector<std::uint8_t>;

// How each output neuron picks its K partner probes: consecutive indices
// (wrapping modulo N) or uniformly random distinct ones.
enum class Neighborhood { Adjacent, Random };

struct NetworkConfig {
    int n_outputs = 20;            // N: outputs and probe-filter neurons
    int k = 3;                     // K: partner probes per output
    int reservoir_size = 60;
    double density_alpha = 0.10;   // recurrent in-edges per neuron as a fraction
    double weight_range = 0.6;     // weights uniform in [-w, w]
    double spectral_radius = 0.95;
    Neighborhood neighborhood = Neighborhood::Adjacent;
    int n_inputs = 3;
    std::uint64_t seed = 1;
    double probe_density = 1.0;    // fraction of the reservoir each probe reads

    int arity() const { return k + 1; }
    // Throws std::invalid_argument naming the offending field.
    void validate() const;
};

// Row i lists the K+1 probe indices feeding output i, sorted ascending.
// Row i always contains i itself. The sorted order is the canonical bit
// order for subfunction lookup tables: bit j of a pattern index corresponds
// to rows[i][j].
struct MaskTable {
    std::vector<std::vector<int>> rows;

    int size() const { return static_cast<int>(rows.size()); }
    int arity() const { return rows.empty() ? 0 : static_cast<int>(rows[0].size()); }
    // True iff every row equals {i, i+1, ..., i+K} mod N (sorted).
    bool is_adjacent() const;
    void validate() const;
};

MaskTable make_mask_table(const NetworkConfig& config);

// Echo state network with a probe filter layer between the reservoir and an
// ensemble of N outputs. All weights are drawn once at construction and are
// never changed afterwards; the only mutable part is the activation state.
struct EchoNetwork {
    NetworkConfig config;
    Eigen::MatrixXd input_weights;      // reservoir_size x n_inputs
    Eigen::MatrixXd reservoir_weights;  // reservoir_size x reservoir_size, sparse by construction
    Eigen::MatrixXd probe_weights;      // n_outputs x reservoir_size
    std::vector<std::vector<double>> output_weights;  // [i][j] pairs masks.rows[i][j]
    Eigen::VectorXd reservoir_bias;
    Eigen::VectorXd probe_bias;
    MaskTable masks;

    Eigen::VectorXd reservoir_state;  // activations in (-1, 1)
    Eigen::VectorXd probe_state;      // last probe activations, for inspection

    void reset_state();

    // One synchronous update: reservoir <- tanh(W_in u + W_res s + b), probe
    // activations from the new reservoir state, then each output i sums its
    // masked probe terms (gated by x) through a final tanh. x must have
    // length n_outputs.
    std::vector<double> step(const Eigen::VectorXd& input, const BitVector& x);
};

// Deterministic function of config.seed. Weight values, reservoir topology,
// and mask partners come from independent seed streams, so changing K leaves
// the reservoir identical.
EchoNetwork build_network(const NetworkConfig& config);

// matrix * (target / spectral_radius(matrix)); throws if the spectral radius
// is zero (nothing to normalize).
Eigen::MatrixXd scale_spectral_radius(const Eigen::MatrixXd& matrix, double target);

// Largest eigenvalue magnitude, via a dense eigendecomposition.
double spectral_radius(const Eigen::MatrixXd& matrix);

// Benchmark input vector: (cart position, pole angles) each divided by its
// maximum allowed magnitude; components lie in [-1, 1] inside the domain.
Eigen::VectorXd scale_input(const CartPoleState& state, const SuccessDomain& domain);

}  // namespace nkesn

#endif
