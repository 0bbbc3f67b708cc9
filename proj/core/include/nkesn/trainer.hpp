#ifndef NKESN_TRAINER_HPP
#define NKESN_TRAINER_HPP

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "nkesn/cartpole.hpp"
#include "nkesn/landscape.hpp"
#include "nkesn/network.hpp"

namespace nkesn {

// Applied force in Newtons is kActionScale * network output.
inline constexpr double kActionScale = 10.0;

// Episode score: f = 0.1*f1 + 0.9*f_stable, where f1 rewards survival time
// and f_stable rewards low motion of cart and long pole over the final 100
// steps (zero when fewer than 100 steps were survived).
struct FitnessComponents {
    int steps_survived = 0;
    double f1 = 0.0;
    double f_stable = 0.0;
    double f = 0.0;
    bool aborted = false;  // integration produced a non-finite state
};

struct EnsembleWeights {
    std::vector<double> a;  // non-negative, sums to 1
};

// Either one output neuron drives the cart, or the weighted ensemble of all
// of them does.
struct Controller {
    enum class Kind { SingleOutput, Ensemble };
    Kind kind = Kind::SingleOutput;
    int output_index = 0;
    EnsembleWeights weights;

    static Controller single(int output_index) {
        Controller c;
        c.kind = Kind::SingleOutput;
        c.output_index = output_index;
        return c;
    }
    static Controller ensemble(EnsembleWeights w) {
        Controller c;
        c.kind = Kind::Ensemble;
        c.weights = std::move(w);
        return c;
    }
    bool is_single() const { return kind == Kind::SingleOutput; }
};

struct EpisodeParams {
    int t_max = 1000;
    int steps_per_action = 1;  // integration substeps per control decision
    PhysicsParams physics;
    SuccessDomain domain;
};

// Called once per control step with the scaled input, raw controller output,
// applied force, and the state after integration.
using StepObserver =
    std::function<void(int t, const Eigen::VectorXd& input, double control, double force,
                       const CartPoleState& state)>;

// Runs one balancing episode. The reservoir is reset first, so identical
// arguments always produce identical trajectories and scores.
FitnessComponents run_episode(EchoNetwork& network, const BitVector& x,
                              const Controller& controller, const CartPoleState& start,
                              const EpisodeParams& params,
                              const StepObserver& observer = nullptr);

// Training start state: pole 1 at 4.5 degrees, everything else zero.
CartPoleState standard_start_state();

struct LandscapeBuild {
    NkLandscape landscape;
    long episode_count = 0;  // always n_outputs * 2^(K+1)
};

// Fills the subfunction tables: for every output i and every on/off pattern
// over its K+1 probes, one episode from the standard start scored on output
// i alone (all other probe bits zero). Episodes are independent and can run
// on parallel network clones; results are identical for any jobs value.
LandscapeBuild build_landscape(const EchoNetwork& network, const EpisodeParams& params,
                               int jobs = 1);

// tables[i][pattern(x, row_i)] for every i.
std::vector<double> subfunction_values(const NkLandscape& landscape, const BitVector& x);

// Fitness-proportional combination weights a_i = f_i(x) / sum_j f_j(x).
// Throws if the subfunction values sum to zero.
EnsembleWeights ensemble_weights(const NkLandscape& landscape, const BitVector& x);

// Weighted ensemble output sum a_i y_i.
double ensemble_output(const std::vector<double>& y, const EnsembleWeights& weights);

// Keeps only the m outputs with the largest f_i(x) (ties: lower index),
// renormalized. Reuses the stored tables, so it costs no episodes.
EnsembleWeights top_m_ensemble(const NkLandscape& landscape, const BitVector& x, int m);

struct GeneralizationReport {
    int successes = 0;
    std::vector<std::uint8_t> per_state;       // 1 = survived all t_max steps
    std::vector<CartPoleState> initial_states;
};

// The 5^4 = 625 start states: cart position, cart velocity, pole-1 angle and
// pole-1 velocity each at 5%, 25%, 50%, 75%, 95% of a reduced range; pole 2
// starts upright at rest. Fixed nesting order (position outermost, pole-1
// velocity innermost).
std::vector<CartPoleState> generalization_grid();

// One episode per grid state with the reservoir reset in between; success
// means surviving all t_max steps.
GeneralizationReport generalization_test(const EchoNetwork& network, const BitVector& x,
                                         const Controller& controller,
                                         const EpisodeParams& params, int jobs = 1);

struct BestSingleOutput {
    int output = 0;
    std::uint32_t pattern_index = 0;
    double f = 0.0;
};

struct ExperimentSetup {
    NetworkConfig network;  // seed is replaced by run_seed
    EpisodeParams episode;
    SolveMethod solver = SolveMethod::DynamicProgramming;
    int local_search_restarts = 50;
    std::optional<int> top_m;
    std::uint64_t run_seed = 1;
    int jobs = 1;
    bool keep_artifacts = false;  // retain network and landscape in the result
};

struct ExperimentResult {
    std::uint64_t run_seed = 0;
    long evaluation_count = 0;  // training episodes spent on the landscape
    BestSingleOutput best_single;
    GeneralizationReport best_single_generalization;
    Solution x_star;
    EnsembleWeights weights;
    GeneralizationReport ensemble_generalization;
    std::optional<int> top_m;
    EnsembleWeights top_m_weights;
    GeneralizationReport top_m_generalization;
    std::optional<EchoNetwork> network;    // present when keep_artifacts
    std::optional<NkLandscape> landscape;  // present when keep_artifacts
};

// Full pipeline for one seed: build network, fill the landscape, solve for
// x*, then measure generalization of the best single output, the full
// ensemble, and (optionally) the top-m ensemble.
ExperimentResult run_experiment(const ExperimentSetup& setup);

}  // namespace nkesn

#endif
