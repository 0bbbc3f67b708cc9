#include "nkesn/trainer.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <iostream>
#include <mutex>
#include <numeric>
#include <stdexcept>
#include <thread>

#include "nkesn/rng.hpp"

namespace nkesn {

namespace {

int resolve_jobs(int jobs) {
    if (jobs > 0) return jobs;
    const unsigned hw = std::thread::hardware_concurrency();
    return hw ? static_cast<int>(hw) : 1;
}

// Static round-robin partition over worker threads, each with a private
// network clone. Results land in disjoint slots, so the outcome does not
// depend on the number of threads.
void parallel_episodes(const EchoNetwork& prototype, long total, int jobs,
                       const std::function<void(EchoNetwork&, long)>& body) {
    jobs = std::min<long>(resolve_jobs(jobs), total);
    if (jobs <= 1) {
        EchoNetwork clone = prototype;
        for (long idx = 0; idx < total; ++idx) body(clone, idx);
        return;
    }
    std::vector<std::thread> workers;
    std::exception_ptr first_error;
    std::mutex error_mutex;
    workers.reserve(jobs);
    for (int w = 0; w < jobs; ++w) {
        workers.emplace_back([&, w] {
            try {
                EchoNetwork clone = prototype;
                for (long idx = w; idx < total; idx += jobs) body(clone, idx);
            } catch (...) {
                std::scoped_lock lock(error_mutex);
                if (!first_error) first_error = std::current_exception();
            }
        });
    }
    for (auto& t : workers) t.join();
    if (first_error) std::rethrow_exception(first_error);
}

double controller_output(const Controller& controller, const std::vector<double>& y) {
    if (controller.is_single()) return y[controller.output_index];
    return ensemble_output(y, controller.weights);
}

}  // namespace

CartPoleState standard_start_state() {
    CartPoleState s;
    s.pole1_angle = deg_to_rad(4.5);
    return s;
}

FitnessComponents run_episode(EchoNetwork& network, const BitVector& x,
                              const Controller& controller, const CartPoleState& start,
                              const EpisodeParams& params, const StepObserver& observer) {
    if (params.t_max < 1) throw std::invalid_argument("episode: t_max must be >= 1");
    if (params.steps_per_action < 1)
        throw std::invalid_argument("episode: steps_per_action must be >= 1");
    if (!params.physics.valid()) throw std::invalid_argument("episode: invalid physics params");
    if (controller.is_single()) {
        if (controller.output_index < 0 || controller.output_index >= network.config.n_outputs)
            throw std::invalid_argument("episode: controller output index out of range");
    } else if (static_cast<int>(controller.weights.a.size()) != network.config.n_outputs) {
        throw std::invalid_argument("episode: ensemble weight count != n_outputs");
    }

    network.reset_state();
    CartPoleState state = start;

    // Motion record per step (start state included) feeding the stability
    // term: |cart pos| + |cart vel| + |pole1 angle| + |pole1 vel|.
    std::vector<double> motion;
    motion.reserve(params.t_max + 1);
    auto motion_of = [](const CartPoleState& s) {
        return std::abs(s.cart_pos) + std::abs(s.cart_vel) + std::abs(s.pole1_angle) +
               std::abs(s.pole1_vel);
    };
    motion.push_back(motion_of(state));

    FitnessComponents out;
    int survived = 0;
    for (int t = 1; t <= params.t_max; ++t) {
        const Eigen::VectorXd input = scale_input(state, params.domain);
        const std::vector<double> y = network.step(input, x);
        const double control = controller_output(controller, y);
        const double force = kActionScale * control;

        bool finite = true;
        for (int sub = 0; sub < params.steps_per_action; ++sub) {
            auto next = rk4_step(state, force, params.physics);
            if (!next) {
                finite = false;
                break;
            }
            state = *next;
        }
        if (!finite) {
            out.aborted = true;
            survived = t - 1;
            break;
        }
        motion.push_back(motion_of(state));
        if (observer) observer(t, input, control, force, state);
        survived = t;
        if (!in_success_domain(state, params.domain)) break;
    }

    out.steps_survived = survived;
    out.f1 = static_cast<double>(survived) / params.t_max;
    if (survived < 100) {
        out.f_stable = 0.0;
    } else {
        double denom = 0.0;
        for (int i = survived - 100; i <= survived; ++i) denom += motion[i];
        denom = std::max(denom, 1e-6);  // guard for a perfectly motionless system
        out.f_stable = 0.75 / denom;
    }
    out.f = 0.1 * out.f1 + 0.9 * out.f_stable;
    return out;
}

LandscapeBuild build_landscape(const EchoNetwork& network, const EpisodeParams& params,
                               int jobs) {
    const int n = network.config.n_outputs;
    const int arity = network.config.arity();
    const long patterns = 1L << arity;

    LandscapeBuild build;
    build.landscape.n = n;
    build.landscape.arity = arity;
    build.landscape.masks = network.masks;
    build.landscape.tables.assign(n, std::vector<double>(patterns, 0.0));

    const CartPoleState start = standard_start_state();
    std::atomic<long> episodes{0};
    std::atomic<long> aborted{0};

    parallel_episodes(network, static_cast<long>(n) * patterns, jobs,
                      [&](EchoNetwork& clone, long idx) {
                          const int i = static_cast<int>(idx / patterns);
                          const auto p = static_cast<std::uint32_t>(idx % patterns);
                          BitVector x(n, 0);
                          const auto& row = clone.masks.rows[i];
                          for (std::size_t j = 0; j < row.size(); ++j)
                              x[row[j]] = static_cast<std::uint8_t>((p >> j) & 1u);
                          const FitnessComponents fc =
                              run_episode(clone, x, Controller::single(i), start, params);
                          episodes.fetch_add(1, std::memory_order_relaxed);
                          if (fc.aborted) {
                              aborted.fetch_add(1, std::memory_order_relaxed);
                              build.landscape.tables[i][p] = 0.0;
                          } else {
                              build.landscape.tables[i][p] = fc.f;
                          }
                      });

    if (long bad = aborted.load())
        std::cerr << "build_landscape: " << bad
                  << " episode(s) hit non-finite dynamics, stored 0 fitness\n";
    build.episode_count = episodes.load();
    return build;
}

std::vector<double> subfunction_values(const NkLandscape& landscape, const BitVector& x) {
    if (static_cast<int>(x.size()) != landscape.n)
        throw std::invalid_argument("subfunction_values: bit vector length != n");
    std::vector<double> values(landscape.n);
    for (int i = 0; i < landscape.n; ++i)
        values[i] = landscape.tables[i][pattern(x, landscape.masks.rows[i])];
    return values;
}

EnsembleWeights ensemble_weights(const NkLandscape& landscape, const BitVector& x) {
    const std::vector<double> values = subfunction_values(landscape, x);
    double sum = 0.0;
    for (double v : values) sum += v;
    if (!(sum > 0.0))
        throw std::domain_error("ensemble_weights: subfunction values sum to zero");
    EnsembleWeights w;
    w.a.resize(values.size());
    for (std::size_t i = 0; i < values.size(); ++i) w.a[i] = values[i] / sum;
    return w;
}

double ensemble_output(const std::vector<double>& y, const EnsembleWeights& weights) {
    if (y.size() != weights.a.size())
        throw std::invalid_argument("ensemble_output: size mismatch");
    double out = 0.0;
    for (std::size_t i = 0; i < y.size(); ++i) out += weights.a[i] * y[i];
    return out;
}

EnsembleWeights top_m_ensemble(const NkLandscape& landscape, const BitVector& x, int m) {
    if (m < 1) throw std::invalid_argument("top_m_ensemble: m must be >= 1");
    if (m > landscape.n) throw std::invalid_argument("top_m_ensemble: m > n");
    const std::vector<double> values = subfunction_values(landscape, x);

    std::vector<int> order(values.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](int a, int b) { return values[a] > values[b]; });
    std::vector<int> selected(order.begin(), order.begin() + m);
    std::sort(selected.begin(), selected.end());

    // Summing in index order keeps m = n bit-identical to ensemble_weights.
    double sum = 0.0;
    for (int i : selected) sum += values[i];
    if (!(sum > 0.0))
        throw std::domain_error("top_m_ensemble: selected subfunction values sum to zero");

    EnsembleWeights w;
    w.a.assign(values.size(), 0.0);
    for (int i : selected) w.a[i] = values[i] / sum;
    return w;
}

std::vector<CartPoleState> generalization_grid() {
    static const double fractions[5] = {0.05, 0.25, 0.50, 0.75, 0.95};
    const double pos_range = 2.14;               // m
    const double vel_range = 1.35;               // m/s
    const double angle_range = deg_to_rad(3.6);  // rad
    const double angvel_range = deg_to_rad(8.6); // rad/s

    auto point = [](double half_range, double frac) {
        return -half_range + frac * (2.0 * half_range);
    };

    std::vector<CartPoleState> grid;
    grid.reserve(625);
    for (double fp : fractions)
        for (double fv : fractions)
            for (double fa : fractions)
                for (double fw : fractions) {
                    CartPoleState s;
                    s.cart_pos = point(pos_range, fp);
                    s.cart_vel = point(vel_range, fv);
                    s.pole1_angle = point(angle_range, fa);
                    s.pole1_vel = point(angvel_range, fw);
                    grid.push_back(s);
                }
    return grid;
}

GeneralizationReport generalization_test(const EchoNetwork& network, const BitVector& x,
                                         const Controller& controller,
                                         const EpisodeParams& params, int jobs) {
    const std::vector<CartPoleState> grid = generalization_grid();
    GeneralizationReport report;
    report.initial_states = grid;
    report.per_state.assign(grid.size(), 0);

    parallel_episodes(network, static_cast<long>(grid.size()), jobs,
                      [&](EchoNetwork& clone, long idx) {
                          const FitnessComponents fc =
                              run_episode(clone, x, controller, grid[idx], params);
                          report.per_state[idx] =
                              static_cast<std::uint8_t>(fc.steps_survived == params.t_max);
                      });

    report.successes = 0;
    for (auto s : report.per_state) report.successes += s;
    return report;
}

ExperimentResult run_experiment(const ExperimentSetup& setup) {
    NetworkConfig net_config = setup.network;
    net_config.seed = setup.run_seed;
    const EchoNetwork network = build_network(net_config);

    ExperimentResult result;
    result.run_seed = setup.run_seed;
    result.top_m = setup.top_m;

    LandscapeBuild build = build_landscape(network, setup.episode, setup.jobs);
    result.evaluation_count = build.episode_count;
    const NkLandscape& landscape = build.landscape;

    switch (setup.solver) {
        case SolveMethod::DynamicProgramming:
            result.x_star = solve_adjacent_dp(landscape);
            break;
        case SolveMethod::Exhaustive:
            result.x_star = solve_exhaustive(landscape);
            break;
        case SolveMethod::LocalSearch: {
            LocalSearchOptions opts;
            opts.seed = splitmix64(setup.run_seed ^ fnv1a64("local_search"));
            opts.restarts = setup.local_search_restarts;
            result.x_star = solve_local_search(landscape, opts);
            break;
        }
    }

    // Best single (output, pattern) pair over all recorded training episodes;
    // ties go to the lower output index, then the lower pattern index.
    result.best_single.f = -1.0;
    for (int i = 0; i < landscape.n; ++i) {
        const auto& table = landscape.tables[i];
        for (std::size_t p = 0; p < table.size(); ++p) {
            if (table[p] > result.best_single.f) {
                result.best_single.f = table[p];
                result.best_single.output = i;
                result.best_single.pattern_index = static_cast<std::uint32_t>(p);
            }
        }
    }
    BitVector best_x(landscape.n, 0);
    {
        const auto& row = landscape.masks.rows[result.best_single.output];
        for (std::size_t j = 0; j < row.size(); ++j)
            best_x[row[j]] =
                static_cast<std::uint8_t>((result.best_single.pattern_index >> j) & 1u);
    }
    result.best_single_generalization = generalization_test(
        network, best_x, Controller::single(result.best_single.output), setup.episode,
        setup.jobs);

    result.weights = ensemble_weights(landscape, result.x_star.bits);
    result.ensemble_generalization = generalization_test(
        network, result.x_star.bits, Controller::ensemble(result.weights), setup.episode,
        setup.jobs);

    if (setup.top_m) {
        result.top_m_weights = top_m_ensemble(landscape, result.x_star.bits, *setup.top_m);
        result.top_m_generalization = generalization_test(
            network, result.x_star.bits, Controller::ensemble(result.top_m_weights),
            setup.episode, setup.jobs);
    }
    if (setup.keep_artifacts) {
        result.network = network;
        result.landscape = std::move(build.landscape);
    }
    return result;
}

}  // namespace nkesn
