#include <benchmark/benchmark.h>

#include "nkesn/network.hpp"
#include "nkesn/trainer.hpp"

using namespace nkesn;

static void RK4Step(benchmark::State& state) {
    const PhysicsParams params;
    CartPoleState s;
    s.pole1_angle = deg_to_rad(4.5);
    for (auto _ : state) {
        auto next = rk4_step(s, 1.5, params);
        benchmark::DoNotOptimize(next);
    }
}
BENCHMARK(RK4Step);

static void NetworkStep(benchmark::State& state) {
    NetworkConfig cfg;
    cfg.n_outputs = static_cast<int>(state.range(0));
    cfg.k = 3;
    cfg.seed = 1;
    EchoNetwork net = build_network(cfg);
    const BitVector x(cfg.n_outputs, 1);
    Eigen::VectorXd u(3);
    u << 0.03, 0.11, -0.04;
    for (auto _ : state) {
        auto y = net.step(u, x);
        benchmark::DoNotOptimize(y);
    }
}
BENCHMARK(NetworkStep)->Arg(20)->Arg(100);

static void TrainingEpisode(benchmark::State& state) {
    NetworkConfig cfg;
    cfg.n_outputs = 20;
    cfg.k = 3;
    cfg.seed = 1;
    EchoNetwork net = build_network(cfg);
    EpisodeParams ep;
    BitVector x(cfg.n_outputs, 0);
    x[0] = x[1] = 1;
    for (auto _ : state) {
        auto fc = run_episode(net, x, Controller::single(0), standard_start_state(), ep);
        benchmark::DoNotOptimize(fc);
    }
}
BENCHMARK(TrainingEpisode);
