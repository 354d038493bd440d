#include <benchmark/benchmark.h>

#include "tasac/agent.hpp"
#include "tasac/environment.hpp"
#include "tasac/mlp.hpp"
#include "tasac/reactor.hpp"

using namespace tasac;

namespace {

MlpParams make_net(std::size_t width, std::size_t depth, std::size_t in, std::size_t out) {
    Rng rng(1);
    std::vector<std::size_t> dims{in};
    for (std::size_t i = 0; i < depth; ++i) dims.push_back(width);
    dims.push_back(out);
    return make_mlp(dims, rng);
}

}  // namespace

static void BM_MlpForward(benchmark::State& state) {
    const auto width = static_cast<std::size_t>(state.range(0));
    const MlpParams net = make_net(width, 2, 3, 1);
    const Vec input{0.3, -1.2, 0.7};
    for (auto _ : state) {
        auto out = mlp_forward(net, input);
        benchmark::DoNotOptimize(out);
    }
}
BENCHMARK(BM_MlpForward)->Arg(64)->Arg(256)->Arg(512);

static void BM_MlpGradient(benchmark::State& state) {
    const auto width = static_cast<std::size_t>(state.range(0));
    const MlpParams net = make_net(width, 2, 3, 1);
    const Vec input{0.3, -1.2, 0.7};
    MlpTrace trace;
    MlpGrads grads = make_grads_like(net);
    const Vec upstream{1.0};
    for (auto _ : state) {
        mlp_forward(net, input, trace);
        grads.zero();
        auto in_grad = mlp_gradient(net, trace, upstream, &grads);
        benchmark::DoNotOptimize(in_grad);
    }
}
BENCHMARK(BM_MlpGradient)->Arg(64)->Arg(256)->Arg(512);

static void BM_AdamStep(benchmark::State& state) {
    const auto width = static_cast<std::size_t>(state.range(0));
    MlpParams net = make_net(width, 2, 3, 1);
    MlpGrads grads = make_grads_like(net);
    for (auto& m : grads.w)
        for (auto& x : m.data) x = 1e-3;
    for (auto _ : state) {
        adam_step(net, grads, 3e-4);
        benchmark::DoNotOptimize(net.adam_step_count);
    }
}
BENCHMARK(BM_AdamStep)->Arg(64)->Arg(512);

static void BM_Rk4Step(benchmark::State& state) {
    const EnvConfig cfg = default_env_config();
    ReactorState s = cfg.initial_state;
    for (auto _ : state) {
        auto r = rk4_step(s, 350.0, 0.1, cfg.kinetics, cfg.thermal);
        benchmark::DoNotOptimize(r.state.t_reactor);
    }
}
BENCHMARK(BM_Rk4Step);

static void BM_EnvControlStep(benchmark::State& state) {
    EnvConfig cfg = default_env_config();
    ReactorEnv env(cfg);
    Rng rng(3);
    env.reset(rng);
    double a = -0.5;
    for (auto _ : state) {
        if (env.done()) env.reset(rng);
        auto sr = env.step(a, rng);
        a = -a;
        benchmark::DoNotOptimize(sr.reward);
    }
}
BENCHMARK(BM_EnvControlStep);

static void BM_AgentUpdateBlock(benchmark::State& state) {
    const auto width = static_cast<std::size_t>(state.range(0));
    Hyperparameters h;
    h.hidden = {width, width};
    h.batch_size = 100;
    Rng rng(5);
    AgentBundle bundle = make_agent(2, 1, Algorithm::Tasac, SelectionStrategy::MinMin, h, rng);

    Batch batch;
    for (std::size_t b = 0; b < h.batch_size; ++b) {
        Transition tr;
        tr.obs = {rng.uniform(-5, 5), rng.uniform(0, 1)};
        tr.action = {rng.uniform(-0.9, 0.9)};
        tr.reward = rng.uniform(-100, 0);
        tr.next_obs = {rng.uniform(-5, 5), rng.uniform(0, 1)};
        batch.push_back(tr);
    }

    for (auto _ : state) {
        const Vec tv = compute_targets(bundle, batch, rng);
        update_critics(bundle, batch, tv);
        const ActorUpdateResult ares = update_actors(bundle, batch, rng);
        update_temperature(bundle, ares);
        polyak_update(bundle);
        benchmark::DoNotOptimize(bundle.log_alpha);
    }
}
BENCHMARK(BM_AgentUpdateBlock)->Arg(64)->Arg(128)->Unit(benchmark::kMillisecond);

static void BM_SelectAction(benchmark::State& state) {
    Hyperparameters h;
    h.hidden = {64, 64};
    Rng rng(7);
    AgentBundle bundle = make_agent(2, 1, Algorithm::Tasac, SelectionStrategy::MinMin, h, rng);
    const Vec obs{-3.0, 0.4};
    for (auto _ : state) {
        auto sel = select_action(bundle, obs, rng);
        benchmark::DoNotOptimize(sel.action);
    }
}
BENCHMARK(BM_SelectAction);

BENCHMARK_MAIN();
