#include <benchmark/benchmark.h>

#include "absis/model.hpp"
#include "absis/network.hpp"
#include "absis/rng.hpp"
#include "absis/simulate.hpp"
#include "absis/smc.hpp"

namespace {

using namespace absis;

ParameterSet demo_theta() {
  ParameterSet theta;
  theta.beta_alpha = {-2.0, 0.0};
  theta.beta_lambda = {-1.0, 2.0};
  theta.gamma_fixed = 0.1;
  theta.rho = 0.8;
  return theta;
}

void bm_step_agents(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const AgentPopulation pop = AgentPopulation::standard_normal(n, 11);
  const Network net = Network::fully_connected(n);
  const ParameterSet theta = demo_theta();
  const AgentRates rates = compute_agent_rates(theta, pop);
  RngStream rng(17);
  AgentStateVector x = sample_initial_state(rates, rng);
  for (auto _ : state) {
    x = step_agents(x, rates, net, rng);
    benchmark::DoNotOptimize(x.states.data());
  }
  state.SetItemsProcessed(state.iterations() * n);
}

void bm_bootstrap_filter(benchmark::State& state) {
  const int n = 100;
  const int particles = static_cast<int>(state.range(0));
  const AgentPopulation pop = AgentPopulation::standard_normal(n, 11);
  const Network net = Network::fully_connected(n);
  const ParameterSet theta = demo_theta();
  const SimulationOutput sim = simulate_abm(theta, pop, net, 30, 5);
  std::uint64_t seed = 0;
  for (auto _ : state) {
    const FilterResult result =
        bootstrap_filter(theta, pop, net, sim.observations, particles, ++seed);
    benchmark::DoNotOptimize(result.log_marginal_likelihood);
  }
}

void bm_multinomial_resample(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  std::vector<double> weights(n, 1.0 / n);
  RngStream rng(3);
  for (auto _ : state) {
    auto picks = multinomial_resample(weights, n, rng);
    benchmark::DoNotOptimize(picks.data());
  }
  state.SetItemsProcessed(state.iterations() * n);
}

void bm_systematic_resample(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  std::vector<double> weights(n, 1.0 / n);
  RngStream rng(3);
  for (auto _ : state) {
    auto picks = systematic_resample(weights, n, rng);
    benchmark::DoNotOptimize(picks.data());
  }
  state.SetItemsProcessed(state.iterations() * n);
}

}  // namespace

BENCHMARK(bm_step_agents)->Arg(100)->Arg(1000)->Arg(3711);
BENCHMARK(bm_bootstrap_filter)->Arg(50)->Arg(100)->Arg(300)->Unit(benchmark::kMillisecond);
BENCHMARK(bm_multinomial_resample)->Arg(100)->Arg(1000);
BENCHMARK(bm_systematic_resample)->Arg(100)->Arg(1000);

BENCHMARK_MAIN();
