#include "absis/simulate.hpp"

#include <ostream>
#include <stdexcept>

namespace absis {

namespace {
// Stream ids reserved for draws that are not per-agent-step.
constexpr std::uint64_t kObservationStream = 0xab5150b5ull;
}  // namespace

SimulationOutput simulate_abm(const ParameterSet& theta, const AgentPopulation& pop,
                              const Network& net, int n_steps, std::uint64_t seed,
                              ResponseType response) {
  theta.validate();
  if (net.size() != pop.size())
    throw std::invalid_argument("simulate_abm: network/population size mismatch");
  if (n_steps < 0) throw std::invalid_argument("simulate_abm: n_steps must be >= 0");

  const AgentRates& rates = pop.rates_for(theta);
  const RngStream base(seed);

  SimulationOutput out;
  out.seed = seed;
  out.hidden_states.reserve(n_steps + 1);
  out.observations.reserve(n_steps + 1);
  out.true_prevalence.reserve(n_steps + 1);
  out.true_cumulative.reserve(n_steps + 1);

  RngStream init_rng = base.child(0).child(0);
  out.hidden_states.push_back(sample_initial_state(rates, init_rng));
  for (int t = 1; t <= n_steps; ++t) {
    RngStream step_rng = base.child(t).child(0);
    out.hidden_states.push_back(step_agents(out.hidden_states.back(), rates, net, step_rng));
  }
  std::vector<std::uint8_t> ever(pop.size(), 0);
  for (int t = 0; t <= n_steps; ++t) {
    const auto& states = out.hidden_states[t].states;
    int cumulative = 0;
    for (int i = 0; i < pop.size(); ++i) {
      ever[i] |= states[i];
      cumulative += ever[i];
    }
    RngStream obs_rng = base.child(t).child(kObservationStream);
    const int infected = out.hidden_states[t].infected_count();
    out.true_prevalence.push_back(infected);
    out.true_cumulative.push_back(cumulative);
    const int trials = response == ResponseType::cumulative ? cumulative : infected;
    out.observations.push_back(sample_binomial(trials, theta.rho, obs_rng));
  }
  return out;
}

CompartmentTrajectory classical_sis(double s0, double i0, double lambda, double gamma,
                                    int n_steps) {
  if (n_steps < 0) throw std::invalid_argument("classical_sis: n_steps must be >= 0");
  const double total = s0 + i0;
  if (!(total > 0.0)) throw std::invalid_argument("classical_sis: population must be positive");
  CompartmentTrajectory traj;
  traj.susceptible.reserve(n_steps + 1);
  traj.infected.reserve(n_steps + 1);
  double s = s0, i = i0;
  traj.susceptible.push_back(s);
  traj.infected.push_back(i);
  for (int t = 0; t < n_steps; ++t) {
    const double new_inf = lambda * (s / total) * i;
    const double recovered = gamma * i;
    s = s - new_inf + recovered;
    i = i + new_inf - recovered;
    traj.susceptible.push_back(s);
    traj.infected.push_back(i);
  }
  return traj;
}

void write_simulation_csv(const SimulationOutput& sim, std::ostream& out) {
  out << "day,reported,infected,ever_infected\n";
  for (std::size_t t = 0; t < sim.observations.size(); ++t)
    out << t << ',' << sim.observations[t] << ',' << sim.true_prevalence[t] << ','
        << sim.true_cumulative[t] << '\n';
}

void write_states_csv(const SimulationOutput& sim, std::ostream& out) {
  for (const auto& x : sim.hidden_states) {
    for (std::size_t i = 0; i < x.states.size(); ++i) {
      if (i > 0) out << ',';
      out << static_cast<int>(x.states[i]);
    }
    out << '\n';
  }
}

}  // namespace absis
