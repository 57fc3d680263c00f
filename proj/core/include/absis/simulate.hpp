#pragma once

#include <cstdint>
#include <iosfwd>
#include <vector>

#include "absis/model.hpp"
#include "absis/network.hpp"

namespace absis {

// Forward simulation of the agent model plus its observation layer.
struct SimulationOutput {
  std::vector<AgentStateVector> hidden_states;  // x_0 .. x_T
  std::vector<int> observations;                // y_0 .. y_T
  std::vector<int> true_prevalence;             // I_0 .. I_T
  std::vector<int> true_cumulative;             // C_0 .. C_T (ever infected)
  std::uint64_t seed = 0;
};

// Observations are Binomial(I_t, rho) draws, or Binomial(C_t, rho) when
// response is cumulative.
SimulationOutput simulate_abm(const ParameterSet& theta, const AgentPopulation& pop,
                              const Network& net, int n_steps, std::uint64_t seed,
                              ResponseType response = ResponseType::prevalence);

// Deterministic mean-field SIS recursion, for eyeballing the agent model
// against its large-population limit.  Works on counts or fractions; the
// population size is fixed at s0 + i0:
//   s' = s - lambda * (s/n) * i + gamma * i
//   i' = i + lambda * (s/n) * i - gamma * i
struct CompartmentTrajectory {
  std::vector<double> susceptible;
  std::vector<double> infected;
};

CompartmentTrajectory classical_sis(double s0, double i0, double lambda, double gamma,
                                    int n_steps);

// day,reported,infected,ever_infected rows, one per time step.
void write_simulation_csv(const SimulationOutput& sim, std::ostream& out);

// (T+1) x N matrix of 0/1 hidden states, one time step per row.
void write_states_csv(const SimulationOutput& sim, std::ostream& out);

}  // namespace absis
