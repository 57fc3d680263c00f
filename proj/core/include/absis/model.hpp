#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "absis/rng.hpp"

namespace absis {

class Network;

// What the binomial observation layer thins: the currently infected count
// I_t (prevalence data) or the ever-infected count C_t (cumulative case
// data). Prevalence is the default everywhere.
enum class ResponseType { prevalence, cumulative };

// Infection status of every agent at one time step.
struct AgentStateVector {
  std::vector<std::uint8_t> states;  // 0 = susceptible, 1 = infected
  int time_index = 0;

  int infected_count() const;
  std::size_t size() const { return states.size(); }
  bool operator==(const AgentStateVector&) const = default;
};

// Model parameters: regression coefficients feeding the logistic links for
// initial infection (beta_alpha), infection pressure (beta_lambda) and, when
// recovery is covariate-driven, recovery (beta_gamma); otherwise gamma_fixed
// holds a shared recovery probability. Exactly one of the two must be set.
// rho is the detection probability of the binomial observation layer.
struct ParameterSet {
  std::vector<double> beta_alpha;
  std::vector<double> beta_lambda;
  std::optional<std::vector<double>> beta_gamma;
  std::optional<double> gamma_fixed;
  double rho = 0.5;

  int dim() const { return static_cast<int>(beta_alpha.size()); }
  bool gamma_free() const { return beta_gamma.has_value(); }

  // Throws std::invalid_argument when the coefficient blocks disagree in
  // length, both or neither recovery specifications are present, or rho is
  // outside (0, 1].
  void validate() const;

  bool operator==(const ParameterSet&) const = default;
};

// Per-agent probabilities derived from a ParameterSet: initial infection
// alpha0, per-contact infection lambda, recovery gamma. All in (0, 1).
struct AgentRates {
  std::vector<double> alpha0;
  std::vector<double> lambda;
  std::vector<double> gamma;
  std::size_t size() const { return alpha0.size(); }
};

// Covariate matrix, one row of length dim() per agent. Keeps a one-slot rate
// cache keyed on the last ParameterSet seen; the cache is not synchronized,
// so compute rates once before fanning work out across threads.
class AgentPopulation {
public:
  AgentPopulation(std::vector<double> row_major, int dim);
  static AgentPopulation from_rows(const std::vector<std::vector<double>>& rows);
  // Rows z^n = (1, u) with u ~ N(0, 1).
  static AgentPopulation standard_normal(int n_agents, std::uint64_t seed);
  // Rows z^n = (1, b) with b ~ Bernoulli(prob).
  static AgentPopulation bernoulli_binary(int n_agents, double prob, std::uint64_t seed);

  int size() const { return n_; }
  int dim() const { return dim_; }
  std::span<const double> covariate(int agent) const;

  // Distinct covariate rows in lexicographic order (so group numbering is
  // reproducible regardless of agent ordering). Returns an empty list when
  // there are more than `limit` distinct rows (continuous covariates), in
  // which case per-group reporting is skipped.
  std::vector<std::vector<double>> distinct_rows(std::size_t limit = 16) const;

  const AgentRates& rates_for(const ParameterSet& theta) const;

private:
  std::vector<double> data_;
  int dim_ = 0;
  int n_ = 0;
  mutable std::optional<ParameterSet> cache_key_;
  mutable AgentRates cache_;
};

// logistic(beta . z); sizes must match.
double logistic_link(std::span<const double> beta, std::span<const double> z);

AgentRates compute_agent_rates(const ParameterSet& theta, const AgentPopulation& pop);

// Probability that `agent` is infected at the next step given the current
// state vector: 1 - gamma when infected; lambda * (infected neighbors) /
// degree when susceptible. Isolated susceptible agents have probability 0.
double transition_probability(int agent, const AgentStateVector& current,
                              const AgentRates& rates, const Network& net);

// One synchronous sweep: every agent flips an independent coin with its
// transition probability computed from the *current* state vector.
AgentStateVector step_agents(const AgentStateVector& current, const AgentRates& rates,
                             const Network& net, RngStream& rng);

// In-place variant used by the hot loops. `neighbor_counts` is caller-owned
// scratch of size N. Returns the infected count of `next`.
int step_agents_into(std::span<const std::uint8_t> current, const AgentRates& rates,
                     const Network& net, RngStream& rng, std::span<std::uint8_t> next,
                     std::span<int> neighbor_counts);

// log Binomial(y; infected, rho). -inf for y > infected; the rho = 1 point
// mass is handled exactly. y must be >= 0 and rho in [0, 1].
double observation_logpmf(int y, int infected, double rho);
double observation_logpmf(int y, const AgentStateVector& state, double rho);

int sample_binomial(int trials, double p, RngStream& rng);

AgentStateVector sample_initial_state(const AgentRates& rates, RngStream& rng);
int sample_initial_state_into(const AgentRates& rates, RngStream& rng,
                              std::span<std::uint8_t> out);

// Per-agent reproduction number lambda^n / gamma^n.
std::vector<double> reproduction_number(const AgentRates& rates);

// Joint log density of a complete hidden trajectory x_{0:T} and observations
// y_{0:T}: initial Bernoulli terms, Markov transition terms, and binomial
// emission terms. trajectory and observations must both have length T + 1.
double complete_data_loglik(const ParameterSet& theta, const AgentPopulation& pop,
                            const Network& net, std::span<const AgentStateVector> trajectory,
                            std::span<const int> observations,
                            ResponseType response = ResponseType::prevalence);

// Binomial trial counts of the emission along a trajectory: I_t per step, or
// the running ever-infected count C_t under the cumulative response.
std::vector<int> emission_trial_counts(std::span<const AgentStateVector> trajectory,
                                       ResponseType response);

}  // namespace absis
