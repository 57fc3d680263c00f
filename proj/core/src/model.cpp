#include "absis/model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "absis/network.hpp"

namespace absis {

namespace {
constexpr double kNegInf = -std::numeric_limits<double>::infinity();

double logistic(double x) { return 1.0 / (1.0 + std::exp(-x)); }

// log p(x) for x ~ Bernoulli(p), exact at p in {0, 1}.
double log_bernoulli(bool x, double p) {
  if (x) return p > 0.0 ? std::log(p) : kNegInf;
  return p < 1.0 ? std::log1p(-p) : kNegInf;
}
}  // namespace

int AgentStateVector::infected_count() const {
  int total = 0;
  for (const std::uint8_t s : states) total += s;
  return total;
}

void ParameterSet::validate() const {
  const std::size_t d = beta_alpha.size();
  if (d == 0) throw std::invalid_argument("ParameterSet: beta_alpha is empty");
  if (beta_lambda.size() != d)
    throw std::invalid_argument("ParameterSet: beta_lambda length differs from beta_alpha");
  if (beta_gamma.has_value() == gamma_fixed.has_value())
    throw std::invalid_argument(
        "ParameterSet: exactly one of beta_gamma and gamma_fixed must be set");
  if (beta_gamma && beta_gamma->size() != d)
    throw std::invalid_argument("ParameterSet: beta_gamma length differs from beta_alpha");
  if (gamma_fixed && !(*gamma_fixed > 0.0 && *gamma_fixed < 1.0))
    throw std::invalid_argument("ParameterSet: gamma_fixed must lie in (0, 1)");
  if (!(rho > 0.0 && rho <= 1.0))
    throw std::invalid_argument("ParameterSet: rho must lie in (0, 1]");
  for (const double b : beta_alpha)
    if (!std::isfinite(b)) throw std::invalid_argument("ParameterSet: beta_alpha not finite");
  for (const double b : beta_lambda)
    if (!std::isfinite(b)) throw std::invalid_argument("ParameterSet: beta_lambda not finite");
  if (beta_gamma)
    for (const double b : *beta_gamma)
      if (!std::isfinite(b)) throw std::invalid_argument("ParameterSet: beta_gamma not finite");
}

AgentPopulation::AgentPopulation(std::vector<double> row_major, int dim)
    : data_(std::move(row_major)), dim_(dim) {
  if (dim_ <= 0) throw std::invalid_argument("AgentPopulation: dim must be positive");
  if (data_.empty() || data_.size() % static_cast<std::size_t>(dim_) != 0)
    throw std::invalid_argument("AgentPopulation: data size is not a multiple of dim");
  n_ = static_cast<int>(data_.size() / static_cast<std::size_t>(dim_));
}

AgentPopulation AgentPopulation::from_rows(const std::vector<std::vector<double>>& rows) {
  if (rows.empty()) throw std::invalid_argument("AgentPopulation: no rows");
  const std::size_t d = rows.front().size();
  std::vector<double> flat;
  flat.reserve(rows.size() * d);
  for (const auto& r : rows) {
    if (r.size() != d) throw std::invalid_argument("AgentPopulation: ragged rows");
    flat.insert(flat.end(), r.begin(), r.end());
  }
  return AgentPopulation(std::move(flat), static_cast<int>(d));
}

AgentPopulation AgentPopulation::standard_normal(int n_agents, std::uint64_t seed) {
  if (n_agents <= 0) throw std::invalid_argument("AgentPopulation: n_agents must be positive");
  RngStream rng(seed);
  std::vector<double> flat(static_cast<std::size_t>(n_agents) * 2);
  for (int i = 0; i < n_agents; ++i) {
    flat[2 * static_cast<std::size_t>(i)] = 1.0;
    flat[2 * static_cast<std::size_t>(i) + 1] = rng.normal();
  }
  return AgentPopulation(std::move(flat), 2);
}

AgentPopulation AgentPopulation::bernoulli_binary(int n_agents, double prob,
                                                  std::uint64_t seed) {
  if (n_agents <= 0) throw std::invalid_argument("AgentPopulation: n_agents must be positive");
  if (!(prob >= 0.0 && prob <= 1.0))
    throw std::invalid_argument("AgentPopulation: prob must lie in [0, 1]");
  RngStream rng(seed);
  std::vector<double> flat(static_cast<std::size_t>(n_agents) * 2);
  for (int i = 0; i < n_agents; ++i) {
    flat[2 * static_cast<std::size_t>(i)] = 1.0;
    flat[2 * static_cast<std::size_t>(i) + 1] = rng.bernoulli(prob) ? 1.0 : 0.0;
  }
  return AgentPopulation(std::move(flat), 2);
}

std::span<const double> AgentPopulation::covariate(int agent) const {
  if (agent < 0 || agent >= n_) throw std::out_of_range("AgentPopulation: agent index");
  return {data_.data() + static_cast<std::size_t>(agent) * dim_,
          static_cast<std::size_t>(dim_)};
}

std::vector<std::vector<double>> AgentPopulation::distinct_rows(std::size_t limit) const {
  std::vector<std::vector<double>> rows;
  for (int i = 0; i < n_; ++i) {
    const auto z = covariate(i);
    const bool seen = std::any_of(rows.begin(), rows.end(), [&](const auto& r) {
      return std::equal(r.begin(), r.end(), z.begin(), z.end());
    });
    if (!seen) {
      if (rows.size() == limit) return {};
      rows.emplace_back(z.begin(), z.end());
    }
  }
  std::sort(rows.begin(), rows.end());
  return rows;
}

const AgentRates& AgentPopulation::rates_for(const ParameterSet& theta) const {
  if (!cache_key_ || !(*cache_key_ == theta)) {
    cache_ = compute_agent_rates(theta, *this);
    cache_key_ = theta;
  }
  return cache_;
}

double logistic_link(std::span<const double> beta, std::span<const double> z) {
  if (beta.size() != z.size())
    throw std::invalid_argument("logistic_link: dimension mismatch");
  double lin = 0.0;
  for (std::size_t i = 0; i < beta.size(); ++i) lin += beta[i] * z[i];
  return logistic(lin);
}

AgentRates compute_agent_rates(const ParameterSet& theta, const AgentPopulation& pop) {
  theta.validate();
  const int n = pop.size();
  if (theta.dim() != pop.dim())
    throw std::invalid_argument("compute_agent_rates: covariate dimension mismatch");
  AgentRates rates;
  rates.alpha0.resize(n);
  rates.lambda.resize(n);
  rates.gamma.resize(n);
  for (int i = 0; i < n; ++i) {
    const auto z = pop.covariate(i);
    rates.alpha0[i] = logistic_link(theta.beta_alpha, z);
    rates.lambda[i] = logistic_link(theta.beta_lambda, z);
    rates.gamma[i] = theta.gamma_free() ? logistic_link(*theta.beta_gamma, z)
                                        : *theta.gamma_fixed;
  }
  return rates;
}

double transition_probability(int agent, const AgentStateVector& current,
                              const AgentRates& rates, const Network& net) {
  const int n = net.size();
  if (agent < 0 || agent >= n) throw std::out_of_range("transition_probability: agent index");
  if (static_cast<int>(current.size()) != n ||
      static_cast<int>(rates.size()) != n)
    throw std::invalid_argument("transition_probability: size mismatch");
  if (current.states[agent]) return 1.0 - rates.gamma[agent];
  const int deg = net.degree(agent);
  if (deg == 0) return 0.0;
  int infected = 0;
  for (const int j : net.neighbors(agent)) infected += current.states[j];
  return rates.lambda[agent] * static_cast<double>(infected) / static_cast<double>(deg);
}

int step_agents_into(std::span<const std::uint8_t> current, const AgentRates& rates,
                     const Network& net, RngStream& rng, std::span<std::uint8_t> next,
                     std::span<int> neighbor_counts) {
  const int n = net.size();
  net.infected_neighbor_counts(current, neighbor_counts);
  int infected = 0;
  for (int i = 0; i < n; ++i) {
    const double xi = current[i]
                          ? 1.0 - rates.gamma[i]
                          : rates.lambda[i] * neighbor_counts[i] * net.inv_degree(i);
    const std::uint8_t s = rng.bernoulli(xi) ? 1 : 0;
    next[i] = s;
    infected += s;
  }
  return infected;
}

AgentStateVector step_agents(const AgentStateVector& current, const AgentRates& rates,
                             const Network& net, RngStream& rng) {
  const int n = net.size();
  if (static_cast<int>(current.size()) != n || static_cast<int>(rates.size()) != n)
    throw std::invalid_argument("step_agents: size mismatch");
  AgentStateVector out;
  out.states.resize(n);
  out.time_index = current.time_index + 1;
  std::vector<int> counts(n);
  step_agents_into(current.states, rates, net, rng, out.states, counts);
  return out;
}

double observation_logpmf(int y, int infected, double rho) {
  if (y < 0) throw std::invalid_argument("observation_logpmf: y must be >= 0");
  if (infected < 0) throw std::invalid_argument("observation_logpmf: infected must be >= 0");
  if (!(rho >= 0.0 && rho <= 1.0))
    throw std::invalid_argument("observation_logpmf: rho must lie in [0, 1]");
  if (y > infected) return kNegInf;
  if (rho == 1.0) return y == infected ? 0.0 : kNegInf;
  if (rho == 0.0) return y == 0 ? 0.0 : kNegInf;
  const double n = infected, k = y;
  return std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0) +
         k * std::log(rho) + (n - k) * std::log1p(-rho);
}

double observation_logpmf(int y, const AgentStateVector& state, double rho) {
  return observation_logpmf(y, state.infected_count(), rho);
}

int sample_binomial(int trials, double p, RngStream& rng) {
  return rng.binomial(trials, p);
}

int sample_initial_state_into(const AgentRates& rates, RngStream& rng,
                              std::span<std::uint8_t> out) {
  const std::size_t n = rates.size();
  int infected = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const std::uint8_t s = rng.bernoulli(rates.alpha0[i]) ? 1 : 0;
    out[i] = s;
    infected += s;
  }
  return infected;
}

AgentStateVector sample_initial_state(const AgentRates& rates, RngStream& rng) {
  AgentStateVector out;
  out.states.resize(rates.size());
  out.time_index = 0;
  sample_initial_state_into(rates, rng, out.states);
  return out;
}

std::vector<double> reproduction_number(const AgentRates& rates) {
  std::vector<double> r(rates.size());
  for (std::size_t i = 0; i < rates.size(); ++i) r[i] = rates.lambda[i] / rates.gamma[i];
  return r;
}

std::vector<int> emission_trial_counts(std::span<const AgentStateVector> trajectory,
                                       ResponseType response) {
  std::vector<int> trials(trajectory.size());
  if (response == ResponseType::prevalence) {
    for (std::size_t t = 0; t < trajectory.size(); ++t)
      trials[t] = trajectory[t].infected_count();
    return trials;
  }
  if (trajectory.empty()) return trials;
  std::vector<std::uint8_t> ever(trajectory[0].states);
  trials[0] = trajectory[0].infected_count();
  for (std::size_t t = 1; t < trajectory.size(); ++t) {
    if (trajectory[t].size() != ever.size())
      throw std::invalid_argument("emission_trial_counts: state vector size mismatch");
    int count = 0;
    for (std::size_t i = 0; i < ever.size(); ++i) {
      ever[i] |= trajectory[t].states[i];
      count += ever[i];
    }
    trials[t] = count;
  }
  return trials;
}

double complete_data_loglik(const ParameterSet& theta, const AgentPopulation& pop,
                            const Network& net, std::span<const AgentStateVector> trajectory,
                            std::span<const int> observations, ResponseType response) {
  if (trajectory.empty() || trajectory.size() != observations.size())
    throw std::invalid_argument("complete_data_loglik: trajectory/observation length mismatch");
  const int n = pop.size();
  if (net.size() != n) throw std::invalid_argument("complete_data_loglik: network size mismatch");
  for (const auto& x : trajectory)
    if (static_cast<int>(x.size()) != n)
      throw std::invalid_argument("complete_data_loglik: state vector size mismatch");

  const AgentRates rates = compute_agent_rates(theta, pop);
  double total = 0.0;

  // emissions
  const std::vector<int> trials = emission_trial_counts(trajectory, response);
  for (std::size_t t = 0; t < trajectory.size(); ++t) {
    total += observation_logpmf(observations[t], trials[t], theta.rho);
    if (total == kNegInf) return kNegInf;
  }

  // initial state
  for (int i = 0; i < n; ++i) {
    total += log_bernoulli(trajectory[0].states[i] != 0, rates.alpha0[i]);
    if (total == kNegInf) return kNegInf;
  }

  // transitions
  std::vector<int> counts(n);
  for (std::size_t t = 1; t < trajectory.size(); ++t) {
    const auto& prev = trajectory[t - 1];
    const auto& cur = trajectory[t];
    net.infected_neighbor_counts(prev.states, counts);
    for (int i = 0; i < n; ++i) {
      const double xi = prev.states[i]
                            ? 1.0 - rates.gamma[i]
                            : rates.lambda[i] * counts[i] * net.inv_degree(i);
      total += log_bernoulli(cur.states[i] != 0, xi);
      if (total == kNegInf) return kNegInf;
    }
  }
  return total;
}

}  // namespace absis
