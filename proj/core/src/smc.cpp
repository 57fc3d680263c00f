#include "absis/smc.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "absis/parallel.hpp"

namespace absis {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

// Stream ids for draws not tied to a particle. Particle ids occupy the small
// non-negative integers; these sit far away.
constexpr std::uint64_t kResampleStream = 0xfffffffffffffff1ull;
constexpr std::uint64_t kFinalDrawStream = 0xfffffffffffffff2ull;

std::span<int> scratch_counts(int n) {
  thread_local std::vector<int> buf;
  if (static_cast<int>(buf.size()) < n) buf.resize(n);
  return {buf.data(), static_cast<std::size_t>(n)};
}

// Particle states for all time steps in one flat allocation.
struct History {
  int n = 0, n_particles = 0;
  std::vector<std::uint8_t> states;
  std::vector<int> ancestors;

  History(int n_agents, int p, int horizon)
      : n(n_agents),
        n_particles(p),
        states(static_cast<std::size_t>(horizon) * p * n_agents),
        ancestors(static_cast<std::size_t>(horizon) * p) {}

  std::uint8_t* at(int t, int p) {
    return states.data() + (static_cast<std::size_t>(t) * n_particles + p) * n;
  }
  const std::uint8_t* at(int t, int p) const {
    return states.data() + (static_cast<std::size_t>(t) * n_particles + p) * n;
  }
  int* ancestor_row(int t) { return ancestors.data() + static_cast<std::size_t>(t) * n_particles; }
};

void capture_step(SmcDiagnostics* diag, const History& hist, int t, const int* anc) {
  if (diag == nullptr) return;
  std::vector<AgentStateVector> snap(hist.n_particles);
  for (int p = 0; p < hist.n_particles; ++p) {
    snap[p].states.assign(hist.at(t, p), hist.at(t, p) + hist.n);
    snap[p].time_index = t;
  }
  diag->particles.push_back(std::move(snap));
  diag->ancestors.emplace_back(anc, anc + hist.n_particles);
}

std::vector<AgentStateVector> trace_back(const History& hist, int horizon, int last_index,
                                         std::vector<int>& indices_out) {
  indices_out.assign(horizon, 0);
  indices_out[horizon - 1] = last_index;
  for (int t = horizon - 1; t > 0; --t) {
    const int* anc = hist.ancestors.data() + static_cast<std::size_t>(t) * hist.n_particles;
    indices_out[t - 1] = anc[indices_out[t]];
  }
  std::vector<AgentStateVector> traj(horizon);
  for (int t = 0; t < horizon; ++t) {
    traj[t].states.assign(hist.at(t, indices_out[t]), hist.at(t, indices_out[t]) + hist.n);
    traj[t].time_index = t;
  }
  return traj;
}

void check_observations(std::span<const int> observations) {
  if (observations.empty())
    throw std::invalid_argument("particle filter: observations are empty");
  for (const int y : observations)
    if (y < 0) throw std::invalid_argument("particle filter: negative observation");
}

}  // namespace

NormalizedWeights normalize_weights(std::span<const double> log_weights) {
  if (log_weights.empty())
    throw std::invalid_argument("normalize_weights: empty weight vector");
  double max_lw = kNegInf;
  for (const double lw : log_weights) {
    if (std::isnan(lw) || lw == std::numeric_limits<double>::infinity())
      throw std::invalid_argument("normalize_weights: weight is nan or +inf");
    max_lw = std::max(max_lw, lw);
  }
  NormalizedWeights out;
  out.weights.assign(log_weights.size(), 0.0);
  if (max_lw == kNegInf) {
    out.degenerate = true;
    out.log_mean = kNegInf;
    return out;
  }
  double sum = 0.0;
  for (std::size_t i = 0; i < log_weights.size(); ++i) {
    const double w = std::exp(log_weights[i] - max_lw);
    out.weights[i] = w;
    sum += w;
  }
  for (double& w : out.weights) w /= sum;
  out.log_mean = max_lw + std::log(sum) - std::log(static_cast<double>(log_weights.size()));
  return out;
}

namespace {
void check_normalized(std::span<const double> weights) {
  if (weights.empty()) throw std::invalid_argument("resample: empty weight vector");
  double sum = 0.0;
  for (const double w : weights) {
    if (!(w >= 0.0)) throw std::invalid_argument("resample: negative or nan weight");
    sum += w;
  }
  if (std::abs(sum - 1.0) > 1e-8)
    throw std::invalid_argument("resample: weights are not normalized");
}

std::vector<double> cumulative(std::span<const double> weights) {
  std::vector<double> cum(weights.size());
  double acc = 0.0;
  for (std::size_t i = 0; i < weights.size(); ++i) {
    acc += weights[i];
    cum[i] = acc;
  }
  cum.back() = 1.0;  // guard against round-off at the top end
  return cum;
}
}  // namespace

std::vector<int> multinomial_resample(std::span<const double> weights, int n_out,
                                      RngStream& rng) {
  if (n_out < 0) throw std::invalid_argument("resample: n_out must be >= 0");
  if (n_out == 0) return {};
  check_normalized(weights);
  const std::vector<double> cum = cumulative(weights);
  std::vector<int> out(n_out);
  for (int i = 0; i < n_out; ++i) {
    const double u = rng.uniform();
    out[i] = static_cast<int>(std::upper_bound(cum.begin(), cum.end(), u) - cum.begin());
  }
  return out;
}

std::vector<int> systematic_resample(std::span<const double> weights, int n_out,
                                     RngStream& rng) {
  if (n_out < 0) throw std::invalid_argument("resample: n_out must be >= 0");
  if (n_out == 0) return {};
  check_normalized(weights);
  const std::vector<double> cum = cumulative(weights);
  std::vector<int> out(n_out);
  const double step = 1.0 / n_out;
  double u = rng.uniform() * step;
  std::size_t j = 0;
  for (int i = 0; i < n_out; ++i) {
    while (cum[j] <= u) ++j;
    out[i] = static_cast<int>(j);
    u += step;
  }
  return out;
}

int sample_categorical(std::span<const double> weights, RngStream& rng) {
  check_normalized(weights);
  const std::vector<double> cum = cumulative(weights);
  const double u = rng.uniform();
  return static_cast<int>(std::upper_bound(cum.begin(), cum.end(), u) - cum.begin());
}

void ParticleEnsemble::validate() const {
  const std::size_t p = particles.size();
  if (p == 0) throw std::logic_error("ParticleEnsemble: empty");
  if (log_weights.size() != p || normalized_weights.size() != p || ancestors.size() != p)
    throw std::logic_error("ParticleEnsemble: field lengths disagree");
  const std::size_t n = particles.front().size();
  for (const auto& x : particles)
    if (x.size() != n) throw std::logic_error("ParticleEnsemble: particle sizes disagree");
  double sum = 0.0;
  for (const double w : normalized_weights) {
    if (!(w >= 0.0)) throw std::logic_error("ParticleEnsemble: negative weight");
    sum += w;
  }
  if (std::abs(sum - 1.0) > 1e-8)
    throw std::logic_error("ParticleEnsemble: weights do not sum to one");
  for (const int a : ancestors)
    if (a < 0 || a >= static_cast<int>(p))
      throw std::logic_error("ParticleEnsemble: ancestor index out of range");
}

namespace {

// Shared skeleton of the two filters. `pinned` < 0 runs the plain bootstrap
// flavor; otherwise particle `pinned` is forced to follow `reference` and is
// its own ancestor.
FilterResult run_filter(const ParameterSet& theta, const AgentPopulation& pop,
                        const Network& net, std::span<const int> observations,
                        std::span<const AgentStateVector> reference, int n_particles,
                        std::uint64_t seed, const SmcOptions& options,
                        SmcDiagnostics* diagnostics, int pinned) {
  theta.validate();
  check_observations(observations);
  const int n = pop.size();
  if (net.size() != n)
    throw std::invalid_argument("particle filter: network/population size mismatch");
  const int horizon = static_cast<int>(observations.size());
  const bool conditional = pinned >= 0;
  if (conditional) {
    if (static_cast<int>(reference.size()) != horizon)
      throw std::invalid_argument("conditional_smc: reference length mismatch");
    for (const auto& x : reference)
      if (static_cast<int>(x.size()) != n)
        throw std::invalid_argument("conditional_smc: reference state size mismatch");
    if (n_particles < 1)
      throw std::invalid_argument("conditional_smc: need at least one particle");
  } else if (n_particles < 2) {
    throw std::invalid_argument("bootstrap_filter: need at least two particles");
  }

  const AgentRates& rates = pop.rates_for(theta);
  const RngStream base(seed);
  const int p_count = n_particles;
  const int free_count = conditional ? p_count - 1 : p_count;
  const bool cumulative = options.response == ResponseType::cumulative;

  History hist(n, p_count, horizon);
  // Ever-infected indicators, maintained only when the emission counts them;
  // the pinned particle accumulates them along its own (self-)ancestor line,
  // which reproduces the reference's running totals.
  History ever(cumulative ? n : 1, cumulative ? p_count : 1, cumulative ? horizon : 1);

  std::vector<double> log_weights(p_count);
  std::vector<int> infected(p_count);
  std::vector<int> trials(p_count);

  FilterResult result;
  result.filtered_infected_mean.reserve(horizon);

  auto degenerate_exit = [&]() {
    result.degenerate = true;
    result.log_marginal_likelihood = kNegInf;
    result.sampled_indices.clear();
    if (conditional)
      result.sampled_trajectory.assign(reference.begin(), reference.end());
    else
      result.sampled_trajectory.clear();
    return result;
  };

  NormalizedWeights norm;
  for (int t = 0; t < horizon; ++t) {
    int* anc = hist.ancestor_row(t);
    if (t == 0) {
      for (int p = 0; p < p_count; ++p) anc[p] = p;
    } else {
      RngStream resample_rng = base.child(t).child(kResampleStream);
      const std::vector<int> drawn =
          options.systematic_resampling
              ? systematic_resample(norm.weights, free_count, resample_rng)
              : multinomial_resample(norm.weights, free_count, resample_rng);
      std::copy(drawn.begin(), drawn.end(), anc);
      if (conditional) anc[pinned] = pinned;
    }

    const RngStream step_base = base.child(t);
    const int y_t = observations[t];
    const double rho = theta.rho;
    auto propagate = [&, t](int p) {
      if (conditional && p == pinned) {
        std::copy(reference[t].states.begin(), reference[t].states.end(), hist.at(t, p));
        infected[p] = reference[t].infected_count();
      } else {
        RngStream rng = step_base.child(static_cast<std::uint64_t>(p));
        if (t == 0) {
          infected[p] = sample_initial_state_into(
              rates, rng, {hist.at(0, p), static_cast<std::size_t>(n)});
        } else {
          infected[p] = step_agents_into({hist.at(t - 1, anc[p]), static_cast<std::size_t>(n)},
                                         rates, net, rng,
                                         {hist.at(t, p), static_cast<std::size_t>(n)},
                                         scratch_counts(n));
        }
      }
      if (cumulative) {
        // carry the ever-infected indicators along the ancestor line
        std::uint8_t* ev = ever.at(t, p);
        const std::uint8_t* cur = hist.at(t, p);
        if (t == 0) {
          std::copy(cur, cur + n, ev);
          trials[p] = infected[p];
        } else {
          const std::uint8_t* prev = ever.at(t - 1, anc[p]);
          int count = 0;
          for (int i = 0; i < n; ++i) {
            ev[i] = prev[i] | cur[i];
            count += ev[i];
          }
          trials[p] = count;
        }
      } else {
        trials[p] = infected[p];
      }
      log_weights[p] = observation_logpmf(y_t, trials[p], rho);
    };
    // Parallel pays off only when each step moves a fair amount of state.
    if (static_cast<long>(p_count) * n >= 16384)
      parallel_for(p_count, propagate);
    else
      for (int p = 0; p < p_count; ++p) propagate(p);

    norm = normalize_weights(log_weights);
    capture_step(diagnostics, hist, t, anc);
    if (norm.degenerate) return degenerate_exit();
    result.log_marginal_likelihood += norm.log_mean;
    double mean = 0.0;
    for (int p = 0; p < p_count; ++p) mean += norm.weights[p] * infected[p];
    result.filtered_infected_mean.push_back(mean);
  }

  RngStream final_rng = base.child(kFinalDrawStream);
  const int last = sample_categorical(norm.weights, final_rng);
  result.sampled_trajectory = trace_back(hist, horizon, last, result.sampled_indices);
  return result;
}

}  // namespace

FilterResult bootstrap_filter(const ParameterSet& theta, const AgentPopulation& pop,
                              const Network& net, std::span<const int> observations,
                              int n_particles, std::uint64_t seed, const SmcOptions& options,
                              SmcDiagnostics* diagnostics) {
  return run_filter(theta, pop, net, observations, {}, n_particles, seed, options,
                    diagnostics, -1);
}

FilterResult conditional_smc(const ParameterSet& theta, const AgentPopulation& pop,
                             const Network& net, std::span<const int> observations,
                             std::span<const AgentStateVector> reference, int n_particles,
                             std::uint64_t seed, const SmcOptions& options,
                             SmcDiagnostics* diagnostics) {
  return run_filter(theta, pop, net, observations, reference, n_particles, seed, options,
                    diagnostics, n_particles - 1);
}

double exact_loglik_forward(const ParameterSet& theta, const AgentPopulation& pop,
                            const Network& net, std::span<const int> observations) {
  theta.validate();
  check_observations(observations);
  const int n = pop.size();
  if (net.size() != n)
    throw std::invalid_argument("exact_loglik_forward: network/population size mismatch");
  if (n > 12)
    throw std::invalid_argument("exact_loglik_forward: feasible only for <= 12 agents");

  const AgentRates rates = compute_agent_rates(theta, pop);
  const std::size_t n_conf = std::size_t{1} << n;

  // neighbor bitmasks so infection pressure is a popcount
  std::vector<std::uint32_t> nbr_mask(n, 0);
  for (int i = 0; i < n; ++i)
    for (const int j : net.neighbors(i)) nbr_mask[i] |= std::uint32_t{1} << j;

  // P(x_0 = s)
  std::vector<double> alpha(n_conf);
  for (std::size_t s = 0; s < n_conf; ++s) {
    double p = 1.0;
    for (int i = 0; i < n; ++i)
      p *= (s >> i & 1u) ? rates.alpha0[i] : 1.0 - rates.alpha0[i];
    alpha[s] = p;
  }

  std::vector<double> next(n_conf), row(n_conf), xi(n);
  std::vector<double> emission(n + 1);
  double loglik = 0.0;

  for (std::size_t t = 0; t < observations.size(); ++t) {
    if (t > 0) {
      std::fill(next.begin(), next.end(), 0.0);
      for (std::size_t s = 0; s < n_conf; ++s) {
        if (alpha[s] == 0.0) continue;
        for (int i = 0; i < n; ++i) {
          if (s >> i & 1u) {
            xi[i] = 1.0 - rates.gamma[i];
          } else {
            const int cnt = std::popcount(static_cast<std::uint32_t>(s) & nbr_mask[i]);
            xi[i] = rates.lambda[i] * cnt * net.inv_degree(i);
          }
        }
        // transition row as a tensor product over agents
        row[0] = 1.0;
        std::size_t len = 1;
        for (int i = 0; i < n; ++i) {
          for (std::size_t k = 0; k < len; ++k) {
            row[k + len] = row[k] * xi[i];
            row[k] *= 1.0 - xi[i];
          }
          len <<= 1;
        }
        const double a = alpha[s];
        for (std::size_t s2 = 0; s2 < n_conf; ++s2) next[s2] += a * row[s2];
      }
      alpha.swap(next);
    }
    for (int infected = 0; infected <= n; ++infected)
      emission[infected] = std::exp(observation_logpmf(observations[t], infected, theta.rho));
    double scale = 0.0;
    for (std::size_t s = 0; s < n_conf; ++s) {
      alpha[s] *= emission[std::popcount(static_cast<std::uint32_t>(s))];
      scale += alpha[s];
    }
    if (!(scale > 0.0) || !std::isfinite(scale)) return kNegInf;
    loglik += std::log(scale);
    for (std::size_t s = 0; s < n_conf; ++s) alpha[s] /= scale;
  }
  return loglik;
}

}  // namespace absis
