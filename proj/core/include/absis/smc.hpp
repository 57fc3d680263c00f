#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "absis/model.hpp"
#include "absis/network.hpp"
#include "absis/rng.hpp"

namespace absis {

// Self-normalized importance weights for one time step. log_mean is
// logsumexp(log_weights) - log(P), the per-step factor of the marginal
// likelihood estimate. degenerate means every weight was -inf.
struct NormalizedWeights {
  std::vector<double> weights;
  double log_mean = 0.0;
  bool degenerate = false;
};

NormalizedWeights normalize_weights(std::span<const double> log_weights);

// n_out iid draws from the categorical distribution given by `weights`
// (which must be normalized and non-degenerate). Returned indices are the
// resampling ancestors.
std::vector<int> multinomial_resample(std::span<const double> weights, int n_out,
                                      RngStream& rng);

// Stratified low-variance alternative; one uniform drives all n_out picks.
std::vector<int> systematic_resample(std::span<const double> weights, int n_out,
                                     RngStream& rng);

int sample_categorical(std::span<const double> weights, RngStream& rng);

// One generation of the particle system. Invariants: all vectors share the
// same length P; normalized_weights sum to one; ancestors index into [0, P).
struct ParticleEnsemble {
  std::vector<AgentStateVector> particles;
  std::vector<double> log_weights;
  std::vector<double> normalized_weights;
  std::vector<int> ancestors;

  void validate() const;  // throws std::logic_error on broken invariants
};

struct SmcOptions {
  bool systematic_resampling = false;  // default multinomial
  // Emission trial count: currently infected (prevalence) or ever infected
  // (cumulative case data).
  ResponseType response = ResponseType::prevalence;
};

// Optional per-step capture of the full particle system, for tests and
// debugging. Entry t holds the state after the time-t update; ancestors[0]
// is the identity map.
struct SmcDiagnostics {
  std::vector<std::vector<AgentStateVector>> particles;
  std::vector<std::vector<int>> ancestors;
};

struct FilterResult {
  double log_marginal_likelihood = 0.0;
  // E[I_t | y_{0:t}] under the particle approximation, per time step.
  std::vector<double> filtered_infected_mean;
  // One trajectory drawn from the particle approximation of the smoothing
  // distribution by ancestral tracing; empty when degenerate.
  std::vector<AgentStateVector> sampled_trajectory;
  std::vector<int> sampled_indices;  // particle index followed at each step
  bool degenerate = false;           // all weights -inf at some step
};

// Bootstrap particle filter: propose from the model transition, weight by
// the binomial observation density, resample multinomially every step.
// observations covers t = 0..T. P = n_particles >= 2. Degeneracy (possible
// when rho = 1 or observations are otherwise impossible under theta) yields
// log_marginal_likelihood = -inf rather than an exception. Particle
// propagation is parallelized; results are identical for any thread count.
FilterResult bootstrap_filter(const ParameterSet& theta, const AgentPopulation& pop,
                              const Network& net, std::span<const int> observations,
                              int n_particles, std::uint64_t seed,
                              const SmcOptions& options = {},
                              SmcDiagnostics* diagnostics = nullptr);

// Conditional variant: the last particle slot is pinned to `reference` at
// every step and its ancestor link points to itself, so the reference
// survives every resampling pass. The returned sampled_trajectory is the new
// reference draw; if the sweep degenerates, the input reference is returned
// unchanged. P = n_particles >= 1 (P = 1 keeps the reference forever).
FilterResult conditional_smc(const ParameterSet& theta, const AgentPopulation& pop,
                             const Network& net, std::span<const int> observations,
                             std::span<const AgentStateVector> reference, int n_particles,
                             std::uint64_t seed, const SmcOptions& options = {},
                             SmcDiagnostics* diagnostics = nullptr);

// Exact log marginal likelihood by the scaled forward recursion over all 2^N
// agent-state configurations. Feasible for N <= 12; used as an oracle for
// the particle estimate. Prevalence response only (the cumulative emission
// is not a function of the current configuration).
double exact_loglik_forward(const ParameterSet& theta, const AgentPopulation& pop,
                            const Network& net, std::span<const int> observations);

}  // namespace absis
