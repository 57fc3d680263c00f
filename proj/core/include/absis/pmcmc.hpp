#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "absis/model.hpp"
#include "absis/network.hpp"
#include "absis/rng.hpp"
#include "absis/smc.hpp"

namespace absis {

// Univariate prior for one regression coefficient: a normal, or a normal
// truncated to one sign (renormalized over its half-line support).
struct PriorDist {
  enum class Kind { normal, truncated_positive, truncated_negative };
  Kind kind = Kind::normal;
  double mu = 0.0;
  double sigma = 1.0;

  double logpdf(double x) const;
  double sample(RngStream& rng) const;
};

// Prior for the detection probability. Either a Beta law on rho itself (the
// conjugate choice, required by the Gibbs sampler) or a normal on logit(rho).
// Densities are reported on the logit scale -- the scale the samplers walk
// on -- so the Beta case carries the rho(1-rho) change-of-variables factor.
struct RhoPrior {
  enum class Kind { beta, logit_normal };
  Kind kind = Kind::logit_normal;
  double a = 1.0, b = 1.0;        // beta(a, b)
  double mu = 0.0, sigma = 1.0;   // logit-normal

  double logpdf_logit(double logit_rho) const;
  double sample_rho(RngStream& rng) const;
};

struct PriorSpec {
  std::vector<PriorDist> beta_alpha;
  std::vector<PriorDist> beta_lambda;
  std::optional<std::vector<PriorDist>> beta_gamma;  // set iff recovery is covariate-driven
  RhoPrior rho;

  int dim() const { return static_cast<int>(beta_alpha.size()); }
  bool gamma_free() const { return beta_gamma.has_value(); }
  void validate() const;
};

// Order of the sampler coordinates: beta_alpha, beta_lambda, [beta_gamma,]
// logit(rho). ParameterSet <-> flat vector conversions live here.
struct SamplerLayout {
  int dim = 0;
  bool gamma_free = false;
  std::optional<double> gamma_fixed;

  int size() const { return dim * (gamma_free ? 3 : 2) + 1; }
  std::vector<std::string> names() const;  // beta_a0, ..., rho
  static SamplerLayout infer(const ParameterSet& theta);
};

std::vector<double> to_sampler_vector(const ParameterSet& theta);
ParameterSet from_sampler_vector(std::span<const double> v, const SamplerLayout& layout);

// Joint prior density on the sampler scale.
double log_prior(const ParameterSet& theta, const PriorSpec& priors);
ParameterSet sample_from_prior(const PriorSpec& priors,
                               const std::optional<double>& gamma_fixed, RngStream& rng);

// Symmetric Gaussian random-walk proposal; one step size per sampler
// coordinate (all must be >= 0). The Gibbs sampler ignores the rho entry.
struct ProposalKernel {
  std::vector<double> step;
  void validate(const SamplerLayout& layout) const;
};

ParameterSet propose(const ParameterSet& theta, const ProposalKernel& kernel, RngStream& rng);

struct ChainDraw {
  ParameterSet theta;
  double log_likelihood = 0.0;  // marginal-likelihood estimate held at this draw
  bool accepted = false;        // this iteration's proposal was accepted
};

struct PosteriorChain {
  std::vector<ChainDraw> draws;  // post burn-in, every iteration
  // Hidden trajectories snapshotted every trajectory_thin draws (none when 0).
  std::vector<std::vector<AgentStateVector>> trajectories;
  int trajectory_thin = 0;
  double acceptance_rate = 0.0;  // over post burn-in iterations
};

struct McmcOptions {
  std::optional<ParameterSet> init;  // default: drawn from the prior
  int trajectory_thin = 0;
  // Prior draws are retried until the filter returns a finite likelihood.
  int max_init_attempts = 100;
  SmcOptions smc;
  std::function<void(int, int)> progress;  // (iterations done, total)
};

// Particle marginal Metropolis-Hastings: a random-walk proposal on the
// sampler vector accepted with the usual ratio, with the intractable
// likelihood replaced by a fresh bootstrap-filter estimate per proposal. A
// -inf prior or likelihood rejects; the chain never aborts on degenerate
// proposals. gamma_fixed must be given exactly when the priors carry no
// beta_gamma block.
PosteriorChain pmmh(std::span<const int> observations, const AgentPopulation& pop,
                    const Network& net, const PriorSpec& priors,
                    const std::optional<double>& gamma_fixed, const ProposalKernel& kernel,
                    int n_particles, int n_iterations, int burn_in, std::uint64_t seed,
                    const McmcOptions& options = {});

// Gibbs draw of rho given a complete trajectory: Beta(a + sum y_t,
// b + sum (n_t - y_t)) where n_t is the per-step reporting pool (infected
// count, or ever-infected count under the cumulative response). Requires
// y_t <= n_t for every t.
double update_rho_conjugate(std::span<const AgentStateVector> trajectory,
                            std::span<const int> observations, double prior_a,
                            double prior_b, RngStream& rng,
                            ResponseType response = ResponseType::prevalence);

// Particle Gibbs: alternates a conditional-SMC refresh of the hidden
// trajectory with parameter updates given that trajectory -- a conjugate
// Beta draw for rho (hence the Beta prior requirement) and one
// Metropolis-within-Gibbs step on the regression coefficients against the
// complete-data likelihood. accepted/acceptance_rate refer to the
// coefficient update.
PosteriorChain particle_gibbs(std::span<const int> observations, const AgentPopulation& pop,
                              const Network& net, const PriorSpec& priors,
                              const std::optional<double>& gamma_fixed,
                              const ProposalKernel& kernel, int n_particles, int n_sweeps,
                              int burn_in, std::uint64_t seed, const McmcOptions& options = {});

// Random-walk Metropolis on a flat parameter vector with an injectable
// (possibly stochastic) likelihood — the acceptance core of pmmh, exposed so
// the mechanics can be exercised against analytic targets.
struct GenericChainResult {
  std::vector<std::vector<double>> samples;  // post burn-in
  std::vector<double> log_likelihoods;
  double acceptance_rate = 0.0;
};

GenericChainResult random_walk_metropolis(
    const std::function<double(std::span<const double>)>& log_prior_fn,
    const std::function<double(std::span<const double>, RngStream&)>& log_likelihood_fn,
    std::span<const double> init, std::span<const double> step, int n_iterations,
    int burn_in, std::uint64_t seed);

// Doubles/halves every step size until a pilot chain's acceptance rate lands
// in [target_low, target_high] (or max_rounds is hit); returns the last
// kernel tried together with its pilot acceptance rate.
struct TuneResult {
  ProposalKernel kernel;
  double acceptance_rate = 0.0;
  bool converged = false;
  int rounds = 0;
};

TuneResult tune_proposal(std::span<const int> observations, const AgentPopulation& pop,
                         const Network& net, const PriorSpec& priors,
                         const std::optional<double>& gamma_fixed, ProposalKernel kernel,
                         int n_particles, int pilot_iterations, std::uint64_t seed,
                         double target_low = 0.15, double target_high = 0.20,
                         int max_rounds = 10);

}  // namespace absis
