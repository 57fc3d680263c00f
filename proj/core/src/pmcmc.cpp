#include "absis/pmcmc.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace absis {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

// Stream ids for the sampler bookkeeping; iteration ids are small positive
// integers, these sit far away.
constexpr std::uint64_t kInitThetaStream = 0xffffffffffffff01ull;
constexpr std::uint64_t kInitLikStream = 0xffffffffffffff02ull;

double normal_logpdf(double x, double mu, double sigma) {
  const double z = (x - mu) / sigma;
  return -0.5 * z * z - std::log(sigma) - 0.5 * std::log(2.0 * std::numbers::pi);
}

double logistic(double x) { return 1.0 / (1.0 + std::exp(-x)); }

// log(logistic(x)) without overflow on either tail.
double log_logistic(double x) {
  return x < 0.0 ? x - std::log1p(std::exp(x)) : -std::log1p(std::exp(-x));
}

double logit(double p) { return std::log(p) - std::log1p(-p); }

// P(X > 0) resp. P(X < 0) for X ~ N(mu, sigma), through erfc for tail accuracy.
double normal_tail_above_zero(double mu, double sigma) {
  return 0.5 * std::erfc(-mu / (sigma * std::numbers::sqrt2));
}
double normal_tail_below_zero(double mu, double sigma) {
  return 0.5 * std::erfc(mu / (sigma * std::numbers::sqrt2));
}

}  // namespace

double PriorDist::logpdf(double x) const {
  switch (kind) {
    case Kind::normal:
      return normal_logpdf(x, mu, sigma);
    case Kind::truncated_positive:
      if (x <= 0.0) return kNegInf;
      return normal_logpdf(x, mu, sigma) - std::log(normal_tail_above_zero(mu, sigma));
    case Kind::truncated_negative:
      if (x >= 0.0) return kNegInf;
      return normal_logpdf(x, mu, sigma) - std::log(normal_tail_below_zero(mu, sigma));
  }
  throw std::logic_error("PriorDist: bad kind");
}

double PriorDist::sample(RngStream& rng) const {
  if (kind == Kind::normal) return rng.normal(mu, sigma);
  const bool want_positive = kind == Kind::truncated_positive;
  for (int i = 0; i < 1000000; ++i) {
    const double x = rng.normal(mu, sigma);
    if (want_positive ? x > 0.0 : x < 0.0) return x;
  }
  throw std::runtime_error("PriorDist: truncated-normal rejection sampler made no progress");
}

double RhoPrior::logpdf_logit(double logit_rho) const {
  if (kind == Kind::logit_normal) return normal_logpdf(logit_rho, mu, sigma);
  // Beta(a, b) density in rho times the Jacobian rho * (1 - rho) collapses
  // to a * log(rho) + b * log(1 - rho) - log B(a, b).
  const double log_beta_fn = std::lgamma(a) + std::lgamma(b) - std::lgamma(a + b);
  return a * log_logistic(logit_rho) + b * log_logistic(-logit_rho) - log_beta_fn;
}

double RhoPrior::sample_rho(RngStream& rng) const {
  if (kind == Kind::logit_normal) return logistic(rng.normal(mu, sigma));
  return rng.beta_dist(a, b);
}

void PriorSpec::validate() const {
  const std::size_t d = beta_alpha.size();
  if (d == 0) throw std::invalid_argument("PriorSpec: beta_alpha block is empty");
  if (beta_lambda.size() != d)
    throw std::invalid_argument("PriorSpec: beta_lambda block length differs");
  if (beta_gamma && beta_gamma->size() != d)
    throw std::invalid_argument("PriorSpec: beta_gamma block length differs");
  auto check = [](const PriorDist& p) {
    if (!(p.sigma > 0.0)) throw std::invalid_argument("PriorSpec: sigma must be > 0");
    if (!std::isfinite(p.mu)) throw std::invalid_argument("PriorSpec: mu must be finite");
  };
  for (const auto& p : beta_alpha) check(p);
  for (const auto& p : beta_lambda) check(p);
  if (beta_gamma)
    for (const auto& p : *beta_gamma) check(p);
  if (rho.kind == RhoPrior::Kind::beta) {
    if (!(rho.a > 0.0 && rho.b > 0.0))
      throw std::invalid_argument("PriorSpec: beta prior needs a, b > 0");
  } else if (!(rho.sigma > 0.0)) {
    throw std::invalid_argument("PriorSpec: logit-normal prior needs sigma > 0");
  }
}

std::vector<std::string> SamplerLayout::names() const {
  std::vector<std::string> out;
  for (int i = 0; i < dim; ++i) out.push_back("beta_a" + std::to_string(i));
  for (int i = 0; i < dim; ++i) out.push_back("beta_l" + std::to_string(i));
  if (gamma_free)
    for (int i = 0; i < dim; ++i) out.push_back("beta_g" + std::to_string(i));
  out.push_back("rho");
  return out;
}

SamplerLayout SamplerLayout::infer(const ParameterSet& theta) {
  theta.validate();
  return SamplerLayout{theta.dim(), theta.gamma_free(), theta.gamma_fixed};
}

std::vector<double> to_sampler_vector(const ParameterSet& theta) {
  theta.validate();
  if (!(theta.rho > 0.0 && theta.rho < 1.0))
    throw std::invalid_argument("to_sampler_vector: rho must lie strictly in (0, 1)");
  std::vector<double> v;
  v.reserve(SamplerLayout::infer(theta).size());
  v.insert(v.end(), theta.beta_alpha.begin(), theta.beta_alpha.end());
  v.insert(v.end(), theta.beta_lambda.begin(), theta.beta_lambda.end());
  if (theta.beta_gamma) v.insert(v.end(), theta.beta_gamma->begin(), theta.beta_gamma->end());
  v.push_back(logit(theta.rho));
  return v;
}

ParameterSet from_sampler_vector(std::span<const double> v, const SamplerLayout& layout) {
  if (static_cast<int>(v.size()) != layout.size())
    throw std::invalid_argument("from_sampler_vector: length mismatch");
  ParameterSet theta;
  const int d = layout.dim;
  theta.beta_alpha.assign(v.begin(), v.begin() + d);
  theta.beta_lambda.assign(v.begin() + d, v.begin() + 2 * d);
  if (layout.gamma_free) {
    theta.beta_gamma.emplace(v.begin() + 2 * d, v.begin() + 3 * d);
  } else {
    theta.gamma_fixed = layout.gamma_fixed;
  }
  // keep rho strictly positive even if the walk wanders far into the tail
  theta.rho = std::clamp(logistic(v.back()), 1e-308, 1.0);
  return theta;
}

namespace {

// Prior density evaluated directly on the sampler vector (betas + logit rho).
double log_prior_vec(std::span<const double> v, const PriorSpec& priors) {
  const int d = priors.dim();
  double total = 0.0;
  int k = 0;
  for (int i = 0; i < d; ++i) total += priors.beta_alpha[i].logpdf(v[k++]);
  for (int i = 0; i < d; ++i) total += priors.beta_lambda[i].logpdf(v[k++]);
  if (priors.beta_gamma)
    for (int i = 0; i < d; ++i) total += (*priors.beta_gamma)[i].logpdf(v[k++]);
  total += priors.rho.logpdf_logit(v[k]);
  return std::isnan(total) ? kNegInf : total;
}

}  // namespace

double log_prior(const ParameterSet& theta, const PriorSpec& priors) {
  priors.validate();
  if (theta.dim() != priors.dim() || theta.gamma_free() != priors.gamma_free())
    throw std::invalid_argument("log_prior: parameter/prior layout mismatch");
  if (!(theta.rho > 0.0 && theta.rho < 1.0)) return kNegInf;
  return log_prior_vec(to_sampler_vector(theta), priors);
}

ParameterSet sample_from_prior(const PriorSpec& priors,
                               const std::optional<double>& gamma_fixed, RngStream& rng) {
  priors.validate();
  if (priors.gamma_free() == gamma_fixed.has_value())
    throw std::invalid_argument(
        "sample_from_prior: gamma_fixed must be given exactly when there is no beta_gamma block");
  ParameterSet theta;
  for (const auto& p : priors.beta_alpha) theta.beta_alpha.push_back(p.sample(rng));
  for (const auto& p : priors.beta_lambda) theta.beta_lambda.push_back(p.sample(rng));
  if (priors.beta_gamma) {
    theta.beta_gamma.emplace();
    for (const auto& p : *priors.beta_gamma) theta.beta_gamma->push_back(p.sample(rng));
  } else {
    theta.gamma_fixed = gamma_fixed;
  }
  theta.rho = priors.rho.sample_rho(rng);
  return theta;
}

void ProposalKernel::validate(const SamplerLayout& layout) const {
  if (static_cast<int>(step.size()) != layout.size())
    throw std::invalid_argument("ProposalKernel: step length does not match sampler layout");
  for (const double s : step)
    if (!(s >= 0.0)) throw std::invalid_argument("ProposalKernel: step sizes must be >= 0");
}

ParameterSet propose(const ParameterSet& theta, const ProposalKernel& kernel, RngStream& rng) {
  const SamplerLayout layout = SamplerLayout::infer(theta);
  kernel.validate(layout);
  std::vector<double> v = to_sampler_vector(theta);
  for (std::size_t i = 0; i < v.size(); ++i) v[i] += kernel.step[i] * rng.normal();
  return from_sampler_vector(v, layout);
}

namespace {

// Shared accept rule: accept when log(u) < log ratio; a NaN ratio (both
// likelihoods -inf) rejects.
bool mh_accept(double log_ratio, RngStream& rng) {
  if (log_ratio >= 0.0) return true;
  return std::log(rng.uniform_pos()) < log_ratio;
}

void check_mcmc_sizes(int n_iterations, int burn_in, int n_particles) {
  if (n_iterations < 0 || burn_in < 0)
    throw std::invalid_argument("mcmc: iteration counts must be >= 0");
  if (n_particles < 1) throw std::invalid_argument("mcmc: need at least one particle");
}

}  // namespace

PosteriorChain pmmh(std::span<const int> observations, const AgentPopulation& pop,
                    const Network& net, const PriorSpec& priors,
                    const std::optional<double>& gamma_fixed, const ProposalKernel& kernel,
                    int n_particles, int n_iterations, int burn_in, std::uint64_t seed,
                    const McmcOptions& options) {
  priors.validate();
  if (priors.gamma_free() == gamma_fixed.has_value())
    throw std::invalid_argument(
        "pmmh: gamma_fixed must be given exactly when there is no beta_gamma prior block");
  check_mcmc_sizes(n_iterations, burn_in, n_particles);
  if (n_particles < 2) throw std::invalid_argument("pmmh: need at least two particles");
  const SamplerLayout layout{priors.dim(), priors.gamma_free(), gamma_fixed};
  kernel.validate(layout);

  const RngStream base(seed);
  auto estimate = [&](const ParameterSet& theta, RngStream rng) {
    return bootstrap_filter(theta, pop, net, observations, n_particles, rng.next_u64(),
                            options.smc);
  };

  std::vector<double> cur;
  double cur_lp = kNegInf, cur_ll = kNegInf;
  std::vector<AgentStateVector> cur_traj;

  if (options.init) {
    ParameterSet theta = *options.init;
    theta.validate();
    if (theta.dim() != layout.dim || theta.gamma_free() != layout.gamma_free)
      throw std::invalid_argument("pmmh: init does not match the prior layout");
    cur = to_sampler_vector(theta);
    cur_lp = log_prior_vec(cur, priors);
    FilterResult fr = estimate(theta, base.child(kInitLikStream));
    cur_ll = fr.log_marginal_likelihood;
    cur_traj = std::move(fr.sampled_trajectory);
  } else {
    bool found = false;
    for (int attempt = 0; attempt < options.max_init_attempts; ++attempt) {
      RngStream draw_rng = base.child(kInitThetaStream).child(attempt);
      const ParameterSet theta = sample_from_prior(priors, gamma_fixed, draw_rng);
      FilterResult fr = estimate(theta, base.child(kInitLikStream).child(attempt));
      if (std::isfinite(fr.log_marginal_likelihood)) {
        cur = to_sampler_vector(theta);
        cur_lp = log_prior_vec(cur, priors);
        cur_ll = fr.log_marginal_likelihood;
        cur_traj = std::move(fr.sampled_trajectory);
        found = true;
        break;
      }
    }
    if (!found)
      throw std::runtime_error(
          "pmmh: no prior draw reached a finite likelihood estimate; check data/model");
  }

  PosteriorChain chain;
  chain.trajectory_thin = options.trajectory_thin;
  chain.draws.reserve(n_iterations);
  const int total = burn_in + n_iterations;
  long accepted_kept = 0;
  std::vector<double> prop(cur.size());

  for (int m = 1; m <= total; ++m) {
    const RngStream iter_base = base.child(m);
    RngStream prop_rng = iter_base.child(0);
    bool identical = true;
    for (std::size_t i = 0; i < cur.size(); ++i) {
      prop[i] = cur[i] + kernel.step[i] * prop_rng.normal();
      identical = identical && prop[i] == cur[i];
    }
    bool accepted = false;
    if (identical) {
      // Zero-step proposal: the ratio is exactly one, no need to re-estimate.
      accepted = true;
    } else {
      const double prop_lp = log_prior_vec(prop, priors);
      if (prop_lp != kNegInf) {
        FilterResult fr =
            estimate(from_sampler_vector(prop, layout), iter_base.child(1));
        const double prop_ll = fr.log_marginal_likelihood;
        const double log_ratio = (prop_ll + prop_lp) - (cur_ll + cur_lp);
        RngStream accept_rng = iter_base.child(2);
        if (mh_accept(log_ratio, accept_rng)) {
          accepted = true;
          cur.swap(prop);
          cur_lp = prop_lp;
          cur_ll = prop_ll;
          cur_traj = std::move(fr.sampled_trajectory);
        }
      }
    }
    if (m > burn_in) {
      const int kept = m - burn_in;
      chain.draws.push_back(
          {from_sampler_vector(cur, layout), cur_ll, accepted});
      accepted_kept += accepted ? 1 : 0;
      if (options.trajectory_thin > 0 && (kept - 1) % options.trajectory_thin == 0)
        chain.trajectories.push_back(cur_traj);
    }
    if (options.progress) options.progress(m, total);
  }
  chain.acceptance_rate =
      n_iterations > 0 ? static_cast<double>(accepted_kept) / n_iterations : 0.0;
  return chain;
}

double update_rho_conjugate(std::span<const AgentStateVector> trajectory,
                            std::span<const int> observations, double prior_a,
                            double prior_b, RngStream& rng, ResponseType response) {
  if (trajectory.empty() || trajectory.size() != observations.size())
    throw std::invalid_argument("update_rho_conjugate: trajectory/observation length mismatch");
  if (!(prior_a > 0.0 && prior_b > 0.0))
    throw std::invalid_argument("update_rho_conjugate: Beta prior needs a, b > 0");
  const std::vector<int> trials = emission_trial_counts(trajectory, response);
  long detected = 0, missed = 0;
  for (std::size_t t = 0; t < trajectory.size(); ++t) {
    if (observations[t] < 0 || observations[t] > trials[t])
      throw std::invalid_argument(
          "update_rho_conjugate: need 0 <= y_t <= reporting pool at every t");
    detected += observations[t];
    missed += trials[t] - observations[t];
  }
  return rng.beta_dist(prior_a + static_cast<double>(detected),
                       prior_b + static_cast<double>(missed));
}

PosteriorChain particle_gibbs(std::span<const int> observations, const AgentPopulation& pop,
                              const Network& net, const PriorSpec& priors,
                              const std::optional<double>& gamma_fixed,
                              const ProposalKernel& kernel, int n_particles, int n_sweeps,
                              int burn_in, std::uint64_t seed, const McmcOptions& options) {
  priors.validate();
  if (priors.rho.kind != RhoPrior::Kind::beta)
    throw std::invalid_argument("particle_gibbs: rho must carry a Beta prior (conjugate draw)");
  if (priors.gamma_free() == gamma_fixed.has_value())
    throw std::invalid_argument(
        "particle_gibbs: gamma_fixed must be given exactly when there is no beta_gamma prior block");
  check_mcmc_sizes(n_sweeps, burn_in, n_particles);
  const SamplerLayout layout{priors.dim(), priors.gamma_free(), gamma_fixed};
  kernel.validate(layout);

  const RngStream base(seed);

  // Reference trajectory to start from: an unconditional filter draw.
  ParameterSet theta;
  std::vector<AgentStateVector> reference;
  {
    bool found = false;
    const int attempts = options.init ? 1 : options.max_init_attempts;
    for (int attempt = 0; attempt < attempts; ++attempt) {
      ParameterSet candidate;
      if (options.init) {
        candidate = *options.init;
        candidate.validate();
        if (candidate.dim() != layout.dim || candidate.gamma_free() != layout.gamma_free)
          throw std::invalid_argument("particle_gibbs: init does not match the prior layout");
      } else {
        RngStream draw_rng = base.child(kInitThetaStream).child(attempt);
        candidate = sample_from_prior(priors, gamma_fixed, draw_rng);
      }
      RngStream lik_rng = base.child(kInitLikStream).child(attempt);
      FilterResult fr = bootstrap_filter(candidate, pop, net, observations,
                                         std::max(2, n_particles), lik_rng.next_u64(),
                                         options.smc);
      if (!fr.degenerate) {
        theta = std::move(candidate);
        reference = std::move(fr.sampled_trajectory);
        found = true;
        break;
      }
    }
    if (!found)
      throw std::runtime_error(
          "particle_gibbs: could not initialize a reference trajectory; check data/model");
  }

  PosteriorChain chain;
  chain.trajectory_thin = options.trajectory_thin;
  chain.draws.reserve(n_sweeps);
  const int total = burn_in + n_sweeps;
  long accepted_kept = 0;

  for (int m = 1; m <= total; ++m) {
    const RngStream iter_base = base.child(m);

    RngStream csmc_rng = iter_base.child(0);
    FilterResult sweep = conditional_smc(theta, pop, net, observations, reference,
                                         n_particles, csmc_rng.next_u64(), options.smc);
    if (!sweep.degenerate) reference = std::move(sweep.sampled_trajectory);

    RngStream rho_rng = iter_base.child(1);
    theta.rho = update_rho_conjugate(reference, observations, priors.rho.a, priors.rho.b,
                                     rho_rng, options.smc.response);

    // One Metropolis step on the coefficient blocks given the trajectory.
    std::vector<double> cur = to_sampler_vector(theta);
    const double cur_lp = log_prior_vec(cur, priors);
    const double cur_cdl =
        complete_data_loglik(theta, pop, net, reference, observations, options.smc.response);
    std::vector<double> prop = cur;
    RngStream prop_rng = iter_base.child(2);
    for (std::size_t i = 0; i + 1 < prop.size(); ++i)
      prop[i] += kernel.step[i] * prop_rng.normal();
    bool accepted = false;
    const double prop_lp = log_prior_vec(prop, priors);
    if (prop_lp != kNegInf) {
      ParameterSet candidate = from_sampler_vector(prop, layout);
      candidate.rho = theta.rho;  // rho coordinate is not part of this move
      const double prop_cdl = complete_data_loglik(candidate, pop, net, reference,
                                                   observations, options.smc.response);
      const double log_ratio = (prop_cdl + prop_lp) - (cur_cdl + cur_lp);
      RngStream accept_rng = iter_base.child(3);
      if (mh_accept(log_ratio, accept_rng)) {
        accepted = true;
        theta = std::move(candidate);
      }
    }

    if (m > burn_in) {
      const int kept = m - burn_in;
      chain.draws.push_back({theta, sweep.log_marginal_likelihood, accepted});
      accepted_kept += accepted ? 1 : 0;
      if (options.trajectory_thin > 0 && (kept - 1) % options.trajectory_thin == 0)
        chain.trajectories.push_back(reference);
    }
    if (options.progress) options.progress(m, total);
  }
  chain.acceptance_rate =
      n_sweeps > 0 ? static_cast<double>(accepted_kept) / n_sweeps : 0.0;
  return chain;
}

GenericChainResult random_walk_metropolis(
    const std::function<double(std::span<const double>)>& log_prior_fn,
    const std::function<double(std::span<const double>, RngStream&)>& log_likelihood_fn,
    std::span<const double> init, std::span<const double> step, int n_iterations,
    int burn_in, std::uint64_t seed) {
  if (init.empty() || init.size() != step.size())
    throw std::invalid_argument("random_walk_metropolis: init/step length mismatch");
  if (n_iterations < 0 || burn_in < 0)
    throw std::invalid_argument("random_walk_metropolis: iteration counts must be >= 0");

  const RngStream base(seed);
  std::vector<double> cur(init.begin(), init.end());
  double cur_lp = log_prior_fn(cur);
  RngStream init_rng = base.child(kInitLikStream);
  double cur_ll = log_likelihood_fn(cur, init_rng);

  GenericChainResult out;
  out.samples.reserve(n_iterations);
  const int total = burn_in + n_iterations;
  long accepted_kept = 0;
  std::vector<double> prop(cur.size());

  for (int m = 1; m <= total; ++m) {
    const RngStream iter_base = base.child(m);
    RngStream prop_rng = iter_base.child(0);
    bool identical = true;
    for (std::size_t i = 0; i < cur.size(); ++i) {
      prop[i] = cur[i] + step[i] * prop_rng.normal();
      identical = identical && prop[i] == cur[i];
    }
    bool accepted = false;
    if (identical) {
      accepted = true;
    } else {
      const double prop_lp = log_prior_fn(prop);
      if (prop_lp != kNegInf) {
        RngStream lik_rng = iter_base.child(1);
        const double prop_ll = log_likelihood_fn(prop, lik_rng);
        const double log_ratio = (prop_ll + prop_lp) - (cur_ll + cur_lp);
        RngStream accept_rng = iter_base.child(2);
        if (mh_accept(log_ratio, accept_rng)) {
          accepted = true;
          cur.swap(prop);
          cur_lp = prop_lp;
          cur_ll = prop_ll;
        }
      }
    }
    if (m > burn_in) {
      out.samples.push_back(cur);
      out.log_likelihoods.push_back(cur_ll);
      accepted_kept += accepted ? 1 : 0;
    }
  }
  out.acceptance_rate =
      n_iterations > 0 ? static_cast<double>(accepted_kept) / n_iterations : 0.0;
  return out;
}

TuneResult tune_proposal(std::span<const int> observations, const AgentPopulation& pop,
                         const Network& net, const PriorSpec& priors,
                         const std::optional<double>& gamma_fixed, ProposalKernel kernel,
                         int n_particles, int pilot_iterations, std::uint64_t seed,
                         double target_low, double target_high, int max_rounds) {
  if (pilot_iterations < 500)
    throw std::invalid_argument("tune_proposal: pilot chains need at least 500 iterations");
  if (!(target_low > 0.0 && target_low < target_high && target_high < 1.0))
    throw std::invalid_argument("tune_proposal: bad target band");
  if (max_rounds < 1) throw std::invalid_argument("tune_proposal: max_rounds must be >= 1");

  const RngStream base(seed);
  TuneResult result;
  result.kernel = std::move(kernel);
  for (int round = 0; round < max_rounds; ++round) {
    RngStream round_rng = base.child(round);
    const PosteriorChain pilot =
        pmmh(observations, pop, net, priors, gamma_fixed, result.kernel, n_particles,
             pilot_iterations, 0, round_rng.next_u64());
    result.acceptance_rate = pilot.acceptance_rate;
    result.rounds = round + 1;
    if (result.acceptance_rate >= target_low && result.acceptance_rate <= target_high) {
      result.converged = true;
      break;
    }
    if (round + 1 == max_rounds) break;
    const double factor = result.acceptance_rate > target_high ? 2.0 : 0.5;
    for (double& s : result.kernel.step) s *= factor;
  }
  return result;
}

}  // namespace absis
