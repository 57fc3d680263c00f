#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "absis/io.hpp"
#include "absis/model.hpp"
#include "absis/network.hpp"
#include "absis/pmcmc.hpp"

namespace absis {

// Declarative run description parsed from a sectioned key = value file.
// Builder strings (covariates, network) keep their raw spelling until
// build_population / build_network resolve them; the special spelling
// "preset" refers to objects supplied by a named preset and is resolved by
// the command-line layer.
struct RunConfig {
  // [model]
  int agents = 0;  // 0 = take the count from the covariate source
  int steps = 0;
  std::string covariates;         // "binary <p> <seed>" | "normal <seed>" | "file <path>"
  std::string network = "full";   // "full" | "grid8 <r> <c> [wrap]" | "blocks <s>..." | "edges <path>"
  std::optional<double> gamma_value;  // recovery probability; empty = covariate-driven
  ResponseType response = ResponseType::prevalence;
  std::optional<std::vector<double>> true_beta_alpha;   // generating values for
  std::optional<std::vector<double>> true_beta_lambda;  // simulate / loglik
  std::optional<std::vector<double>> true_beta_gamma;
  std::optional<double> true_rho;

  // [priors]
  std::optional<PriorSpec> priors;

  // [sampler]
  std::string algorithm = "pmmh";  // "pmmh" | "pg"
  int particles = 100;
  int iterations = 1000;
  int burn_in = 0;
  int thin = 0;                    // trajectory snapshot stride; 0 = none
  std::vector<double> step{0.1};   // one entry broadcasts to every coordinate
  std::uint64_t seed = 1;

  // [io]
  std::string data;        // case-series CSV (or "preset")
  bool interpolate = true;
  std::string chain;       // chain CSV (fit output; predict/summarize input)
  std::string summary;
  std::string prediction;
  std::string simulation;
  std::string states;
  int prediction_draws = 200;
  std::optional<int> horizon;  // prediction length; default = steps

  // Cross-field sanity independent of the subcommand. Throws ConfigError.
  void validate() const;
};

// Applies every key found in the stream on top of cfg; keys that do not
// appear keep their current values, so presets/defaults compose with partial
// files. Unknown sections or keys are errors ("<name>:<line>: ...").
void overlay_run_config(RunConfig& cfg, std::istream& in, const std::string& name);
RunConfig load_run_config(const std::string& path);

// Resolve the builder strings. Both throw ConfigError on a description they
// cannot honour (bad token, size mismatch, missing file).
AgentPopulation build_population(const RunConfig& cfg);
Network build_network(const RunConfig& cfg, int n_agents);

// Generating parameter values for simulate/loglik; requires the true_*
// fields (beta_gamma exactly when gamma_value is empty).
ParameterSet build_true_parameters(const RunConfig& cfg);

// Priors block with dimensions checked against the covariate dimension.
PriorSpec require_priors(const RunConfig& cfg, int covariate_dim);

// Per-coordinate random-walk scales: a single configured entry broadcasts.
ProposalKernel build_kernel(const RunConfig& cfg, const SamplerLayout& layout);

// Prior spellings: "normal <mu> <sd>", "tnormal+ <mu> <sd>",
// "tnormal- <mu> <sd>"; lists are pipe-separated. rho additionally accepts
// "beta <a> <b>" and "logitnormal <mu> <sd>".
PriorDist parse_prior(const std::string& text);
std::vector<PriorDist> parse_prior_list(const std::string& text);
RhoPrior parse_rho_prior(const std::string& text);

}  // namespace absis
