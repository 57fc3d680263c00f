// Command-line front end: simulate epidemics on agent networks, estimate
// likelihoods, fit parameters by particle MCMC, and summarize/predict from a
// fitted chain. All randomness flows from --seed (or the config seed), so
// any invocation is reproducible byte for byte.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "absis/config.hpp"
#include "absis/io.hpp"
#include "absis/presets.hpp"
#include "absis/simulate.hpp"
#include "absis/smc.hpp"
#include "absis/summary.hpp"

namespace {

using namespace absis;

struct Flags {
  std::string config;
  std::string preset;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> algo;
  std::optional<std::string> response;
  std::optional<std::string> data;
  std::optional<std::string> chain;
  std::optional<std::string> out;
  std::optional<std::string> states;
  std::optional<int> particles;
  std::optional<int> iterations;
  std::optional<int> burn_in;
  std::optional<int> thin;
  std::optional<int> steps;
  std::optional<int> draws;
  std::optional<int> horizon;
};

struct Run {
  RunConfig cfg;
  const Preset* preset = nullptr;
};

std::string preset_list() {
  std::string out;
  for (const auto& name : preset_names()) {
    if (!out.empty()) out += ", ";
    out += name;
  }
  return out;
}

Run resolve(const Flags& f) {
  Run run;
  if (!f.preset.empty()) {
    run.preset = find_preset(f.preset);
    if (!run.preset)
      throw ConfigError("unknown preset '" + f.preset + "' (available: " + preset_list() + ")");
    run.cfg = run.preset->config;
  }
  if (!f.config.empty()) {
    std::ifstream in(f.config);
    if (!in) throw ConfigError(f.config + ": cannot open for reading");
    overlay_run_config(run.cfg, in, f.config);
  }
  RunConfig& cfg = run.cfg;
  if (f.seed) cfg.seed = *f.seed;
  if (f.algo) cfg.algorithm = *f.algo;
  if (f.response) {
    if (*f.response == "prevalence")
      cfg.response = ResponseType::prevalence;
    else if (*f.response == "cumulative")
      cfg.response = ResponseType::cumulative;
    else
      throw ConfigError("--response must be 'prevalence' or 'cumulative'");
  }
  if (f.data) cfg.data = *f.data;
  if (f.chain) cfg.chain = *f.chain;
  if (f.states) cfg.states = *f.states;
  if (f.particles) cfg.particles = *f.particles;
  if (f.iterations) cfg.iterations = *f.iterations;
  if (f.burn_in) cfg.burn_in = *f.burn_in;
  if (f.thin) cfg.thin = *f.thin;
  if (f.steps) cfg.steps = *f.steps;
  if (f.draws) cfg.prediction_draws = *f.draws;
  if (f.horizon) cfg.horizon = *f.horizon;
  cfg.validate();
  return run;
}

AgentPopulation resolve_population(const Run& run) {
  if (run.cfg.covariates == "preset") {
    if (!run.preset) throw ConfigError("covariates = preset is only meaningful with --preset");
    return run.preset->population;
  }
  return build_population(run.cfg);
}

Network resolve_network(const Run& run, int n_agents) {
  if (run.cfg.network == "preset") {
    if (!run.preset) throw ConfigError("network = preset is only meaningful with --preset");
    if (run.preset->network.size() != n_agents)
      throw ConfigError("preset network does not cover the configured population");
    return run.preset->network;
  }
  return build_network(run.cfg, n_agents);
}

CaseSeries resolve_data(const Run& run) {
  if (run.cfg.data == "preset") {
    if (!run.preset || !run.preset->data)
      throw ConfigError("data = preset needs a preset that embeds observations");
    return *run.preset->data;
  }
  if (run.cfg.data.empty()) throw ConfigError("no case data: set io.data or pass --data");
  return load_case_series(run.cfg.data, run.cfg.interpolate);
}

ParameterSet resolve_true_parameters(const Run& run) {
  if (run.cfg.true_beta_alpha || run.cfg.true_beta_lambda || run.cfg.true_rho)
    return build_true_parameters(run.cfg);
  if (run.preset && run.preset->true_parameters) return *run.preset->true_parameters;
  throw ConfigError(
      "generating parameter values are required: set the model.true_* keys or use a preset "
      "that provides them");
}

void note(const std::string& msg) { std::cerr << msg << '\n'; }

void require_path(const std::string& path, const std::string& what) {
  if (path.empty()) throw ConfigError("no output path for the " + what + " (set it or pass --out)");
}

int run_simulate(const Flags& f) {
  Run run = resolve(f);
  if (f.out) run.cfg.simulation = *f.out;
  const RunConfig& cfg = run.cfg;
  if (cfg.steps < 1) throw ConfigError("model.steps must be >= 1 to simulate");
  require_path(cfg.simulation, "simulation table");

  const AgentPopulation pop = resolve_population(run);
  const Network net = resolve_network(run, pop.size());
  const ParameterSet theta = resolve_true_parameters(run);
  const SimulationOutput sim =
      simulate_abm(theta, pop, net, cfg.steps, cfg.seed, cfg.response);

  std::ostringstream table;
  write_simulation_csv(sim, table);
  write_text_file(cfg.simulation, table.str());
  note("wrote " + cfg.simulation);

  if (!cfg.states.empty()) {
    std::ostringstream states;
    write_states_csv(sim, states);
    write_text_file(cfg.states, states.str());
    note("wrote " + cfg.states);
  }
  if (!cfg.data.empty() && cfg.data != "preset") {
    CaseSeries series;
    series.counts = sim.observations;
    series.interpolated.assign(sim.observations.size(), false);
    std::ostringstream cases;
    write_case_series_csv(series, cases);
    write_text_file(cfg.data, cases.str());
    note("wrote " + cfg.data);
  }
  return 0;
}

int run_loglik(const Flags& f) {
  const Run run = resolve(f);
  const RunConfig& cfg = run.cfg;
  const AgentPopulation pop = resolve_population(run);
  const Network net = resolve_network(run, pop.size());
  const ParameterSet theta = resolve_true_parameters(run);
  const CaseSeries series = resolve_data(run);

  SmcOptions options;
  options.response = cfg.response;
  const FilterResult result = bootstrap_filter(theta, pop, net, series.counts, cfg.particles,
                                               cfg.seed, options);
  std::cout << "particles: " << cfg.particles << '\n';
  std::cout << "bootstrap log-likelihood: " << format_double(result.log_marginal_likelihood)
            << '\n';
  if (pop.size() <= 12 && cfg.response == ResponseType::prevalence) {
    const double exact = exact_loglik_forward(theta, pop, net, series.counts);
    std::cout << "exact log-likelihood: " << format_double(exact) << '\n';
    std::cout << "absolute error: "
              << format_double(std::abs(result.log_marginal_likelihood - exact)) << '\n';
  } else {
    std::cout << "exact log-likelihood: unavailable (needs <= 12 agents and the prevalence "
                 "response)\n";
  }
  return 0;
}

McmcOptions make_mcmc_options(const RunConfig& cfg) {
  McmcOptions options;
  options.trajectory_thin = cfg.thin;
  options.smc.response = cfg.response;
  options.progress = [](int done, int total) {
    const int percent_now = static_cast<int>(100.0 * done / total);
    const int percent_before = static_cast<int>(100.0 * (done - 1) / total);
    if (percent_now / 10 != percent_before / 10 || done == total)
      std::fprintf(stderr, "progress: %d%% (%d/%d)\n", percent_now, done, total);
  };
  return options;
}

int run_fit(const Flags& f) {
  Run run = resolve(f);
  if (f.out) run.cfg.chain = *f.out;
  const RunConfig& cfg = run.cfg;
  require_path(cfg.chain, "chain");

  const AgentPopulation pop = resolve_population(run);
  const Network net = resolve_network(run, pop.size());
  const CaseSeries series = resolve_data(run);
  for (int t = 0; t < series.size(); ++t)
    if (series.counts[t] > pop.size())
      throw ConfigError("day " + std::to_string(series.day(t)) + " reports " +
                        std::to_string(series.counts[t]) + " cases but there are only " +
                        std::to_string(pop.size()) + " agents");

  const PriorSpec priors = require_priors(cfg, pop.dim());
  const SamplerLayout layout{priors.dim(), priors.gamma_free(), cfg.gamma_value};
  const ProposalKernel kernel = build_kernel(cfg, layout);
  const McmcOptions options = make_mcmc_options(cfg);

  PosteriorChain chain;
  if (cfg.algorithm == "pg") {
    if (priors.rho.kind != RhoPrior::Kind::beta)
      throw ConfigError("algorithm pg needs a conjugate prior: set priors.rho = beta <a> <b>");
    chain = particle_gibbs(series.counts, pop, net, priors, cfg.gamma_value, kernel,
                           cfg.particles, cfg.iterations, cfg.burn_in, cfg.seed, options);
  } else {
    chain = pmmh(series.counts, pop, net, priors, cfg.gamma_value, kernel, cfg.particles,
                 cfg.iterations, cfg.burn_in, cfg.seed, options);
  }

  std::ostringstream table;
  write_chain_csv(chain, layout, table);
  write_text_file(cfg.chain, table.str());
  std::fprintf(stderr, "acceptance rate: %.4f\n", chain.acceptance_rate);
  note("wrote " + cfg.chain);
  return 0;
}

int run_predict(const Flags& f) {
  Run run = resolve(f);
  if (f.out) run.cfg.prediction = *f.out;
  const RunConfig& cfg = run.cfg;
  require_path(cfg.prediction, "prediction table");
  if (cfg.chain.empty()) throw ConfigError("no chain to predict from: set io.chain or --chain");

  const AgentPopulation pop = resolve_population(run);
  const Network net = resolve_network(run, pop.size());
  const LoadedChain loaded = load_chain_csv(cfg.chain, cfg.gamma_value);
  if (loaded.layout.dim != pop.dim())
    throw ConfigError(cfg.chain + ": chain has covariate dimension " +
                      std::to_string(loaded.layout.dim) + " but the population has " +
                      std::to_string(pop.dim()));

  const int horizon = cfg.horizon.value_or(cfg.steps);
  if (horizon < 1) throw ConfigError("prediction horizon must be >= 1 (set io.horizon)");
  const PredictionSummary prediction = predict_trajectories(
      loaded.chain, pop, net, horizon, cfg.prediction_draws, cfg.seed, cfg.response);

  std::ostringstream table;
  write_prediction_csv(prediction, table);
  write_text_file(cfg.prediction, table.str());
  note("wrote " + cfg.prediction);
  return 0;
}

int run_summarize(const Flags& f) {
  Run run = resolve(f);
  if (f.out) run.cfg.summary = *f.out;
  const RunConfig& cfg = run.cfg;
  if (cfg.chain.empty()) throw ConfigError("no chain to summarize: set io.chain or --chain");

  const AgentPopulation pop = resolve_population(run);
  const LoadedChain loaded = load_chain_csv(cfg.chain, cfg.gamma_value);
  if (loaded.layout.dim != pop.dim())
    throw ConfigError(cfg.chain + ": chain has covariate dimension " +
                      std::to_string(loaded.layout.dim) + " but the population has " +
                      std::to_string(pop.dim()));

  const auto rows = posterior_summary(loaded.chain, pop);
  print_summary_table(rows, std::cout);
  if (!cfg.summary.empty()) {
    std::ostringstream table;
    write_summary_csv(rows, table);
    write_text_file(cfg.summary, table.str());
    note("wrote " + cfg.summary);
  }
  return 0;
}

void add_shared_flags(CLI::App* cmd, Flags& f) {
  cmd->add_option("--config", f.config, "run configuration file (key = value sections)");
  cmd->add_option("--preset", f.preset, "built-in configuration: " + preset_list());
  cmd->add_option("--seed", f.seed, "random seed (overrides the config)");
  cmd->add_option("--response", f.response,
                  "reported counts are 'prevalence' (currently infected) or 'cumulative' "
                  "(ever infected)");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "agent-level SIS epidemics: simulation, likelihood estimation, particle-MCMC fitting, "
      "and posterior prediction"};
  app.require_subcommand(1);
  Flags f;

  CLI::App* simulate = app.add_subcommand(
      "simulate", "draw hidden agent states and reported counts from the generative model");
  add_shared_flags(simulate, f);
  simulate->add_option("--steps", f.steps, "number of transitions to simulate");
  simulate->add_option("--out", f.out, "simulation table path (day,reported,...)");
  simulate->add_option("--states", f.states, "also write the hidden 0/1 state matrix here");
  simulate->add_option("--data", f.data, "also write the reported counts as a case-series CSV");

  CLI::App* loglik = app.add_subcommand(
      "loglik", "estimate the data log-likelihood at the configured generating parameters");
  add_shared_flags(loglik, f);
  loglik->add_option("--data", f.data, "case-series CSV (day,count)");
  loglik->add_option("--particles", f.particles, "bootstrap filter particle count");

  CLI::App* fit =
      app.add_subcommand("fit", "sample the parameter posterior by particle MCMC");
  add_shared_flags(fit, f);
  fit->add_option("--data", f.data, "case-series CSV (day,count)");
  fit->add_option("--algo", f.algo, "sampler: pmmh or pg")
      ->check(CLI::IsMember({"pmmh", "pg"}));
  fit->add_option("--particles", f.particles, "filter particle count");
  fit->add_option("--iterations", f.iterations, "kept iterations (after burn-in)");
  fit->add_option("--burn-in", f.burn_in, "discarded initial iterations");
  fit->add_option("--thin", f.thin, "keep every k-th hidden trajectory (0 = none)");
  fit->add_option("--out,--chain", f.out, "chain CSV output path");

  CLI::App* predict = app.add_subcommand(
      "predict", "posterior-predictive quantile bands from a fitted chain");
  add_shared_flags(predict, f);
  predict->add_option("--chain", f.chain, "chain CSV produced by fit");
  predict->add_option("--draws", f.draws, "number of posterior draws to simulate");
  predict->add_option("--horizon", f.horizon, "days to simulate (default: model.steps)");
  predict->add_option("--out", f.out, "prediction CSV output path");

  CLI::App* summarize = app.add_subcommand(
      "summarize", "posterior means and credible intervals from a fitted chain");
  add_shared_flags(summarize, f);
  summarize->add_option("--chain", f.chain, "chain CSV produced by fit");
  summarize->add_option("--out", f.out, "summary CSV output path (optional)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (*simulate) return run_simulate(f);
    if (*loglik) return run_loglik(f);
    if (*fit) return run_fit(f);
    if (*predict) return run_predict(f);
    return run_summarize(f);
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}
