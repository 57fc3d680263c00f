#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "absis/model.hpp"
#include "absis/network.hpp"
#include "absis/pmcmc.hpp"

namespace absis {

// Sample quantile with linear interpolation between order statistics.
// p in [0, 1]; values need not be sorted. Throws on an empty sample.
double sample_quantile(std::vector<double> values, double p);

struct SummaryRow {
  std::string name;
  double mean = 0.0;
  double q025 = 0.0;
  double q500 = 0.0;
  double q975 = 0.0;
};

// Posterior mean and 2.5/50/97.5% quantiles for every sampler coordinate on
// its natural scale, followed by derived per-group infection rates, recovery
// rates, and reproduction numbers (lambda/gamma) whenever the population has
// few enough distinct covariate rows to enumerate. Derived rows are computed
// draw by draw and then summarized, so e.g. the reported mean reproduction
// number is the posterior mean of the ratio. Draw order does not matter.
// Throws std::invalid_argument on an empty chain.
std::vector<SummaryRow> posterior_summary(const PosteriorChain& chain,
                                          const AgentPopulation& pop);

void write_summary_csv(std::span<const SummaryRow> rows, std::ostream& out);
// Human-readable aligned table (for terminals).
void print_summary_table(std::span<const SummaryRow> rows, std::ostream& out);

struct PredictionBand {
  std::string group;   // "all", "group<k>" (covariate row), "block<k>"
  std::string series;  // "reported" | "actual"
  std::vector<double> q025, q500, q975;  // indexed by day 0..horizon
};

struct PredictionSummary {
  int horizon = 0;
  std::vector<PredictionBand> bands;
};

// Posterior-predictive bands: forward-simulates the model under n_draws
// evenly spaced posterior draws, thinning each day's infected (or, for the
// cumulative response, ever-infected) agents with probability rho to get the
// reported count, and summarizes both series per day — overall, per
// covariate group, and per network block. Simulations run in parallel over
// draws; the result depends only on (chain, seed), not the thread count.
// n_draws >= 1 is required — asking for zero draws is an error, not an empty
// answer.
PredictionSummary predict_trajectories(const PosteriorChain& chain, const AgentPopulation& pop,
                                       const Network& net, int horizon, int n_draws,
                                       std::uint64_t seed,
                                       ResponseType response = ResponseType::prevalence);

void write_prediction_csv(const PredictionSummary& prediction, std::ostream& out);

}  // namespace absis
