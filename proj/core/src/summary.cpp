#include "absis/summary.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <stdexcept>

#include "absis/io.hpp"
#include "absis/parallel.hpp"
#include "absis/rng.hpp"

namespace absis {

double sample_quantile(std::vector<double> values, double p) {
  if (values.empty()) throw std::invalid_argument("sample_quantile: empty sample");
  if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument("sample_quantile: p outside [0, 1]");
  std::sort(values.begin(), values.end());
  const double h = (static_cast<double>(values.size()) - 1.0) * p;
  const std::size_t lo = static_cast<std::size_t>(h);
  if (lo + 1 >= values.size()) return values.back();
  const double frac = h - static_cast<double>(lo);
  return values[lo] + frac * (values[lo + 1] - values[lo]);
}

namespace {

SummaryRow summarize(std::string name, std::vector<double> values) {
  SummaryRow row;
  row.name = std::move(name);
  double total = 0.0;
  for (double v : values) total += v;
  row.mean = total / static_cast<double>(values.size());
  row.q500 = sample_quantile(values, 0.5);
  row.q025 = sample_quantile(values, 0.025);
  row.q975 = sample_quantile(std::move(values), 0.975);
  return row;
}

}  // namespace

std::vector<SummaryRow> posterior_summary(const PosteriorChain& chain,
                                          const AgentPopulation& pop) {
  if (chain.draws.empty()) throw std::invalid_argument("posterior_summary: empty chain");
  const SamplerLayout layout = SamplerLayout::infer(chain.draws.front().theta);
  for (const ChainDraw& draw : chain.draws)
    if (draw.theta.dim() != layout.dim || draw.theta.gamma_free() != layout.gamma_free)
      throw std::invalid_argument("posterior_summary: draws disagree on the parameter layout");

  const std::size_t n = chain.draws.size();
  std::vector<SummaryRow> rows;

  // Sampler coordinates, with rho on its natural scale.
  const std::vector<std::string> names = layout.names();
  std::vector<double> values(n);
  int coord = 0;
  auto add_coordinate = [&](const std::string& name, auto&& getter) {
    for (std::size_t m = 0; m < n; ++m) values[m] = getter(chain.draws[m].theta);
    rows.push_back(summarize(name, values));
    ++coord;
  };
  for (int i = 0; i < layout.dim; ++i)
    add_coordinate(names[coord], [i](const ParameterSet& t) { return t.beta_alpha[i]; });
  for (int i = 0; i < layout.dim; ++i)
    add_coordinate(names[coord], [i](const ParameterSet& t) { return t.beta_lambda[i]; });
  if (layout.gamma_free)
    for (int i = 0; i < layout.dim; ++i)
      add_coordinate(names[coord], [i](const ParameterSet& t) { return (*t.beta_gamma)[i]; });
  add_coordinate(names[coord], [](const ParameterSet& t) { return t.rho; });

  // Derived group-level rates, draw by draw.
  const auto groups = pop.distinct_rows();
  for (std::size_t g = 0; g < groups.size(); ++g) {
    const std::vector<double>& z = groups[g];
    if (static_cast<int>(z.size()) != pop.dim()) continue;  // unreachable
    const std::string suffix = "_group" + std::to_string(g);
    std::vector<double> lambdas(n), gammas(n), ratios(n);
    for (std::size_t m = 0; m < n; ++m) {
      const ParameterSet& t = chain.draws[m].theta;
      const double lambda = logistic_link(t.beta_lambda, z);
      const double gamma = t.beta_gamma ? logistic_link(*t.beta_gamma, z) : *t.gamma_fixed;
      lambdas[m] = lambda;
      gammas[m] = gamma;
      ratios[m] = lambda / gamma;
    }
    rows.push_back(summarize("lambda" + suffix, std::move(lambdas)));
    rows.push_back(summarize("gamma" + suffix, std::move(gammas)));
    rows.push_back(summarize("R" + suffix, std::move(ratios)));
  }
  return rows;
}

void write_summary_csv(std::span<const SummaryRow> rows, std::ostream& out) {
  out << "parameter,mean,q025,q50,q975\n";
  for (const SummaryRow& row : rows)
    out << row.name << ',' << format_double(row.mean) << ',' << format_double(row.q025) << ','
        << format_double(row.q500) << ',' << format_double(row.q975) << '\n';
}

void print_summary_table(std::span<const SummaryRow> rows, std::ostream& out) {
  std::size_t width = 9;  // "parameter"
  for (const SummaryRow& row : rows) width = std::max(width, row.name.size());
  char buf[160];
  std::snprintf(buf, sizeof(buf), "%-*s %12s %12s %12s %12s\n", static_cast<int>(width),
                "parameter", "mean", "2.5%", "50%", "97.5%");
  out << buf;
  for (const SummaryRow& row : rows) {
    std::snprintf(buf, sizeof(buf), "%-*s %12.5g %12.5g %12.5g %12.5g\n",
                  static_cast<int>(width), row.name.c_str(), row.mean, row.q025, row.q500,
                  row.q975);
    out << buf;
  }
}

PredictionSummary predict_trajectories(const PosteriorChain& chain, const AgentPopulation& pop,
                                       const Network& net, int horizon, int n_draws,
                                       std::uint64_t seed, ResponseType response) {
  if (chain.draws.empty()) throw std::invalid_argument("predict_trajectories: empty chain");
  if (n_draws < 1)
    throw std::invalid_argument("predict_trajectories: at least one posterior draw is required");
  if (horizon < 0) throw std::invalid_argument("predict_trajectories: horizon must be >= 0");
  if (net.size() != pop.size())
    throw std::invalid_argument("predict_trajectories: network/population size mismatch");

  const int n_agents = pop.size();
  const int n_days = horizon + 1;
  const std::size_t n_kept = chain.draws.size();

  // Evenly spaced draw indices, first and last included.
  std::vector<std::size_t> picked(n_draws);
  for (int i = 0; i < n_draws; ++i)
    picked[i] = n_draws == 1 ? n_kept - 1
                             : (static_cast<std::size_t>(i) * (n_kept - 1)) / (n_draws - 1);
  for (std::size_t idx : picked) chain.draws[idx].theta.validate();

  // Group labels: everyone, each distinct covariate row, each network block.
  std::vector<std::string> group_names{"all"};
  const auto distinct = pop.distinct_rows();
  std::vector<int> group_of(n_agents, -1);
  if (distinct.size() >= 2) {
    for (int i = 0; i < n_agents; ++i) {
      const auto z = pop.covariate(i);
      for (std::size_t g = 0; g < distinct.size(); ++g)
        if (std::equal(z.begin(), z.end(), distinct[g].begin(), distinct[g].end())) {
          group_of[i] = static_cast<int>(g);
          break;
        }
    }
    for (std::size_t g = 0; g < distinct.size(); ++g)
      group_names.push_back("group" + std::to_string(g));
  }
  const int group_base = 1;
  const int block_base = static_cast<int>(group_names.size());
  const bool split_blocks = net.block_of(0) >= 0 && net.block_sizes().size() >= 2;
  if (split_blocks)
    for (std::size_t b = 0; b < net.block_sizes().size(); ++b)
      group_names.push_back("block" + std::to_string(b));
  const int n_groups = static_cast<int>(group_names.size());

  // counts[d][(g * n_days + t) * 2 + s]: s = 0 reported, s = 1 actual.
  std::vector<std::vector<double>> counts(n_draws);
  const RngStream base(seed);
  parallel_for(n_draws, [&](int d) {
    const ParameterSet& theta = chain.draws[picked[d]].theta;
    const AgentRates rates = compute_agent_rates(theta, pop);
    const RngStream draw_base = base.child(d);
    std::vector<double>& slot = counts[d];
    slot.assign(static_cast<std::size_t>(n_groups) * n_days * 2, 0.0);

    AgentStateVector state;
    std::vector<std::uint8_t> ever(n_agents, 0);
    for (int t = 0; t < n_days; ++t) {
      RngStream move_rng = draw_base.child(t).child(0);
      state = t == 0 ? sample_initial_state(rates, move_rng)
                     : step_agents(state, rates, net, move_rng);
      RngStream report_rng = draw_base.child(t).child(1);
      for (int i = 0; i < n_agents; ++i) {
        ever[i] |= state.states[i];
        const bool in_pool =
            response == ResponseType::cumulative ? ever[i] != 0 : state.states[i] != 0;
        if (!in_pool) continue;
        const bool reported = report_rng.bernoulli(theta.rho);
        const auto bump = [&](int g) {
          double* cell = &slot[(static_cast<std::size_t>(g) * n_days + t) * 2];
          cell[0] += reported ? 1.0 : 0.0;
          cell[1] += 1.0;
        };
        bump(0);
        if (group_of[i] >= 0) bump(group_base + group_of[i]);
        if (split_blocks) bump(block_base + net.block_of(i));
      }
    }
  });

  PredictionSummary out;
  out.horizon = horizon;
  std::vector<double> sample(n_draws);
  for (int g = 0; g < n_groups; ++g) {
    for (int s = 0; s < 2; ++s) {
      PredictionBand band;
      band.group = group_names[g];
      band.series = s == 0 ? "reported" : "actual";
      band.q025.resize(n_days);
      band.q500.resize(n_days);
      band.q975.resize(n_days);
      for (int t = 0; t < n_days; ++t) {
        for (int d = 0; d < n_draws; ++d)
          sample[d] = counts[d][(static_cast<std::size_t>(g) * n_days + t) * 2 + s];
        band.q025[t] = sample_quantile(sample, 0.025);
        band.q500[t] = sample_quantile(sample, 0.5);
        band.q975[t] = sample_quantile(sample, 0.975);
      }
      out.bands.push_back(std::move(band));
    }
  }
  return out;
}

void write_prediction_csv(const PredictionSummary& prediction, std::ostream& out) {
  out << "day,group,series,q025,q50,q975\n";
  for (int t = 0; t <= prediction.horizon; ++t)
    for (const PredictionBand& band : prediction.bands)
      out << t << ',' << band.group << ',' << band.series << ','
          << format_double(band.q025[t]) << ',' << format_double(band.q500[t]) << ','
          << format_double(band.q975[t]) << '\n';
}

}  // namespace absis
