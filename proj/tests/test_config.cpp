#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <numeric>
#include <sstream>
#include <string>
#include <vector>

#include "absis/config.hpp"
#include "absis/presets.hpp"

using namespace absis;

namespace {

RunConfig overlay_text(const std::string& text, RunConfig cfg = {}) {
  std::istringstream in(text);
  overlay_run_config(cfg, in, "cfg");
  return cfg;
}

class TempDir {
public:
  TempDir() : path_(std::filesystem::temp_directory_path() / "absis_cfg_test") {
    std::filesystem::remove_all(path_);
    std::filesystem::create_directories(path_);
  }
  ~TempDir() { std::filesystem::remove_all(path_); }
  std::string file(const std::string& name, const std::string& content) const {
    const std::string p = (path_ / name).string();
    std::ofstream out(p);
    out << content;
    return p;
  }

private:
  std::filesystem::path path_;
};

}  // namespace

TEST_CASE("a full config file sets every field") {
  const RunConfig cfg = overlay_text(
      "# run description\n"
      "[model]\n"
      "agents = 40\n"
      "steps = 25\n"
      "covariates = binary 0.4 7\n"
      "network = blocks 10 30\n"
      "gamma = 0.1\n"
      "response = cumulative\n"
      "true_beta_alpha = -2.0 0.0\n"
      "true_beta_lambda = -1.0, 2.0\n"
      "true_rho = 0.8\n"
      "[priors]\n"
      "beta_alpha = normal 0 3 | normal 0 3\n"
      "beta_lambda = normal 0 3 | tnormal+ 0 3\n"
      "rho = beta 2 1\n"
      "[sampler]\n"
      "algorithm = pg\n"
      "particles = 64\n"
      "iterations = 500\n"
      "burn_in = 100\n"
      "thin = 10\n"
      "step = 0.05 0.05 0.1 0.1 0.2\n"
      "seed = 99\n"
      "[io]\n"
      "data = cases.csv\n"
      "interpolate = false\n"
      "chain = out/chain.csv\n"
      "summary = out/summary.csv\n"
      "prediction = out/pred.csv\n"
      "simulation = out/sim.csv\n"
      "states = out/states.csv\n"
      "prediction_draws = 55\n"
      "horizon = 14\n");
  CHECK(cfg.agents == 40);
  CHECK(cfg.steps == 25);
  CHECK(cfg.covariates == "binary 0.4 7");
  CHECK(cfg.network == "blocks 10 30");
  CHECK(cfg.gamma_value == 0.1);
  CHECK(cfg.response == ResponseType::cumulative);
  CHECK(cfg.true_beta_alpha == std::vector<double>{-2.0, 0.0});
  CHECK(cfg.true_beta_lambda == std::vector<double>{-1.0, 2.0});
  CHECK_FALSE(cfg.true_beta_gamma.has_value());
  CHECK(cfg.true_rho == 0.8);
  REQUIRE(cfg.priors.has_value());
  CHECK(cfg.priors->beta_alpha.size() == 2);
  CHECK(cfg.priors->beta_lambda[1].kind == PriorDist::Kind::truncated_positive);
  CHECK(cfg.priors->rho.kind == RhoPrior::Kind::beta);
  CHECK(cfg.priors->rho.a == 2.0);
  CHECK(cfg.algorithm == "pg");
  CHECK(cfg.particles == 64);
  CHECK(cfg.iterations == 500);
  CHECK(cfg.burn_in == 100);
  CHECK(cfg.thin == 10);
  CHECK(cfg.step == std::vector<double>{0.05, 0.05, 0.1, 0.1, 0.2});
  CHECK(cfg.seed == 99);
  CHECK(cfg.data == "cases.csv");
  CHECK_FALSE(cfg.interpolate);
  CHECK(cfg.chain == "out/chain.csv");
  CHECK(cfg.states == "out/states.csv");
  CHECK(cfg.prediction_draws == 55);
  CHECK(cfg.horizon == 14);
  CHECK_NOTHROW(cfg.validate());
}

TEST_CASE("partial files overlay on top of existing values") {
  RunConfig cfg = overlay_text("[model]\nagents = 10\nsteps = 5\ngamma = 0.2\n");
  cfg = overlay_text("[model]\nsteps = 9\n", cfg);
  CHECK(cfg.agents == 10);  // untouched
  CHECK(cfg.steps == 9);
  CHECK(cfg.gamma_value == 0.2);
  cfg = overlay_text("[model]\ngamma = free\n", cfg);
  CHECK_FALSE(cfg.gamma_value.has_value());
}

TEST_CASE("config errors carry the file name and line number") {
  CHECK_THROWS_WITH_AS(overlay_text("[model]\nbogus = 1\n"),
                       doctest::Contains("cfg:2: unknown key 'bogus' in [model]"), ConfigError);
  CHECK_THROWS_WITH_AS(overlay_text("[weather]\n"), doctest::Contains("unknown section [weather]"),
                       ConfigError);
  CHECK_THROWS_WITH_AS(overlay_text("agents = 3\n"), doctest::Contains("before any [section]"),
                       ConfigError);
  CHECK_THROWS_WITH_AS(overlay_text("[model]\nagents\n"), doctest::Contains("expected 'key = value'"),
                       ConfigError);
  CHECK_THROWS_WITH_AS(overlay_text("[model]\nagents =\n"), doctest::Contains("has no value"),
                       ConfigError);
  CHECK_THROWS_WITH_AS(overlay_text("[model\n"), doctest::Contains("unterminated"), ConfigError);
  CHECK_THROWS_WITH_AS(overlay_text("[model]\nagents = few\n"), doctest::Contains("cfg:2"),
                       ConfigError);
  CHECK_THROWS_WITH_AS(overlay_text("[model]\nresponse = weekly\n"),
                       doctest::Contains("'prevalence' or 'cumulative'"), ConfigError);
  CHECK_THROWS_WITH_AS(overlay_text("[sampler]\nalgorithm = gibbs\n"),
                       doctest::Contains("'pmmh' or 'pg'"), ConfigError);
  CHECK_THROWS_AS(load_run_config("/nonexistent/absis.cfg"), ConfigError);
}

TEST_CASE("cross-field validation rejects out-of-range settings") {
  RunConfig cfg;
  cfg.particles = 1;
  CHECK_THROWS_WITH_AS(cfg.validate(), doctest::Contains("sampler.particles"), ConfigError);
  cfg = RunConfig{};
  cfg.iterations = 0;
  CHECK_THROWS_AS(cfg.validate(), ConfigError);
  cfg = RunConfig{};
  cfg.gamma_value = 1.0;
  CHECK_THROWS_WITH_AS(cfg.validate(), doctest::Contains("model.gamma"), ConfigError);
  cfg = RunConfig{};
  cfg.true_rho = 1.5;
  CHECK_THROWS_AS(cfg.validate(), ConfigError);
  cfg = RunConfig{};
  cfg.step = {0.1, -0.2};
  CHECK_THROWS_AS(cfg.validate(), ConfigError);
  cfg = RunConfig{};
  cfg.step.clear();
  CHECK_THROWS_AS(cfg.validate(), ConfigError);
  cfg = RunConfig{};
  cfg.prediction_draws = 0;
  CHECK_THROWS_AS(cfg.validate(), ConfigError);
  cfg = RunConfig{};
  cfg.horizon = -1;
  CHECK_THROWS_AS(cfg.validate(), ConfigError);
}

TEST_CASE("prior spellings") {
  const PriorDist n = parse_prior("normal 0 3");
  CHECK(n.kind == PriorDist::Kind::normal);
  CHECK(n.mu == 0.0);
  CHECK(n.sigma == 3.0);
  CHECK(parse_prior("tnormal+ 0.5 2").kind == PriorDist::Kind::truncated_positive);
  CHECK(parse_prior("tnormal- 1 2").kind == PriorDist::Kind::truncated_negative);
  CHECK_THROWS_WITH_AS(parse_prior("cauchy 0 1"), doctest::Contains("unknown family"), ConfigError);
  CHECK_THROWS_AS(parse_prior("normal 0"), ConfigError);
  CHECK_THROWS_AS(parse_prior("normal 0 0"), ConfigError);
  CHECK_THROWS_AS(parse_prior("normal 0 x"), ConfigError);

  const std::vector<PriorDist> list = parse_prior_list("normal 0 3 | tnormal+ 0 3");
  REQUIRE(list.size() == 2);
  CHECK(list[0].kind == PriorDist::Kind::normal);
  CHECK(list[1].kind == PriorDist::Kind::truncated_positive);
  CHECK_THROWS_WITH_AS(parse_prior_list("normal 0 3 ||"), doctest::Contains("empty entry"),
                       ConfigError);

  const RhoPrior flat = parse_rho_prior("beta 1 1");
  CHECK(flat.kind == RhoPrior::Kind::beta);
  CHECK(flat.a == 1.0);
  CHECK(flat.b == 1.0);
  const RhoPrior ln = parse_rho_prior("logitnormal 1.3862943611198906 1");
  CHECK(ln.kind == RhoPrior::Kind::logit_normal);
  CHECK(ln.mu == 1.3862943611198906);
  CHECK_THROWS_WITH_AS(parse_rho_prior("uniform 0 1"), doctest::Contains("unknown family"),
                       ConfigError);
  CHECK_THROWS_AS(parse_rho_prior("beta 0 1"), ConfigError);
  CHECK_THROWS_AS(parse_rho_prior("logitnormal 0 0"), ConfigError);
}

TEST_CASE("population builder: seeded binary and normal designs") {
  RunConfig cfg;
  cfg.agents = 50;
  cfg.covariates = "binary 0.4 7";
  const AgentPopulation pop = build_population(cfg);
  CHECK(pop.size() == 50);
  CHECK(pop.dim() == 2);
  int ones = 0;
  for (int i = 0; i < pop.size(); ++i) {
    CHECK(pop.covariate(i)[0] == 1.0);
    const double b = pop.covariate(i)[1];
    CHECK((b == 0.0 || b == 1.0));
    ones += b == 1.0;
  }
  CHECK(ones > 5);
  CHECK(ones < 40);

  const AgentPopulation again = build_population(cfg);
  for (int i = 0; i < pop.size(); ++i) CHECK(pop.covariate(i)[1] == again.covariate(i)[1]);
  cfg.covariates = "binary 0.4 8";
  const AgentPopulation other = build_population(cfg);
  bool same = true;
  for (int i = 0; i < pop.size(); ++i) same = same && pop.covariate(i)[1] == other.covariate(i)[1];
  CHECK_FALSE(same);

  cfg.covariates = "normal 3";
  const AgentPopulation cont = build_population(cfg);
  CHECK(cont.dim() == 2);
  CHECK(cont.covariate(4)[0] == 1.0);
  CHECK(cont.covariate(4)[1] != 0.0);

  cfg.covariates = "binary 0.4";
  CHECK_THROWS_WITH_AS(build_population(cfg), doctest::Contains("'binary <p> <seed>'"),
                       ConfigError);
  cfg.covariates = "binary 1.5 7";
  CHECK_THROWS_AS(build_population(cfg), ConfigError);
  cfg.covariates = "poisson 3";
  CHECK_THROWS_WITH_AS(build_population(cfg), doctest::Contains("unknown source"), ConfigError);
  cfg.covariates = "";
  CHECK_THROWS_AS(build_population(cfg), ConfigError);
  cfg.covariates = "binary 0.4 7";
  cfg.agents = 0;
  CHECK_THROWS_WITH_AS(build_population(cfg), doctest::Contains("model.agents"), ConfigError);
}

TEST_CASE("population builder: covariate files") {
  TempDir tmp;
  const std::string path = tmp.file("z.txt", "# design\n1 0.5\n1, -0.25\n\n1 0\n");
  RunConfig cfg;
  cfg.covariates = "file " + path;
  cfg.agents = 0;
  const AgentPopulation pop = build_population(cfg);
  CHECK(pop.size() == 3);
  CHECK(pop.dim() == 2);
  CHECK(pop.covariate(1)[1] == -0.25);

  cfg.agents = 3;
  CHECK_NOTHROW(build_population(cfg));
  cfg.agents = 4;
  CHECK_THROWS_WITH_AS(build_population(cfg), doctest::Contains("model.agents = 4"), ConfigError);

  cfg.agents = 0;
  cfg.covariates = "file " + tmp.file("ragged.txt", "1 0.5\n1\n");
  CHECK_THROWS_WITH_AS(build_population(cfg), doctest::Contains("differ in length"), ConfigError);
  cfg.covariates = "file " + tmp.file("empty.txt", "# nothing\n");
  CHECK_THROWS_WITH_AS(build_population(cfg), doctest::Contains("no covariate rows"), ConfigError);
  cfg.covariates = "file /nonexistent/z.txt";
  CHECK_THROWS_AS(build_population(cfg), ConfigError);
}

TEST_CASE("network builder resolves every spelling") {
  RunConfig cfg;
  cfg.network = "full";
  const Network full = build_network(cfg, 5);
  CHECK(full.size() == 5);
  CHECK(full.degree(0) == 4);
  cfg.network = "full 5";
  CHECK_THROWS_AS(build_network(cfg, 5), ConfigError);

  cfg.network = "grid8 3 4";
  const Network grid = build_network(cfg, 12);
  CHECK(grid.size() == 12);
  CHECK(grid.degree(0) == 3);  // open corner
  cfg.network = "grid8 3 3 wrap";
  CHECK(build_network(cfg, 9).degree(4) == 8);
  cfg.network = "grid8 3 4";
  CHECK_THROWS_WITH_AS(build_network(cfg, 10), doctest::Contains("does not cover"), ConfigError);
  cfg.network = "grid8 3";
  CHECK_THROWS_AS(build_network(cfg, 3), ConfigError);

  cfg.network = "blocks 2 3";
  const Network blocks = build_network(cfg, 5);
  CHECK(blocks.block_count() == 2);
  CHECK(blocks.block_of(0) == 0);
  CHECK(blocks.block_of(4) == 1);
  cfg.network = "blocks 1 4";
  CHECK_THROWS_WITH_AS(build_network(cfg, 5), doctest::Contains(">= 2 members"), ConfigError);
  cfg.network = "blocks 2 2";
  CHECK_THROWS_WITH_AS(build_network(cfg, 5), doctest::Contains("sum to 4"), ConfigError);

  TempDir tmp;
  cfg.network = "edges " + tmp.file("e.txt", "0 1\n1 2\n");
  const Network edges = build_network(cfg, 3);
  CHECK(edges.degree(1) == 2);
  CHECK_THROWS_WITH_AS(build_network(cfg, 7), doctest::Contains("expected 7"), ConfigError);

  cfg.network = "star 4";
  CHECK_THROWS_WITH_AS(build_network(cfg, 4), doctest::Contains("unknown kind"), ConfigError);
  cfg.network = "";
  CHECK_THROWS_AS(build_network(cfg, 4), ConfigError);
}

TEST_CASE("generating values come from the true_* fields") {
  RunConfig cfg;
  cfg.gamma_value = 0.1;
  CHECK_THROWS_WITH_AS(build_true_parameters(cfg), doctest::Contains("true_beta_alpha"),
                       ConfigError);
  cfg.true_beta_alpha = std::vector<double>{-2.0, 0.0};
  cfg.true_beta_lambda = std::vector<double>{-1.0, 2.0};
  cfg.true_rho = 0.8;
  const ParameterSet fixed = build_true_parameters(cfg);
  CHECK(fixed.gamma_fixed == 0.1);
  CHECK_FALSE(fixed.beta_gamma.has_value());
  CHECK(fixed.rho == 0.8);

  cfg.true_beta_gamma = std::vector<double>{-1.0, -3.0};
  CHECK_THROWS_WITH_AS(build_true_parameters(cfg), doctest::Contains("conflicts"), ConfigError);
  cfg.gamma_value.reset();
  const ParameterSet free = build_true_parameters(cfg);
  CHECK(free.beta_gamma == std::vector<double>{-1.0, -3.0});
  CHECK_FALSE(free.gamma_fixed.has_value());
  cfg.true_beta_gamma.reset();
  CHECK_THROWS_WITH_AS(build_true_parameters(cfg), doctest::Contains("true_beta_gamma"),
                       ConfigError);

  cfg.gamma_value = 0.1;
  cfg.true_rho = 0.8;
  cfg.true_beta_lambda = std::vector<double>{-1.0};  // dimension clash with beta_alpha
  CHECK_THROWS_WITH_AS(build_true_parameters(cfg), doctest::Contains("inconsistent"), ConfigError);
}

TEST_CASE("fitting requires dimension-consistent priors") {
  RunConfig cfg;
  CHECK_THROWS_WITH_AS(require_priors(cfg, 2), doctest::Contains("[priors] section is required"),
                       ConfigError);
  cfg = overlay_text(
      "[model]\ngamma = 0.1\n"
      "[priors]\nbeta_alpha = normal 0 3 | normal 0 3\n"
      "beta_lambda = normal 0 3 | tnormal+ 0 3\nrho = beta 1 1\n");
  CHECK_NOTHROW(require_priors(cfg, 2));
  CHECK_THROWS_WITH_AS(require_priors(cfg, 3), doctest::Contains("carries 2"), ConfigError);

  RunConfig free_gamma = cfg;
  free_gamma.gamma_value.reset();
  CHECK_THROWS_WITH_AS(require_priors(free_gamma, 2),
                       doctest::Contains("priors.beta_gamma is required"), ConfigError);
  RunConfig with_gamma = overlay_text("[priors]\nbeta_gamma = normal 0 3 | tnormal- 0 3\n", cfg);
  CHECK_THROWS_WITH_AS(require_priors(with_gamma, 2), doctest::Contains("conflicts"), ConfigError);
  with_gamma.gamma_value.reset();
  CHECK_NOTHROW(require_priors(with_gamma, 2));

  RunConfig lopsided = cfg;
  lopsided.priors->beta_lambda.pop_back();
  CHECK_THROWS_WITH_AS(require_priors(lopsided, 2), doctest::Contains("inconsistent"), ConfigError);
}

TEST_CASE("a single step size broadcasts across the sampler coordinates") {
  RunConfig cfg;
  const SamplerLayout fixed{2, false, 0.1};
  ProposalKernel kernel = build_kernel(cfg, fixed);
  CHECK(kernel.step == std::vector<double>(5, 0.1));

  cfg.step = {0.1, 0.2, 0.3, 0.4, 0.5};
  kernel = build_kernel(cfg, fixed);
  CHECK(kernel.step.back() == 0.5);

  cfg.step = {0.1, 0.2};
  CHECK_THROWS_WITH_AS(build_kernel(cfg, fixed), doctest::Contains("needs 1 or 5 entries"),
                       ConfigError);
}

TEST_CASE("cruise outbreak preset carries the published totals") {
  const Preset* p = find_preset("diamond");
  REQUIRE(p != nullptr);
  CHECK(p->name == "diamond");
  const RunConfig& cfg = p->config;
  CHECK(cfg.agents == 3711);
  CHECK(cfg.steps == 30);
  CHECK(cfg.covariates == "preset");
  CHECK(cfg.network == "preset");
  CHECK(cfg.gamma_value == doctest::Approx(1.0 / 13.5).epsilon(1e-15));
  CHECK(cfg.response == ResponseType::prevalence);
  CHECK(cfg.algorithm == "pmmh");
  CHECK(cfg.particles == 100);
  CHECK(cfg.iterations == 10000);
  CHECK(cfg.burn_in == 10000);
  CHECK(cfg.step == std::vector<double>{0.1});
  CHECK(cfg.seed == 20200120);
  CHECK(cfg.data == "preset");
  CHECK(cfg.horizon == 30);
  CHECK_NOTHROW(cfg.validate());

  REQUIRE(cfg.priors.has_value());
  CHECK(cfg.priors->beta_alpha.size() == 2);
  CHECK(cfg.priors->beta_alpha[0].kind == PriorDist::Kind::normal);
  CHECK(cfg.priors->beta_alpha[0].sigma == 3.0);
  CHECK(cfg.priors->beta_lambda[1].kind == PriorDist::Kind::truncated_positive);
  CHECK_FALSE(cfg.priors->beta_gamma.has_value());
  CHECK(cfg.priors->rho.kind == RhoPrior::Kind::logit_normal);
  CHECK(cfg.priors->rho.mu == doctest::Approx(1.3862943611198906).epsilon(1e-15));
  CHECK(cfg.priors->rho.sigma == 1.0);

  CHECK(p->population.size() == 3711);
  CHECK(p->population.dim() == 2);
  int elderly = 0;
  for (int i = 0; i < p->population.size(); ++i) {
    CHECK(p->population.covariate(i)[0] == 1.0);
    elderly += p->population.covariate(i)[1] == 1.0;
  }
  CHECK(elderly == 2165);

  REQUIRE(p->network.block_structured());
  REQUIRE(p->network.block_count() == 2);
  const auto sizes = p->network.block_sizes();
  CHECK(sizes[0] == 1045);
  CHECK(sizes[1] == 2666);
  CHECK(p->network.size() == 3711);

  REQUIRE(p->data.has_value());
  const CaseSeries& cases = *p->data;
  CHECK(cases.first_day == 0);
  REQUIRE(cases.counts.size() == 31);
  CHECK(cases.counts[0] == 0);
  // pre-announcement ramp: linear from 0 (day 0) to the first total (day 16)
  CHECK(cases.counts[1] == 1);
  CHECK(cases.counts[4] == 3);  // 2.5 rounds away from zero
  CHECK(cases.counts[8] == 5);
  CHECK(cases.counts[15] == 9);
  CHECK(cases.counts[16] == 10);
  CHECK(cases.counts[17] == 20);
  CHECK(cases.counts[18] == 42);   // laboratory-batch day, midpoint of 20 and 64
  CHECK(cases.counts[21] == 105);  // laboratory-batch day, 70 + (174-70)/3
  CHECK(cases.counts[22] == 139);  // unannounced day, 70 + 2*(174-70)/3
  CHECK(cases.counts[23] == 174);
  CHECK(cases.counts[25] == 252);  // unannounced day, midpoint of 218 and 285
  CHECK(cases.counts[30] == 619);
  for (std::size_t d = 0; d < cases.counts.size(); ++d)
    CHECK(cases.interpolated[d] ==
          ((d >= 1 && d <= 15) || d == 18 || d == 21 || d == 22 || d == 25));

  CHECK_FALSE(p->true_parameters.has_value());

  // the seeded age/role assignment is reproducible
  const Preset fresh = diamond_princess_preset();
  for (int i = 0; i < 100; ++i)
    CHECK(fresh.population.covariate(i)[1] == p->population.covariate(i)[1]);
  CHECK(fresh.network.block_of(17) == p->network.block_of(17));
}

TEST_CASE("lattice demo preset matches its declared generating process") {
  const Preset* p = find_preset("lattice30");
  REQUIRE(p != nullptr);
  const RunConfig& cfg = p->config;
  CHECK(cfg.agents == 30);
  CHECK(cfg.steps == 30);
  CHECK_FALSE(cfg.gamma_value.has_value());
  CHECK(cfg.true_beta_alpha->at(0) == doctest::Approx(-1.3862943611198906).epsilon(1e-15));
  CHECK(cfg.true_beta_lambda == std::vector<double>{1.0, 2.0});
  CHECK(cfg.true_beta_gamma == std::vector<double>{-1.0, -3.0});
  CHECK(cfg.true_rho == 0.8);
  CHECK_NOTHROW(cfg.validate());
  REQUIRE(cfg.priors.has_value());
  REQUIRE(cfg.priors->beta_gamma.has_value());
  CHECK(cfg.priors->beta_gamma->at(1).kind == PriorDist::Kind::truncated_negative);

  CHECK(p->population.size() == 30);
  CHECK(p->population.dim() == 2);
  CHECK(p->population.covariate(7)[0] == 1.0);

  CHECK(p->network.size() == 30);
  for (int i = 0; i < 30; ++i) CHECK(p->network.degree(i) == 8);  // wrapped lattice
  CHECK_FALSE(p->network.block_structured());

  CHECK_FALSE(p->data.has_value());
  REQUIRE(p->true_parameters.has_value());
  CHECK(p->true_parameters->beta_lambda == std::vector<double>{1.0, 2.0});
  CHECK(p->true_parameters->beta_gamma == std::vector<double>{-1.0, -3.0});
  CHECK_FALSE(p->true_parameters->gamma_fixed.has_value());
  CHECK(p->true_parameters->rho == 0.8);
}

TEST_CASE("the shipped cruise data file reproduces the embedded series") {
  const CaseSeries file =
      load_case_series(std::string(ABSIS_SOURCE_DIR) + "/data/diamond_princess.csv", true);
  const Preset* p = find_preset("diamond");
  REQUIRE(p != nullptr);
  CHECK(file.first_day == p->data->first_day);
  CHECK(file.counts == p->data->counts);
  CHECK(file.interpolated == p->data->interpolated);
}

TEST_CASE("preset lookup") {
  CHECK(find_preset("nope") == nullptr);
  CHECK(find_preset("diamond") == find_preset("diamond"));  // cached instance
  CHECK(preset_names() == std::vector<std::string>{"diamond", "lattice30"});
}
