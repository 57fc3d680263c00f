#include "absis/config.hpp"

#include <charconv>
#include <fstream>
#include <istream>
#include <limits>
#include <sstream>

namespace absis {

namespace {

std::string trim(const std::string& s) {
  const auto begin = s.find_first_not_of(" \t\r");
  if (begin == std::string::npos) return {};
  const auto end = s.find_last_not_of(" \t\r");
  return s.substr(begin, end - begin + 1);
}

std::vector<std::string> tokens(const std::string& text) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : text) {
    if (c == ' ' || c == '\t' || c == ',') {
      if (!cur.empty()) out.push_back(std::move(cur));
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  if (!cur.empty()) out.push_back(std::move(cur));
  return out;
}

double to_double(const std::string& tok, const std::string& ctx) {
  double v = 0;
  const auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
  if (ec != std::errc{} || ptr != tok.data() + tok.size())
    throw ConfigError(ctx + ": expected a number, got '" + tok + "'");
  return v;
}

long to_long(const std::string& tok, const std::string& ctx) {
  long v = 0;
  const auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
  if (ec != std::errc{} || ptr != tok.data() + tok.size())
    throw ConfigError(ctx + ": expected an integer, got '" + tok + "'");
  return v;
}

std::uint64_t to_u64(const std::string& tok, const std::string& ctx) {
  std::uint64_t v = 0;
  const auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
  if (ec != std::errc{} || ptr != tok.data() + tok.size())
    throw ConfigError(ctx + ": expected a nonnegative integer, got '" + tok + "'");
  return v;
}

std::vector<double> to_doubles(const std::string& text, const std::string& ctx) {
  std::vector<double> out;
  for (const auto& tok : tokens(text)) out.push_back(to_double(tok, ctx));
  if (out.empty()) throw ConfigError(ctx + ": expected at least one number");
  return out;
}

bool to_bool(const std::string& tok, const std::string& ctx) {
  if (tok == "true" || tok == "yes" || tok == "1") return true;
  if (tok == "false" || tok == "no" || tok == "0") return false;
  throw ConfigError(ctx + ": expected true/false, got '" + tok + "'");
}

}  // namespace

PriorDist parse_prior(const std::string& text) {
  const auto toks = tokens(text);
  if (toks.size() != 3)
    throw ConfigError("prior '" + text + "': expected '<family> <mu> <sd>'");
  PriorDist p;
  if (toks[0] == "normal")
    p.kind = PriorDist::Kind::normal;
  else if (toks[0] == "tnormal+")
    p.kind = PriorDist::Kind::truncated_positive;
  else if (toks[0] == "tnormal-")
    p.kind = PriorDist::Kind::truncated_negative;
  else
    throw ConfigError("prior '" + text + "': unknown family '" + toks[0] +
                      "' (normal, tnormal+, tnormal-)");
  p.mu = to_double(toks[1], "prior '" + text + "'");
  p.sigma = to_double(toks[2], "prior '" + text + "'");
  if (!(p.sigma > 0)) throw ConfigError("prior '" + text + "': sd must be positive");
  return p;
}

std::vector<PriorDist> parse_prior_list(const std::string& text) {
  std::vector<PriorDist> out;
  std::size_t start = 0;
  while (start <= text.size()) {
    const auto bar = text.find('|', start);
    const std::string piece =
        trim(bar == std::string::npos ? text.substr(start) : text.substr(start, bar - start));
    if (piece.empty()) throw ConfigError("prior list '" + text + "': empty entry");
    out.push_back(parse_prior(piece));
    if (bar == std::string::npos) break;
    start = bar + 1;
  }
  return out;
}

RhoPrior parse_rho_prior(const std::string& text) {
  const auto toks = tokens(text);
  if (toks.size() != 3)
    throw ConfigError("rho prior '" + text + "': expected '<family> <p1> <p2>'");
  RhoPrior p;
  if (toks[0] == "beta") {
    p.kind = RhoPrior::Kind::beta;
    p.a = to_double(toks[1], "rho prior");
    p.b = to_double(toks[2], "rho prior");
    if (!(p.a > 0 && p.b > 0))
      throw ConfigError("rho prior '" + text + "': beta needs a, b > 0");
  } else if (toks[0] == "logitnormal") {
    p.kind = RhoPrior::Kind::logit_normal;
    p.mu = to_double(toks[1], "rho prior");
    p.sigma = to_double(toks[2], "rho prior");
    if (!(p.sigma > 0)) throw ConfigError("rho prior '" + text + "': sd must be positive");
  } else {
    throw ConfigError("rho prior '" + text + "': unknown family '" + toks[0] +
                      "' (beta, logitnormal)");
  }
  return p;
}

void RunConfig::validate() const {
  if (agents < 0) throw ConfigError("model.agents must be >= 0");
  if (steps < 0) throw ConfigError("model.steps must be >= 0");
  if (gamma_value && !(*gamma_value > 0.0 && *gamma_value < 1.0))
    throw ConfigError("model.gamma must lie in (0, 1) or be 'free'");
  if (true_rho && !(*true_rho > 0.0 && *true_rho <= 1.0))
    throw ConfigError("model.true_rho must lie in (0, 1]");
  if (algorithm != "pmmh" && algorithm != "pg")
    throw ConfigError("sampler.algorithm must be 'pmmh' or 'pg'");
  if (particles < 2) throw ConfigError("sampler.particles must be >= 2");
  if (iterations < 1) throw ConfigError("sampler.iterations must be >= 1");
  if (burn_in < 0) throw ConfigError("sampler.burn_in must be >= 0");
  if (thin < 0) throw ConfigError("sampler.thin must be >= 0");
  if (step.empty()) throw ConfigError("sampler.step must carry at least one entry");
  for (double s : step)
    if (!(s >= 0)) throw ConfigError("sampler.step entries must be >= 0");
  if (prediction_draws < 1) throw ConfigError("io.prediction_draws must be >= 1");
  if (horizon && *horizon < 0) throw ConfigError("io.horizon must be >= 0");
  if (priors) priors->validate();
}

void overlay_run_config(RunConfig& cfg, std::istream& in, const std::string& name) {
  std::string line, section;
  int line_no = 0;
  auto fail = [&](const std::string& msg) -> void {
    throw ConfigError(name + ":" + std::to_string(line_no) + ": " + msg);
  };
  while (std::getline(in, line)) {
    ++line_no;
    const std::string body = trim(line.substr(0, line.find('#')));
    if (body.empty()) continue;
    if (body.front() == '[') {
      if (body.back() != ']') fail("unterminated section header");
      section = trim(body.substr(1, body.size() - 2));
      if (section != "model" && section != "priors" && section != "sampler" && section != "io")
        fail("unknown section [" + section + "]");
      continue;
    }
    const auto eq = body.find('=');
    if (eq == std::string::npos) fail("expected 'key = value'");
    const std::string key = trim(body.substr(0, eq));
    const std::string value = trim(body.substr(eq + 1));
    if (section.empty()) fail("key '" + key + "' appears before any [section]");
    if (value.empty()) fail("key '" + key + "' has no value");
    const std::string ctx = name + ":" + std::to_string(line_no) + ": " + section + "." + key;

    if (section == "model") {
      if (key == "agents")
        cfg.agents = static_cast<int>(to_long(value, ctx));
      else if (key == "steps")
        cfg.steps = static_cast<int>(to_long(value, ctx));
      else if (key == "covariates")
        cfg.covariates = value;
      else if (key == "network")
        cfg.network = value;
      else if (key == "gamma") {
        if (value == "free")
          cfg.gamma_value.reset();
        else
          cfg.gamma_value = to_double(value, ctx);
      } else if (key == "response") {
        if (value == "prevalence")
          cfg.response = ResponseType::prevalence;
        else if (value == "cumulative")
          cfg.response = ResponseType::cumulative;
        else
          fail("response must be 'prevalence' or 'cumulative'");
      } else if (key == "true_beta_alpha")
        cfg.true_beta_alpha = to_doubles(value, ctx);
      else if (key == "true_beta_lambda")
        cfg.true_beta_lambda = to_doubles(value, ctx);
      else if (key == "true_beta_gamma")
        cfg.true_beta_gamma = to_doubles(value, ctx);
      else if (key == "true_rho")
        cfg.true_rho = to_double(value, ctx);
      else
        fail("unknown key '" + key + "' in [model]");
    } else if (section == "priors") {
      if (!cfg.priors) cfg.priors.emplace();
      if (key == "beta_alpha")
        cfg.priors->beta_alpha = parse_prior_list(value);
      else if (key == "beta_lambda")
        cfg.priors->beta_lambda = parse_prior_list(value);
      else if (key == "beta_gamma")
        cfg.priors->beta_gamma = parse_prior_list(value);
      else if (key == "rho")
        cfg.priors->rho = parse_rho_prior(value);
      else
        fail("unknown key '" + key + "' in [priors]");
    } else if (section == "sampler") {
      if (key == "algorithm") {
        if (value != "pmmh" && value != "pg") fail("algorithm must be 'pmmh' or 'pg'");
        cfg.algorithm = value;
      } else if (key == "particles")
        cfg.particles = static_cast<int>(to_long(value, ctx));
      else if (key == "iterations")
        cfg.iterations = static_cast<int>(to_long(value, ctx));
      else if (key == "burn_in")
        cfg.burn_in = static_cast<int>(to_long(value, ctx));
      else if (key == "thin")
        cfg.thin = static_cast<int>(to_long(value, ctx));
      else if (key == "step")
        cfg.step = to_doubles(value, ctx);
      else if (key == "seed")
        cfg.seed = to_u64(value, ctx);
      else
        fail("unknown key '" + key + "' in [sampler]");
    } else {  // io
      if (key == "data")
        cfg.data = value;
      else if (key == "interpolate")
        cfg.interpolate = to_bool(value, ctx);
      else if (key == "chain")
        cfg.chain = value;
      else if (key == "summary")
        cfg.summary = value;
      else if (key == "prediction")
        cfg.prediction = value;
      else if (key == "simulation")
        cfg.simulation = value;
      else if (key == "states")
        cfg.states = value;
      else if (key == "prediction_draws")
        cfg.prediction_draws = static_cast<int>(to_long(value, ctx));
      else if (key == "horizon")
        cfg.horizon = static_cast<int>(to_long(value, ctx));
      else
        fail("unknown key '" + key + "' in [io]");
    }
  }
}

RunConfig load_run_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(path + ": cannot open for reading");
  RunConfig cfg;
  overlay_run_config(cfg, in, path);
  return cfg;
}

AgentPopulation build_population(const RunConfig& cfg) {
  const auto toks = tokens(cfg.covariates);
  if (toks.empty())
    throw ConfigError("model.covariates is not set (binary/normal/file)");
  const std::string& kind = toks[0];
  if (kind == "binary") {
    if (toks.size() != 3)
      throw ConfigError("model.covariates: expected 'binary <p> <seed>'");
    if (cfg.agents < 1) throw ConfigError("model.agents must be >= 1");
    const double p = to_double(toks[1], "model.covariates");
    if (!(p >= 0.0 && p <= 1.0))
      throw ConfigError("model.covariates: binary probability must lie in [0, 1]");
    return AgentPopulation::bernoulli_binary(cfg.agents, p, to_u64(toks[2], "model.covariates"));
  }
  if (kind == "normal") {
    if (toks.size() != 2) throw ConfigError("model.covariates: expected 'normal <seed>'");
    if (cfg.agents < 1) throw ConfigError("model.agents must be >= 1");
    return AgentPopulation::standard_normal(cfg.agents, to_u64(toks[1], "model.covariates"));
  }
  if (kind == "file") {
    if (toks.size() != 2) throw ConfigError("model.covariates: expected 'file <path>'");
    std::ifstream in(toks[1]);
    if (!in) throw ConfigError(toks[1] + ": cannot open for reading");
    std::vector<std::vector<double>> rows;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
      ++line_no;
      const std::string body = trim(line.substr(0, line.find('#')));
      if (body.empty()) continue;
      rows.push_back(to_doubles(body, toks[1] + ":" + std::to_string(line_no)));
      if (rows.size() > 1 && rows.back().size() != rows.front().size())
        throw ConfigError(toks[1] + ":" + std::to_string(line_no) +
                          ": covariate rows differ in length");
    }
    if (rows.empty()) throw ConfigError(toks[1] + ": no covariate rows found");
    if (cfg.agents > 0 && cfg.agents != static_cast<int>(rows.size()))
      throw ConfigError(toks[1] + ": holds " + std::to_string(rows.size()) +
                        " rows but model.agents = " + std::to_string(cfg.agents));
    return AgentPopulation::from_rows(rows);
  }
  throw ConfigError("model.covariates: unknown source '" + kind +
                    "' (binary, normal, file)");
}

Network build_network(const RunConfig& cfg, int n_agents) {
  const auto toks = tokens(cfg.network);
  if (toks.empty()) throw ConfigError("model.network is not set");
  const std::string& kind = toks[0];
  if (kind == "full") {
    if (toks.size() != 1) throw ConfigError("model.network: 'full' takes no arguments");
    return Network::fully_connected(n_agents);
  }
  if (kind == "grid8") {
    if (toks.size() != 3 && !(toks.size() == 4 && toks[3] == "wrap"))
      throw ConfigError("model.network: expected 'grid8 <rows> <cols> [wrap]'");
    const int rows = static_cast<int>(to_long(toks[1], "model.network"));
    const int cols = static_cast<int>(to_long(toks[2], "model.network"));
    if (rows * cols != n_agents)
      throw ConfigError("model.network: grid8 " + std::to_string(rows) + "x" +
                        std::to_string(cols) + " does not cover " + std::to_string(n_agents) +
                        " agents");
    return Network::grid8(rows, cols, toks.size() == 4);
  }
  if (kind == "blocks") {
    if (toks.size() < 2) throw ConfigError("model.network: expected 'blocks <size>...'");
    std::vector<int> labels;
    labels.reserve(n_agents);
    for (std::size_t b = 1; b < toks.size(); ++b) {
      const long size = to_long(toks[b], "model.network");
      if (size < 2) throw ConfigError("model.network: every block needs >= 2 members");
      labels.insert(labels.end(), static_cast<std::size_t>(size), static_cast<int>(b - 1));
    }
    if (static_cast<int>(labels.size()) != n_agents)
      throw ConfigError("model.network: block sizes sum to " + std::to_string(labels.size()) +
                        ", expected " + std::to_string(n_agents));
    return Network::from_blocks(labels);
  }
  if (kind == "edges") {
    if (toks.size() != 2) throw ConfigError("model.network: expected 'edges <path>'");
    Network net = Network::from_edge_list(toks[1]);
    if (net.size() != n_agents)
      throw ConfigError(toks[1] + ": edge list covers " + std::to_string(net.size()) +
                        " agents, expected " + std::to_string(n_agents));
    return net;
  }
  throw ConfigError("model.network: unknown kind '" + kind +
                    "' (full, grid8, blocks, edges)");
}

ParameterSet build_true_parameters(const RunConfig& cfg) {
  if (!cfg.true_beta_alpha || !cfg.true_beta_lambda || !cfg.true_rho)
    throw ConfigError(
        "generating values are required: set model.true_beta_alpha, true_beta_lambda and "
        "true_rho (plus true_beta_gamma when gamma = free)");
  ParameterSet theta;
  theta.beta_alpha = *cfg.true_beta_alpha;
  theta.beta_lambda = *cfg.true_beta_lambda;
  if (cfg.gamma_value) {
    if (cfg.true_beta_gamma)
      throw ConfigError("model.true_beta_gamma conflicts with a fixed model.gamma");
    theta.gamma_fixed = cfg.gamma_value;
  } else {
    if (!cfg.true_beta_gamma)
      throw ConfigError("model.gamma is free, so model.true_beta_gamma is required");
    theta.beta_gamma = cfg.true_beta_gamma;
  }
  theta.rho = *cfg.true_rho;
  try {
    theta.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("model.true_* values are inconsistent: ") + e.what());
  }
  return theta;
}

PriorSpec require_priors(const RunConfig& cfg, int covariate_dim) {
  if (!cfg.priors) throw ConfigError("a [priors] section is required for this command");
  PriorSpec priors = *cfg.priors;
  try {
    priors.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("[priors] is inconsistent: ") + e.what());
  }
  if (priors.dim() != covariate_dim)
    throw ConfigError("[priors] carries " + std::to_string(priors.dim()) +
                      " coefficients per block but the covariates have dimension " +
                      std::to_string(covariate_dim));
  if (priors.gamma_free() == cfg.gamma_value.has_value())
    throw ConfigError(cfg.gamma_value
                          ? "priors.beta_gamma conflicts with a fixed model.gamma"
                          : "model.gamma is free, so priors.beta_gamma is required");
  return priors;
}

ProposalKernel build_kernel(const RunConfig& cfg, const SamplerLayout& layout) {
  ProposalKernel kernel;
  if (cfg.step.size() == 1)
    kernel.step.assign(layout.size(), cfg.step[0]);
  else
    kernel.step = cfg.step;
  if (static_cast<int>(kernel.step.size()) != layout.size())
    throw ConfigError("sampler.step needs 1 or " + std::to_string(layout.size()) +
                      " entries, got " + std::to_string(cfg.step.size()));
  return kernel;
}

}  // namespace absis
