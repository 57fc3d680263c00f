#include "absis/io.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace absis {

namespace {

std::string trim(const std::string& s) {
  const auto begin = s.find_first_not_of(" \t\r");
  if (begin == std::string::npos) return {};
  const auto end = s.find_last_not_of(" \t\r");
  return s.substr(begin, end - begin + 1);
}

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> fields;
  std::size_t start = 0;
  while (true) {
    const auto comma = line.find(',', start);
    if (comma == std::string::npos) {
      fields.push_back(trim(line.substr(start)));
      break;
    }
    fields.push_back(trim(line.substr(start, comma - start)));
    start = comma + 1;
  }
  return fields;
}

[[noreturn]] void fail_at(const std::string& name, int line, const std::string& msg) {
  throw ConfigError(name + ":" + std::to_string(line) + ": " + msg);
}

long parse_long(const std::string& tok, const std::string& name, int line,
                const std::string& what) {
  long value = 0;
  const char* first = tok.data();
  const char* last = tok.data() + tok.size();
  const auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc{} || ptr != last)
    fail_at(name, line, "expected an integer " + what + ", got '" + tok + "'");
  return value;
}

double parse_double_tok(const std::string& tok, const std::string& name, int line,
                        const std::string& what) {
  double value = 0;
  const char* first = tok.data();
  const char* last = tok.data() + tok.size();
  const auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc{} || ptr != last)
    fail_at(name, line, "expected a number " + what + ", got '" + tok + "'");
  return value;
}

bool looks_like_header(const std::string& first_field) {
  for (char c : first_field)
    if (std::isalpha(static_cast<unsigned char>(c))) return true;
  return false;
}

}  // namespace

CaseSeries parse_case_series(std::istream& in, const std::string& name, bool interpolate) {
  std::vector<std::pair<int, int>> rows;  // (day, count)
  std::string line;
  int line_no = 0;
  bool seen_data = false;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string body = trim(line.substr(0, line.find('#')));
    if (body.empty()) continue;
    const auto fields = split_csv(body);
    if (!seen_data && looks_like_header(fields[0])) continue;  // "day,count"
    if (fields.size() != 2) fail_at(name, line_no, "expected two fields 'day,count'");
    const long day = parse_long(fields[0], name, line_no, "day");
    const long count = parse_long(fields[1], name, line_no, "count");
    if (count < 0) fail_at(name, line_no, "negative count");
    if (!rows.empty() && day <= rows.back().first)
      fail_at(name, line_no, "days must be strictly increasing");
    rows.emplace_back(static_cast<int>(day), static_cast<int>(count));
    seen_data = true;
  }
  if (rows.empty()) throw ConfigError(name + ": no case counts found");

  CaseSeries series;
  series.first_day = rows.front().first;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (i > 0) {
      const auto [d0, c0] = rows[i - 1];
      const auto [d1, c1] = rows[i];
      if (d1 > d0 + 1 && !interpolate)
        throw ConfigError(name + ": day " + std::to_string(d0 + 1) +
                          " is missing and interpolation is disabled");
      for (int d = d0 + 1; d < d1; ++d) {
        const double frac = static_cast<double>(d - d0) / (d1 - d0);
        const long filled = std::lround(c0 + frac * (c1 - c0));
        series.counts.push_back(static_cast<int>(filled));
        series.interpolated.push_back(true);
      }
    }
    series.counts.push_back(rows[i].second);
    series.interpolated.push_back(false);
  }
  return series;
}

CaseSeries load_case_series(const std::string& path, bool interpolate) {
  std::ifstream in(path);
  if (!in) throw ConfigError(path + ": cannot open for reading");
  return parse_case_series(in, path, interpolate);
}

void write_case_series_csv(const CaseSeries& series, std::ostream& out) {
  out << "day,count\n";
  for (int i = 0; i < series.size(); ++i)
    out << series.day(i) << ',' << series.counts[i] << '\n';
}

std::string format_double(double v) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  if (ec != std::errc{}) {  // unreachable with a 64-byte buffer
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
  }
  return std::string(buf, ptr);
}

void write_chain_csv(const PosteriorChain& chain, const SamplerLayout& layout,
                     std::ostream& out) {
  const auto names = layout.names();
  out << "iter";
  for (const auto& n : names) out << ',' << n;
  out << ",loglik,accepted\n";
  for (std::size_t i = 0; i < chain.draws.size(); ++i) {
    const ChainDraw& draw = chain.draws[i];
    if (draw.theta.dim() != layout.dim || draw.theta.gamma_free() != layout.gamma_free)
      throw std::logic_error("write_chain_csv: draw does not match the column layout");
    out << (i + 1);
    for (double b : draw.theta.beta_alpha) out << ',' << format_double(b);
    for (double b : draw.theta.beta_lambda) out << ',' << format_double(b);
    if (draw.theta.beta_gamma)
      for (double b : *draw.theta.beta_gamma) out << ',' << format_double(b);
    out << ',' << format_double(draw.theta.rho);
    out << ',' << format_double(draw.log_likelihood);
    out << ',' << (draw.accepted ? 1 : 0) << '\n';
  }
}

LoadedChain parse_chain_csv(std::istream& in, const std::string& name,
                            const std::optional<double>& gamma_fixed) {
  std::string line;
  int line_no = 0;
  std::vector<std::string> header;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string body = trim(line.substr(0, line.find('#')));
    if (body.empty()) continue;
    header = split_csv(body);
    break;
  }
  if (header.empty()) throw ConfigError(name + ": empty chain file");

  int dim = 0, lambda_cols = 0, gamma_cols = 0;
  for (const auto& col : header) {
    if (col.rfind("beta_a", 0) == 0) ++dim;
    if (col.rfind("beta_l", 0) == 0) ++lambda_cols;
    if (col.rfind("beta_g", 0) == 0) ++gamma_cols;
  }
  const bool gamma_free = gamma_cols > 0;
  if (gamma_free == gamma_fixed.has_value())
    throw ConfigError(name + ": gamma_fixed must be supplied exactly when the chain has no "
                             "beta_g columns");
  const SamplerLayout layout{dim, gamma_free, gamma_fixed};
  std::vector<std::string> expected = layout.names();
  expected.insert(expected.begin(), "iter");
  expected.push_back("loglik");
  expected.push_back("accepted");
  if (dim == 0 || lambda_cols != dim || (gamma_free && gamma_cols != dim) ||
      header != expected) {
    std::string want;
    for (std::size_t i = 0; i < expected.size(); ++i)
      want += (i ? "," : "") + expected[i];
    fail_at(name, line_no, "unrecognized chain header (expected '" + want + "')");
  }

  LoadedChain loaded;
  loaded.layout = layout;
  loaded.chain.trajectory_thin = 0;
  long accepted_total = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string body = trim(line.substr(0, line.find('#')));
    if (body.empty()) continue;
    const auto fields = split_csv(body);
    if (fields.size() != expected.size())
      fail_at(name, line_no, "expected " + std::to_string(expected.size()) + " fields");
    parse_long(fields[0], name, line_no, "iteration index");
    ChainDraw draw;
    std::size_t k = 1;
    for (int i = 0; i < dim; ++i)
      draw.theta.beta_alpha.push_back(parse_double_tok(fields[k++], name, line_no, "beta_a"));
    for (int i = 0; i < dim; ++i)
      draw.theta.beta_lambda.push_back(parse_double_tok(fields[k++], name, line_no, "beta_l"));
    if (gamma_free) {
      draw.theta.beta_gamma.emplace();
      for (int i = 0; i < dim; ++i)
        draw.theta.beta_gamma->push_back(parse_double_tok(fields[k++], name, line_no, "beta_g"));
    } else {
      draw.theta.gamma_fixed = gamma_fixed;
    }
    draw.theta.rho = parse_double_tok(fields[k++], name, line_no, "rho");
    draw.log_likelihood = parse_double_tok(fields[k++], name, line_no, "loglik");
    const long acc = parse_long(fields[k++], name, line_no, "accepted flag");
    if (acc != 0 && acc != 1) fail_at(name, line_no, "accepted flag must be 0 or 1");
    draw.accepted = acc == 1;
    accepted_total += acc;
    draw.theta.validate();
    loaded.chain.draws.push_back(std::move(draw));
  }
  if (loaded.chain.draws.empty()) throw ConfigError(name + ": chain has no draws");
  loaded.chain.acceptance_rate =
      static_cast<double>(accepted_total) / static_cast<double>(loaded.chain.draws.size());
  return loaded;
}

LoadedChain load_chain_csv(const std::string& path, const std::optional<double>& gamma_fixed) {
  std::ifstream in(path);
  if (!in) throw ConfigError(path + ": cannot open for reading");
  return parse_chain_csv(in, path, gamma_fixed);
}

void write_text_file(const std::string& path, const std::string& contents) {
  const std::filesystem::path p(path);
  if (p.has_parent_path()) {
    std::error_code ec;
    std::filesystem::create_directories(p.parent_path(), ec);
    if (ec) throw ConfigError(path + ": cannot create parent directory (" + ec.message() + ")");
  }
  std::ofstream out(p, std::ios::binary);
  if (!out) throw ConfigError(path + ": cannot open for writing");
  out << contents;
  out.flush();
  if (!out) throw ConfigError(path + ": write failed");
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError(path + ": cannot open for reading");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

}  // namespace absis
