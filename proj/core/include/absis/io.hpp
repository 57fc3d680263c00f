#pragma once

#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "absis/pmcmc.hpp"

namespace absis {

// Bad user input -- files, configuration, flags -- as opposed to a
// programming error. The CLI maps this to the usage exit code.
class ConfigError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

// Daily counts on a contiguous day grid starting at first_day.
struct CaseSeries {
  int first_day = 0;
  std::vector<int> counts;
  std::vector<bool> interpolated;  // true where a missing day was filled in

  int size() const { return static_cast<int>(counts.size()); }
  int day(int i) const { return first_day + i; }
};

// Reads "day,count" CSV ('#' comments, optional header, blank lines ignored).
// Days must be strictly increasing and counts nonnegative integers. Interior
// gaps are filled by linear interpolation rounded to the nearest integer and
// flagged in `interpolated`; with interpolate=false a gap is an error.
// Malformed input raises ConfigError naming "<name>:<line>".
CaseSeries parse_case_series(std::istream& in, const std::string& name, bool interpolate = true);
CaseSeries load_case_series(const std::string& path, bool interpolate = true);

void write_case_series_csv(const CaseSeries& series, std::ostream& out);

// Chain CSV round-trip. Header: iter,<coordinate names>,loglik,accepted with
// one row per kept draw; rho is stored on its natural scale and every number
// is printed with enough digits to reproduce the double exactly.
void write_chain_csv(const PosteriorChain& chain, const SamplerLayout& layout,
                     std::ostream& out);

struct LoadedChain {
  PosteriorChain chain;
  SamplerLayout layout;
};

// gamma_fixed is required exactly when the header carries no beta_g block.
LoadedChain parse_chain_csv(std::istream& in, const std::string& name,
                            const std::optional<double>& gamma_fixed);
LoadedChain load_chain_csv(const std::string& path, const std::optional<double>& gamma_fixed);

// Shortest-exact decimal for a double ("%.17g" fallback-free round trip).
std::string format_double(double v);

// Opens for writing, creating parent directories; throws ConfigError on
// failure. Used by the CLI so every output path fails the same way.
void write_text_file(const std::string& path, const std::string& contents);
std::string read_text_file(const std::string& path);

}  // namespace absis
