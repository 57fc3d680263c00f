#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <stdexcept>

namespace absis {

// SplitMix64 finalizer: full-avalanche 64-bit mix.
constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
  z ^= z >> 30;
  z *= 0xbf58476d1ce4e5b9ULL;
  z ^= z >> 27;
  z *= 0x94d049bb133111ebULL;
  z ^= z >> 31;
  return z;
}

// Counter-based random stream in the SplitMix64 family. The state walks a
// Weyl sequence and every output is the mixed counter, so streams are cheap
// to construct and cheap to fork. Forking children keyed on (time step,
// particle index, ...) gives every concurrent unit of work its own stream,
// which makes results independent of thread count and scheduling order.
class RngStream {
public:
  explicit RngStream(std::uint64_t seed) noexcept : state_(mix64(seed ^ kSeedTag)) {}

  // Derived stream for a sub-task; deterministic in (parent state, id).
  // Children of distinct ids, and a child vs. its parent's own draw
  // sequence, behave as independent streams.
  RngStream child(std::uint64_t id) const noexcept {
    return RngStream(raw_tag{}, mix64(state_ + mix64(id ^ kChildTag)));
  }

  std::uint64_t next_u64() noexcept {
    state_ += 0x9e3779b97f4a7c15ULL;
    return mix64(state_);
  }

  // Uniform on [0, 1), 53-bit resolution.
  double uniform() noexcept { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  // Uniform on (0, 1]; safe to pass through log().
  double uniform_pos() noexcept { return 1.0 - uniform(); }

  // P(true) = p. Exact at the endpoints: p = 0 never fires, p = 1 always.
  bool bernoulli(double p) noexcept { return uniform() < p; }

  // Uniform integer in [0, n). Fixed-point multiply; the O(n/2^64) bias is
  // far below anything observable here.
  std::uint64_t below(std::uint64_t n) noexcept {
    return static_cast<std::uint64_t>(
        (static_cast<unsigned __int128>(next_u64()) * n) >> 64);
  }

  // Standard normal (Box-Muller).
  double normal() noexcept {
    const double r = std::sqrt(-2.0 * std::log(uniform_pos()));
    return r * std::cos(2.0 * std::numbers::pi * uniform());
  }
  double normal(double mu, double sd) noexcept { return mu + sd * normal(); }

  int binomial(int trials, double p) {
    if (trials < 0) throw std::invalid_argument("binomial: trials must be >= 0");
    int k = 0;
    for (int i = 0; i < trials; ++i) k += bernoulli(p) ? 1 : 0;
    return k;
  }

  // Gamma(shape, 1) via Marsaglia-Tsang squeeze; shape < 1 boosted through
  // the Gamma(shape + 1) identity.
  double gamma_dist(double shape) {
    if (!(shape > 0.0)) throw std::invalid_argument("gamma_dist: shape must be > 0");
    if (shape < 1.0) {
      const double u = uniform_pos();
      return gamma_dist(shape + 1.0) * std::pow(u, 1.0 / shape);
    }
    const double d = shape - 1.0 / 3.0;
    const double c = 1.0 / std::sqrt(9.0 * d);
    for (;;) {
      double x, v;
      do {
        x = normal();
        v = 1.0 + c * x;
      } while (v <= 0.0);
      v = v * v * v;
      const double u = uniform_pos();
      if (u < 1.0 - 0.0331 * x * x * x * x) return d * v;
      if (std::log(u) < 0.5 * x * x + d - d * v + d * std::log(v)) return d * v;
    }
  }

  double beta_dist(double a, double b) {
    const double x = gamma_dist(a);
    const double y = gamma_dist(b);
    return x / (x + y);
  }

private:
  struct raw_tag {};
  RngStream(raw_tag, std::uint64_t raw_state) noexcept : state_(raw_state) {}

  static constexpr std::uint64_t kSeedTag = 0x5851f42d4c957f2dULL;
  static constexpr std::uint64_t kChildTag = 0x14057b7ef767814fULL;

  std::uint64_t state_;
};

}  // namespace absis
