#pragma once

// Counter-based random streams.
//
// A stream is identified by a key derived from (seed, stream id, index...) and
// produces the sequence mix(key + k * golden) for k = 0, 1, 2, ... Two streams
// with different keys are statistically independent, and a stream's output
// does not depend on which thread draws it or in what order rows are visited.

#include <cmath>
#include <cstdint>
#include <initializer_list>
#include <numbers>

namespace coxko {

namespace detail {

inline constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ULL;

constexpr std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

}  // namespace detail

/// Fold a list of 64-bit words into a stream key.
constexpr std::uint64_t derive_key(std::initializer_list<std::uint64_t> words) {
  std::uint64_t key = 0x6A09E667F3BCC909ULL;
  for (std::uint64_t w : words) key = detail::mix64(key ^ detail::mix64(w + detail::kGolden));
  return key;
}

/// Named stream identifiers so different uses of one seed never collide.
enum class Stream : std::uint64_t {
  Covariates = 1,
  Survival = 2,
  Censoring = 3,
  Knockoffs = 4,
  Folds = 5,
  Calibration = 6,
};

class CounterRng {
 public:
  explicit CounterRng(std::uint64_t key) : key_(key) {}
  CounterRng(std::uint64_t seed, std::initializer_list<std::uint64_t> path)
      : key_(derive_key({seed})) {
    for (std::uint64_t w : path) key_ = derive_key({key_, w});
  }

  std::uint64_t next_u64() {
    return detail::mix64(key_ + (++counter_) * detail::kGolden);
  }

  /// Uniform on the open interval (0, 1).
  double uniform() {
    return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
  }

  double normal() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    const double u1 = uniform();
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double theta = 2.0 * std::numbers::pi * u2;
    spare_ = r * std::sin(theta);
    has_spare_ = true;
    return r * std::cos(theta);
  }

  /// Exponential with unit rate.
  double exponential() { return -std::log(uniform()); }

  /// Gamma(shape, rate) via Marsaglia-Tsang; shapes below one use the boost trick.
  double gamma(double shape, double rate) {
    if (shape < 1.0) {
      const double u = uniform();
      return gamma(shape + 1.0, rate) * std::pow(u, 1.0 / shape);
    }
    const double d = shape - 1.0 / 3.0;
    const double c = 1.0 / std::sqrt(9.0 * d);
    for (;;) {
      double x;
      double v;
      do {
        x = normal();
        v = 1.0 + c * x;
      } while (v <= 0.0);
      v = v * v * v;
      const double u = uniform();
      if (u < 1.0 - 0.0331 * x * x * x * x) return d * v / rate;
      if (std::log(u) < 0.5 * x * x + d * (1.0 - v + std::log(v))) return d * v / rate;
    }
  }

  std::uint64_t key() const { return key_; }

 private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace coxko
