#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace lbo {

/// Algorithm identifier echoed into simulation reports.
inline constexpr const char* kRngAlgorithm = "mt19937_64/splitmix64";

/// SplitMix64 finalizer. Whitens raw seeds and hashes derived stream ids.
constexpr std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

/// Split rule for independent streams: stream k of a master seed is
/// seeded with splitmix64(master + (k+1) * golden gamma). Concurrent
/// runs each own one stream, so scheduling cannot change results.
constexpr std::uint64_t stream_seed(std::uint64_t master, std::uint64_t stream) {
  return splitmix64(master + (stream + 1) * 0x9E3779B97F4A7C15ull);
}

/// Seedable PRNG with explicit variate transforms. The engine is the
/// standard-specified mt19937_64; the transforms below are spelled out
/// (inversion, Box-Muller) because std:: distributions are
/// implementation-defined and would break reproducibility of seeded
/// reports across standard libraries.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(splitmix64(seed)) {}

  std::uint64_t next_u64() { return engine_(); }

  /// Uniform on [0,1), 53-bit resolution.
  double uniform01() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  /// Uniform on (0,1]; safe as a log() argument.
  double uniform01_open() {
    return static_cast<double>((engine_() >> 11) + 1) * 0x1.0p-53;
  }

  bool bernoulli(double prob) { return uniform01() < prob; }

  /// Number of slots until the next success, support {1,2,...};
  /// inversion of the geometric tail P(N > n) = (1-prob)^n.
  long geometric1(double prob) {
    if (prob >= 1.0) return 1;
    const double draw = std::floor(std::log(uniform01_open()) / std::log1p(-prob));
    return 1 + std::max(0L, static_cast<long>(draw));
  }

  double exponential(double rate) { return -std::log(uniform01_open()) / rate; }

  /// Box-Muller (cosine branch); two engine draws per variate.
  double normal(double mean, double stddev) {
    const double radius = std::sqrt(-2.0 * std::log(uniform01_open()));
    const double angle = 6.283185307179586476925286766559 * uniform01();
    return mean + stddev * radius * std::cos(angle);
  }

 private:
  std::mt19937_64 engine_;
};

}  // namespace lbo
