#pragma once

#include <cstddef>
#include <cstdint>
#include <random>

namespace rangebandit {

// Roles get their own stream so that, e.g., the number of draws a learner
// makes never shifts what an environment generates.
enum class StreamRole : std::uint64_t {
  environment = 0,
  learner = 1,
  inner = 2,
  auxiliary = 3,
};

class Rng {
 public:
  Rng(std::uint64_t seed, std::uint64_t stream);
  Rng(std::uint64_t seed, StreamRole role)
      : Rng(seed, static_cast<std::uint64_t>(role)) {}

  std::uint64_t seed() const { return seed_; }
  std::uint64_t stream() const { return stream_; }

  /// Uniform on [0, 1) with 53 random bits; exactly one engine call.
  double uniform();
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  double normal();
  /// Uniform integer in [0, n).
  std::size_t index(std::size_t n);
  bool bernoulli(double p) { return uniform() < p; }

  std::mt19937_64& engine() { return engine_; }

 private:
  std::uint64_t seed_;
  std::uint64_t stream_;
  std::mt19937_64 engine_;
  std::normal_distribution<double> normal_{0.0, 1.0};
};

}  // namespace rangebandit
