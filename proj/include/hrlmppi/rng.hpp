#pragma once

#include <cstdint>
#include <random>

namespace hrlmppi {

// Stream ids used by the trainer. Separate streams keep the planner's noise
// draws independent of policy sampling, so runs stay reproducible when one
// consumer changes its draw count.
enum StreamId : std::uint64_t {
  kStreamPolicy = 0,
  kStreamMppiNoise = 1,
  kStreamEnv = 2,
  kStreamSelect = 3,
  kStreamUpdate = 4,
  kStreamInitBase = 16,  // network init streams start here
};

// Seeded random stream: identical (seed, stream_id) pairs reproduce
// bit-identical sequences.
class RngStream {
 public:
  RngStream() : RngStream(0, 0) {}

  RngStream(std::uint64_t seed, std::uint64_t stream_id)
      : seed_(seed), stream_id_(stream_id), gen_(mix(seed, stream_id)) {}

  double gaussian() { return normal_(gen_); }
  double uniform() { return unit_(gen_); }
  double uniform(double lo, double hi) { return lo + (hi - lo) * unit_(gen_); }

  // Uniform integer in [0, n).
  std::int64_t uniform_int(std::int64_t n) {
    return std::uniform_int_distribution<std::int64_t>(0, n - 1)(gen_);
  }

  std::uint64_t seed() const { return seed_; }
  std::uint64_t stream_id() const { return stream_id_; }

 private:
  static std::uint64_t splitmix64(std::uint64_t& x) {
    x += 0x9e3779b97f4a7c15ULL;
    std::uint64_t z = x;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  static std::uint64_t mix(std::uint64_t seed, std::uint64_t stream) {
    std::uint64_t x = seed;
    std::uint64_t a = splitmix64(x);
    x ^= stream * 0xd1342543de82ef95ULL + 0x2545f4914f6cdd1dULL;
    std::uint64_t b = splitmix64(x);
    return a ^ (b + 0x9e3779b97f4a7c15ULL);
  }

  std::uint64_t seed_;
  std::uint64_t stream_id_;
  std::mt19937_64 gen_;
  std::normal_distribution<double> normal_{0.0, 1.0};
  std::uniform_real_distribution<double> unit_{0.0, 1.0};
};

}  // namespace hrlmppi
