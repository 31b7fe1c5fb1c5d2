#pragma once

// Seeded, platform-independent randomness. std:: distributions are avoided
// because their output is implementation-defined.

#include <cstdint>
#include <random>

namespace compfkg {

std::uint64_t splitmix64(std::uint64_t x);

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : seed_(seed), eng_(seed) {}

  std::uint64_t seed() const { return seed_; }
  std::uint64_t next() { return eng_(); }
  /// Uniform on [0, bound), bound > 0, by rejection.
  std::uint64_t below(std::uint64_t bound);
  /// Uniform on [lo, hi].
  long uniform(long lo, long hi);
  /// Deterministic independent stream, e.g. one per instance or worker.
  Rng split(std::uint64_t stream) const;

 private:
  std::uint64_t seed_;
  std::mt19937_64 eng_;
};

}  // namespace compfkg
