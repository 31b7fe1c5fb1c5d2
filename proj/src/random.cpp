#include "compfkg/random.hpp"

#include "compfkg/errors.hpp"

namespace compfkg {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

std::uint64_t Rng::below(std::uint64_t bound) {
  if (bound == 0) throw DomainError("empty range");
  const std::uint64_t threshold = (0 - bound) % bound;
  for (;;) {
    std::uint64_t v = next();
    if (v >= threshold) return v % bound;
  }
}

long Rng::uniform(long lo, long hi) {
  if (hi < lo) throw DomainError("empty range");
  return lo + static_cast<long>(below(static_cast<std::uint64_t>(hi - lo) + 1));
}

Rng Rng::split(std::uint64_t stream) const { return Rng(splitmix64(seed_ ^ splitmix64(stream))); }

}  // namespace compfkg
