#include "segi/random.hpp"

namespace segi {

std::uint64_t Rng::below(std::uint64_t n) {
  // Reject the short final block so every residue is equally likely.
  const std::uint64_t threshold = (0 - n) % n;
  for (;;) {
    const std::uint64_t r = engine_();
    if (r >= threshold) return r % n;
  }
}

double Rng::gaussian(double sigma) { return sigma * normal_(engine_); }

std::uint64_t mix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::uint64_t substream_seed(std::uint64_t master_seed, std::uint64_t experiment,
                             std::uint64_t frame) {
  return mix64(mix64(mix64(master_seed) ^ experiment) ^ frame);
}

}  // namespace segi
