#include "segi/forward_model.hpp"

#include <algorithm>
#include <string>

#include "segi/error.hpp"

namespace segi {

NoiseModel NoiseModel::gaussian(double sigma) {
  if (!(sigma >= 0.0)) throw InvalidInput("noise sigma must be nonnegative");
  return {Kind::additive_gaussian, sigma};
}

BucketSignal measure_bucket(const Image& pattern, const Image& object) {
  require_same_dims(pattern, object, "measure_bucket");
  const auto p = pattern.pixels();
  const auto o = object.pixels();
  double sum = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) sum += p[i] * o[i];
  return {sum};
}

BucketSignal measure_bucket(const Image& pattern, const Image& object, const NoiseModel& noise,
                            Rng& rng) {
  BucketSignal s = measure_bucket(pattern, object);
  if (noise.active()) s.value = std::max(0.0, s.value + rng.gaussian(noise.sigma));
  return s;
}

Image random_pattern(Dims dims, PixelMode mode, Rng& rng, double fill) {
  Image out(dims);
  if (mode == PixelMode::binary) {
    if (!(fill > 0.0 && fill < 1.0)) {
      throw InvalidInput("binary fill fraction must lie in (0, 1), got " + std::to_string(fill));
    }
    for (double& v : out.pixels()) v = rng.bernoulli(fill) ? 1.0 : 0.0;
  } else {
    for (double& v : out.pixels()) v = rng.uniform();
  }
  return out;
}

double pattern_weight(const Image& pattern, int order) {
  if (order == 1) return pattern.sum();
  if (order != 2) throw InvalidInput("pattern_weight order must be 1 or 2");
  double sum = 0.0;
  for (double v : pattern.pixels()) sum += v * v;
  return sum;
}

}  // namespace segi
