#pragma once

#include "segi/image.hpp"
#include "segi/random.hpp"

namespace segi {

struct NoiseModel {
  enum class Kind { none, additive_gaussian };

  Kind kind = Kind::none;
  /// Standard deviation in units of the noiseless bucket signal.
  double sigma = 0.0;

  static NoiseModel none() { return {}; }
  static NoiseModel gaussian(double sigma);

  bool active() const { return kind == Kind::additive_gaussian; }
};

/// Single-pixel detector reading. Always nonnegative.
struct BucketSignal {
  double value = 0.0;
};

enum class PixelMode { binary, grayscale };

/// Bucket signal of `object` under illumination `pattern`: the discrete sum
/// of pattern(x,y) * object(x,y), plus optional clamped Gaussian noise.
/// The rng is only consumed when the noise model is active.
BucketSignal measure_bucket(const Image& pattern, const Image& object,
                            const NoiseModel& noise, Rng& rng);

/// Noiseless overload.
BucketSignal measure_bucket(const Image& pattern, const Image& object);

/// Random illumination pattern. Binary pixels are 1 with probability
/// `fill`; grayscale pixels are uniform on [0, 1].
Image random_pattern(Dims dims, PixelMode mode, Rng& rng, double fill = 0.5);

/// Sum of pattern(x,y)^order for order 1 or 2.
double pattern_weight(const Image& pattern, int order);

}  // namespace segi
