#pragma once

#include <cstddef>
#include <vector>

#include "segi/forward_model.hpp"
#include "segi/image.hpp"
#include "segi/random.hpp"

namespace segi {

struct MeasurementSet {
  std::vector<Image> patterns;
  std::vector<BucketSignal> signals;

  std::size_t size() const { return signals.size(); }
};

/// Correlation ghost image: raw covariance values per pixel plus a min-max
/// normalized copy for export.
struct CorrelationImage {
  Dims dims;
  std::vector<double> raw;
  Image normalized;
};

/// Streaming form of the correlation estimator
/// R(x,y) = <S I(x,y)> - <S><I(x,y)>, so large runs need not keep patterns.
class CorrelationAccumulator {
 public:
  explicit CorrelationAccumulator(Dims dims);

  void add(const Image& pattern, BucketSignal signal);
  std::size_t count() const { return count_; }

  /// Requires at least two measurements.
  CorrelationImage result() const;

 private:
  Dims dims_;
  std::size_t count_ = 0;
  double signal_sum_ = 0.0;
  std::vector<double> weighted_sum_;  // sum S_i I_i(x,y)
  std::vector<double> pattern_sum_;   // sum I_i(x,y)
};

/// Min-max normalization to [0, 1]; a constant input maps to all zeros.
Image normalize_min_max(Dims dims, const std::vector<double>& values);

CorrelationImage correlate(const MeasurementSet& set);

struct TraditionalGiResult {
  CorrelationImage image;
  MeasurementSet measurements;  ///< patterns left empty unless kept
};

/// Random binary (fill 0.5) illumination, bucket measurement, correlation.
TraditionalGiResult run_traditional_gi(const Image& object, std::size_t n_measurements,
                                       const NoiseModel& noise, Rng& rng,
                                       bool keep_patterns = true);

}  // namespace segi
