#include "segi/correlation.hpp"

#include <algorithm>

#include "segi/error.hpp"

namespace segi {

CorrelationAccumulator::CorrelationAccumulator(Dims dims)
    : dims_(dims), weighted_sum_(dims.pixel_count(), 0.0), pattern_sum_(dims.pixel_count(), 0.0) {}

void CorrelationAccumulator::add(const Image& pattern, BucketSignal signal) {
  if (pattern.dims() != dims_) throw InvalidInput("correlate: pattern dimension mismatch");
  const auto p = pattern.pixels();
  for (std::size_t i = 0; i < p.size(); ++i) {
    weighted_sum_[i] += signal.value * p[i];
    pattern_sum_[i] += p[i];
  }
  signal_sum_ += signal.value;
  ++count_;
}

CorrelationImage CorrelationAccumulator::result() const {
  if (count_ < 2) throw InvalidInput("correlate needs at least two measurements");
  const auto n = static_cast<double>(count_);
  const double mean_signal = signal_sum_ / n;
  CorrelationImage out;
  out.dims = dims_;
  out.raw.resize(weighted_sum_.size());
  for (std::size_t i = 0; i < out.raw.size(); ++i) {
    out.raw[i] = (weighted_sum_[i] - mean_signal * pattern_sum_[i]) / n;
  }
  out.normalized = normalize_min_max(dims_, out.raw);
  return out;
}

Image normalize_min_max(Dims dims, const std::vector<double>& values) {
  Image out(dims);
  if (values.size() != out.size()) throw InvalidInput("normalize: size mismatch");
  const auto [lo, hi] = std::minmax_element(values.begin(), values.end());
  const double range = *hi - *lo;
  if (range <= 0.0) return out;
  for (std::size_t i = 0; i < values.size(); ++i) {
    out[i] = std::clamp((values[i] - *lo) / range, 0.0, 1.0);
  }
  return out;
}

CorrelationImage correlate(const MeasurementSet& set) {
  if (set.patterns.size() != set.signals.size()) {
    throw InvalidInput("correlate: pattern and signal counts differ");
  }
  if (set.size() < 2) throw InvalidInput("correlate needs at least two measurements");
  CorrelationAccumulator acc(set.patterns.front().dims());
  for (std::size_t i = 0; i < set.size(); ++i) acc.add(set.patterns[i], set.signals[i]);
  return acc.result();
}

TraditionalGiResult run_traditional_gi(const Image& object, std::size_t n_measurements,
                                       const NoiseModel& noise, Rng& rng, bool keep_patterns) {
  if (n_measurements < 2) throw InvalidInput("traditional GI needs at least two measurements");
  TraditionalGiResult result;
  CorrelationAccumulator acc(object.dims());
  result.measurements.signals.reserve(n_measurements);
  if (keep_patterns) result.measurements.patterns.reserve(n_measurements);
  for (std::size_t i = 0; i < n_measurements; ++i) {
    Image pattern = random_pattern(object.dims(), PixelMode::binary, rng);
    const BucketSignal s = measure_bucket(pattern, object, noise, rng);
    acc.add(pattern, s);
    result.measurements.signals.push_back(s);
    if (keep_patterns) result.measurements.patterns.push_back(std::move(pattern));
  }
  result.image = acc.result();
  return result;
}

}  // namespace segi
