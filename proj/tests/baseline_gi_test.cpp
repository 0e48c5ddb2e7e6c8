#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>

#include "segi/correlation.hpp"
#include "segi/error.hpp"
#include "segi/metrics.hpp"
#include "segi/scenes.hpp"

using namespace segi;

namespace {

MeasurementSet raster_measurements(const Image& object) {
  MeasurementSet set;
  for (std::size_t i = 0; i < object.size(); ++i) {
    Image p(object.dims(), 0.0);
    p[i] = 1.0;
    set.signals.push_back(measure_bucket(p, object));
    set.patterns.push_back(std::move(p));
  }
  return set;
}

Image random_binary_object(Dims dims, Rng& rng) {
  Image o = random_pattern(dims, PixelMode::binary, rng, 0.3);
  if (o.sum() == 0.0) o[0] = 1.0;
  return o;
}

}  // namespace

TEST(Correlate, RasterBasisHandEvaluated3x3) {
  const Image object = Image::from_rows({{1, 0, 1}, {0, 1, 0}, {0, 0, 1}});
  const auto r = correlate(raster_measurements(object));
  // <S I> = O/9, <S> = 4/9, <I> = 1/9
  for (std::size_t i = 0; i < object.size(); ++i) {
    const double expected = object[i] == 1.0 ? 5.0 / 81.0 : -4.0 / 81.0;
    EXPECT_NEAR(r.raw[i], expected, 1e-15);
  }
  EXPECT_EQ(r.normalized, object);
}

TEST(Correlate, RasterBasisRecovers16x16Exactly) {
  Rng rng(1);
  for (int trial = 0; trial < 5; ++trial) {
    const Image object = random_binary_object({16, 16}, rng);
    EXPECT_EQ(correlate(raster_measurements(object)).normalized, object);
  }
}

TEST(Correlate, ConstantSignalsGiveZero) {
  Rng rng(2);
  MeasurementSet set;
  const Image object(6, 6, 1.0);
  for (int i = 0; i < 20; ++i) {
    // Every pattern has weight 18, so every signal is 18.
    Image p(6, 6, 0.0);
    std::vector<std::size_t> idx(36);
    for (std::size_t j = 0; j < idx.size(); ++j) idx[j] = j;
    for (std::size_t j = 0; j < 18; ++j) std::swap(idx[j], idx[j + rng.below(36 - j)]);
    for (std::size_t j = 0; j < 18; ++j) p[idx[j]] = 1.0;
    set.signals.push_back(measure_bucket(p, object));
    set.patterns.push_back(std::move(p));
  }
  const auto r = correlate(set);
  for (double v : r.raw) EXPECT_NEAR(v, 0.0, 1e-12);
  EXPECT_EQ(r.normalized, Image(6, 6, 0.0));
}

TEST(Correlate, RepeatedPatternGivesZero) {
  Rng rng(3);
  const Image object = random_binary_object({5, 5}, rng);
  const Image p = random_pattern({5, 5}, PixelMode::binary, rng);
  MeasurementSet set;
  for (int i = 0; i < 10; ++i) {
    set.patterns.push_back(p);
    set.signals.push_back(measure_bucket(p, object));
  }
  for (double v : correlate(set).raw) EXPECT_NEAR(v, 0.0, 1e-12);
}

TEST(Correlate, RejectsTooFewOrMismatched) {
  MeasurementSet one{{Image(2, 2, 1.0)}, {BucketSignal{1.0}}};
  EXPECT_THROW(correlate(one), InvalidInput);
  MeasurementSet bad{{Image(2, 2, 1.0), Image(3, 2, 1.0)}, {BucketSignal{1.0}, BucketSignal{2.0}}};
  EXPECT_THROW(correlate(bad), InvalidInput);
  MeasurementSet uneven{{Image(2, 2, 1.0)}, {BucketSignal{1.0}, BucketSignal{2.0}}};
  EXPECT_THROW(correlate(uneven), InvalidInput);
}

TEST(CorrelateProperty, PermutationInvariant) {
  Rng rng(4);
  const Image object = random_binary_object({8, 8}, rng);
  MeasurementSet set;
  for (int i = 0; i < 40; ++i) {
    set.patterns.push_back(random_pattern({8, 8}, PixelMode::binary, rng));
    set.signals.push_back(measure_bucket(set.patterns.back(), object));
  }
  const auto a = correlate(set);
  MeasurementSet reversed = set;
  std::reverse(reversed.patterns.begin(), reversed.patterns.end());
  std::reverse(reversed.signals.begin(), reversed.signals.end());
  const auto b = correlate(reversed);
  for (std::size_t i = 0; i < a.raw.size(); ++i) EXPECT_NEAR(a.raw[i], b.raw[i], 1e-12);
}

TEST(CorrelateProperty, AccumulatorMatchesBatch) {
  Rng rng(5);
  const Image object = random_binary_object({8, 8}, rng);
  MeasurementSet set;
  CorrelationAccumulator acc({8, 8});
  for (int i = 0; i < 30; ++i) {
    set.patterns.push_back(random_pattern({8, 8}, PixelMode::grayscale, rng));
    set.signals.push_back(measure_bucket(set.patterns.back(), object));
    acc.add(set.patterns.back(), set.signals.back());
  }
  const auto a = correlate(set);
  const auto b = acc.result();
  for (std::size_t i = 0; i < a.raw.size(); ++i) EXPECT_NEAR(a.raw[i], b.raw[i], 1e-12);
}

TEST(NormalizeMinMax, RangeAndConstant) {
  const Image n = normalize_min_max({3, 1}, {-2.0, 0.0, 2.0});
  EXPECT_EQ(n, Image::from_rows({{0.0, 0.5, 1.0}}));
  EXPECT_EQ(normalize_min_max({2, 1}, {3.0, 3.0}), Image(2, 1, 0.0));
}

TEST(TraditionalGi, TenfoldOversamplingCorrelatesWithObject) {
  Rng object_rng(6);
  const Image object = overlay_max(make_primitive(RectangleShape{3, 3, 5, 9}, {16, 16}),
                                   make_primitive(DiskShape{11, 10, 3.0}, {16, 16}));
  int good = 0;
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    Rng rng(seed);
    const auto gi = run_traditional_gi(object, 2560, NoiseModel::none(), rng, false);
    EXPECT_TRUE(gi.measurements.patterns.empty());
    EXPECT_EQ(gi.measurements.size(), 2560u);
    good += pearson(gi.image.normalized, object) > 0.5 ? 1 : 0;
  }
  EXPECT_GE(good, 9);
}

TEST(TraditionalGi, SingleMeasurementRejected) {
  Rng rng(7);
  EXPECT_THROW(run_traditional_gi(Image(4, 4, 1.0), 1, NoiseModel::none(), rng), InvalidInput);
}

TEST(TraditionalGi, SignalTraceHasNoTrend) {
  const Image object = make_primitive(DiskShape{16, 16, 8.0}, {32, 32});
  int rejections = 0;
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    Rng rng(seed);
    const auto gi = run_traditional_gi(object, 500, NoiseModel::none(), rng, false);
    const auto& s = gi.measurements.signals;
    const double n = static_cast<double>(s.size());
    double mx = (n - 1.0) / 2.0, my = 0.0;
    for (const auto& v : s) my += v.value;
    my /= n;
    double sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < s.size(); ++i) {
      sxx += (i - mx) * (i - mx);
      sxy += (i - mx) * (s[i].value - my);
    }
    const double slope = sxy / sxx;
    double sse = 0.0;
    for (std::size_t i = 0; i < s.size(); ++i) {
      const double e = s[i].value - my - slope * (i - mx);
      sse += e * e;
    }
    const double t = slope / std::sqrt(sse / (n - 2.0) / sxx);
    rejections += std::abs(t) > 1.96 ? 1 : 0;
  }
  // 5% level: about one rejection expected in 20 i.i.d. traces.
  EXPECT_LE(rejections, 4);
}
