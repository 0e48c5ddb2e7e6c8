#include "segi/filters.hpp"

#include <algorithm>
#include <array>
#include <cmath>

#include "segi/error.hpp"

namespace segi {

namespace {

int clamp_index(int i, int n) { return std::clamp(i, 0, n - 1); }

}  // namespace

Image median_filter_3x3(const Image& image) {
  if (image.width() < 3 || image.height() < 3) {
    throw InvalidInput("median filter needs at least 3x3 pixels");
  }
  const int w = image.width(), h = image.height();
  Image out(image.dims());
  std::array<double, 9> window{};
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      std::size_t n = 0;
      for (int dy = -1; dy <= 1; ++dy)
        for (int dx = -1; dx <= 1; ++dx)
          window[n++] = image.at(clamp_index(x + dx, w), clamp_index(y + dy, h));
      std::nth_element(window.begin(), window.begin() + 4, window.end());
      out.at(x, y) = window[4];
    }
  }
  return out;
}

std::vector<double> gaussian_kernel(double sigma) {
  if (!(sigma > 0.0)) throw InvalidInput("gaussian sigma must be positive");
  const int radius = static_cast<int>(std::ceil(3.0 * sigma));
  std::vector<double> taps(static_cast<std::size_t>(2 * radius + 1));
  double sum = 0.0;
  for (int i = -radius; i <= radius; ++i) {
    const double v = std::exp(-(i * i) / (2.0 * sigma * sigma));
    taps[static_cast<std::size_t>(i + radius)] = v;
    sum += v;
  }
  for (double& v : taps) v /= sum;
  return taps;
}

Image gaussian_blur(const Image& image, double sigma) {
  const auto taps = gaussian_kernel(sigma);
  const int radius = static_cast<int>(taps.size() / 2);
  const int w = image.width(), h = image.height();

  std::vector<double> rows(image.size());
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x) {
      double acc = 0.0;
      for (int i = -radius; i <= radius; ++i)
        acc += taps[static_cast<std::size_t>(i + radius)] * image.at(clamp_index(x + i, w), y);
      rows[static_cast<std::size_t>(y) * w + x] = acc;
    }

  Image out(image.dims());
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x) {
      double acc = 0.0;
      for (int i = -radius; i <= radius; ++i)
        acc += taps[static_cast<std::size_t>(i + radius)] *
               rows[static_cast<std::size_t>(clamp_index(y + i, h)) * w + x];
      out.at(x, y) = std::clamp(acc, 0.0, 1.0);
    }
  return out;
}

}  // namespace segi
