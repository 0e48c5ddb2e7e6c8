#include "segi/metrics.hpp"

#include <cmath>
#include <vector>

#include "segi/error.hpp"

namespace segi {

namespace {

std::vector<double> window_taps(SsimParams::Window window) {
  if (window == SsimParams::Window::uniform_8) return std::vector<double>(8, 1.0 / 8.0);
  std::vector<double> taps(11);
  double sum = 0.0;
  for (int i = 0; i < 11; ++i) {
    const double d = i - 5;
    taps[static_cast<std::size_t>(i)] = std::exp(-(d * d) / (2.0 * 1.5 * 1.5));
    sum += taps[static_cast<std::size_t>(i)];
  }
  for (double& t : taps) t /= sum;
  return taps;
}

// Separable "valid" correlation of a w x h field with taps x taps.
std::vector<double> filter_valid(const std::vector<double>& field, int w, int h,
                                 const std::vector<double>& taps) {
  const int n = static_cast<int>(taps.size());
  const int ow = w - n + 1, oh = h - n + 1;
  std::vector<double> horiz(static_cast<std::size_t>(ow) * h);
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < ow; ++x) {
      double acc = 0.0;
      for (int i = 0; i < n; ++i)
        acc += taps[static_cast<std::size_t>(i)] * field[static_cast<std::size_t>(y) * w + x + i];
      horiz[static_cast<std::size_t>(y) * ow + x] = acc;
    }
  std::vector<double> out(static_cast<std::size_t>(ow) * oh);
  for (int y = 0; y < oh; ++y)
    for (int x = 0; x < ow; ++x) {
      double acc = 0.0;
      for (int i = 0; i < n; ++i)
        acc += taps[static_cast<std::size_t>(i)] * horiz[static_cast<std::size_t>(y + i) * ow + x];
      out[static_cast<std::size_t>(y) * ow + x] = acc;
    }
  return out;
}

}  // namespace

double mean_squared_error(const Image& reference, const Image& test) {
  require_same_dims(reference, test, "mse");
  double acc = 0.0;
  for (std::size_t i = 0; i < reference.size(); ++i) {
    const double d = reference[i] - test[i];
    acc += d * d;
  }
  return acc / static_cast<double>(reference.size());
}

std::optional<double> psnr(const Image& reference, const Image& test, double peak) {
  const double mse = mean_squared_error(reference, test);
  if (mse == 0.0) return std::nullopt;
  return 10.0 * std::log10(peak * peak / mse);
}

double ssim(const Image& reference, const Image& test, const SsimParams& params) {
  require_same_dims(reference, test, "ssim");
  if (!(params.k1 > 0.0 && params.k2 > 0.0)) throw InvalidInput("ssim constants must be positive");
  const auto taps = window_taps(params.window);
  const int n = static_cast<int>(taps.size());
  const int w = reference.width(), h = reference.height();
  if (w < n || h < n) throw InvalidInput("image smaller than the ssim window");

  const std::size_t size = reference.size();
  std::vector<double> a(size), b(size), aa(size), bb(size), ab(size);
  for (std::size_t i = 0; i < size; ++i) {
    a[i] = reference[i];
    b[i] = test[i];
    aa[i] = a[i] * a[i];
    bb[i] = b[i] * b[i];
    ab[i] = a[i] * b[i];
  }
  const auto mu_a = filter_valid(a, w, h, taps);
  const auto mu_b = filter_valid(b, w, h, taps);
  const auto e_aa = filter_valid(aa, w, h, taps);
  const auto e_bb = filter_valid(bb, w, h, taps);
  const auto e_ab = filter_valid(ab, w, h, taps);

  const double c1 = std::pow(params.k1 * params.dynamic_range, 2);
  const double c2 = std::pow(params.k2 * params.dynamic_range, 2);
  double total = 0.0;
  for (std::size_t i = 0; i < mu_a.size(); ++i) {
    const double ma = mu_a[i], mb = mu_b[i];
    const double var_a = e_aa[i] - ma * ma;
    const double var_b = e_bb[i] - mb * mb;
    const double cov = e_ab[i] - ma * mb;
    total += ((2 * ma * mb + c1) * (2 * cov + c2)) /
             ((ma * ma + mb * mb + c1) * (var_a + var_b + c2));
  }
  return total / static_cast<double>(mu_a.size());
}

double pearson(const Image& a, const Image& b) {
  require_same_dims(a, b, "pearson");
  const auto n = static_cast<double>(a.size());
  const double ma = a.sum() / n, mb = b.sum() / n;
  double cov = 0.0, va = 0.0, vb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    cov += (a[i] - ma) * (b[i] - mb);
    va += (a[i] - ma) * (a[i] - ma);
    vb += (b[i] - mb) * (b[i] - mb);
  }
  if (va == 0.0 || vb == 0.0) return 0.0;
  return cov / std::sqrt(va * vb);
}

}  // namespace segi
