#pragma once

#include <optional>

#include "segi/image.hpp"

namespace segi {

double mean_squared_error(const Image& reference, const Image& test);

/// 10 log10(peak^2 / MSE). std::nullopt means identical images (infinite
/// PSNR).
std::optional<double> psnr(const Image& reference, const Image& test, double peak = 1.0);

struct SsimParams {
  enum class Window { gaussian_11, uniform_8 };

  Window window = Window::gaussian_11;
  double k1 = 0.01;
  double k2 = 0.03;
  double dynamic_range = 1.0;
};

/// Mean of local SSIM over every window position that fits inside the image.
double ssim(const Image& reference, const Image& test, const SsimParams& params = {});

/// Pearson correlation coefficient of the pixel values.
double pearson(const Image& a, const Image& b);

}  // namespace segi
