#pragma once

#include <vector>

#include "segi/image.hpp"

namespace segi {

/// 3x3 median with edge replication. Requires at least 3x3 pixels.
Image median_filter_3x3(const Image& image);

/// Normalized 1-D Gaussian taps of radius ceil(3 sigma).
std::vector<double> gaussian_kernel(double sigma);

/// Separable Gaussian blur with edge replication, clamped to [0, 1].
Image gaussian_blur(const Image& image, double sigma);

}  // namespace segi
