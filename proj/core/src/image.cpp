#include "segi/image.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "segi/error.hpp"

namespace segi {

namespace {

void check_dims(int width, int height) {
  if (width < 1 || height < 1) {
    throw InvalidInput("image dimensions must be positive, got " + std::to_string(width) + "x" +
                       std::to_string(height));
  }
}

void check_range(double v) {
  if (!(v >= 0.0 && v <= 1.0)) {
    throw InvalidInput("pixel value out of [0, 1]: " + std::to_string(v));
  }
}

}  // namespace

Image::Image(int width, int height, double value) : width_(width), height_(height) {
  check_dims(width, height);
  check_range(value);
  pixels_.assign(dims().pixel_count(), value);
}

Image::Image(int width, int height, std::vector<double> pixels)
    : width_(width), height_(height), pixels_(std::move(pixels)) {
  check_dims(width, height);
  if (pixels_.size() != dims().pixel_count()) {
    throw InvalidInput("pixel count " + std::to_string(pixels_.size()) + " does not match " +
                       std::to_string(width) + "x" + std::to_string(height));
  }
  for (double v : pixels_) check_range(v);
}

Image Image::from_rows(std::initializer_list<std::initializer_list<double>> rows) {
  const int height = static_cast<int>(rows.size());
  const int width = height > 0 ? static_cast<int>(rows.begin()->size()) : 0;
  std::vector<double> pixels;
  pixels.reserve(static_cast<std::size_t>(width) * static_cast<std::size_t>(height));
  for (const auto& row : rows) {
    if (static_cast<int>(row.size()) != width) throw InvalidInput("ragged rows");
    pixels.insert(pixels.end(), row.begin(), row.end());
  }
  return Image(width, height, std::move(pixels));
}

double Image::sum() const { return std::accumulate(pixels_.begin(), pixels_.end(), 0.0); }

bool Image::is_binary() const {
  return std::all_of(pixels_.begin(), pixels_.end(),
                     [](double v) { return v == 0.0 || v == 1.0; });
}

void require_same_dims(const Image& a, const Image& b, const char* context) {
  if (!a.same_dims(b)) {
    throw InvalidInput(std::string(context) + ": dimension mismatch (" +
                       std::to_string(a.width()) + "x" + std::to_string(a.height()) + " vs " +
                       std::to_string(b.width()) + "x" + std::to_string(b.height()) + ")");
  }
}

Image quantize_8bit(const Image& image) {
  Image out = image;
  for (double& v : out.pixels()) v = std::round(v * 255.0) / 255.0;
  return out;
}

}  // namespace segi
