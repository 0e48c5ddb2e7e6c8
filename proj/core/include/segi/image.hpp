#pragma once

#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

namespace segi {

struct Dims {
  int width = 0;
  int height = 0;

  std::size_t pixel_count() const {
    return static_cast<std::size_t>(width) * static_cast<std::size_t>(height);
  }
  friend bool operator==(const Dims&, const Dims&) = default;
};

/// Row-major grid of normalized intensities in [0, 1].
///
/// The same type holds objects, illumination patterns and reconstructions.
/// Constructors validate the range; mutable element access does not, so code
/// writing through `at()`/`pixels()` is responsible for staying in [0, 1].
class Image {
 public:
  Image() = default;
  Image(int width, int height, double value = 0.0);
  Image(int width, int height, std::vector<double> pixels);
  explicit Image(Dims dims, double value = 0.0) : Image(dims.width, dims.height, value) {}

  /// Builds an image from nested rows, e.g. `Image::from_rows({{1, 0}, {0, 1}})`.
  static Image from_rows(std::initializer_list<std::initializer_list<double>> rows);

  int width() const { return width_; }
  int height() const { return height_; }
  Dims dims() const { return {width_, height_}; }
  std::size_t size() const { return pixels_.size(); }
  bool empty() const { return pixels_.empty(); }

  double at(int x, int y) const { return pixels_[index(x, y)]; }
  double& at(int x, int y) { return pixels_[index(x, y)]; }
  double operator[](std::size_t i) const { return pixels_[i]; }
  double& operator[](std::size_t i) { return pixels_[i]; }

  std::span<const double> pixels() const { return pixels_; }
  std::span<double> pixels() { return pixels_; }

  double sum() const;
  bool is_binary() const;
  bool same_dims(const Image& other) const {
    return width_ == other.width_ && height_ == other.height_;
  }

  friend bool operator==(const Image&, const Image&) = default;

 private:
  std::size_t index(int x, int y) const {
    return static_cast<std::size_t>(y) * static_cast<std::size_t>(width_) +
           static_cast<std::size_t>(x);
  }

  int width_ = 0;
  int height_ = 0;
  std::vector<double> pixels_;
};

/// Throws InvalidInput unless `a` and `b` share dimensions.
void require_same_dims(const Image& a, const Image& b, const char* context);

/// Rounds every pixel to the nearest multiple of 1/255 (the 8-bit grid).
Image quantize_8bit(const Image& image);

}  // namespace segi
