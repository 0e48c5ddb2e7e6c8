#pragma once

#include <variant>
#include <vector>

#include "segi/image.hpp"

namespace segi {

// -- procedural objects -----------------------------------------------------

struct RectangleShape {
  int x = 0, y = 0, width = 1, height = 1;
};
/// Pixels with (x - cx)^2 + (y - cy)^2 <= radius^2. Radius 0 sets one pixel.
struct DiskShape {
  int cx = 0, cy = 0;
  double radius = 0.0;
};
/// inner^2 < d^2 <= outer^2.
struct RingShape {
  int cx = 0, cy = 0;
  double inner = 0.0, outer = 1.0;
};
/// Cells of `cell` pixels; the cell containing (0, 0) carries the value.
struct CheckerboardShape {
  int cell = 1;
};

using Shape = std::variant<RectangleShape, DiskShape, RingShape, CheckerboardShape>;

/// Rasterizes one primitive on a zero background. Throws InvalidInput when
/// the geometry does not fit inside `dims` or the value is outside (0, 1].
Image make_primitive(const Shape& shape, Dims dims, double value = 1.0);

/// Pixelwise maximum, used to compose primitives into one object.
Image overlay_max(const Image& a, const Image& b);

// -- motion -----------------------------------------------------------------

struct Translate {
  double dx = 0.0, dy = 0.0;  ///< pixels per frame
};
struct Rotate {
  double degrees = 0.0;  ///< positive turns +x toward +y (clockwise on screen)
  double cx = 0.0, cy = 0.0;
};
using FrameTransform = std::variant<Translate, Rotate>;

/// Rigid pose mapping base coordinates p to frame coordinates R(angle) p + t.
struct Pose {
  double angle_rad = 0.0;
  double tx = 0.0, ty = 0.0;

  static Pose identity() { return {}; }
  static Pose from(const FrameTransform& transform);
  /// `step` applied after `*this`.
  Pose then(const Pose& step) const;
};

/// Nearest-neighbor resampling of `image` under `pose`; out-of-frame samples
/// are 0. Binary inputs stay binary.
Image transform_frame(const Image& image, const Pose& pose);
Image transform_frame(const Image& image, const FrameTransform& transform);

struct MotionPhase {
  int frame_count = 1;
  FrameTransform transform;
};

struct SceneSpec {
  Image base;
  std::vector<MotionPhase> phases;

  int total_frames() const;
};

using FrameSeries = std::vector<Image>;

/// Yields total_frames() frames. Frame 1 is the base; the frame opening a
/// phase is the first one moved by that phase's transform. Every frame
/// rasterizes the base under the accumulated pose, so nothing is resampled
/// twice.
FrameSeries generate_frames(const SceneSpec& spec);

/// Same accumulation over an explicit list of per-frame transforms; frame
/// i + 1 applies transforms[0..i-1].
FrameSeries generate_frames(const Image& base, const std::vector<FrameTransform>& transforms);

/// Phases expanded into one transform per frame transition.
std::vector<FrameTransform> expand_phases(const std::vector<MotionPhase>& phases);

}  // namespace segi
