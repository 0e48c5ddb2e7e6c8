#include "segi/scenes.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "segi/error.hpp"

namespace segi {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};

void require(bool ok, const char* what) {
  if (!ok) throw InvalidInput(std::string("make_primitive: ") + what);
}

void require_disk_fits(int cx, int cy, double r, Dims dims) {
  require(r >= 0.0, "radius must be nonnegative");
  require(cx - r >= 0.0 && cy - r >= 0.0 && cx + r <= dims.width - 1 && cy + r <= dims.height - 1,
          "disk exceeds the frame");
}

}  // namespace

Image make_primitive(const Shape& shape, Dims dims, double value) {
  require(dims.width >= 1 && dims.height >= 1, "dimensions must be positive");
  require(value > 0.0 && value <= 1.0, "value must lie in (0, 1]");
  Image out(dims);
  std::visit(
      overloaded{
          [&](const RectangleShape& r) {
            require(r.width >= 1 && r.height >= 1, "rectangle size must be positive");
            require(r.x >= 0 && r.y >= 0 && r.x + r.width <= dims.width &&
                        r.y + r.height <= dims.height,
                    "rectangle exceeds the frame");
            for (int y = r.y; y < r.y + r.height; ++y)
              for (int x = r.x; x < r.x + r.width; ++x) out.at(x, y) = value;
          },
          [&](const DiskShape& d) {
            require_disk_fits(d.cx, d.cy, d.radius, dims);
            const double r2 = d.radius * d.radius;
            for (int y = 0; y < dims.height; ++y)
              for (int x = 0; x < dims.width; ++x) {
                const double dx = x - d.cx, dy = y - d.cy;
                if (dx * dx + dy * dy <= r2) out.at(x, y) = value;
              }
          },
          [&](const RingShape& r) {
            require(r.inner >= 0.0 && r.inner < r.outer, "ring needs 0 <= inner < outer");
            require_disk_fits(r.cx, r.cy, r.outer, dims);
            const double lo = r.inner * r.inner, hi = r.outer * r.outer;
            for (int y = 0; y < dims.height; ++y)
              for (int x = 0; x < dims.width; ++x) {
                const double dx = x - r.cx, dy = y - r.cy;
                const double d2 = dx * dx + dy * dy;
                if (d2 > lo && d2 <= hi) out.at(x, y) = value;
              }
          },
          [&](const CheckerboardShape& c) {
            require(c.cell >= 1, "checkerboard cell must be positive");
            for (int y = 0; y < dims.height; ++y)
              for (int x = 0; x < dims.width; ++x)
                if ((x / c.cell + y / c.cell) % 2 == 0) out.at(x, y) = value;
          },
      },
      shape);
  return out;
}

Image overlay_max(const Image& a, const Image& b) {
  require_same_dims(a, b, "overlay_max");
  Image out = a;
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = std::max(a[i], b[i]);
  return out;
}

Pose Pose::from(const FrameTransform& transform) {
  return std::visit(overloaded{
                        [](const Translate& t) { return Pose{0.0, t.dx, t.dy}; },
                        [](const Rotate& r) {
                          const double a = r.degrees * std::numbers::pi / 180.0;
                          const double c = std::cos(a), s = std::sin(a);
                          // p' = R (p - center) + center
                          return Pose{a, r.cx - (c * r.cx - s * r.cy),
                                      r.cy - (s * r.cx + c * r.cy)};
                        },
                    },
                    transform);
}

Pose Pose::then(const Pose& step) const {
  const double c = std::cos(step.angle_rad), s = std::sin(step.angle_rad);
  return Pose{angle_rad + step.angle_rad, c * tx - s * ty + step.tx, s * tx + c * ty + step.ty};
}

Image transform_frame(const Image& image, const Pose& pose) {
  Image out(image.dims());
  const double c = std::cos(pose.angle_rad), s = std::sin(pose.angle_rad);
  for (int y = 0; y < image.height(); ++y) {
    for (int x = 0; x < image.width(); ++x) {
      // Inverse map: p = R^T (q - t).
      const double qx = x - pose.tx, qy = y - pose.ty;
      const double px = c * qx + s * qy;
      const double py = -s * qx + c * qy;
      const auto sx = static_cast<long>(std::floor(px + 0.5));
      const auto sy = static_cast<long>(std::floor(py + 0.5));
      if (sx >= 0 && sy >= 0 && sx < image.width() && sy < image.height()) {
        out.at(x, y) = image.at(static_cast<int>(sx), static_cast<int>(sy));
      }
    }
  }
  return out;
}

Image transform_frame(const Image& image, const FrameTransform& transform) {
  return transform_frame(image, Pose::from(transform));
}

int SceneSpec::total_frames() const {
  int total = 0;
  for (const auto& p : phases) total += p.frame_count;
  return total;
}

std::vector<FrameTransform> expand_phases(const std::vector<MotionPhase>& phases) {
  std::vector<FrameTransform> steps;
  for (const auto& p : phases) {
    if (p.frame_count < 1) throw InvalidInput("motion phase needs at least one frame");
    steps.insert(steps.end(), static_cast<std::size_t>(p.frame_count), p.transform);
  }
  return steps;
}

FrameSeries generate_frames(const Image& base, const std::vector<FrameTransform>& transforms) {
  FrameSeries frames;
  frames.reserve(transforms.size() + 1);
  frames.push_back(base);
  Pose pose = Pose::identity();
  for (const auto& t : transforms) {
    pose = pose.then(Pose::from(t));
    frames.push_back(transform_frame(base, pose));
  }
  return frames;
}

FrameSeries generate_frames(const SceneSpec& spec) {
  // Phase frame counts describe frames, not transitions. Frame 1 is the base
  // and absorbs the first step, so the frame opening each later phase is the
  // first one moved by that phase's transform.
  auto steps = expand_phases(spec.phases);
  if (!steps.empty()) steps.erase(steps.begin());
  return generate_frames(spec.base, steps);
}

}  // namespace segi
