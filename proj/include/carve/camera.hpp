#pragma once

#include <cstddef>
#include <optional>

#include "carve/geometry.hpp"

namespace carve {

/// Pinhole camera in world millimeters.
struct Camera {
  Vec3 position{0.0, 0.0, -300.0};
  Vec3 look_at;
  Vec3 up{0.0, 1.0, 0.0};
  double vfov_deg = 40.0;
  std::size_t width = 256;
  std::size_t height = 256;

  /// Throws ValueError for degenerate setups.
  void validate() const;
  bool operator==(const Camera&) const = default;
};

struct Ray {
  Vec3 origin;
  Vec3 direction;
};

/// Ray through the center of pixel (px, py); py = 0 is the top row.
Ray generate_ray(const Camera& cam, std::size_t px, std::size_t py);

struct Aabb {
  Vec3 lo;
  Vec3 hi;
};

struct Interval {
  double t_enter = 0.0;
  double t_exit = 0.0;
};

/// Slab test. The direction need not be unit length; t is measured in
/// multiples of it. t_enter is clamped to 0 when the origin is inside.
std::optional<Interval> intersect_aabb(const Ray& ray, const Aabb& box);

}  // namespace carve
