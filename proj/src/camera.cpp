#include "carve/camera.hpp"

#include <algorithm>
#include <cassert>
#include <limits>
#include <numbers>

#include "carve/error.hpp"

namespace carve {

void Camera::validate() const {
  if (width == 0 || height == 0) throw Error(ErrorCode::ValueError, "camera image size must be positive");
  if (!(vfov_deg > 0.0 && vfov_deg < 180.0)) throw Error(ErrorCode::ValueError, "vfov_deg must be in (0,180)");
  const Vec3 forward = look_at - position;
  if (!(length(forward) > 0.0)) throw Error(ErrorCode::ValueError, "camera position equals look_at");
  if (!(length(cross(normalize(forward), up)) > 1e-9))
    throw Error(ErrorCode::ValueError, "camera up is parallel to the view direction");
}

Ray generate_ray(const Camera& cam, std::size_t px, std::size_t py) {
  assert(px < cam.width && py < cam.height);
  const Vec3 forward = normalize(cam.look_at - cam.position);
  const Vec3 right = normalize(cross(forward, cam.up));
  const Vec3 up = cross(right, forward);

  const double tan_half = std::tan(cam.vfov_deg * std::numbers::pi / 360.0);
  const double aspect = static_cast<double>(cam.width) / static_cast<double>(cam.height);
  const double sx = ((static_cast<double>(px) + 0.5) / static_cast<double>(cam.width) * 2.0 - 1.0) * aspect * tan_half;
  const double sy = (1.0 - (static_cast<double>(py) + 0.5) / static_cast<double>(cam.height) * 2.0) * tan_half;
  return {cam.position, normalize(forward + sx * right + sy * up)};
}

std::optional<Interval> intersect_aabb(const Ray& ray, const Aabb& box) {
  double t0 = -std::numeric_limits<double>::infinity();
  double t1 = std::numeric_limits<double>::infinity();
  for (int a = 0; a < 3; ++a) {
    const double o = ray.origin[a];
    const double d = ray.direction[a];
    if (d == 0.0) {
      if (o < box.lo[a] || o > box.hi[a]) return std::nullopt;
      continue;
    }
    double near = (box.lo[a] - o) / d;
    double far = (box.hi[a] - o) / d;
    if (near > far) std::swap(near, far);
    t0 = std::max(t0, near);
    t1 = std::min(t1, far);
  }
  if (t1 < std::max(t0, 0.0)) return std::nullopt;
  return Interval{std::max(t0, 0.0), t1};
}

}  // namespace carve
