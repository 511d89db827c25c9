#include "carve/transfer.hpp"

#include <algorithm>
#include <string>

#include "carve/error.hpp"

namespace carve {

OpacityTransferFunction::OpacityTransferFunction(std::vector<ControlPoint> points)
    : points_(std::move(points)) {
  if (points_.size() < 2) throw Error(ErrorCode::ValueError, "transfer function needs at least 2 points");
  for (std::size_t n = 0; n < points_.size(); ++n) {
    const auto& p = points_[n];
    if (!(p.opacity >= 0.0f && p.opacity <= 1.0f))
      throw Error(ErrorCode::ValueError, "transfer opacity out of [0,1] at point " + std::to_string(n));
    if (n > 0 && !(p.intensity > points_[n - 1].intensity))
      throw Error(ErrorCode::ValueError, "transfer intensities must be strictly increasing");
  }
}

float OpacityTransferFunction::operator()(float intensity) const {
  if (!(intensity > points_.front().intensity)) return points_.front().opacity;
  if (!(intensity < points_.back().intensity)) return points_.back().opacity;
  const auto hi = std::upper_bound(points_.begin(), points_.end(), intensity,
                                   [](float v, const ControlPoint& p) { return v < p.intensity; });
  const auto lo = hi - 1;
  const float t = (intensity - lo->intensity) / (hi->intensity - lo->intensity);
  return lo->opacity + t * (hi->opacity - lo->opacity);
}

}  // namespace carve
