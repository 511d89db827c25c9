#pragma once

#include <utility>
#include <vector>

namespace carve {

struct ControlPoint {
  float intensity = 0.0f;
  float opacity = 0.0f;
  bool operator==(const ControlPoint&) const = default;
};

/// Piecewise-linear intensity -> opacity map. At least two points with
/// strictly increasing intensities; opacities in [0,1].
class OpacityTransferFunction {
 public:
  OpacityTransferFunction() = default;
  explicit OpacityTransferFunction(std::vector<ControlPoint> points);

  /// Linear between bracketing points, clamped to the end opacities outside.
  float operator()(float intensity) const;

  const std::vector<ControlPoint>& points() const { return points_; }
  bool operator==(const OpacityTransferFunction&) const = default;

 private:
  std::vector<ControlPoint> points_{{0.0f, 0.0f}, {1.0f, 1.0f}};
};

inline float eval_transfer(const OpacityTransferFunction& tf, float intensity) { return tf(intensity); }

}  // namespace carve
