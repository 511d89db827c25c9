#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "carve/geometry.hpp"
#include "carve/transfer.hpp"
#include "carve/volume.hpp"

namespace carve {

/// Per-sphere set of labels the sphere is allowed to hide. Labels beyond
/// size() are never clippable.
class ClipMask {
 public:
  ClipMask() = default;
  explicit ClipMask(std::size_t size, bool all_set = false);

  static ClipMask from_labels(std::span<const Label> labels, std::size_t size);

  std::size_t size() const { return size_; }
  bool test(Label label) const {
    return label < size_ && ((words_[label >> 6] >> (label & 63)) & 1u) != 0;
  }
  void set(Label label, bool value = true);
  void flip(Label label);
  void fill(bool value);
  void resize(std::size_t size);
  std::size_t count() const;
  std::vector<Label> set_labels() const;

  /// Two masks are equal when they clip the same labels; trailing clear
  /// bits do not matter.
  bool operator==(const ClipMask& other) const;

 private:
  std::size_t size_ = 0;
  std::vector<std::uint64_t> words_;
};

inline constexpr double kDefaultMinRadius = 1.0;
inline constexpr double kDefaultMaxRadius = 500.0;

struct ClippingSphere {
  Vec3 center;        // world mm
  double radius = 1;  // world mm
  ClipMask mask;

  bool contains(const Vec3& world) const {
    const Vec3 d = world - center;
    return dot(d, d) < radius * radius;
  }
  bool operator==(const ClippingSphere&) const = default;
};

/// True when any sphere contains the voxel center and may clip its label.
bool is_clipped(std::size_t i, std::size_t j, std::size_t k, const LabelMap& labels,
                std::span<const ClippingSphere> spheres, const Pose& pose);

/// Clipped voxels get opacity 0, the rest the transfer-function opacity of
/// their intensity. Output does not depend on `threads`.
OpacityVolume compute_opacity_volume(const IntensityVolume& intensity, const LabelMap& labels,
                                     const OpacityTransferFunction& tf,
                                     std::span<const ClippingSphere> spheres, const Pose& pose,
                                     unsigned threads = 0);

}  // namespace carve
