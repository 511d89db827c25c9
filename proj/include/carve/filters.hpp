#pragma once

#include "carve/volume.hpp"

namespace carve {

struct AaParams {
  float contrast_threshold = 0.125f;  // in (0, 1]
  bool enabled = true;
};

/// Contrast-gated 3D smoothing of an opacity volume. A voxel whose
/// 6-neighborhood (itself included, borders clamped) spans more than
/// contrast_threshold is replaced by the (1,2,1)^3/64 tent average; other
/// voxels are copied unchanged. Disabled params return the input as-is.
OpacityVolume antialias_opacity(const OpacityVolume& ov, const AaParams& params = {},
                                unsigned threads = 0);

/// Outward surface normals from a normalized 3D Sobel gradient: normal =
/// -g/|g|, or the zero vector where |g| <= 1e-6. Normals are expressed on
/// the index grid (no spacing or pose applied).
NormalVolume compute_normals(const OpacityVolume& ov, unsigned threads = 0);

/// Gradient of the Sobel operator at one voxel, scaled so that a unit
/// slope along an axis yields 1.
Vec3 sobel_gradient(const OpacityVolume& ov, std::size_t i, std::size_t j, std::size_t k);

}  // namespace carve
