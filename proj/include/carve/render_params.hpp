#pragma once

#include <array>

#include "carve/filters.hpp"

namespace carve {

struct ShadingParams {
  double ka = 0.2;
  double kd = 0.7;
  double ks = 0.3;
  double shininess = 32.0;
  std::array<double, 4> background{0.0, 0.0, 0.0, 1.0};  // RGBA in [0,1]

  bool operator==(const ShadingParams&) const = default;
};

struct RenderParams {
  double step_size_voxels = 0.5;
  double early_term_alpha = 0.99;
  double tau_hit = 0.05;
  bool aa_enabled = true;
  float aa_contrast_threshold = 0.125f;
  ShadingParams shading;

  AaParams aa() const { return {aa_contrast_threshold, aa_enabled}; }
  /// Throws ValueError when any field is outside its valid range.
  void validate() const;
  bool operator==(const RenderParams&) const = default;
};

}  // namespace carve
