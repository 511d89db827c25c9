#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "carve/camera.hpp"
#include "carve/clip.hpp"
#include "carve/color_table.hpp"
#include "carve/render_params.hpp"
#include "carve/scene.hpp"
#include "carve/volume.hpp"

namespace carve {

/// Color, normalized first-hit depth and first-hit label per pixel.
/// depth is exactly 1.0 where first_seg is kMissLabel and < 1 elsewhere.
struct FrameSet {
  std::size_t width = 0;
  std::size_t height = 0;
  std::vector<std::uint8_t> color;  // RGBA, row-major, top row first
  std::vector<float> depth;
  std::vector<Label> first_seg;

  FrameSet() = default;
  FrameSet(std::size_t w, std::size_t h)
      : width(w), height(h), color(w * h * 4, 0), depth(w * h, 1.0f), first_seg(w * h, kMissLabel) {}

  bool operator==(const FrameSet&) const = default;
};

/// Loaded data a scene refers to.
struct VolumeData {
  IntensityVolume intensity;
  LabelMap labels;
  ColorTable colors;
};

/// Output of pipeline stages 1-3 plus what stage 4 needs to shade.
struct PreparedVolume {
  OpacityVolume opacity;     // stage 1, clipped
  OpacityVolume aa_opacity;  // stage 2 (== opacity when anti-aliasing is off)
  NormalVolume normals;      // stage 3
  const LabelMap* labels = nullptr;
  std::vector<Rgb> palette;  // dense label -> color
  Pose pose;
};

PreparedVolume prepare_volume(const VolumeData& data, const OpacityTransferFunction& tf,
                              std::span<const ClippingSphere> spheres, const Pose& pose,
                              const RenderParams& params, unsigned threads = 0);

/// Front-to-back accumulation of premultiplied samples.
struct Compositor {
  std::array<double, 3> color{0.0, 0.0, 0.0};
  double alpha = 0.0;

  void add(double sample_alpha, const std::array<double, 3>& sample_color) {
    const double w = (1.0 - alpha) * sample_alpha;
    for (int c = 0; c < 3; ++c) color[c] += w * sample_color[c];
    alpha += w;
  }
};

struct RayResult {
  std::array<double, 4> rgba{};  // composited over the background
  float depth = 1.0f;
  Label first_label = kMissLabel;
  std::optional<Vec3> hit_position;  // world mm of the first-hit sample
};

/// Opacity correction for a step of `ratio` reference lengths.
inline double correct_opacity(double alpha, double ratio) { return 1.0 - std::pow(1.0 - alpha, ratio); }

/// Casts one ray through the prepared volume. The first-hit sample is the
/// first one whose corrected opacity reaches tau_hit and whose
/// nearest voxel is itself visible (nonzero stage-1 opacity).
RayResult march_ray(const Ray& ray, const PreparedVolume& volume, const RenderParams& params);

/// Local-space bounds of the volume: voxel centers padded by half a voxel.
Aabb local_bounds(const Grid<float>& grid);

FrameSet render(const Scene& scene, const VolumeData& data, unsigned threads = 0);
FrameSet render(const Camera& camera, const PreparedVolume& volume, const RenderParams& params,
                unsigned threads = 0);

}  // namespace carve
