#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "carve/color_table.hpp"
#include "carve/scene.hpp"
#include "carve/volume.hpp"

namespace carve {

/// Nested spherical shells centered in the volume. Shell n covers
/// normalized distances up to radius_fractions[n] of the half-extent
/// (0.5 * the smallest physical side); the innermost enclosing shell wins.
struct PhantomSpec {
  Dims dims{128, 128, 128};
  Vec3 spacing{1.0, 1.0, 1.0};
  std::vector<double> radius_fractions{0.45, 0.35, 0.25, 0.12};  // outermost first
  std::vector<Label> labels{1, 2, 3, 4};
  std::vector<float> intensities{40.0f, 80.0f, 120.0f, 200.0f};

  void validate() const;
  /// Physical distance used to normalize radii.
  double half_extent() const;
};

struct Phantom {
  IntensityVolume intensity;
  LabelMap labels;
};

/// Voxel centers are placed so the shell center sits at the local origin.
Phantom phantom_generate(const PhantomSpec& spec);

/// Label and intensity of the shell rule at normalized distance d.
std::pair<Label, float> phantom_shell_at(const PhantomSpec& spec, double d);

ColorTable phantom_color_table(const PhantomSpec& spec);

/// Frontal view along +z framing the whole phantom, no spheres.
Scene phantom_scene(const PhantomSpec& spec, const std::string& intensity_path, const std::string& labels_path,
                    const std::string& color_table_path);

struct PhantomFiles {
  std::filesystem::path intensity, labels, colors, scene;
};

/// Writes <prefix>_intensity.nrrd, <prefix>_labels.nrrd, <prefix>_colors.txt
/// and <prefix>_scene.json. Scene paths are relative to the scene file.
PhantomFiles write_phantom(const PhantomSpec& spec, const std::filesystem::path& prefix);

}  // namespace carve
