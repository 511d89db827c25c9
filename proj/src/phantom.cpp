#include "carve/phantom.hpp"

#include <algorithm>
#include <set>

#include "carve/error.hpp"
#include "carve/nrrd.hpp"

namespace carve {

void PhantomSpec::validate() const {
  if (dims.count() == 0) throw Error(ErrorCode::BadSpec, "dims must be positive");
  for (int a = 0; a < 3; ++a)
    if (!(spacing[a] > 0.0)) throw Error(ErrorCode::BadSpec, "spacing must be positive");
  const std::size_t n = radius_fractions.size();
  if (n == 0 || labels.size() != n || intensities.size() != n)
    throw Error(ErrorCode::BadSpec, "shell fractions, labels and intensities must have equal non-zero length");
  for (std::size_t s = 0; s < n; ++s) {
    if (!(radius_fractions[s] > 0.0)) throw Error(ErrorCode::BadSpec, "radius fractions must be positive");
    if (s > 0 && !(radius_fractions[s] < radius_fractions[s - 1]))
      throw Error(ErrorCode::BadSpec, "radius fractions must be strictly decreasing");
  }
  const std::set<Label> distinct(labels.begin(), labels.end());
  if (distinct.size() != n) throw Error(ErrorCode::BadSpec, "shell labels must be distinct");
  if (distinct.contains(kBackgroundLabel) || distinct.contains(kMissLabel))
    throw Error(ErrorCode::BadSpec, "shell labels must be in [1, 65534]");
}

double PhantomSpec::half_extent() const {
  return 0.5 * std::min({static_cast<double>(dims.nx) * spacing.x, static_cast<double>(dims.ny) * spacing.y,
                         static_cast<double>(dims.nz) * spacing.z});
}

std::pair<Label, float> phantom_shell_at(const PhantomSpec& spec, double d) {
  for (std::size_t s = spec.radius_fractions.size(); s-- > 0;)
    if (spec.radius_fractions[s] >= d) return {spec.labels[s], spec.intensities[s]};
  return {kBackgroundLabel, 0.0f};
}

Phantom phantom_generate(const PhantomSpec& spec) {
  spec.validate();
  const Vec3 origin{-0.5 * static_cast<double>(spec.dims.nx - 1) * spec.spacing.x,
                    -0.5 * static_cast<double>(spec.dims.ny - 1) * spec.spacing.y,
                    -0.5 * static_cast<double>(spec.dims.nz - 1) * spec.spacing.z};
  Phantom ph;
  static_cast<Grid<float>&>(ph.intensity) = Grid<float>(spec.dims, spec.spacing, origin, 0.0f);
  static_cast<Grid<Label>&>(ph.labels) = Grid<Label>(spec.dims, spec.spacing, origin, kBackgroundLabel);
  const bool fits_u8 = std::all_of(spec.intensities.begin(), spec.intensities.end(),
                                   [](float v) { return v >= 0.0f && v <= 255.0f && v == static_cast<int>(v); });
  ph.intensity.stored_type = fits_u8 ? ScalarType::UInt8 : ScalarType::Float32;
  const bool labels_u8 = std::all_of(spec.labels.begin(), spec.labels.end(), [](Label l) { return l <= 255; });
  ph.labels.stored_type = labels_u8 ? ScalarType::UInt8 : ScalarType::UInt16;

  const double half = spec.half_extent();
  for (std::size_t k = 0; k < spec.dims.nz; ++k)
    for (std::size_t j = 0; j < spec.dims.ny; ++j)
      for (std::size_t i = 0; i < spec.dims.nx; ++i) {
        const double d = length(ph.labels.voxel_position(i, j, k)) / half;
        const auto [label, value] = phantom_shell_at(spec, d);
        ph.labels.at(i, j, k) = label;
        ph.intensity.at(i, j, k) = value;
      }
  return ph;
}

ColorTable phantom_color_table(const PhantomSpec& spec) {
  static constexpr Rgb kPalette[] = {
      {0.9f, 0.7f, 0.6f}, {0.8f, 0.3f, 0.3f}, {0.3f, 0.6f, 0.9f}, {0.95f, 0.9f, 0.4f}, {0.4f, 0.8f, 0.4f},
  };
  ColorTable table;
  table.entries[kBackgroundLabel] = {{}, "background"};
  for (std::size_t s = 0; s < spec.labels.size(); ++s)
    table.entries[spec.labels[s]] = {kPalette[s % std::size(kPalette)], "shell_" + std::to_string(s + 1)};
  // Round through the 8-bit text form so a freshly generated table equals a
  // parsed one.
  return parse_color_table(serialize_color_table(table));
}

Scene phantom_scene(const PhantomSpec& spec, const std::string& intensity_path, const std::string& labels_path,
                    const std::string& color_table_path) {
  Scene scene;
  scene.intensity_path = intensity_path;
  scene.labels_path = labels_path;
  scene.color_table_path = color_table_path;

  // Opacity ramps up with intensity; the background (intensity 0) stays clear.
  std::vector<ControlPoint> tf{{0.0f, 0.0f}};
  std::vector<float> sorted = spec.intensities;
  std::sort(sorted.begin(), sorted.end());
  const float first = sorted.front();
  if (first > 0.0f) tf.push_back({first * 0.5f, 0.0f});
  for (std::size_t s = 0; s < sorted.size(); ++s) {
    const float opacity = 0.3f + 0.5f * static_cast<float>(s) / static_cast<float>(std::max<std::size_t>(1, sorted.size() - 1));
    if (sorted[s] > tf.back().intensity) tf.push_back({sorted[s], opacity});
  }
  scene.transfer = OpacityTransferFunction(std::move(tf));

  const double half = spec.half_extent();
  scene.camera.position = {0.0, 0.0, -4.5 * half};
  scene.camera.look_at = {0.0, 0.0, 0.0};
  scene.camera.up = {0.0, 1.0, 0.0};
  scene.camera.vfov_deg = 30.0;
  scene.camera.width = 256;
  scene.camera.height = 256;
  return scene;
}

PhantomFiles write_phantom(const PhantomSpec& spec, const std::filesystem::path& prefix) {
  const Phantom ph = phantom_generate(spec);
  const auto with = [&](const char* suffix) {
    auto p = prefix;
    p += suffix;
    return p;
  };
  PhantomFiles files{with("_intensity.nrrd"), with("_labels.nrrd"), with("_colors.txt"), with("_scene.json")};
  write_file(files.intensity, encode_nrrd(ph.intensity));
  write_file(files.labels, encode_nrrd(ph.labels));
  write_file(files.colors, serialize_color_table(phantom_color_table(spec)));
  const Scene scene = phantom_scene(spec, files.intensity.filename().string(), files.labels.filename().string(),
                                    files.colors.filename().string());
  write_file(files.scene, serialize_scene(scene));
  return files;
}

}  // namespace carve
