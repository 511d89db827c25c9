#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

#include "carve/camera.hpp"
#include "carve/clip.hpp"
#include "carve/render_params.hpp"
#include "carve/transfer.hpp"

namespace carve {

/// Everything needed to produce one frame: data references, classification,
/// volume pose, the sphere stack and the view.
struct Scene {
  std::string intensity_path;
  std::string labels_path;
  std::string color_table_path;
  OpacityTransferFunction transfer;
  Pose pose;
  std::vector<ClippingSphere> spheres;
  Camera camera;
  RenderParams render;

  bool operator==(const Scene&) const = default;
};

inline constexpr double kQuaternionTolerance = 1e-6;

Scene parse_scene(std::string_view text);
Scene scene_from_json(const nlohmann::json& doc);

std::string serialize_scene(const Scene& scene);

ClippingSphere sphere_from_json(const nlohmann::json& v, const std::string& path = "sphere");
nlohmann::json sphere_to_json(const ClippingSphere& sphere);
nlohmann::json scene_to_json(const Scene& scene);

}  // namespace carve
