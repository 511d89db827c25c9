#include "carve/scene.hpp"

#include <cmath>

#include "carve/error.hpp"

namespace carve {

using nlohmann::json;

namespace {

[[noreturn]] void schema(const std::string& path, const std::string& what) {
  throw Error(ErrorCode::SchemaError, path + ": " + what);
}

const json& field(const json& obj, const char* key, const std::string& path) {
  if (!obj.is_object()) schema(path, "expected an object");
  const auto it = obj.find(key);
  if (it == obj.end()) schema(path + "." + key, "missing field");
  return *it;
}

double number(const json& v, const std::string& path) {
  if (!v.is_number()) schema(path, "expected a number");
  return v.get<double>();
}

std::string string(const json& v, const std::string& path) {
  if (!v.is_string()) schema(path, "expected a string");
  return v.get<std::string>();
}

bool boolean(const json& v, const std::string& path) {
  if (!v.is_boolean()) schema(path, "expected a boolean");
  return v.get<bool>();
}

std::size_t positive_int(const json& v, const std::string& path) {
  if (!v.is_number_integer() || v.get<long long>() <= 0) schema(path, "expected a positive integer");
  return v.get<std::size_t>();
}

template <std::size_t N>
std::array<double, N> numbers(const json& v, const std::string& path) {
  if (!v.is_array() || v.size() != N) schema(path, "expected an array of " + std::to_string(N) + " numbers");
  std::array<double, N> out{};
  for (std::size_t n = 0; n < N; ++n) out[n] = number(v[n], path + "[" + std::to_string(n) + "]");
  return out;
}

Vec3 vec3(const json& v, const std::string& path) {
  const auto a = numbers<3>(v, path);
  return {a[0], a[1], a[2]};
}

// Optional members fall back to the value already in `out`.
void maybe(const json& obj, const char* key, const std::string& path, double& out) {
  if (const auto it = obj.find(key); it != obj.end()) out = number(*it, path + "." + key);
}

OpacityTransferFunction parse_transfer(const json& v) {
  const std::string path = "transfer_function";
  if (!v.is_array()) schema(path, "expected an array of [intensity, opacity] pairs");
  std::vector<ControlPoint> points;
  for (std::size_t n = 0; n < v.size(); ++n) {
    const auto p = numbers<2>(v[n], path + "[" + std::to_string(n) + "]");
    points.push_back({static_cast<float>(p[0]), static_cast<float>(p[1])});
  }
  return OpacityTransferFunction(std::move(points));
}

Pose parse_pose(const json& v) {
  Pose pose;
  pose.translation = vec3(field(v, "translation", "pose"), "pose.translation");
  const auto q = numbers<4>(field(v, "rotation", "pose"), "pose.rotation");
  pose.rotation = {q[0], q[1], q[2], q[3]};
  if (std::abs(pose.rotation.norm() - 1.0) > kQuaternionTolerance)
    throw Error(ErrorCode::ValueError, "pose.rotation is not a unit quaternion");
  pose.scale = number(field(v, "scale", "pose"), "pose.scale");
  if (!(pose.scale > 0.0)) throw Error(ErrorCode::ValueError, "pose.scale must be positive");
  return pose;
}

}  // namespace

ClippingSphere sphere_from_json(const json& v, const std::string& path) {
  ClippingSphere s;
  s.center = vec3(field(v, "center", path), path + ".center");
  s.radius = number(field(v, "radius", path), path + ".radius");
  if (!(s.radius > 0.0)) throw Error(ErrorCode::ValueError, path + ".radius must be positive");
  const json& labels = field(v, "clipped_labels", path);
  if (!labels.is_array()) schema(path + ".clipped_labels", "expected an array of label ids");
  std::vector<Label> ids;
  for (const auto& id : labels) {
    if (!id.is_number_integer() || id.get<long long>() < 0 || id.get<long long>() >= kMissLabel)
      schema(path + ".clipped_labels", "label ids must be integers in [0, 65534]");
    ids.push_back(static_cast<Label>(id.get<long long>()));
  }
  s.mask = ClipMask::from_labels(ids, 0);
  return s;
}

namespace {

Camera parse_camera(const json& v) {
  Camera c;
  c.position = vec3(field(v, "position", "camera"), "camera.position");
  c.look_at = vec3(field(v, "look_at", "camera"), "camera.look_at");
  c.up = vec3(field(v, "up", "camera"), "camera.up");
  c.vfov_deg = number(field(v, "vfov_deg", "camera"), "camera.vfov_deg");
  c.width = positive_int(field(v, "width", "camera"), "camera.width");
  c.height = positive_int(field(v, "height", "camera"), "camera.height");
  c.validate();
  return c;
}

RenderParams parse_render(const json& v) {
  RenderParams r;
  if (!v.is_object()) schema("render", "expected an object");
  maybe(v, "step_size_voxels", "render", r.step_size_voxels);
  maybe(v, "early_term_alpha", "render", r.early_term_alpha);
  maybe(v, "tau_hit", "render", r.tau_hit);
  if (const auto it = v.find("aa_enabled"); it != v.end()) r.aa_enabled = boolean(*it, "render.aa_enabled");
  if (const auto it = v.find("aa_contrast_threshold"); it != v.end())
    r.aa_contrast_threshold = static_cast<float>(number(*it, "render.aa_contrast_threshold"));
  if (const auto it = v.find("shading"); it != v.end()) {
    const json& s = *it;
    if (!s.is_object()) schema("render.shading", "expected an object");
    maybe(s, "ka", "render.shading", r.shading.ka);
    maybe(s, "kd", "render.shading", r.shading.kd);
    maybe(s, "ks", "render.shading", r.shading.ks);
    maybe(s, "shininess", "render.shading", r.shading.shininess);
    if (const auto bg = s.find("background"); bg != s.end())
      r.shading.background = numbers<4>(*bg, "render.shading.background");
  }
  r.validate();
  return r;
}

json to_json(const Vec3& v) { return json::array({v.x, v.y, v.z}); }

}  // namespace

Scene scene_from_json(const json& doc) {
  if (!doc.is_object()) schema("scene", "expected an object");
  Scene scene;
  scene.intensity_path = string(field(doc, "intensity", "scene"), "intensity");
  scene.labels_path = string(field(doc, "labels", "scene"), "labels");
  scene.color_table_path = string(field(doc, "color_table", "scene"), "color_table");
  scene.transfer = parse_transfer(field(doc, "transfer_function", "scene"));
  if (const auto it = doc.find("pose"); it != doc.end()) scene.pose = parse_pose(*it);
  if (const auto it = doc.find("spheres"); it != doc.end()) {
    if (!it->is_array()) schema("spheres", "expected an array");
    for (std::size_t n = 0; n < it->size(); ++n)
      scene.spheres.push_back(sphere_from_json((*it)[n], "spheres[" + std::to_string(n) + "]"));
  }
  scene.camera = parse_camera(field(doc, "camera", "scene"));
  if (const auto it = doc.find("render"); it != doc.end()) scene.render = parse_render(*it);
  return scene;
}

Scene parse_scene(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::SchemaError, std::string("not a JSON document: ") + e.what());
  }
  return scene_from_json(doc);
}

json sphere_to_json(const ClippingSphere& s) {
  return {{"center", to_json(s.center)}, {"radius", s.radius}, {"clipped_labels", s.mask.set_labels()}};
}

json scene_to_json(const Scene& scene) {
  json doc;
  doc["intensity"] = scene.intensity_path;
  doc["labels"] = scene.labels_path;
  doc["color_table"] = scene.color_table_path;
  json tf = json::array();
  for (const auto& p : scene.transfer.points()) tf.push_back(json::array({p.intensity, p.opacity}));
  doc["transfer_function"] = std::move(tf);
  const auto& q = scene.pose.rotation;
  doc["pose"] = {{"translation", to_json(scene.pose.translation)},
                 {"rotation", json::array({q.w, q.x, q.y, q.z})},
                 {"scale", scene.pose.scale}};
  json spheres = json::array();
  for (const auto& s : scene.spheres)
    spheres.push_back(sphere_to_json(s));
  doc["spheres"] = std::move(spheres);
  const auto& c = scene.camera;
  doc["camera"] = {{"position", to_json(c.position)}, {"look_at", to_json(c.look_at)}, {"up", to_json(c.up)},
                   {"vfov_deg", c.vfov_deg},          {"width", c.width},             {"height", c.height}};
  const auto& r = scene.render;
  doc["render"] = {{"step_size_voxels", r.step_size_voxels},
                   {"early_term_alpha", r.early_term_alpha},
                   {"tau_hit", r.tau_hit},
                   {"aa_enabled", r.aa_enabled},
                   {"aa_contrast_threshold", r.aa_contrast_threshold},
                   {"shading",
                    {{"ka", r.shading.ka},
                     {"kd", r.shading.kd},
                     {"ks", r.shading.ks},
                     {"shininess", r.shading.shininess},
                     {"background", r.shading.background}}}};
  return doc;
}

std::string serialize_scene(const Scene& scene) { return scene_to_json(scene).dump(2) + "\n"; }

}  // namespace carve
