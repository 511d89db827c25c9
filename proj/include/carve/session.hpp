#pragma once

#include <optional>
#include <vector>

#include "carve/clip.hpp"
#include "carve/renderer.hpp"
#include "carve/scene.hpp"

namespace carve {

struct SessionConfig {
  double min_radius = kDefaultMinRadius;
  double max_radius = kDefaultMaxRadius;
  double shrink_factor = 0.75;  // radius ratio of the sphere spawned by fix_active_sphere

  bool operator==(const SessionConfig&) const = default;
};

struct PickResult {
  std::optional<Label> label;  // never kMissLabel
  std::optional<Vec3> position;
};

enum class ResetTarget { AllClippable, NoneClippable };

/// Carving interaction state: a stack of fixed spheres plus the one sphere
/// currently being edited. Fixed spheres never change after being pushed.
class CarveSession {
 public:
  CarveSession(Label label_universe, Vec3 center, double radius, SessionConfig config = {});

  Label label_universe() const { return label_universe_; }
  const SessionConfig& config() const { return config_; }
  const std::vector<ClippingSphere>& fixed_spheres() const { return fixed_; }
  const ClippingSphere& active_sphere() const { return active_; }

  /// Fixed spheres followed by the active sphere.
  std::vector<ClippingSphere> all_spheres() const;

  void toggle_label(Label label);
  void reset_mask(ResetTarget target);
  void set_active_sphere(const Vec3& center, double radius);
  void fix_active_sphere();
  /// Pops the last fixed sphere and makes it the active sphere again, so
  /// fix followed by remove restores the previous state exactly.
  void remove_last_sphere();

  /// `base` with its sphere list replaced by all_spheres().
  Scene snapshot(Scene base) const;

  /// Rebuilds a session from a scene's sphere list, treating the last
  /// sphere as the active one. Throws ValueError on an empty list.
  static CarveSession from_spheres(const std::vector<ClippingSphere>& spheres, Label label_universe,
                                   SessionConfig config = {});

  bool operator==(const CarveSession&) const = default;

 private:
  double clamp_radius(double r) const;

  Label label_universe_;
  SessionConfig config_;
  std::vector<ClippingSphere> fixed_;
  ClippingSphere active_;
};

/// Picks the first visible segment along `ray` with the session's spheres
/// applied, using the same marching as the renderer.
PickResult pick_segment(const CarveSession& session, const Ray& ray, const Scene& scene, const VolumeData& data,
                        unsigned threads = 0);

/// Pick against an already prepared (clipped) volume.
PickResult pick_segment(const Ray& ray, const PreparedVolume& volume, const RenderParams& params);

}  // namespace carve
