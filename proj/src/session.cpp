#include "carve/session.hpp"

#include <algorithm>

#include "carve/error.hpp"

namespace carve {

CarveSession::CarveSession(Label label_universe, Vec3 center, double radius, SessionConfig config)
    : label_universe_(label_universe), config_(config) {
  if (label_universe >= kMissLabel) throw Error(ErrorCode::ValueError, "label universe must be below 65535");
  if (!(config_.min_radius > 0.0 && config_.min_radius <= config_.max_radius))
    throw Error(ErrorCode::ValueError, "radius bounds must satisfy 0 < min <= max");
  if (!(config_.shrink_factor > 0.0)) throw Error(ErrorCode::ValueError, "shrink_factor must be positive");
  active_.center = center;
  active_.radius = clamp_radius(radius);
  // A fresh sphere clips every segment.
  active_.mask = ClipMask(std::size_t{label_universe} + 1, true);
}

double CarveSession::clamp_radius(double r) const {
  return std::clamp(r, config_.min_radius, config_.max_radius);
}

std::vector<ClippingSphere> CarveSession::all_spheres() const {
  std::vector<ClippingSphere> out = fixed_;
  out.push_back(active_);
  return out;
}

void CarveSession::toggle_label(Label label) {
  if (label > label_universe_)
    throw Error(ErrorCode::LabelOutOfRange,
                "label " + std::to_string(label) + " exceeds universe " + std::to_string(label_universe_));
  active_.mask.flip(label);
}

void CarveSession::reset_mask(ResetTarget target) { active_.mask.fill(target == ResetTarget::AllClippable); }

void CarveSession::set_active_sphere(const Vec3& center, double radius) {
  active_.center = center;
  active_.radius = clamp_radius(radius);
}

void CarveSession::fix_active_sphere() {
  fixed_.push_back(active_);
  // ClipMask is a value type: the new active sphere owns an independent copy.
  active_.radius = clamp_radius(active_.radius * config_.shrink_factor);
}

void CarveSession::remove_last_sphere() {
  if (fixed_.empty()) throw Error(ErrorCode::NothingToRemove, "no fixed sphere to remove");
  // Undo of fix: the removed sphere becomes the one being edited again.
  active_ = std::move(fixed_.back());
  fixed_.pop_back();
}

Scene CarveSession::snapshot(Scene base) const {
  base.spheres = all_spheres();
  return base;
}

CarveSession CarveSession::from_spheres(const std::vector<ClippingSphere>& spheres, Label label_universe,
                                        SessionConfig config) {
  if (spheres.empty()) throw Error(ErrorCode::ValueError, "a session needs at least the active sphere");
  CarveSession s(label_universe, spheres.back().center, spheres.back().radius, config);
  const auto fit = [&](ClippingSphere sphere) {
    for (Label l : sphere.mask.set_labels())
      if (l > label_universe) throw Error(ErrorCode::LabelOutOfRange, "sphere mask label " + std::to_string(l));
    sphere.mask.resize(std::size_t{label_universe} + 1);
    return sphere;
  };
  for (std::size_t n = 0; n + 1 < spheres.size(); ++n) s.fixed_.push_back(fit(spheres[n]));
  s.active_ = fit(spheres.back());
  return s;
}

PickResult pick_segment(const Ray& ray, const PreparedVolume& volume, const RenderParams& params) {
  const RayResult r = march_ray(ray, volume, params);
  if (r.first_label == kMissLabel) return {};
  return {r.first_label, r.hit_position};
}

PickResult pick_segment(const CarveSession& session, const Ray& ray, const Scene& scene, const VolumeData& data,
                        unsigned threads) {
  const auto spheres = session.all_spheres();
  const PreparedVolume pv = prepare_volume(data, scene.transfer, spheres, scene.pose, scene.render, threads);
  return pick_segment(ray, pv, scene.render);
}

}  // namespace carve
