#include "carve/renderer.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "carve/error.hpp"
#include "carve/filters.hpp"
#include "carve/parallel.hpp"

namespace carve {

void RenderParams::validate() const {
  if (!(step_size_voxels > 0.0)) throw Error(ErrorCode::ValueError, "step_size_voxels must be positive");
  if (!(early_term_alpha > 0.0 && early_term_alpha <= 1.0))
    throw Error(ErrorCode::ValueError, "early_term_alpha must be in (0,1]");
  if (!(tau_hit > 0.0 && tau_hit <= 1.0)) throw Error(ErrorCode::ValueError, "tau_hit must be in (0,1]");
  if (!(aa_contrast_threshold > 0.0f && aa_contrast_threshold <= 1.0f))
    throw Error(ErrorCode::ValueError, "aa contrast threshold must be in (0,1]");
  for (double k : {shading.ka, shading.kd, shading.ks})
    if (!(k >= 0.0 && k <= 1.0)) throw Error(ErrorCode::ValueError, "shading coefficients must be in [0,1]");
  if (!(shading.shininess >= 1.0)) throw Error(ErrorCode::ValueError, "shininess must be >= 1");
  for (double c : shading.background)
    if (!(c >= 0.0 && c <= 1.0)) throw Error(ErrorCode::ValueError, "background channels must be in [0,1]");
}

namespace {

// Continuous index coordinates of a local-space point, clamped to the grid.
struct GridCoord {
  std::size_t i0[3];
  std::size_t i1[3];
  double frac[3];
  std::size_t nearest[3];
};

GridCoord locate(const Grid<float>& g, const Vec3& local) {
  GridCoord c{};
  for (int a = 0; a < 3; ++a) {
    const double n = static_cast<double>(g.dims[a]);
    const double u = std::clamp((local[a] - g.origin[a]) / g.spacing[a], 0.0, n - 1.0);
    const double f = std::floor(u);
    c.i0[a] = static_cast<std::size_t>(f);
    c.i1[a] = std::min(c.i0[a] + 1, g.dims[a] - 1);
    c.frac[a] = u - f;
    c.nearest[a] = static_cast<std::size_t>(std::min(std::floor(u + 0.5), n - 1.0));
  }
  return c;
}

template <typename T, typename Accum, typename Fn>
void trilinear(const Grid<T>& g, const GridCoord& c, Accum& acc, Fn&& fn) {
  for (int corner = 0; corner < 8; ++corner) {
    const int bx = corner & 1, by = (corner >> 1) & 1, bz = (corner >> 2) & 1;
    const double w = (bx ? c.frac[0] : 1.0 - c.frac[0]) * (by ? c.frac[1] : 1.0 - c.frac[1]) *
                     (bz ? c.frac[2] : 1.0 - c.frac[2]);
    if (w == 0.0) continue;
    fn(acc, w, g.at(bx ? c.i1[0] : c.i0[0], by ? c.i1[1] : c.i0[1], bz ? c.i1[2] : c.i0[2]));
  }
}

double sample_opacity(const OpacityVolume& v, const GridCoord& c) {
  double acc = 0.0;
  trilinear(v, c, acc, [](double& a, double w, float s) { a += w * s; });
  return acc;
}

Vec3 sample_normal(const NormalVolume& v, const GridCoord& c) {
  Vec3 acc;
  trilinear(v, c, acc, [](Vec3& a, double w, const Normal& n) { a += Vec3{n.x, n.y, n.z} * w; });
  return acc;
}

}  // namespace

Aabb local_bounds(const Grid<float>& grid) {
  Aabb box;
  for (int a = 0; a < 3; ++a) {
    box.lo[a] = grid.origin[a] - 0.5 * grid.spacing[a];
    box.hi[a] = grid.origin[a] + (static_cast<double>(grid.dims[a]) - 0.5) * grid.spacing[a];
  }
  return box;
}

PreparedVolume prepare_volume(const VolumeData& data, const OpacityTransferFunction& tf,
                              std::span<const ClippingSphere> spheres, const Pose& pose,
                              const RenderParams& params, unsigned threads) {
  require_same_dims(data.intensity.dims, data.labels.dims, "intensity and label volumes differ in size");
  require_covers(data.colors, data.labels);

  PreparedVolume pv;
  pv.opacity = compute_opacity_volume(data.intensity, data.labels, tf, spheres, pose, threads);
  pv.aa_opacity = antialias_opacity(pv.opacity, params.aa(), threads);
  pv.normals = compute_normals(pv.aa_opacity, threads);
  pv.labels = &data.labels;
  pv.pose = pose;
  pv.palette.assign(std::size_t{data.labels.max_label()} + 1, Rgb{});
  for (const auto& [label, entry] : data.colors.entries)
    if (label < pv.palette.size()) pv.palette[label] = entry.color;
  return pv;
}

RayResult march_ray(const Ray& ray, const PreparedVolume& volume, const RenderParams& params) {
  RayResult result;
  const auto& bg = params.shading.background;
  const auto finish = [&](const Compositor& comp) {
    for (int c = 0; c < 3; ++c) result.rgba[c] = std::clamp(comp.color[c] + (1.0 - comp.alpha) * bg[c], 0.0, 1.0);
    result.rgba[3] = std::clamp(comp.alpha + (1.0 - comp.alpha) * bg[3], 0.0, 1.0);
    return result;
  };

  const OpacityVolume& grid = volume.aa_opacity;
  const Ray local{volume.pose.to_local(ray.origin), volume.pose.direction_to_local(ray.direction)};
  const auto span = intersect_aabb(local, local_bounds(grid));
  Compositor comp;
  if (!span) return finish(comp);

  // Steps are measured in world units; the correction exponent is the step
  // expressed in reference lengths.
  const double reference = std::min({grid.spacing.x, grid.spacing.y, grid.spacing.z}) * volume.pose.scale;
  const double step = params.step_size_voxels * reference;
  const double ratio = step / reference;
  const double t_enter = span->t_enter;
  const double t_exit = span->t_exit;
  const double extent = t_exit - t_enter;

  const Vec3 light = -ray.direction;  // headlight; the half vector equals the light direction
  const auto& sh = params.shading;

  for (std::size_t k = 0;; ++k) {
    const double t = t_enter + static_cast<double>(k) * step;
    if (t > t_exit) break;
    const GridCoord c = locate(grid, local.origin + t * local.direction);
    const double alpha = sample_opacity(grid, c);
    if (!(alpha > 0.0)) continue;

    double corrected;
    if (ratio == 1.0)
      corrected = alpha;
    else if (ratio == 0.5)
      corrected = 1.0 - std::sqrt(1.0 - alpha);
    else
      corrected = correct_opacity(alpha, ratio);

    const Label label = volume.labels->at(c.nearest[0], c.nearest[1], c.nearest[2]);
    if (result.first_label == kMissLabel && corrected >= params.tau_hit &&
        volume.opacity.at(c.nearest[0], c.nearest[1], c.nearest[2]) > 0.0f) {
      result.first_label = label;
      const double depth = extent > 0.0 ? (t - t_enter) / extent : 0.0;
      result.depth = std::min(static_cast<float>(depth), std::nextafter(1.0f, 0.0f));
      result.hit_position = ray.origin + t * ray.direction;
    }

    const Rgb base = label < volume.palette.size() ? volume.palette[label] : Rgb{};
    const std::array<double, 3> albedo{base.r, base.g, base.b};
    // Index-space normal -> world: undo the per-axis spacing, then rotate.
    Vec3 n = sample_normal(volume.normals, c);
    double diffuse = 0.0, specular = 0.0;
    if (length(n) > 1e-6) {
      n = normalize(volume.pose.direction_to_world(
          Vec3{n.x / grid.spacing.x, n.y / grid.spacing.y, n.z / grid.spacing.z}));
      const double nl = std::max(0.0, dot(n, light));
      diffuse = sh.kd * nl;
      specular = sh.ks * std::pow(nl, sh.shininess);
    }
    std::array<double, 3> shaded;
    for (int ch = 0; ch < 3; ++ch)
      shaded[ch] = std::clamp(sh.ka * albedo[ch] + diffuse * albedo[ch] + specular, 0.0, 1.0);

    comp.add(corrected, shaded);
    if (comp.alpha >= params.early_term_alpha) break;
  }
  return finish(comp);
}

FrameSet render(const Camera& camera, const PreparedVolume& volume, const RenderParams& params,
                unsigned threads) {
  camera.validate();
  params.validate();
  FrameSet fs(camera.width, camera.height);
  parallel_for(camera.height, threads, [&](std::size_t y0, std::size_t y1) {
    for (std::size_t py = y0; py < y1; ++py)
      for (std::size_t px = 0; px < camera.width; ++px) {
        const RayResult r = march_ray(generate_ray(camera, px, py), volume, params);
        const std::size_t p = py * camera.width + px;
        for (int c = 0; c < 4; ++c) fs.color[4 * p + c] = static_cast<std::uint8_t>(std::lround(r.rgba[c] * 255.0));
        fs.depth[p] = r.depth;
        fs.first_seg[p] = r.first_label;
      }
  });
  return fs;
}

FrameSet render(const Scene& scene, const VolumeData& data, unsigned threads) {
  scene.render.validate();
  scene.camera.validate();
  const PreparedVolume pv = prepare_volume(data, scene.transfer, scene.spheres, scene.pose, scene.render, threads);
  return render(scene.camera, pv, scene.render, threads);
}

}  // namespace carve
