#include "carve/filters.hpp"

#include <algorithm>
#include <array>
#include <cmath>

#include "carve/error.hpp"
#include "carve/parallel.hpp"

namespace carve {

namespace {

constexpr std::array<int, 3> kTent{1, 2, 1};

std::size_t clamp_index(std::ptrdiff_t v, std::size_t n) {
  return static_cast<std::size_t>(std::clamp<std::ptrdiff_t>(v, 0, static_cast<std::ptrdiff_t>(n) - 1));
}

struct Neighborhood {
  // Clamped neighbor indices along each axis: [-1, 0, +1].
  std::array<std::size_t, 3> x, y, z;

  Neighborhood(const Dims& d, std::size_t i, std::size_t j, std::size_t k) {
    for (int o = -1; o <= 1; ++o) {
      x[o + 1] = clamp_index(static_cast<std::ptrdiff_t>(i) + o, d.nx);
      y[o + 1] = clamp_index(static_cast<std::ptrdiff_t>(j) + o, d.ny);
      z[o + 1] = clamp_index(static_cast<std::ptrdiff_t>(k) + o, d.nz);
    }
  }
};

float local_contrast(const OpacityVolume& ov, const Neighborhood& nb) {
  const float c = ov.at(nb.x[1], nb.y[1], nb.z[1]);
  const std::array<float, 7> s{c,
                               ov.at(nb.x[0], nb.y[1], nb.z[1]),
                               ov.at(nb.x[2], nb.y[1], nb.z[1]),
                               ov.at(nb.x[1], nb.y[0], nb.z[1]),
                               ov.at(nb.x[1], nb.y[2], nb.z[1]),
                               ov.at(nb.x[1], nb.y[1], nb.z[0]),
                               ov.at(nb.x[1], nb.y[1], nb.z[2])};
  const auto [lo, hi] = std::minmax_element(s.begin(), s.end());
  return *hi - *lo;
}

}  // namespace

OpacityVolume antialias_opacity(const OpacityVolume& ov, const AaParams& params, unsigned threads) {
  if (!params.enabled) return ov;
  if (!(params.contrast_threshold > 0.0f && params.contrast_threshold <= 1.0f))
    throw Error(ErrorCode::ValueError, "contrast_threshold must be in (0,1]");

  OpacityVolume out = ov;
  const Dims d = ov.dims;
  parallel_for(d.nz, threads, [&](std::size_t z0, std::size_t z1) {
    for (std::size_t k = z0; k < z1; ++k)
      for (std::size_t j = 0; j < d.ny; ++j)
        for (std::size_t i = 0; i < d.nx; ++i) {
          const Neighborhood nb(d, i, j, k);
          if (!(local_contrast(ov, nb) > params.contrast_threshold)) continue;
          // Products of a float and a small integer weight are exact in
          // double, so the sum is independent of traversal order.
          double acc = 0.0;
          for (int c = 0; c < 3; ++c)
            for (int b = 0; b < 3; ++b)
              for (int a = 0; a < 3; ++a)
                acc += static_cast<double>(kTent[a] * kTent[b] * kTent[c]) *
                       static_cast<double>(ov.at(nb.x[a], nb.y[b], nb.z[c]));
          out.at(i, j, k) = std::clamp(static_cast<float>(acc / 64.0), 0.0f, 1.0f);
        }
  });
  return out;
}

Vec3 sobel_gradient(const OpacityVolume& ov, std::size_t i, std::size_t j, std::size_t k) {
  const Neighborhood nb(ov.dims, i, j, k);
  double gx = 0.0, gy = 0.0, gz = 0.0;
  for (int c = 0; c < 3; ++c)
    for (int b = 0; b < 3; ++b)
      for (int a = 0; a < 3; ++a) {
        const double v = ov.at(nb.x[a], nb.y[b], nb.z[c]);
        gx += (a - 1) * kTent[b] * kTent[c] * v;
        gy += (b - 1) * kTent[a] * kTent[c] * v;
        gz += (c - 1) * kTent[a] * kTent[b] * v;
      }
  return Vec3{gx, gy, gz} / 32.0;
}

NormalVolume compute_normals(const OpacityVolume& ov, unsigned threads) {
  NormalVolume out(ov.dims, ov.spacing, ov.origin);
  const Dims d = ov.dims;
  parallel_for(d.nz, threads, [&](std::size_t z0, std::size_t z1) {
    for (std::size_t k = z0; k < z1; ++k)
      for (std::size_t j = 0; j < d.ny; ++j)
        for (std::size_t i = 0; i < d.nx; ++i) {
          const Vec3 g = sobel_gradient(ov, i, j, k);
          const double mag = length(g);
          if (mag > 1e-6) {
            const Vec3 n = -g / mag;
            out.at(i, j, k) = {static_cast<float>(n.x), static_cast<float>(n.y), static_cast<float>(n.z)};
          }
        }
  });
  return out;
}

}  // namespace carve
