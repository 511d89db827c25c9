#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "carve/error.hpp"
#include "carve/geometry.hpp"

namespace carve {

struct Dims {
  std::size_t nx = 1;
  std::size_t ny = 1;
  std::size_t nz = 1;

  constexpr std::size_t count() const { return nx * ny * nz; }
  constexpr std::size_t operator[](int axis) const { return axis == 0 ? nx : (axis == 1 ? ny : nz); }
  constexpr bool operator==(const Dims&) const = default;
};

/// A regular 3D grid in x-fastest order with physical placement in
/// local (pre-pose) millimeters.
template <typename T>
struct Grid {
  Dims dims;
  Vec3 spacing{1.0, 1.0, 1.0};
  Vec3 origin;
  std::vector<T> values;

  Grid() = default;
  Grid(Dims d, Vec3 sp, Vec3 org, T fill = T{})
      : dims(d), spacing(sp), origin(org), values(d.count(), fill) {}

  std::size_t index(std::size_t i, std::size_t j, std::size_t k) const {
    return i + dims.nx * (j + dims.ny * k);
  }
  T& at(std::size_t i, std::size_t j, std::size_t k) { return values[index(i, j, k)]; }
  const T& at(std::size_t i, std::size_t j, std::size_t k) const { return values[index(i, j, k)]; }

  /// Local-space position of the voxel center.
  Vec3 voxel_position(std::size_t i, std::size_t j, std::size_t k) const {
    return origin + Vec3{static_cast<double>(i) * spacing.x, static_cast<double>(j) * spacing.y,
                         static_cast<double>(k) * spacing.z};
  }

  bool same_geometry(const auto& other) const { return dims == other.dims; }

  bool operator==(const Grid&) const = default;
};

enum class ScalarType { UInt8, Int16, UInt16, Float32 };

std::size_t scalar_size(ScalarType t);

struct IntensityVolume : Grid<float> {
  ScalarType stored_type = ScalarType::Float32;
  bool operator==(const IntensityVolume&) const = default;
};

using Label = std::uint16_t;
inline constexpr Label kBackgroundLabel = 0;
inline constexpr Label kMissLabel = 65535;

struct LabelMap : Grid<Label> {
  ScalarType stored_type = ScalarType::UInt16;

  Label max_label() const;
  bool operator==(const LabelMap&) const = default;
};

using OpacityVolume = Grid<float>;

struct Normal {
  float x = 0.0f;
  float y = 0.0f;
  float z = 0.0f;
  bool operator==(const Normal&) const = default;
};

using NormalVolume = Grid<Normal>;

inline void require_same_dims(const Dims& a, const Dims& b, const std::string& what) {
  if (!(a == b)) throw Error(ErrorCode::DimsMismatch, what);
}

}  // namespace carve
