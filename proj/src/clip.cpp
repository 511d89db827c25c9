#include "carve/clip.hpp"

#include <algorithm>
#include <bit>

#include "carve/parallel.hpp"

namespace carve {

ClipMask::ClipMask(std::size_t size, bool all_set) : size_(size), words_((size + 63) / 64, 0) {
  if (all_set) fill(true);
}

ClipMask ClipMask::from_labels(std::span<const Label> labels, std::size_t size) {
  std::size_t needed = size;
  for (Label l : labels) needed = std::max<std::size_t>(needed, std::size_t{l} + 1);
  ClipMask mask(needed);
  for (Label l : labels) mask.set(l);
  return mask;
}

void ClipMask::set(Label label, bool value) {
  if (label >= size_) resize(std::size_t{label} + 1);
  const std::uint64_t bit = std::uint64_t{1} << (label & 63);
  if (value)
    words_[label >> 6] |= bit;
  else
    words_[label >> 6] &= ~bit;
}

void ClipMask::flip(Label label) { set(label, !test(label)); }

void ClipMask::fill(bool value) {
  std::fill(words_.begin(), words_.end(), value ? ~std::uint64_t{0} : std::uint64_t{0});
  if (value && (size_ & 63) != 0) words_.back() &= (std::uint64_t{1} << (size_ & 63)) - 1;
}

void ClipMask::resize(std::size_t size) {
  if (size < size_) {
    for (std::size_t l = size; l < size_; ++l) words_[l >> 6] &= ~(std::uint64_t{1} << (l & 63));
  }
  size_ = size;
  words_.resize((size + 63) / 64, 0);
}

std::size_t ClipMask::count() const {
  std::size_t n = 0;
  for (auto w : words_) n += static_cast<std::size_t>(std::popcount(w));
  return n;
}

std::vector<Label> ClipMask::set_labels() const {
  std::vector<Label> out;
  for (std::size_t l = 0; l < size_; ++l)
    if (test(static_cast<Label>(l))) out.push_back(static_cast<Label>(l));
  return out;
}

bool ClipMask::operator==(const ClipMask& other) const { return set_labels() == other.set_labels(); }

bool is_clipped(std::size_t i, std::size_t j, std::size_t k, const LabelMap& labels,
                std::span<const ClippingSphere> spheres, const Pose& pose) {
  if (spheres.empty()) return false;
  const Label label = labels.at(i, j, k);
  const Vec3 world = pose.to_world(labels.voxel_position(i, j, k));
  return std::any_of(spheres.begin(), spheres.end(),
                     [&](const ClippingSphere& s) { return s.mask.test(label) && s.contains(world); });
}

OpacityVolume compute_opacity_volume(const IntensityVolume& intensity, const LabelMap& labels,
                                     const OpacityTransferFunction& tf,
                                     std::span<const ClippingSphere> spheres, const Pose& pose,
                                     unsigned threads) {
  require_same_dims(intensity.dims, labels.dims, "intensity and label volumes differ in size");
  OpacityVolume out(intensity.dims, intensity.spacing, intensity.origin, 0.0f);
  const Dims d = intensity.dims;

  // One slab of z-slices per worker; each voxel is written exactly once.
  parallel_for(d.nz, threads, [&](std::size_t z0, std::size_t z1) {
    for (std::size_t k = z0; k < z1; ++k)
      for (std::size_t j = 0; j < d.ny; ++j)
        for (std::size_t i = 0; i < d.nx; ++i) {
          const std::size_t n = out.index(i, j, k);
          if (is_clipped(i, j, k, labels, spheres, pose)) continue;
          out.values[n] = tf(intensity.values[n]);
        }
  });
  return out;
}

}  // namespace carve
