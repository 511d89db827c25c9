#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "carve/volume.hpp"

namespace carve {

// Supported NRRD subset: magic NRRD000<digit>, dimension 3, encoding raw,
// little-endian, attached data, axis-aligned (diagonal) space directions.

/// Header fields plus the raw payload, before conversion to a volume type.
struct NrrdImage {
  Dims dims;
  Vec3 spacing{1.0, 1.0, 1.0};
  Vec3 origin;
  ScalarType type = ScalarType::UInt8;
  std::vector<std::uint8_t> payload;  // exactly dims.count() * scalar_size(type) bytes
};

NrrdImage parse_nrrd(std::span<const std::uint8_t> bytes);

IntensityVolume to_intensity(const NrrdImage& img);

/// Integer payloads only. Throws ValueError on negative or sentinel labels.
LabelMap to_labels(const NrrdImage& img);

std::vector<std::uint8_t> encode_nrrd(const IntensityVolume& vol);
std::vector<std::uint8_t> encode_nrrd(const LabelMap& labels);

std::vector<std::uint8_t> read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, std::span<const std::uint8_t> bytes);
void write_file(const std::filesystem::path& path, const std::string& text);

IntensityVolume load_intensity(const std::filesystem::path& path);
LabelMap load_labels(const std::filesystem::path& path);

}  // namespace carve
