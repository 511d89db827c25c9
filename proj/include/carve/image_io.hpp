#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "carve/renderer.hpp"

namespace carve {

using Bytes = std::vector<std::uint8_t>;

/// Plain image containers used when reading buffers back.
struct RgbaImage {
  std::size_t width = 0, height = 0;
  std::vector<std::uint8_t> pixels;  // RGBA, top row first
};
struct DepthImage {
  std::size_t width = 0, height = 0;
  std::vector<float> values;  // top row first
};
struct SegImage {
  std::size_t width = 0, height = 0;
  std::vector<Label> values;  // top row first
};

/// 8-bit RGBA PNG.
Bytes encode_png(std::size_t width, std::size_t height, std::span<const std::uint8_t> rgba);
RgbaImage decode_png(std::span<const std::uint8_t> bytes);

/// Grayscale little-endian PFM ("Pf", scale -1). Rows are stored bottom to
/// top as the format requires; the in-memory order stays top row first.
Bytes encode_pfm(std::size_t width, std::size_t height, std::span<const float> values);
DepthImage decode_pfm(std::span<const std::uint8_t> bytes);

/// Binary 16-bit PGM (P5, maxval 65535, big-endian samples).
Bytes encode_pgm16(std::size_t width, std::size_t height, std::span<const Label> values);
SegImage decode_pgm16(std::span<const std::uint8_t> bytes);

struct FramesetPaths {
  std::filesystem::path color, depth, seg;
};

/// Writes <base>.png, <base>_depth.pfm and <base>_seg.pgm.
FramesetPaths write_frameset(const FrameSet& fs, const std::filesystem::path& base);
FrameSet read_frameset(const std::filesystem::path& base);

}  // namespace carve
