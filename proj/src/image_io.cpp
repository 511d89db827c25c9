#include "carve/image_io.hpp"

#include <png.h>

#include <cstring>
#include <sstream>

#include "carve/error.hpp"
#include "carve/nrrd.hpp"

namespace carve {

namespace {

void png_write_to_vector(png_structp png, png_bytep data, png_size_t length) {
  auto* out = static_cast<Bytes*>(png_get_io_ptr(png));
  out->insert(out->end(), data, data + length);
}

void png_flush_noop(png_structp) {}

struct PngReadCursor {
  std::span<const std::uint8_t> bytes;
  std::size_t offset = 0;
};

void png_read_from_span(png_structp png, png_bytep data, png_size_t length) {
  auto* cur = static_cast<PngReadCursor*>(png_get_io_ptr(png));
  if (cur->offset + length > cur->bytes.size()) png_error(png, "truncated PNG stream");
  std::memcpy(data, cur->bytes.data() + cur->offset, length);
  cur->offset += length;
}

[[noreturn]] void png_fail(png_structp, png_const_charp msg) { throw Error(ErrorCode::IoError, msg); }

void png_warn(png_structp, png_const_charp) {}

// Reads a PNM/PFM-style header: magic, width, height, third token; exactly
// one whitespace byte separates the header from the raster.
struct PnmHeader {
  std::string magic;
  std::size_t width = 0, height = 0;
  std::string third;
  std::size_t data_offset = 0;
};

PnmHeader read_pnm_header(std::span<const std::uint8_t> bytes) {
  PnmHeader h;
  std::size_t pos = 0;
  const auto token = [&]() {
    for (;;) {
      while (pos < bytes.size() && std::isspace(bytes[pos])) ++pos;
      if (pos < bytes.size() && bytes[pos] == '#') {
        while (pos < bytes.size() && bytes[pos] != '\n') ++pos;
        continue;
      }
      break;
    }
    const std::size_t start = pos;
    while (pos < bytes.size() && !std::isspace(bytes[pos])) ++pos;
    if (start == pos) throw Error(ErrorCode::IoError, "truncated image header");
    return std::string(reinterpret_cast<const char*>(bytes.data()) + start, pos - start);
  };
  h.magic = token();
  try {
    h.width = std::stoul(token());
    h.height = std::stoul(token());
  } catch (const std::logic_error&) {
    throw Error(ErrorCode::IoError, "bad image dimensions");
  }
  h.third = token();
  h.data_offset = pos + 1;
  return h;
}

}  // namespace

Bytes encode_png(std::size_t width, std::size_t height, std::span<const std::uint8_t> rgba) {
  if (rgba.size() != width * height * 4) throw Error(ErrorCode::DimsMismatch, "RGBA buffer size");
  Bytes out;
  png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, png_fail, png_warn);
  if (!png) throw Error(ErrorCode::IoError, "png_create_write_struct failed");
  png_infop info = png_create_info_struct(png);
  try {
    if (!info) throw Error(ErrorCode::IoError, "png_create_info_struct failed");
    png_set_write_fn(png, &out, png_write_to_vector, png_flush_noop);
    png_set_IHDR(png, info, static_cast<png_uint_32>(width), static_cast<png_uint_32>(height), 8,
                 PNG_COLOR_TYPE_RGBA, PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
    png_write_info(png, info);
    for (std::size_t y = 0; y < height; ++y)
      png_write_row(png, const_cast<png_bytep>(rgba.data() + y * width * 4));
    png_write_end(png, nullptr);
  } catch (...) {
    png_destroy_write_struct(&png, &info);
    throw;
  }
  png_destroy_write_struct(&png, &info);
  return out;
}

RgbaImage decode_png(std::span<const std::uint8_t> bytes) {
  if (bytes.size() < 8 || png_sig_cmp(bytes.data(), 0, 8) != 0) throw Error(ErrorCode::IoError, "not a PNG stream");
  RgbaImage img;
  PngReadCursor cursor{bytes, 0};
  png_structp png = png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, png_fail, png_warn);
  if (!png) throw Error(ErrorCode::IoError, "png_create_read_struct failed");
  png_infop info = png_create_info_struct(png);
  try {
    if (!info) throw Error(ErrorCode::IoError, "png_create_info_struct failed");
    png_set_read_fn(png, &cursor, png_read_from_span);
    png_read_info(png, info);
    png_set_expand(png);
    png_set_strip_16(png);
    png_set_gray_to_rgb(png);
    png_set_add_alpha(png, 0xff, PNG_FILLER_AFTER);
    png_read_update_info(png, info);
    img.width = png_get_image_width(png, info);
    img.height = png_get_image_height(png, info);
    img.pixels.resize(img.width * img.height * 4);
    for (std::size_t y = 0; y < img.height; ++y) png_read_row(png, img.pixels.data() + y * img.width * 4, nullptr);
  } catch (...) {
    png_destroy_read_struct(&png, &info, nullptr);
    throw;
  }
  png_destroy_read_struct(&png, &info, nullptr);
  return img;
}

Bytes encode_pfm(std::size_t width, std::size_t height, std::span<const float> values) {
  if (values.size() != width * height) throw Error(ErrorCode::DimsMismatch, "depth buffer size");
  std::ostringstream header;
  header << "Pf\n" << width << ' ' << height << "\n-1.0\n";
  const std::string h = header.str();
  Bytes out(h.begin(), h.end());
  out.reserve(out.size() + values.size() * 4);
  for (std::size_t row = height; row-- > 0;) {
    const auto* p = reinterpret_cast<const std::uint8_t*>(values.data() + row * width);
    out.insert(out.end(), p, p + width * 4);
  }
  return out;
}

DepthImage decode_pfm(std::span<const std::uint8_t> bytes) {
  const PnmHeader h = read_pnm_header(bytes);
  if (h.magic != "Pf") throw Error(ErrorCode::IoError, "not a grayscale PFM");
  if (h.third.empty() || h.third[0] != '-') throw Error(ErrorCode::IoError, "only little-endian PFM is supported");
  DepthImage img{h.width, h.height, std::vector<float>(h.width * h.height)};
  if (bytes.size() < h.data_offset + img.values.size() * 4) throw Error(ErrorCode::IoError, "truncated PFM raster");
  for (std::size_t row = 0; row < h.height; ++row)
    std::memcpy(img.values.data() + (h.height - 1 - row) * h.width, bytes.data() + h.data_offset + row * h.width * 4,
                h.width * 4);
  return img;
}

Bytes encode_pgm16(std::size_t width, std::size_t height, std::span<const Label> values) {
  if (values.size() != width * height) throw Error(ErrorCode::DimsMismatch, "segment buffer size");
  std::ostringstream header;
  header << "P5\n" << width << ' ' << height << "\n65535\n";
  const std::string h = header.str();
  Bytes out(h.begin(), h.end());
  out.reserve(out.size() + values.size() * 2);
  for (Label v : values) {
    out.push_back(static_cast<std::uint8_t>(v >> 8));
    out.push_back(static_cast<std::uint8_t>(v & 0xff));
  }
  return out;
}

SegImage decode_pgm16(std::span<const std::uint8_t> bytes) {
  const PnmHeader h = read_pnm_header(bytes);
  if (h.magic != "P5" || h.third != "65535") throw Error(ErrorCode::IoError, "not a 16-bit binary PGM");
  SegImage img{h.width, h.height, std::vector<Label>(h.width * h.height)};
  if (bytes.size() < h.data_offset + img.values.size() * 2) throw Error(ErrorCode::IoError, "truncated PGM raster");
  const std::uint8_t* p = bytes.data() + h.data_offset;
  for (std::size_t n = 0; n < img.values.size(); ++n)
    img.values[n] = static_cast<Label>((p[2 * n] << 8) | p[2 * n + 1]);
  return img;
}

FramesetPaths write_frameset(const FrameSet& fs, const std::filesystem::path& base) {
  FramesetPaths paths{base, base, base};
  paths.color += ".png";
  paths.depth += "_depth.pfm";
  paths.seg += "_seg.pgm";
  write_file(paths.color, encode_png(fs.width, fs.height, fs.color));
  write_file(paths.depth, encode_pfm(fs.width, fs.height, fs.depth));
  write_file(paths.seg, encode_pgm16(fs.width, fs.height, fs.first_seg));
  return paths;
}

FrameSet read_frameset(const std::filesystem::path& base) {
  auto color = base, depth = base, seg = base;
  color += ".png";
  depth += "_depth.pfm";
  seg += "_seg.pgm";
  const RgbaImage c = decode_png(read_file(color));
  DepthImage d = decode_pfm(read_file(depth));
  SegImage s = decode_pgm16(read_file(seg));
  if (c.width != d.width || c.width != s.width || c.height != d.height || c.height != s.height)
    throw Error(ErrorCode::DimsMismatch, "frameset buffers differ in size");
  FrameSet fs;
  fs.width = c.width;
  fs.height = c.height;
  fs.color = c.pixels;
  fs.depth = std::move(d.values);
  fs.first_seg = std::move(s.values);
  return fs;
}

}  // namespace carve
