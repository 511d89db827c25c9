#include "carve/nrrd.hpp"

#include <algorithm>
#include <bit>
#include <charconv>
#include <cstring>
#include <fstream>
#include <iomanip>
#include <limits>
#include <sstream>

namespace carve {

std::size_t scalar_size(ScalarType t) {
  switch (t) {
    case ScalarType::UInt8: return 1;
    case ScalarType::Int16:
    case ScalarType::UInt16: return 2;
    case ScalarType::Float32: return 4;
  }
  return 1;
}

Label LabelMap::max_label() const {
  return values.empty() ? Label{0} : *std::max_element(values.begin(), values.end());
}

static_assert(std::endian::native == std::endian::little, "payload decoding assumes a little-endian host");

namespace {

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return std::tolower(c); });
  return s;
}

ScalarType parse_type(const std::string& value) {
  const std::string v = lower(value);
  if (v == "uchar" || v == "unsigned char" || v == "uint8" || v == "uint8_t") return ScalarType::UInt8;
  if (v == "short" || v == "short int" || v == "signed short" || v == "int16" || v == "int16_t")
    return ScalarType::Int16;
  if (v == "ushort" || v == "unsigned short" || v == "unsigned short int" || v == "uint16" ||
      v == "uint16_t")
    return ScalarType::UInt16;
  if (v == "float") return ScalarType::Float32;
  throw Error(ErrorCode::UnsupportedField, "type: " + value);
}

const char* type_name(ScalarType t) {
  switch (t) {
    case ScalarType::UInt8: return "uchar";
    case ScalarType::Int16: return "short";
    case ScalarType::UInt16: return "ushort";
    case ScalarType::Float32: return "float";
  }
  return "uchar";
}

std::vector<double> parse_numbers(const std::string& value, const std::string& field) {
  std::istringstream in(value);
  std::vector<double> out;
  double d;
  while (in >> d) out.push_back(d);
  if (!in.eof()) throw Error(ErrorCode::ParseError, "malformed numbers in field '" + field + "'");
  return out;
}

// "(a,b,c)" -> {a,b,c}
Vec3 parse_vector(std::string_view text, const std::string& field) {
  std::string s(text);
  if (s.size() < 2 || s.front() != '(' || s.back() != ')')
    throw Error(ErrorCode::ParseError, "expected '(x,y,z)' in field '" + field + "'");
  s = s.substr(1, s.size() - 2);
  std::replace(s.begin(), s.end(), ',', ' ');
  const auto nums = parse_numbers(s, field);
  if (nums.size() != 3) throw Error(ErrorCode::UnsupportedField, field + " must be 3-vectors");
  return {nums[0], nums[1], nums[2]};
}

std::vector<std::string> split_vectors(const std::string& value) {
  std::vector<std::string> out;
  std::size_t pos = 0;
  while (pos < value.size()) {
    const auto open = value.find_first_not_of(" \t", pos);
    if (open == std::string::npos) break;
    if (value[open] == '(') {
      const auto close = value.find(')', open);
      if (close == std::string::npos) throw Error(ErrorCode::ParseError, "unterminated vector");
      out.push_back(value.substr(open, close - open + 1));
      pos = close + 1;
    } else {
      const auto end = value.find_first_of(" \t", open);
      out.push_back(value.substr(open, end == std::string::npos ? std::string::npos : end - open));
      pos = end == std::string::npos ? value.size() : end;
    }
  }
  return out;
}

template <typename T>
T load_le(const std::uint8_t* p) {
  T v;
  std::memcpy(&v, p, sizeof(T));
  return v;
}

std::string format_double(double v) {
  std::ostringstream os;
  os << std::setprecision(std::numeric_limits<double>::max_digits10) << v;
  return os.str();
}

std::string header_for(ScalarType type, const Dims& d, const Vec3& spacing, const Vec3& origin) {
  std::ostringstream h;
  h << "NRRD0004\n";
  h << "type: " << type_name(type) << "\n";
  h << "dimension: 3\n";
  h << "space: left-posterior-superior\n";
  h << "sizes: " << d.nx << " " << d.ny << " " << d.nz << "\n";
  h << "space directions: (" << format_double(spacing.x) << ",0,0) (0," << format_double(spacing.y)
    << ",0) (0,0," << format_double(spacing.z) << ")\n";
  h << "kinds: domain domain domain\n";
  h << "endian: little\n";
  h << "encoding: raw\n";
  h << "space origin: (" << format_double(origin.x) << "," << format_double(origin.y) << ","
    << format_double(origin.z) << ")\n\n";
  return h.str();
}

std::vector<std::uint8_t> assemble(const std::string& header, const void* data, std::size_t bytes) {
  std::vector<std::uint8_t> out(header.begin(), header.end());
  const auto* p = static_cast<const std::uint8_t*>(data);
  out.insert(out.end(), p, p + bytes);
  return out;
}

}  // namespace

NrrdImage parse_nrrd(std::span<const std::uint8_t> bytes) {
  const std::string_view all(reinterpret_cast<const char*>(bytes.data()), bytes.size());
  if (all.size() < 8 || all.substr(0, 7) != "NRRD000" || !std::isdigit(static_cast<unsigned char>(all[7])))
    throw Error(ErrorCode::BadMagic, "missing NRRD000x magic");

  std::size_t pos = all.find('\n');
  if (pos == std::string_view::npos) throw Error(ErrorCode::TruncatedData, "header not terminated");
  ++pos;

  NrrdImage img;
  bool have_sizes = false, have_type = false, have_dimension = false;
  bool have_directions = false, have_spacings = false;
  std::string encoding = "raw";
  std::string endian = "little";

  for (;;) {
    const auto eol = all.find('\n', pos);
    if (eol == std::string_view::npos) throw Error(ErrorCode::TruncatedData, "header not terminated");
    const std::string line = trim(all.substr(pos, eol - pos));
    pos = eol + 1;
    if (line.empty()) break;
    if (line[0] == '#') continue;

    // key:=value lines are key/value pairs, not fields
    if (line.find(":=") != std::string::npos) continue;
    const auto colon = line.find(": ");
    if (colon == std::string::npos) throw Error(ErrorCode::ParseError, "malformed header line: " + line);
    const std::string key = lower(line.substr(0, colon));
    const std::string value = trim(line.substr(colon + 2));

    if (key == "type") {
      img.type = parse_type(value);
      have_type = true;
    } else if (key == "dimension") {
      if (value != "3") throw Error(ErrorCode::UnsupportedField, "dimension: " + value);
      have_dimension = true;
    } else if (key == "sizes") {
      const auto n = parse_numbers(value, key);
      if (n.size() != 3) throw Error(ErrorCode::UnsupportedField, "sizes must have 3 entries");
      for (double d : n)
        if (d < 1 || d != static_cast<double>(static_cast<std::size_t>(d)))
          throw Error(ErrorCode::ValueError, "sizes must be positive integers");
      img.dims = {static_cast<std::size_t>(n[0]), static_cast<std::size_t>(n[1]),
                  static_cast<std::size_t>(n[2])};
      have_sizes = true;
    } else if (key == "encoding") {
      encoding = lower(value);
    } else if (key == "endian") {
      endian = lower(value);
    } else if (key == "spacings") {
      const auto n = parse_numbers(value, key);
      if (n.size() != 3) throw Error(ErrorCode::UnsupportedField, "spacings must have 3 entries");
      img.spacing = {n[0], n[1], n[2]};
      have_spacings = true;
    } else if (key == "space directions") {
      const auto parts = split_vectors(value);
      if (parts.size() != 3) throw Error(ErrorCode::UnsupportedField, "space directions must list 3 axes");
      for (int axis = 0; axis < 3; ++axis) {
        const Vec3 v = parse_vector(parts[axis], key);
        for (int c = 0; c < 3; ++c)
          if (c != axis && v[c] != 0.0)
            throw Error(ErrorCode::UnsupportedField, "non-diagonal space directions");
        img.spacing[axis] = std::abs(v[axis]);
      }
      have_directions = true;
    } else if (key == "space origin") {
      img.origin = parse_vector(value, key);
    } else if (key == "data file" || key == "datafile") {
      throw Error(ErrorCode::UnsupportedField, "detached data files are not supported");
    } else if (key == "line skip" || key == "lineskip" || key == "byte skip" || key == "byteskip") {
      if (value != "0") throw Error(ErrorCode::UnsupportedField, key + ": " + value);
    }
    // Other fields (space, kinds, labels, units, content, ...) carry no
    // information this reader needs.
  }

  if (!have_dimension) throw Error(ErrorCode::UnsupportedField, "missing dimension");
  if (!have_sizes) throw Error(ErrorCode::ParseError, "missing sizes");
  if (!have_type) throw Error(ErrorCode::ParseError, "missing type");
  if (encoding != "raw") throw Error(ErrorCode::UnsupportedField, "encoding: " + encoding);
  if (scalar_size(img.type) > 1 && endian != "little")
    throw Error(ErrorCode::UnsupportedField, "endian: " + endian);
  if (have_directions && have_spacings)
    throw Error(ErrorCode::ParseError, "both spacings and space directions given");
  for (int a = 0; a < 3; ++a)
    if (!(img.spacing[a] > 0.0)) throw Error(ErrorCode::ValueError, "spacing must be positive");

  const std::size_t need = img.dims.count() * scalar_size(img.type);
  if (bytes.size() - pos < need)
    throw Error(ErrorCode::TruncatedData, "payload has " + std::to_string(bytes.size() - pos) +
                                              " bytes, expected " + std::to_string(need));
  img.payload.assign(bytes.begin() + static_cast<std::ptrdiff_t>(pos),
                     bytes.begin() + static_cast<std::ptrdiff_t>(pos + need));
  return img;
}

IntensityVolume to_intensity(const NrrdImage& img) {
  IntensityVolume vol;
  vol.dims = img.dims;
  vol.spacing = img.spacing;
  vol.origin = img.origin;
  vol.stored_type = img.type;
  vol.values.resize(img.dims.count());
  const std::uint8_t* p = img.payload.data();
  for (std::size_t n = 0; n < vol.values.size(); ++n) {
    switch (img.type) {
      case ScalarType::UInt8: vol.values[n] = p[n]; break;
      case ScalarType::Int16: vol.values[n] = load_le<std::int16_t>(p + 2 * n); break;
      case ScalarType::UInt16: vol.values[n] = load_le<std::uint16_t>(p + 2 * n); break;
      case ScalarType::Float32: vol.values[n] = load_le<float>(p + 4 * n); break;
    }
  }
  return vol;
}

LabelMap to_labels(const NrrdImage& img) {
  if (img.type == ScalarType::Float32)
    throw Error(ErrorCode::UnsupportedField, "label maps must have an integer type");
  LabelMap labels;
  labels.dims = img.dims;
  labels.spacing = img.spacing;
  labels.origin = img.origin;
  labels.stored_type = img.type;
  labels.values.resize(img.dims.count());
  const std::uint8_t* p = img.payload.data();
  for (std::size_t n = 0; n < labels.values.size(); ++n) {
    int v = 0;
    switch (img.type) {
      case ScalarType::UInt8: v = p[n]; break;
      case ScalarType::Int16: v = load_le<std::int16_t>(p + 2 * n); break;
      case ScalarType::UInt16: v = load_le<std::uint16_t>(p + 2 * n); break;
      case ScalarType::Float32: break;
    }
    if (v < 0) throw Error(ErrorCode::ValueError, "negative label id");
    if (v == kMissLabel) throw Error(ErrorCode::ValueError, "label 65535 is reserved");
    labels.values[n] = static_cast<Label>(v);
  }
  return labels;
}

std::vector<std::uint8_t> encode_nrrd(const IntensityVolume& vol) {
  const std::string header = header_for(vol.stored_type, vol.dims, vol.spacing, vol.origin);
  const std::size_t n = vol.values.size();
  switch (vol.stored_type) {
    case ScalarType::UInt8: {
      std::vector<std::uint8_t> raw(n);
      for (std::size_t i = 0; i < n; ++i) raw[i] = static_cast<std::uint8_t>(vol.values[i]);
      return assemble(header, raw.data(), raw.size());
    }
    case ScalarType::Int16: {
      std::vector<std::int16_t> raw(n);
      for (std::size_t i = 0; i < n; ++i) raw[i] = static_cast<std::int16_t>(vol.values[i]);
      return assemble(header, raw.data(), raw.size() * 2);
    }
    case ScalarType::UInt16: {
      std::vector<std::uint16_t> raw(n);
      for (std::size_t i = 0; i < n; ++i) raw[i] = static_cast<std::uint16_t>(vol.values[i]);
      return assemble(header, raw.data(), raw.size() * 2);
    }
    case ScalarType::Float32: return assemble(header, vol.values.data(), n * 4);
  }
  return {};
}

std::vector<std::uint8_t> encode_nrrd(const LabelMap& labels) {
  const std::string header = header_for(labels.stored_type, labels.dims, labels.spacing, labels.origin);
  const std::size_t n = labels.values.size();
  switch (labels.stored_type) {
    case ScalarType::UInt8: {
      std::vector<std::uint8_t> raw(n);
      for (std::size_t i = 0; i < n; ++i) raw[i] = static_cast<std::uint8_t>(labels.values[i]);
      return assemble(header, raw.data(), raw.size());
    }
    case ScalarType::Int16:
    case ScalarType::UInt16:
      return assemble(header_for(ScalarType::UInt16, labels.dims, labels.spacing, labels.origin),
                      labels.values.data(), n * 2);
    case ScalarType::Float32: break;
  }
  throw Error(ErrorCode::UnsupportedField, "label maps must have an integer type");
}

std::vector<std::uint8_t> read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::IoError, "cannot open " + path.string());
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  if (in.bad()) throw Error(ErrorCode::IoError, "read failed: " + path.string());
  return bytes;
}

void write_file(const std::filesystem::path& path, std::span<const std::uint8_t> bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::IoError, "cannot create " + path.string());
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw Error(ErrorCode::IoError, "write failed: " + path.string());
}

void write_file(const std::filesystem::path& path, const std::string& text) {
  write_file(path, std::span<const std::uint8_t>(reinterpret_cast<const std::uint8_t*>(text.data()), text.size()));
}

IntensityVolume load_intensity(const std::filesystem::path& path) {
  return to_intensity(parse_nrrd(read_file(path)));
}

LabelMap load_labels(const std::filesystem::path& path) { return to_labels(parse_nrrd(read_file(path))); }

}  // namespace carve
