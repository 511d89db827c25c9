#pragma once

#include <map>
#include <string>
#include <string_view>

#include "carve/volume.hpp"

namespace carve {

struct Rgb {
  float r = 0.0f;
  float g = 0.0f;
  float b = 0.0f;
  bool operator==(const Rgb&) const = default;
};

struct ColorEntry {
  Rgb color;
  std::string name;
  bool operator==(const ColorEntry&) const = default;
};

/// Label -> display color and name, in the 3D Slicer color-table text layout
/// ("id name R G B A" per line, '#' comments). Label 0 is always black.
struct ColorTable {
  std::map<Label, ColorEntry> entries;

  const ColorEntry* find(Label label) const {
    const auto it = entries.find(label);
    return it == entries.end() ? nullptr : &it->second;
  }
  bool operator==(const ColorTable&) const = default;
};

ColorTable parse_color_table(std::string_view text);
std::string serialize_color_table(const ColorTable& table);

/// Throws ValueError naming the first label present in `labels` without an entry.
void require_covers(const ColorTable& table, const LabelMap& labels);

}  // namespace carve
