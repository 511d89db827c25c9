#include "carve/color_table.hpp"

#include <cmath>
#include <sstream>
#include <vector>

#include "carve/error.hpp"

namespace carve {

namespace {

[[noreturn]] void fail(std::size_t line, const std::string& what) {
  throw Error(ErrorCode::ParseError, "line " + std::to_string(line) + ": " + what);
}

long parse_integer(const std::string& token, std::size_t line, const char* field) {
  std::size_t used = 0;
  long v = 0;
  try {
    v = std::stol(token, &used);
  } catch (const std::exception&) {
    fail(line, std::string("bad ") + field + " '" + token + "'");
  }
  if (used != token.size()) fail(line, std::string("bad ") + field + " '" + token + "'");
  return v;
}

}  // namespace

ColorTable parse_color_table(std::string_view text) {
  ColorTable table;
  std::istringstream in{std::string(text)};
  std::string raw;
  std::size_t line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    const auto first = raw.find_first_not_of(" \t\r");
    if (first == std::string::npos || raw[first] == '#') continue;

    std::istringstream fields(raw);
    std::vector<std::string> tok;
    for (std::string t; fields >> t;) tok.push_back(t);
    if (tok.size() != 6) fail(line_no, "expected 'id name R G B A'");

    const long id = parse_integer(tok[0], line_no, "label id");
    if (id < 0 || id >= kMissLabel) fail(line_no, "label id out of range");
    long ch[4];
    for (int c = 0; c < 4; ++c) {
      ch[c] = parse_integer(tok[2 + c], line_no, "channel");
      if (ch[c] < 0 || ch[c] > 255) fail(line_no, "channel out of range 0-255");
    }
    const auto label = static_cast<Label>(id);
    if (table.entries.contains(label))
      throw Error(ErrorCode::DuplicateLabel, "line " + std::to_string(line_no) + ": label " + tok[0]);
    // alpha (ch[3]) is ignored; opacity comes from the transfer function
    table.entries[label] = {{static_cast<float>(ch[0]) / 255.0f, static_cast<float>(ch[1]) / 255.0f,
                             static_cast<float>(ch[2]) / 255.0f},
                            tok[1]};
  }
  auto& background = table.entries[kBackgroundLabel];
  if (background.name.empty()) background.name = "background";
  background.color = {};
  return table;
}

std::string serialize_color_table(const ColorTable& table) {
  std::ostringstream out;
  out << "# label name R G B A\n";
  for (const auto& [label, entry] : table.entries) {
    const auto byte = [](float v) { return static_cast<int>(std::lround(v * 255.0f)); };
    out << label << ' ' << entry.name << ' ' << byte(entry.color.r) << ' ' << byte(entry.color.g) << ' '
        << byte(entry.color.b) << ' ' << (label == kBackgroundLabel ? 0 : 255) << '\n';
  }
  return out.str();
}

void require_covers(const ColorTable& table, const LabelMap& labels) {
  std::vector<bool> seen(std::size_t{labels.max_label()} + 1, false);
  for (Label l : labels.values) seen[l] = true;
  for (std::size_t l = 0; l < seen.size(); ++l)
    if (seen[l] && !table.entries.contains(static_cast<Label>(l)))
      throw Error(ErrorCode::ValueError, "color table has no entry for label " + std::to_string(l));
}

}  // namespace carve
