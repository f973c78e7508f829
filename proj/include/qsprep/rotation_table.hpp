#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace qsp {

// Angles of a multi-controlled Ry indexed by the control pattern. Pattern
// bit (c-1-i) holds the value of controls[i], so controls[0] is the most
// significant bit, matching the qubit ordering of states. An empty entry is
// a don't-care.
struct RotationTable {
  std::vector<int> controls;
  std::vector<std::optional<double>> entries;

  RotationTable() : entries(1) {}
  RotationTable(std::vector<int> ctrls, std::vector<std::optional<double>> angles);

  static RotationTable constant(double theta);

  int num_controls() const { return static_cast<int>(controls.size()); }
  std::size_t num_patterns() const { return entries.size(); }
  std::size_t care_count() const;
  bool is_care(std::uint64_t pattern) const { return entries[pattern].has_value(); }
  // Angle applied on a pattern, don't-cares acting as identity.
  double angle_or_zero(std::uint64_t pattern) const { return entries[pattern].value_or(0.0); }

  friend bool operator==(const RotationTable&, const RotationTable&) = default;
};

std::string pattern_string(std::uint64_t pattern, int width);

}  // namespace qsp
