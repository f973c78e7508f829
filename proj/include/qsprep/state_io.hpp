#pragma once

#include <string>
#include <string_view>

#include "qsprep/qstate.hpp"
#include "qsprep/rotation_table.hpp"

namespace qsp {

// JSON {"n": int, "entries": [{"basis": "0101", "amp": 0.5}, ...]} or plain
// text lines "<bits> <amp>" ('#' starts a comment). The result is normalized.
SparseState parse_state(std::string_view text);
SparseState read_state_file(const std::string& path);

// Both writers list entries sorted by basis string.
std::string state_to_json(const SparseState& state);
std::string state_to_text(const SparseState& state);

// {"controls": [0, 2], "entries": {"01": 1.5708, "10": "X", ...}}; missing
// patterns are don't-cares, as is the string "X".
RotationTable parse_rotation_table(std::string_view text);

std::string read_file(const std::string& path);

}  // namespace qsp
