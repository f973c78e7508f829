#include "qsprep/state_io.hpp"

#include <cstdio>
#include <fstream>
#include <json.hpp>
#include <sstream>

#include "qsprep/errors.hpp"

namespace qsp {

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

namespace {

SparseState parse_json_state(std::string_view text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
    const int n = j.at("n").get<int>();
    std::vector<Entry> entries;
    for (const auto& e : j.at("entries")) {
      const auto bits = e.at("basis").get<std::string>();
      if (static_cast<int>(bits.size()) != n) throw ParseError("basis '" + bits + "' has wrong width");
      entries.push_back({parse_basis(bits), e.at("amp").get<double>()});
    }
    return normalize(SparseState(n, std::move(entries)));
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("state JSON: ") + e.what());
  }
}

SparseState parse_text_state(std::string_view text) {
  std::istringstream in{std::string(text)};
  std::string line;
  int n = -1;
  std::vector<Entry> entries;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (auto pos = line.find('#'); pos != std::string::npos) line.erase(pos);
    std::istringstream ls(line);
    std::string bits, amp_text;
    if (!(ls >> bits)) continue;
    if (!(ls >> amp_text)) throw ParseError("line " + std::to_string(lineno) + ": missing amplitude");
    std::string extra;
    if (ls >> extra) throw ParseError("line " + std::to_string(lineno) + ": trailing text");
    if (n < 0) n = static_cast<int>(bits.size());
    if (static_cast<int>(bits.size()) != n) {
      throw ParseError("line " + std::to_string(lineno) + ": inconsistent basis width");
    }
    double amp;
    try {
      std::size_t used = 0;
      amp = std::stod(amp_text, &used);
      if (used != amp_text.size()) throw ParseError("");
    } catch (const std::exception&) {
      throw ParseError("line " + std::to_string(lineno) + ": bad amplitude '" + amp_text + "'");
    }
    entries.push_back({parse_basis(bits), amp});
  }
  if (n < 0) throw ParseError("state file has no entries");
  return normalize(SparseState(n, std::move(entries)));
}

std::string format_amp(double a) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", a);
  return buf;
}

}  // namespace

SparseState parse_state(std::string_view text) {
  auto first = text.find_first_not_of(" \t\r\n");
  if (first != std::string_view::npos && text[first] == '{') return parse_json_state(text);
  return parse_text_state(text);
}

SparseState read_state_file(const std::string& path) { return parse_state(read_file(path)); }

std::string state_to_json(const SparseState& state) {
  nlohmann::ordered_json root;
  root["n"] = state.num_qubits();
  auto entries = nlohmann::ordered_json::array();
  for (const auto& e : state.entries()) {
    nlohmann::ordered_json item;
    item["basis"] = basis_string(e.index, state.num_qubits());
    item["amp"] = e.amp;
    entries.push_back(std::move(item));
  }
  root["entries"] = std::move(entries);
  return root.dump(2) + "\n";
}

std::string state_to_text(const SparseState& state) {
  std::string out;
  for (const auto& e : state.entries()) {
    out += basis_string(e.index, state.num_qubits()) + " " + format_amp(e.amp) + "\n";
  }
  return out;
}

RotationTable parse_rotation_table(std::string_view text) {
  try {
    auto j = nlohmann::json::parse(text);
    auto controls = j.at("controls").get<std::vector<int>>();
    const int c = static_cast<int>(controls.size());
    if (c > 20) throw ParseError("rotation table has too many controls");
    std::vector<std::optional<double>> entries(std::size_t{1} << c);
    for (const auto& [key, value] : j.at("entries").items()) {
      if (static_cast<int>(key.size()) != c) throw ParseError("pattern '" + key + "' has wrong width");
      const std::uint64_t x = c == 0 ? 0 : parse_basis(key);
      if (value.is_string()) {
        if (value.get<std::string>() != "X") throw ParseError("entry '" + key + "' is not a number or \"X\"");
        entries[x] = std::nullopt;
      } else {
        entries[x] = value.get<double>();
      }
    }
    RotationTable t(std::move(controls), std::move(entries));
    if (t.care_count() == 0) throw ParseError("rotation table has no care entries");
    return t;
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("rotation table JSON: ") + e.what());
  }
}

}  // namespace qsp
