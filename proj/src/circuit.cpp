#include "qsprep/circuit.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <json.hpp>
#include <optional>
#include <regex>
#include <sstream>

#include "qsprep/angles.hpp"
#include "qsprep/errors.hpp"
#include "qsprep/mcry.hpp"

namespace qsp {

std::string to_string(CostModel model) {
  return model == CostModel::exact ? "exact" : "graycode";
}

CostModel parse_cost_model(std::string_view name) {
  if (name == "exact") return CostModel::exact;
  if (name == "graycode" || name == "gray") return CostModel::graycode;
  throw InvalidArgument("unknown cost model '" + std::string(name) + "'");
}

namespace {

void check_qubit(int q, int n) {
  if (q < 0 || q >= n) {
    throw InvalidArgument("gate qubit " + std::to_string(q) + " out of range for n=" + std::to_string(n));
  }
}

}  // namespace

Circuit& Circuit::add(Gate g) {
  std::visit(
      [&](const auto& gate) {
        using T = std::decay_t<decltype(gate)>;
        check_qubit(gate.target, n_);
        if constexpr (std::is_same_v<T, CnotGate>) {
          check_qubit(gate.control, n_);
          if (gate.control == gate.target) throw InvalidArgument("CNOT control equals target");
        } else if constexpr (std::is_same_v<T, McryGate>) {
          for (int q : gate.table.controls) {
            check_qubit(q, n_);
            if (q == gate.target) throw InvalidArgument("MCRy target among its controls");
          }
        }
      },
      g);
  gates_.push_back(std::move(g));
  return *this;
}

Circuit& Circuit::append(const Circuit& other) {
  if (other.n_ > n_) throw InvalidArgument("appending a wider circuit");
  for (const auto& g : other.gates_) gates_.push_back(g);
  return *this;
}

bool Circuit::is_basis() const {
  return std::all_of(gates_.begin(), gates_.end(), [](const Gate& g) {
    if (std::holds_alternative<RyGate>(g)) return true;
    const auto* cx = std::get_if<CnotGate>(&g);
    return cx != nullptr && !cx->negated;
  });
}

int Circuit::cnot_gate_count() const {
  return static_cast<int>(std::count_if(gates_.begin(), gates_.end(), [](const Gate& g) {
    return std::holds_alternative<CnotGate>(g);
  }));
}

SparseState apply_gate(const SparseState& state, const Gate& gate) {
  if (const auto* g = std::get_if<RyGate>(&gate)) return apply_ry(state, g->target, g->angle);
  if (const auto* g = std::get_if<XGate>(&gate)) return apply_x(state, g->target);
  if (const auto* g = std::get_if<CnotGate>(&gate)) {
    if (!g->negated) return apply_cnot(state, g->control, g->target);
    return apply_x(apply_cnot(apply_x(state, g->control), g->control, g->target), g->control);
  }
  const auto& m = std::get<McryGate>(gate);
  const int n = state.num_qubits();
  const Basis tm = qubit_mask(n, m.target);
  std::vector<Entry> out;
  for (const auto& e : state.entries()) {
    const Basis lo = e.index & ~tm;
    if ((e.index & tm) && state.amplitude(lo) != 0.0) continue;
    std::uint64_t pattern = 0;
    for (int q : m.table.controls) pattern = (pattern << 1) | static_cast<std::uint64_t>(qubit_value(lo, n, q));
    const double theta = m.table.angle_or_zero(pattern);
    const double c = std::cos(theta / 2), s = std::sin(theta / 2);
    const double a0 = state.amplitude(lo), a1 = state.amplitude(lo | tm);
    out.push_back({lo, c * a0 - s * a1});
    out.push_back({lo | tm, s * a0 + c * a1});
  }
  return SparseState(n, std::move(out));
}

SparseState apply_circuit(const SparseState& state, const Circuit& circuit) {
  SparseState s = state;
  for (const auto& g : circuit.gates()) s = apply_gate(s, g);
  return s;
}

namespace {

// Walks the circuit from |0...0>, handing each MCRy the state it acts on.
template <typename OnGate>
void walk(const Circuit& circuit, bool track_state, OnGate&& on_gate) {
  const int n = circuit.num_qubits();
  SparseState state = SparseState::ground(std::max(n, 1));
  for (const auto& g : circuit.gates()) {
    on_gate(g, state);
    if (track_state) state = apply_gate(state, g);
  }
}

bool has_mcry(const Circuit& c) {
  return std::any_of(c.gates().begin(), c.gates().end(),
                     [](const Gate& g) { return std::holds_alternative<McryGate>(g); });
}

Circuit expand_mcry(const McryGate& m, const SparseState& state, CostModel model, int n) {
  if (model == CostModel::graycode) return gray_code_decompose(m.table, m.target, n);
  auto d = decompose_constraints(m.table.controls, state_constraints(state, m), m.target, n);
  if (!d) throw std::logic_error("MCRy lowering found no decomposition");
  return std::move(d->circuit);
}

}  // namespace

int cnot_cost(const Circuit& circuit, CostModel model) {
  int total = 0;
  const bool track = model == CostModel::exact && has_mcry(circuit);
  walk(circuit, track, [&](const Gate& g, const SparseState& state) {
    if (std::holds_alternative<CnotGate>(g)) {
      total += 1;
    } else if (const auto* m = std::get_if<McryGate>(&g)) {
      if (model == CostModel::graycode) {
        const int c = m->table.num_controls();
        total += c == 0 ? 0 : (1 << c);
      } else {
        auto k = constraint_cnot_count(m->table.num_controls(), state_constraints(state, *m));
        if (!k) throw std::logic_error("MCRy cost found no decomposition");
        total += *k;
      }
    }
  });
  return total;
}

Circuit lower_to_basis(const Circuit& circuit, CostModel model) {
  const int n = circuit.num_qubits();
  std::vector<Gate> expanded;
  const bool track = model == CostModel::exact && has_mcry(circuit);
  walk(circuit, track, [&](const Gate& g, const SparseState& state) {
    if (const auto* m = std::get_if<McryGate>(&g)) {
      Circuit part = expand_mcry(*m, state, model, n);
      expanded.insert(expanded.end(), part.gates().begin(), part.gates().end());
    } else if (const auto* cx = std::get_if<CnotGate>(&g); cx && cx->negated) {
      expanded.push_back(XGate{cx->control});
      expanded.push_back(CnotGate{cx->control, cx->target, false});
      expanded.push_back(XGate{cx->control});
    } else {
      expanded.push_back(g);
    }
  });

  // Move every X to the front: X·Ry(θ) = Ry(−θ)·X, X_t commutes with a CNOT
  // onto t, and X_c after a CNOT equals X_c X_t before it.
  std::vector<bool> pending(static_cast<std::size_t>(std::max(n, 1)), false);
  std::vector<Gate> rev;
  for (auto it = expanded.rbegin(); it != expanded.rend(); ++it) {
    if (const auto* x = std::get_if<XGate>(&*it)) {
      pending[static_cast<std::size_t>(x->target)] = !pending[static_cast<std::size_t>(x->target)];
    } else if (const auto* ry = std::get_if<RyGate>(&*it)) {
      rev.push_back(RyGate{ry->target, pending[static_cast<std::size_t>(ry->target)] ? -ry->angle : ry->angle});
    } else {
      const auto& cx = std::get<CnotGate>(*it);
      if (pending[static_cast<std::size_t>(cx.control)]) {
        pending[static_cast<std::size_t>(cx.target)] = !pending[static_cast<std::size_t>(cx.target)];
      }
      rev.push_back(cx);
    }
  }
  Circuit out(n);
  for (int q = 0; q < n; ++q) {
    if (pending[static_cast<std::size_t>(q)]) out.ry(q, kPi);  // X|0> = Ry(π)|0>
  }
  for (auto it = rev.rbegin(); it != rev.rend(); ++it) out.add(*it);
  return out;
}

Circuit invert(const Circuit& circuit) {
  Circuit out(circuit.num_qubits());
  const auto& gates = circuit.gates();
  for (auto it = gates.rbegin(); it != gates.rend(); ++it) {
    if (const auto* ry = std::get_if<RyGate>(&*it)) {
      out.ry(ry->target, -ry->angle);
    } else if (const auto* m = std::get_if<McryGate>(&*it)) {
      RotationTable t = m->table;
      for (auto& e : t.entries) {
        if (e) e = -*e;
      }
      out.mcry(m->target, std::move(t));
    } else {
      out.add(*it);
    }
  }
  return out;
}

namespace {

std::string format_angle(double a) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", a);
  return buf;
}

double parse_angle(std::string text) {
  std::erase_if(text, [](unsigned char c) { return std::isspace(c); });
  static const std::regex pi_form(R"(^([+-]?[0-9.eE+-]*)\*?pi(?:/([0-9.eE+-]+))?$)");
  std::smatch m;
  if (std::regex_match(text, m, pi_form)) {
    double factor = 1.0;
    std::string f = m[1];
    if (f == "-") factor = -1.0;
    else if (!f.empty() && f != "+") factor = std::stod(f);
    double div = m[2].matched ? std::stod(m[2]) : 1.0;
    return factor * kPi / div;
  }
  std::size_t used = 0;
  double v = std::stod(text, &used);
  if (used != text.size()) throw ParseError("bad angle '" + text + "'");
  return v;
}

}  // namespace

std::string emit_qasm(const Circuit& circuit) {
  if (!circuit.is_basis()) throw InvalidArgument("emit_qasm needs a circuit lowered to ry/cx");
  std::string out = "OPENQASM 2.0;\ninclude \"qelib1.inc\";\n";
  out += "qreg q[" + std::to_string(circuit.num_qubits()) + "];\n";
  for (const auto& g : circuit.gates()) {
    if (const auto* ry = std::get_if<RyGate>(&g)) {
      out += "ry(" + format_angle(ry->angle) + ") q[" + std::to_string(ry->target) + "];\n";
    } else {
      const auto& cx = std::get<CnotGate>(g);
      out += "cx q[" + std::to_string(cx.control) + "],q[" + std::to_string(cx.target) + "];\n";
    }
  }
  return out;
}

Circuit parse_qasm(std::string_view text) {
  static const std::regex qreg(R"(^qreg\s+(\w+)\s*\[\s*(\d+)\s*\]\s*;$)");
  static const std::regex ry(R"(^ry\s*\((.*)\)\s*(\w+)\s*\[\s*(\d+)\s*\]\s*;$)");
  static const std::regex cx(R"(^cx\s+(\w+)\s*\[\s*(\d+)\s*\]\s*,\s*(\w+)\s*\[\s*(\d+)\s*\]\s*;$)");
  std::istringstream in{std::string(text)};
  std::string line;
  std::optional<Circuit> circ;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (auto pos = line.find("//"); pos != std::string::npos) line.erase(pos);
    auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos) continue;
    line = line.substr(first, line.find_last_not_of(" \t\r") - first + 1);
    std::smatch m;
    if (line.rfind("OPENQASM", 0) == 0 || line.rfind("include", 0) == 0 || line.rfind("creg", 0) == 0) {
      continue;
    }
    auto need = [&]() -> Circuit& {
      if (!circ) throw ParseError("line " + std::to_string(lineno) + ": gate before qreg");
      return *circ;
    };
    try {
      if (std::regex_match(line, m, qreg)) {
        if (circ) throw ParseError("line " + std::to_string(lineno) + ": only one qreg supported");
        circ = Circuit(std::stoi(m[2]));
      } else if (std::regex_match(line, m, ry)) {
        need().ry(std::stoi(m[3]), parse_angle(m[1]));
      } else if (std::regex_match(line, m, cx)) {
        need().cnot(std::stoi(m[2]), std::stoi(m[4]));
      } else {
        throw ParseError("line " + std::to_string(lineno) + ": unsupported statement '" + line + "'");
      }
    } catch (const std::logic_error& e) {
      throw ParseError("line " + std::to_string(lineno) + ": " + e.what());
    }
  }
  if (!circ) throw ParseError("missing qreg declaration");
  return *circ;
}

std::string circuit_to_json(const Circuit& circuit) {
  nlohmann::ordered_json gates = nlohmann::ordered_json::array();
  for (const auto& g : circuit.gates()) {
    nlohmann::ordered_json j;
    if (const auto* ry = std::get_if<RyGate>(&g)) {
      j["type"] = "ry";
      j["target"] = ry->target;
      j["angle"] = ry->angle;
    } else if (const auto* x = std::get_if<XGate>(&g)) {
      j["type"] = "x";
      j["target"] = x->target;
    } else if (const auto* cx = std::get_if<CnotGate>(&g)) {
      j["type"] = "cx";
      j["control"] = cx->control;
      j["target"] = cx->target;
      j["negated"] = cx->negated;
    } else {
      const auto& m = std::get<McryGate>(g);
      j["type"] = "mcry";
      j["target"] = m.target;
      j["controls"] = m.table.controls;
      nlohmann::ordered_json entries = nlohmann::ordered_json::object();
      for (std::size_t x = 0; x < m.table.num_patterns(); ++x) {
        const auto key = pattern_string(x, m.table.num_controls());
        if (m.table.entries[x]) entries[key] = *m.table.entries[x];
        else entries[key] = "X";
      }
      j["entries"] = std::move(entries);
    }
    gates.push_back(std::move(j));
  }
  nlohmann::ordered_json root;
  root["n"] = circuit.num_qubits();
  root["gates"] = std::move(gates);
  return root.dump(2);
}

}  // namespace qsp
