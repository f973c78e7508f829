#pragma once

#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "qsprep/qstate.hpp"
#include "qsprep/rotation_table.hpp"

namespace qsp {

enum class CostModel { graycode, exact };

std::string to_string(CostModel model);
CostModel parse_cost_model(std::string_view name);

struct RyGate {
  int target;
  double angle;
  friend bool operator==(const RyGate&, const RyGate&) = default;
};

struct XGate {
  int target;
  friend bool operator==(const XGate&, const XGate&) = default;
};

// negated = true fires when the control is |0> (hollow circle).
struct CnotGate {
  int control;
  int target;
  bool negated = false;
  friend bool operator==(const CnotGate&, const CnotGate&) = default;
};

struct McryGate {
  int target;
  RotationTable table;
  friend bool operator==(const McryGate&, const McryGate&) = default;
};

using Gate = std::variant<RyGate, XGate, CnotGate, McryGate>;

class Circuit {
 public:
  Circuit() = default;
  explicit Circuit(int n) : n_(n) {}

  int num_qubits() const { return n_; }
  const std::vector<Gate>& gates() const { return gates_; }
  std::size_t size() const { return gates_.size(); }
  bool empty() const { return gates_.empty(); }

  Circuit& add(Gate g);
  Circuit& ry(int target, double angle) { return add(RyGate{target, angle}); }
  Circuit& x(int target) { return add(XGate{target}); }
  Circuit& cnot(int control, int target, bool negated = false) {
    return add(CnotGate{control, target, negated});
  }
  Circuit& mcry(int target, RotationTable table) {
    return add(McryGate{target, std::move(table)});
  }
  Circuit& append(const Circuit& other);

  // True when only Ry and positive-control CNOT gates are present.
  bool is_basis() const;
  int cnot_gate_count() const;

  friend bool operator==(const Circuit&, const Circuit&) = default;

 private:
  int n_ = 0;
  std::vector<Gate> gates_;
};

// Ry/X cost 0, CNOT 1, MCRy 2^c for its declared controls under graycode or
// the state-aware exact count when the model is exact.
int cnot_cost(const Circuit& circuit, CostModel model);

// Rewrites into Ry and positive CNOT only. X gates are commuted to the start
// of the circuit where they act on |0> and become Ry(π); the result prepares
// exactly the same state from |0...0>.
Circuit lower_to_basis(const Circuit& circuit, CostModel model);

Circuit invert(const Circuit& circuit);

std::string emit_qasm(const Circuit& circuit);
Circuit parse_qasm(std::string_view text);

std::string circuit_to_json(const Circuit& circuit);

// Exact sparse application of one gate or a whole circuit.
SparseState apply_gate(const SparseState& state, const Gate& gate);
SparseState apply_circuit(const SparseState& state, const Circuit& circuit);

}  // namespace qsp
