#pragma once

#include <climits>
#include <cstdint>
#include <optional>
#include <vector>

#include "qsprep/circuit.hpp"
#include "qsprep/qstate.hpp"
#include "qsprep/rotation_table.hpp"

namespace qsp {

// Requirement on the target qubit for one control pattern: a 2-vector with
// angle `initial` (see pair_angle) must end at angle `target`, mod 4π.
struct AngleConstraint {
  std::uint64_t pattern;
  double initial;
  double target;
};

// Linear system for the template
//   Ry(θ0) · [CNOT(controls[sequence[k-1]] → t) · Ry(θk)]_{k=1..K} · (X if final_x)
// with one equation per constraint: Σ coeffs·θ ≡ rhs (mod 4π).
struct EqualitySystem {
  int num_controls = 0;
  std::vector<int> sequence;  // positions into the control list
  bool final_x = false;
  std::vector<std::vector<int>> coeffs;
  std::vector<double> rhs;

  int num_unknowns() const { return static_cast<int>(sequence.size()) + 1; }
};

RotationTable reduce_support(const RotationTable& table);

// 2^c CNOTs (none for c = 0); don't-cares are taken as angle 0.
Circuit gray_code_decompose(const RotationTable& table, int target, int n);

EqualitySystem build_equality_system(int num_controls, const std::vector<int>& sequence,
                                     const std::vector<AngleConstraint>& constraints,
                                     bool final_x = false);

// Integer row reduction of the coefficient matrix; residual equations must
// vanish mod 4π (tolerance 1e-8). Returns θ0..θK in (-2π, 2π].
std::optional<std::vector<double>> solve_system(const EqualitySystem& system);

// Constraints describing a table acting on a target with a known initial
// angle, or (initial absent) acting as the table's unitary on any input.
std::vector<AngleConstraint> table_constraints(const RotationTable& table,
                                               std::optional<double> initial_angle);

struct Decomposition {
  Circuit circuit;
  int cnots = 0;
};

// Fewest-CNOT circuit meeting the constraints, CNOTs all targeting `target`
// and controlled by qubits from `controls` (pattern bit order as in
// RotationTable). Falls back to the Gray-code circuit when no template of
// fewer CNOTs exists. Returns nullopt when every solution exceeds max_cnots.
std::optional<Decomposition> decompose_constraints(const std::vector<int>& controls,
                                                   const std::vector<AngleConstraint>& constraints,
                                                   int target, int n, int max_cnots = INT_MAX);

// Same search, count only; results are cached.
std::optional<int> constraint_cnot_count(int num_controls,
                                         const std::vector<AngleConstraint>& constraints,
                                         int max_cnots = INT_MAX);

// Cheap lower bound on constraint_cnot_count: every control the constraints
// depend on must appear in the template at least once.
int constraint_cnot_lower_bound(int num_controls, const std::vector<AngleConstraint>& constraints);

// One constraint per group of basis states that differ only on the gate's
// target: the group's target 2-vector must be rotated by the table angle of
// its control pattern (don't-cares act as identity, as in simulation).
std::vector<AngleConstraint> state_constraints(const SparseState& state, const McryGate& gate);

Circuit exact_decompose(const RotationTable& table, int target, int n,
                        std::optional<double> initial_angle);

int mcry_cnot_cost(const RotationTable& table, CostModel model,
                   std::optional<double> initial_angle = 0.0);

// True when the circuit maps every constraint's initial vector to its target
// vector (sign-exact) for the corresponding control pattern.
bool satisfies_constraints(const Circuit& circuit, const std::vector<int>& controls,
                           int target, const std::vector<AngleConstraint>& constraints,
                           double tol = 1e-9);

}  // namespace qsp
