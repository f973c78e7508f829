#pragma once

#include <optional>
#include <vector>

#include "qsprep/circuit.hpp"
#include "qsprep/qstate.hpp"
#include "qsprep/search.hpp"

namespace qsp {

struct ReductionStep {
  Circuit fragment;  // applied to the input state (target -> ground direction)
  SparseState state;
  int cost = 0;
};

struct FlowOptions {
  CostModel cost_model = CostModel::graycode;
  // Drop redundant MCRy controls before Gray-code costing. Off reproduces
  // the plain qubit-reduction baseline.
  bool reduce_support = false;
  // n-flow qubit order; empty means last qubit first.
  std::vector<int> qubit_order;
};

// MCRy on `qubit` sending its conditional state to |0> for every pattern of
// the other non-fixed qubits.
ReductionStep qubit_reduce_step(const SparseState& state, int qubit, const FlowOptions& options = {});

// Aligns one pair of basis states with CNOTs and merges it with a
// controlled Ry; cardinality drops by one.
ReductionStep cardinality_reduce_step(const SparseState& state, const FlowOptions& options = {});

// Preparation circuits (ground -> target), MCRy gates left unlowered.
Circuit prepare_nflow(const SparseState& state, const FlowOptions& options = {});
Circuit prepare_mflow(const SparseState& state, const FlowOptions& options = {});

struct HybridConfig {
  SearchConfig search;
  // On A* budget exhaustion, take one more reduction step and retry.
  bool fallback = true;
};

Circuit prepare_hybrid(const SparseState& state, const HybridConfig& config = {});

// Exact synthesis on a state within the search caps.
Circuit prepare_exact(const SparseState& state, const SearchConfig& config = {});

}  // namespace qsp
