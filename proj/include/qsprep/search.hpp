#pragma once

#include <chrono>
#include <climits>
#include <cstdint>
#include <optional>
#include <vector>

#include "qsprep/circuit.hpp"
#include "qsprep/qstate.hpp"

namespace qsp {

enum class StapAction : std::uint8_t { keep, flip, merge_keep_zero, merge_keep_one };

// Basis states that agree on every qubit but the target form a group; its
// target 2-vector is (a0, a1) (one of them zero for a singleton).
struct StapGroup {
  Basis rest;  // index with the target bit cleared
  double a0;
  double a1;
  StapAction action;
};

// Single-target amplitude-preserving transition. `table` is the MCRy that
// realizes it, declared over the controls used for costing.
struct StapOperator {
  int target = 0;
  std::vector<StapGroup> groups;
  RotationTable table;
  int cost = 0;
};

struct Neighbor {
  SparseState state;
  StapOperator op;
};

struct SearchConfig {
  CostModel cost_model = CostModel::exact;
  int max_entangled = 4;
  std::size_t max_cardinality = 16;
  // Above distinct_angle_threshold entries, only operators whose tables use
  // at most max_distinct_angles different care angles are generated.
  int max_distinct_angles = 4;
  std::size_t distinct_angle_threshold = 8;
  std::uint64_t node_budget = 10'000'000;
  // Operator pricings (exact template searches) allowed; 0 means unlimited.
  std::uint64_t pricing_budget = 0;
  bool use_heuristic = true;
  bool use_canonical = true;
  // Prune with the cost of a qubit-by-qubit reduction path (a valid path in
  // the same graph, so optimality is kept).
  bool use_incumbent = true;
  // Checked between expansions; passing it throws Timeout.
  std::optional<std::chrono::steady_clock::time_point> deadline;
};

// Result of applying the actions group by group (sign-exact: a flip swaps
// the pair, a merge keeps the sign of the surviving side).
SparseState apply_stap(const SparseState& state, const StapOperator& op);

// Operator that sends every group of `target` to |0> (merge or flip).
StapOperator reduce_qubit_operator(const SparseState& state, int target, CostModel model);

// Rotation table of the operator over every non-fixed qubit except the
// target (one pattern per group; absent patterns are don't-cares).
RotationTable operator_table(const SparseState& state, const StapOperator& op);

// Fills in op.table and op.cost for the given state; returns false when the
// cost exceeds max_cost (op.cost is then meaningless).
bool price_operator(const SparseState& state, StapOperator& op, CostModel model,
                    int max_cost = INT_MAX);

// Lower bound on the operator's cost (exact under graycode).
int operator_lower_bound(const SparseState& state, const StapOperator& op, CostModel model);

// Every single-target action vector applied to the state; op.cost holds the
// lower bound and op.table is left empty.
std::vector<Neighbor> stap_candidates(const SparseState& state, const SearchConfig& config);

// Priced neighbors with cost <= max_cost.
std::vector<Neighbor> enumerate_stap_neighbors(const SparseState& state, const SearchConfig& config,
                                               int max_cost = INT_MAX);

int heuristic_lower_bound(const SparseState& state);

struct SearchResult {
  Circuit circuit;  // prepares the target from |0...0>; MCRy, CNOT-free X and nothing else
  int cost = 0;
  std::uint64_t expansions = 0;
  std::uint64_t pricings = 0;
  std::vector<StapOperator> path;  // target -> ground direction
};

SearchResult astar_prepare(const SparseState& target, const SearchConfig& config = {});

// Cost of the last-to-first qubit reduction path priced under `model`.
int reduction_path_cost(const SparseState& state, CostModel model);

}  // namespace qsp
