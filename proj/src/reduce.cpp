#include "qsprep/reduce.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <type_traits>
#include <variant>

#include "qsprep/angles.hpp"
#include "qsprep/errors.hpp"
#include "qsprep/mcry.hpp"

namespace qsp {

namespace {

// Builds the MCRy for an operator under the flow's cost model and prices it.
// Under graycode the table is declared over `graycode_controls` (a subset of
// the operator's full control set) unless support reduction is requested.
std::pair<RotationTable, int> realize(const SparseState& state, StapOperator op,
                                     const FlowOptions& options,
                                     const std::optional<std::vector<int>>& graycode_controls) {
  const bool exact = options.cost_model == CostModel::exact;
  if (exact) price_operator(state, op, CostModel::exact);
  if (exact && !graycode_controls) return {op.table, op.cost};
  RotationTable full = operator_table(state, op);
  RotationTable table = full;
  if (graycode_controls) {
    std::vector<int> keep = *graycode_controls;
    std::sort(keep.begin(), keep.end());
    const int c = full.num_controls(), k = static_cast<int>(keep.size());
    std::vector<std::optional<double>> entries(std::size_t{1} << k);
    for (std::uint64_t x = 0; x < full.num_patterns(); ++x) {
      if (!full.is_care(x)) continue;
      std::uint64_t y = 0;
      for (int q : keep) {
        auto pos = std::find(full.controls.begin(), full.controls.end(), q) - full.controls.begin();
        y = (y << 1) | ((x >> (c - 1 - pos)) & 1U);
      }
      if (entries[y] && !same_angle_4pi(*entries[y], *full.entries[x])) {
        throw std::logic_error("control subset does not determine the rotation");
      }
      entries[y] = full.entries[x];
    }
    (void)k;
    table = RotationTable(std::move(keep), std::move(entries));
  }
  if (options.reduce_support) table = reduce_support(table);
  if (exact && op.cost > 0) {
    // The distinguishing controls can beat the greedy choice made in pricing.
    const auto k = constraint_cnot_count(table.num_controls(), state_constraints(state, McryGate{op.target, table}),
                                         op.cost - 1);
    if (k) return {table, *k};
  }
  if (exact) return {op.table, op.cost};
  const int c = table.num_controls();
  return {table, c == 0 ? 0 : (1 << c)};
}

StapOperator operator_for(const SparseState& state, int target) {
  // Reuse the search module's grouping through the all-to-zero operator,
  // then let callers adjust actions.
  return reduce_qubit_operator(state, target, CostModel::graycode);
}

}  // namespace

ReductionStep qubit_reduce_step(const SparseState& state, int qubit, const FlowOptions& options) {
  if (qubit < 0 || qubit >= state.num_qubits()) throw InvalidArgument("qubit out of range");
  if (fixed_value(state, qubit) >= 0) {
    throw InvalidArgument("qubit " + std::to_string(qubit) + " is already fixed");
  }
  StapOperator op = operator_for(state, qubit);
  auto [table, cost] = realize(state, op, options, std::nullopt);
  ReductionStep step;
  step.fragment = Circuit(state.num_qubits());
  step.fragment.mcry(qubit, table);
  step.state = apply_stap(state, op);
  step.cost = cost;
  return step;
}

namespace {

// Qubit splitting T into two nonempty parts with the smallest minority,
// lowest index on ties; returns the qubit and the side to continue with
// (the smaller one, value 1 when equal).
std::pair<int, int> split(const std::vector<Basis>& t, int n) {
  int best_q = -1;
  std::size_t best_size = 0;
  int side = 0;
  for (int q = 0; q < n; ++q) {
    std::size_t ones = 0;
    for (Basis x : t) ones += qubit_value(x, n, q);
    const std::size_t zeros = t.size() - ones;
    if (ones == 0 || zeros == 0) continue;
    const std::size_t minority = std::min(ones, zeros);
    if (best_q < 0 || minority < best_size) {
      best_q = q;
      best_size = minority;
      side = zeros < ones ? 0 : 1;
    }
  }
  return {best_q, side};
}

std::vector<Basis> keep_side(const std::vector<Basis>& t, int n, int q, int value) {
  std::vector<Basis> out;
  for (Basis x : t) {
    if (static_cast<int>(qubit_value(x, n, q)) == value) out.push_back(x);
  }
  return out;
}

}  // namespace

ReductionStep cardinality_reduce_step(const SparseState& state, const FlowOptions& options) {
  if (state.cardinality() < 2) throw InvalidArgument("cardinality reduction needs at least two entries");
  const int n = state.num_qubits();
  const std::vector<Basis> all = state.index_set();

  std::vector<int> dif_qubits, dif_values;
  std::vector<Basis> t = all;
  while (t.size() > 1) {
    auto [q, v] = split(t, n);
    dif_qubits.push_back(q);
    dif_values.push_back(v);
    t = keep_side(t, n, q, v);
  }
  const Basis x1 = t.front();
  const int dif = dif_qubits.back();
  dif_qubits.pop_back();
  dif_values.pop_back();

  t.clear();
  for (Basis x : all) {
    bool agree = x != x1;
    for (std::size_t i = 0; i < dif_qubits.size() && agree; ++i) {
      agree = static_cast<int>(qubit_value(x, n, dif_qubits[i])) == dif_values[i];
    }
    if (agree) t.push_back(x);
  }
  while (t.size() > 1) {
    auto [q, v] = split(t, n);
    t = keep_side(t, n, q, v);
  }
  const Basis x2 = t.front();

  ReductionStep step;
  step.fragment = Circuit(n);
  SparseState s = state;
  Basis y1 = x1, y2 = x2;
  for (int b = 0; b < n; ++b) {
    if (b == dif || qubit_value(x1, n, b) == qubit_value(x2, n, b)) continue;
    step.fragment.cnot(dif, b);
    s = apply_cnot(s, dif, b);
    const Basis dm = qubit_mask(n, dif), bm = qubit_mask(n, b);
    if (y1 & dm) y1 ^= bm;
    if (y2 & dm) y2 ^= bm;
    ++step.cost;
  }

  // Controls: greedily pick qubits separating the pair from everything else.
  std::vector<Basis> others;
  for (const auto& e : s.entries()) {
    if (e.index != y1 && e.index != y2) others.push_back(e.index);
  }
  std::vector<int> controls;
  while (!others.empty()) {
    int best_q = -1;
    std::size_t best_count = 0;
    for (int q = 0; q < n; ++q) {
      if (q == dif || std::find(controls.begin(), controls.end(), q) != controls.end()) continue;
      std::size_t count = 0;
      for (Basis x : others) count += qubit_value(x, n, q) != qubit_value(y1, n, q);
      if (count > best_count) {
        best_q = q;
        best_count = count;
      }
    }
    controls.push_back(best_q);
    std::erase_if(others, [&](Basis x) { return qubit_value(x, n, best_q) != qubit_value(y1, n, best_q); });
  }

  StapOperator op = operator_for(s, dif);
  const Basis rest = y1 & ~qubit_mask(n, dif);
  for (auto& g : op.groups) {
    if (g.rest == rest) {
      g.action = qubit_value(y1, n, dif) ? StapAction::merge_keep_one : StapAction::merge_keep_zero;
    } else {
      g.action = StapAction::keep;
    }
  }
  auto [table, cost] = realize(s, op, options, controls);
  step.fragment.mcry(dif, table);
  step.state = apply_stap(s, op);
  step.cost += cost;
  return step;
}

namespace {

Circuit assemble(const SparseState& goal, const std::vector<Circuit>& fragments, Circuit head) {
  const int n = goal.num_qubits();
  Circuit circ(n);
  circ.append(head);
  for (auto it = fragments.rbegin(); it != fragments.rend(); ++it) circ.append(invert(*it));
  return circ;
}

Circuit basis_prep(const SparseState& goal) {
  const int n = goal.num_qubits();
  Circuit circ(n);
  const Basis b = goal.entries().front().index;
  for (int q = 0; q < n; ++q) {
    if (qubit_value(b, n, q)) circ.x(q);
  }
  return circ;
}

// The state on its non-fixed qubits only, in the same relative order.
SparseState restrict_to(const SparseState& state, const std::vector<int>& active) {
  const int n = state.num_qubits();
  std::vector<Entry> entries;
  entries.reserve(state.cardinality());
  for (const auto& e : state.entries()) {
    Basis x = 0;
    for (int q : active) x = (x << 1) | static_cast<Basis>(qubit_value(e.index, n, q));
    entries.push_back({x, e.amp});
  }
  return SparseState(static_cast<int>(active.size()), std::move(entries));
}

// Renames qubit i of `circuit` to qubits[i].
Circuit embed(const Circuit& circuit, const std::vector<int>& qubits, int n) {
  auto at = [&](int q) { return qubits[static_cast<std::size_t>(q)]; };
  Circuit out(n);
  for (const auto& gate : circuit.gates()) {
    std::visit(
        [&](const auto& g) {
          using G = std::decay_t<decltype(g)>;
          if constexpr (std::is_same_v<G, RyGate>) {
            out.ry(at(g.target), g.angle);
          } else if constexpr (std::is_same_v<G, XGate>) {
            out.x(at(g.target));
          } else if constexpr (std::is_same_v<G, CnotGate>) {
            out.cnot(at(g.control), at(g.target), g.negated);
          } else {
            RotationTable t = g.table;
            for (int& c : t.controls) c = at(c);
            out.mcry(at(g.target), std::move(t));
          }
        },
        gate);
  }
  return out;
}

// Exact synthesis on the non-fixed qubits; fixed qubits are set with X.
Circuit exact_head(const SparseState& state, const SearchConfig& config) {
  const int n = state.num_qubits();
  const auto active = active_qubits(state);
  Circuit head(n);
  for (int q = 0; q < n; ++q) {
    if (fixed_value(state, q) == 1) head.x(q);
  }
  head.append(embed(astar_prepare(restrict_to(state, active), config).circuit, active, n));
  return head;
}

}  // namespace

Circuit prepare_nflow(const SparseState& state, const FlowOptions& options) {
  const int n = state.num_qubits();
  std::vector<int> order = options.qubit_order;
  if (order.empty()) {
    for (int q = n - 1; q >= 0; --q) order.push_back(q);
  }
  SparseState s = state;
  std::vector<Circuit> fragments;
  for (int q : order) {
    if (s.cardinality() == 1) break;
    if (fixed_value(s, q) >= 0) continue;
    auto step = qubit_reduce_step(s, q, options);
    fragments.push_back(std::move(step.fragment));
    s = std::move(step.state);
  }
  if (s.cardinality() != 1) throw InvalidArgument("qubit order does not cover every superposed qubit");
  return assemble(s, fragments, basis_prep(s));
}

Circuit prepare_mflow(const SparseState& state, const FlowOptions& options) {
  SparseState s = state;
  std::vector<Circuit> fragments;
  while (s.cardinality() > 1) {
    auto step = cardinality_reduce_step(s, options);
    fragments.push_back(std::move(step.fragment));
    s = std::move(step.state);
  }
  return assemble(s, fragments, basis_prep(s));
}

Circuit prepare_exact(const SparseState& state, const SearchConfig& config) {
  return astar_prepare(state, config).circuit;
}

Circuit prepare_hybrid(const SparseState& state, const HybridConfig& config) {
  const auto& sc = config.search;
  FlowOptions exact;
  exact.cost_model = sc.cost_model;
  exact.reduce_support = true;
  SparseState s = state;
  std::vector<Circuit> fragments;
  Circuit head;
  while (true) {
    if (s.cardinality() == 1) {
      head = basis_prep(s);
      break;
    }
    if (entangled_qubit_count(s) <= sc.max_entangled && s.cardinality() <= sc.max_cardinality) {
      try {
        head = exact_head(s, sc);
        break;
      } catch (const CapExceeded&) {
        if (!config.fallback) throw;
      }
    }
    if (sc.deadline && std::chrono::steady_clock::now() > *sc.deadline) {
      throw Timeout("hybrid flow deadline passed");
    }
    const auto active = active_qubits(s);
    const int k = static_cast<int>(active.size());
    const double m = static_cast<double>(s.cardinality());
    ReductionStep step;
    if (static_cast<double>(k) * m < std::ldexp(1.0, k)) {
      step = cardinality_reduce_step(s, exact);
    } else {
      bool have = false;
      for (auto it = active.rbegin(); it != active.rend(); ++it) {
        auto candidate = qubit_reduce_step(s, *it, exact);
        if (!have || candidate.cost < step.cost) {
          step = std::move(candidate);
          have = true;
        }
      }
    }
    fragments.push_back(std::move(step.fragment));
    s = std::move(step.state);
  }
  return assemble(s, fragments, head);
}

}  // namespace qsp
