#include "qsprep/search.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <queue>
#include <stdexcept>
#include <unordered_map>

#include "qsprep/angles.hpp"
#include "qsprep/canon.hpp"
#include "qsprep/errors.hpp"
#include "qsprep/mcry.hpp"

namespace qsp {

namespace {

std::vector<StapGroup> groups_of(const SparseState& state, int target) {
  const Basis tm = qubit_mask(state.num_qubits(), target);
  std::vector<StapGroup> groups;
  for (const auto& e : state.entries()) {
    const Basis lo = e.index & ~tm;
    if ((e.index & tm) && state.amplitude(lo) != 0.0) continue;
    groups.push_back({lo, state.amplitude(lo), state.amplitude(lo | tm), StapAction::keep});
  }
  std::sort(groups.begin(), groups.end(),
            [](const StapGroup& a, const StapGroup& b) { return a.rest < b.rest; });
  return groups;
}

bool is_pair(const StapGroup& g) { return g.a0 != 0.0 && g.a1 != 0.0; }

std::pair<double, double> outcome(const StapGroup& g) {
  const double r = std::hypot(g.a0, g.a1);
  switch (g.action) {
    case StapAction::keep: return {g.a0, g.a1};
    case StapAction::flip: return {g.a1, g.a0};
    case StapAction::merge_keep_zero: return {std::copysign(r, g.a0), 0.0};
    case StapAction::merge_keep_one: return {0.0, std::copysign(r, g.a1)};
  }
  return {g.a0, g.a1};
}

double rotation_of(const StapGroup& g) {
  auto [b0, b1] = outcome(g);
  return wrap_4pi(pair_angle(b0, b1) - pair_angle(g.a0, g.a1));
}

std::vector<int> control_candidates(const SparseState& state, int target) {
  std::vector<int> out;
  for (int q : active_qubits(state)) {
    if (q != target) out.push_back(q);
  }
  return out;
}

std::uint64_t pattern_of(Basis rest, int n, const std::vector<int>& controls) {
  std::uint64_t p = 0;
  for (int q : controls) p = (p << 1) | static_cast<std::uint64_t>(qubit_value(rest, n, q));
  return p;
}

}  // namespace

SparseState apply_stap(const SparseState& state, const StapOperator& op) {
  const int n = state.num_qubits();
  const Basis tm = qubit_mask(n, op.target);
  std::vector<Entry> out;
  out.reserve(state.cardinality());
  for (const auto& g : op.groups) {
    auto [b0, b1] = outcome(g);
    if (b0 != 0.0) out.push_back({g.rest, b0});
    if (b1 != 0.0) out.push_back({g.rest | tm, b1});
  }
  return SparseState(n, std::move(out));
}

RotationTable operator_table(const SparseState& state, const StapOperator& op) {
  const int n = state.num_qubits();
  auto controls = control_candidates(state, op.target);
  std::vector<std::optional<double>> entries(std::size_t{1} << controls.size());
  for (const auto& g : op.groups) entries[pattern_of(g.rest, n, controls)] = rotation_of(g);
  return RotationTable(std::move(controls), std::move(entries));
}

namespace {

std::vector<AngleConstraint> operator_constraints(const SparseState& state, const StapOperator& op,
                                                  const std::vector<int>& controls) {
  const int n = state.num_qubits();
  std::vector<AngleConstraint> cs;
  cs.reserve(op.groups.size());
  for (const auto& g : op.groups) {
    const double phi = pair_angle(g.a0, g.a1);
    cs.push_back({pattern_of(g.rest, n, controls), phi, phi + rotation_of(g)});
  }
  return cs;
}

}  // namespace

bool price_operator(const SparseState& state, StapOperator& op, CostModel model, int max_cost) {
  RotationTable table = operator_table(state, op);
  if (model == CostModel::graycode) {
    op.table = reduce_support(table);
    const int c = op.table.num_controls();
    op.cost = c == 0 ? 0 : (1 << c);
    return op.cost <= max_cost;
  }
  auto k = constraint_cnot_count(table.num_controls(), operator_constraints(state, op, table.controls), max_cost);
  // The greedy control choice over all candidates can land on a wider set
  // than the table's own support; price over that support too.
  RotationTable reduced = reduce_support(table);
  if (reduced.controls != table.controls && (!k || *k > 0)) {
    auto k2 = constraint_cnot_count(reduced.num_controls(), operator_constraints(state, op, reduced.controls),
                                    k ? *k - 1 : max_cost);
    if (k2) {
      k = k2;
      table = std::move(reduced);
    }
  }
  if (!k) return false;
  op.table = std::move(table);
  op.cost = *k;
  return true;
}

int operator_lower_bound(const SparseState& state, const StapOperator& op, CostModel model) {
  if (model == CostModel::graycode) {
    StapOperator copy = op;
    price_operator(state, copy, model);
    return copy.cost;
  }
  const auto controls = control_candidates(state, op.target);
  int lb = constraint_cnot_lower_bound(static_cast<int>(controls.size()), operator_constraints(state, op, controls));
  const RotationTable reduced = reduce_support(operator_table(state, op));
  if (reduced.controls != controls) {
    lb = std::min(lb, constraint_cnot_lower_bound(reduced.num_controls(),
                                                  operator_constraints(state, op, reduced.controls)));
  }
  return lb;
}

StapOperator reduce_qubit_operator(const SparseState& state, int target, CostModel model) {
  if (target < 0 || target >= state.num_qubits()) throw InvalidArgument("qubit out of range");
  StapOperator op;
  op.target = target;
  op.groups = groups_of(state, target);
  for (auto& g : op.groups) {
    if (is_pair(g)) g.action = StapAction::merge_keep_zero;
    else g.action = g.a0 != 0.0 ? StapAction::keep : StapAction::flip;
  }
  price_operator(state, op, model);
  return op;
}

std::vector<Neighbor> stap_candidates(const SparseState& state, const SearchConfig& config) {
  if (state.cardinality() > config.max_cardinality) {
    throw CapExceeded("cardinality " + std::to_string(state.cardinality()) +
                      " above the exact-synthesis cap; use a reduction flow first");
  }
  const bool limit_angles = state.cardinality() > config.distinct_angle_threshold;
  std::vector<Neighbor> out;
  static constexpr StapAction kActions[] = {StapAction::keep, StapAction::flip, StapAction::merge_keep_zero,
                                            StapAction::merge_keep_one};
  for (int t = 0; t < state.num_qubits(); ++t) {
    StapOperator op;
    op.target = t;
    op.groups = groups_of(state, t);
    const std::size_t count = op.groups.size();
    // Action vectors in lexicographic order (first group most significant),
    // pruning a prefix once it uses too many distinct angles.
    std::vector<double> angles;  // distinct angles of the prefix
    std::vector<int> added;      // per depth: whether it pushed onto `angles`
    added.reserve(count);
    auto emit = [&] {
      StapOperator cand = op;
      cand.cost = operator_lower_bound(state, cand, config.cost_model);
      SparseState next = apply_stap(state, cand);
      out.push_back({std::move(next), std::move(cand)});
    };
    std::function<void(std::size_t, bool)> walk = [&](std::size_t i, bool any_change) {
      if (i == count) {
        if (any_change) emit();
        return;
      }
      auto& g = op.groups[i];
      const int radix = is_pair(g) ? 4 : 2;
      for (int a = 0; a < radix; ++a) {
        g.action = kActions[a];
        bool pushed = false;
        if (limit_angles) {
          const double th = rotation_of(g);
          if (std::none_of(angles.begin(), angles.end(), [&](double b) { return same_angle_4pi(th, b); })) {
            if (static_cast<int>(angles.size()) >= config.max_distinct_angles) continue;
            angles.push_back(th);
            pushed = true;
          }
        }
        walk(i + 1, any_change || a != 0);
        if (pushed) angles.pop_back();
      }
      g.action = StapAction::keep;
    };
    walk(0, false);
  }
  return out;
}

std::vector<Neighbor> enumerate_stap_neighbors(const SparseState& state, const SearchConfig& config,
                                               int max_cost) {
  std::vector<Neighbor> out;
  for (auto& nb : stap_candidates(state, config)) {
    if (nb.op.cost > max_cost) continue;
    if (!price_operator(state, nb.op, config.cost_model, max_cost)) continue;
    out.push_back(std::move(nb));
  }
  return out;
}

int heuristic_lower_bound(const SparseState& state) {
  return (entangled_qubit_count(state) + 1) / 2;
}

namespace {

struct PathResult {
  std::vector<StapOperator> ops;
  SparseState goal;
  int cost = 0;
};

PathResult reduction_path(const SparseState& state, CostModel model) {
  PathResult r;
  SparseState s = state;
  for (int q = state.num_qubits() - 1; q >= 0 && s.cardinality() > 1; --q) {
    if (fixed_value(s, q) >= 0) continue;
    auto op = reduce_qubit_operator(s, q, model);
    r.cost += op.cost;
    s = apply_stap(s, op);
    r.ops.push_back(std::move(op));
  }
  r.goal = s;
  return r;
}

Circuit path_circuit(const SparseState& goal, const std::vector<StapOperator>& ops) {
  const int n = goal.num_qubits();
  Circuit circ(n);
  const Basis b = goal.entries().front().index;
  for (int q = 0; q < n; ++q) {
    if (qubit_value(b, n, q)) circ.x(q);
  }
  for (auto it = ops.rbegin(); it != ops.rend(); ++it) {
    RotationTable t = it->table;
    for (auto& e : t.entries) {
      if (e) e = -*e;
    }
    circ.mcry(it->target, std::move(t));
  }
  return circ;
}

struct Node {
  SparseState state;
  int g;
  int h;
  std::int64_t parent;
  StapOperator op;
  const CanonicalKey* key;
};

// Unpriced edge: the child is rebuilt from the parent when popped. Actions
// are stored one byte per group in a shared arena to keep memory flat.
struct Pending {
  std::int64_t parent;
  std::size_t actions;  // arena offset
  int target;
};

// ref >= 0 is a node, ref < 0 the pending edge ~ref. seq is insertion order.
struct QueueItem {
  int f;
  int h;
  std::int64_t seq;
  std::int64_t ref;
};

struct Later {
  bool operator()(const QueueItem& a, const QueueItem& b) const {
    if (a.f != b.f) return a.f > b.f;
    if (a.h != b.h) return a.h > b.h;
    return a.seq > b.seq;
  }
};

}  // namespace

int reduction_path_cost(const SparseState& state, CostModel model) {
  return reduction_path(state, model).cost;
}

SearchResult astar_prepare(const SparseState& target, const SearchConfig& config) {
  if (target.empty() || !is_normalized(target, 1e-6)) throw InvalidArgument("target state is not normalized");
  if (entangled_qubit_count(target) > config.max_entangled) {
    throw CapExceeded("entangled qubits " + std::to_string(entangled_qubit_count(target)) +
                      " above the exact-synthesis cap " + std::to_string(config.max_entangled));
  }
  if (target.cardinality() > config.max_cardinality) {
    throw CapExceeded("cardinality " + std::to_string(target.cardinality()) +
                      " above the exact-synthesis cap " + std::to_string(config.max_cardinality));
  }

  std::optional<PathResult> incumbent;
  int bound = INT_MAX;
  if (config.use_incumbent) {
    incumbent = reduction_path(target, config.cost_model);
    bound = incumbent->cost;
  }
  auto key_of = [&](const SparseState& s) {
    return config.use_canonical ? canonical_key(s) : state_key(s);
  };
  auto h_of = [&](const SparseState& s) { return config.use_heuristic ? heuristic_lower_bound(s) : 0; };

  std::vector<Node> nodes;
  std::vector<Pending> pending;
  std::vector<std::uint8_t> arena;
  std::unordered_map<CanonicalKey, std::pair<int, std::int64_t>> best;  // key -> (g, node)
  std::priority_queue<QueueItem, std::vector<QueueItem>, Later> open;
  std::int64_t seq = 0;

  auto push_priced = [&](SparseState s, int g, int h, std::int64_t parent, StapOperator op) {
    if (g + h > bound) return;
    CanonicalKey key = key_of(s);
    auto it = best.find(key);
    if (it != best.end() && it->second.first <= g) return;
    const auto id = static_cast<std::int64_t>(nodes.size());
    auto [pos, inserted] = best.insert_or_assign(std::move(key), std::pair{g, id});
    nodes.push_back({std::move(s), g, h, parent, std::move(op), &pos->first});
    open.push({g + h, h, seq++, id});
  };

  SearchResult result;
  push_priced(target, 0, h_of(target), -1, {});
  std::int64_t goal = -1;
  while (!open.empty()) {
    const QueueItem item = open.top();
    open.pop();

    if (item.ref < 0) {
      const Pending& p = pending[static_cast<std::size_t>(~item.ref)];
      const Node& parent = nodes[static_cast<std::size_t>(p.parent)];
      StapOperator op;
      op.target = p.target;
      op.groups = groups_of(parent.state, p.target);
      for (std::size_t i = 0; i < op.groups.size(); ++i) {
        op.groups[i].action = static_cast<StapAction>(arena[p.actions + i]);
      }
      const int limit = bound == INT_MAX ? INT_MAX : bound - parent.g - item.h;
      if (++result.pricings > config.pricing_budget && config.pricing_budget != 0) {
        throw CapExceeded("A* pricing budget of " + std::to_string(config.pricing_budget) + " operators exhausted");
      }
      if (!price_operator(parent.state, op, config.cost_model, limit)) continue;
      SparseState child = apply_stap(parent.state, op);
      const int g = parent.g + op.cost;
      push_priced(std::move(child), g, item.h, p.parent, std::move(op));
      continue;
    }

    const auto idx = static_cast<std::size_t>(item.ref);
    if (best.at(*nodes[idx].key).second != item.ref) continue;  // superseded by a cheaper path
    if (is_product_state(nodes[idx].state)) {
      goal = item.ref;
      break;
    }
    if (++result.expansions > config.node_budget) {
      throw CapExceeded("A* node budget of " + std::to_string(config.node_budget) + " expansions exhausted");
    }
    if (config.deadline && std::chrono::steady_clock::now() > *config.deadline) {
      throw Timeout("A* deadline passed after " + std::to_string(result.expansions) + " expansions");
    }
    const int g = nodes[idx].g;
    for (auto& nb : stap_candidates(nodes[idx].state, config)) {
      const int g2 = g + nb.op.cost;
      const int h2 = h_of(nb.state);
      if (g2 + h2 > bound) continue;
      pending.push_back({item.ref, arena.size(), nb.op.target});
      for (const auto& grp : nb.op.groups) arena.push_back(static_cast<std::uint8_t>(grp.action));
      open.push({g2 + h2, h2, seq++, ~static_cast<std::int64_t>(pending.size() - 1)});
    }
  }

  if (goal < 0) {
    if (!incumbent) throw std::logic_error("A* exhausted the graph without reaching a basis state");
    result.path = incumbent->ops;
    result.cost = incumbent->cost;
    result.circuit = path_circuit(incumbent->goal, incumbent->ops);
  } else {
    const Node& g = nodes[static_cast<std::size_t>(goal)];
    result.cost = g.g;
    for (std::int64_t id = goal; nodes[static_cast<std::size_t>(id)].parent >= 0;
         id = nodes[static_cast<std::size_t>(id)].parent) {
      result.path.push_back(nodes[static_cast<std::size_t>(id)].op);
    }
    std::reverse(result.path.begin(), result.path.end());
    // Product goal: the remaining qubits are reduced by uncontrolled rotations.
    auto tail = reduction_path(g.state, config.cost_model);
    result.path.insert(result.path.end(), tail.ops.begin(), tail.ops.end());
    result.circuit = path_circuit(tail.goal, result.path);
  }
  if (!approx_equal_up_to_sign(apply_circuit(SparseState::ground(target.num_qubits()), result.circuit),
                               target, 1e-7)) {
    throw std::logic_error("A* circuit does not reproduce the target state");
  }
  return result;
}

}  // namespace qsp
