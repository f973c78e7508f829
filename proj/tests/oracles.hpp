#pragma once

// Reference implementations used only by tests. They share nothing with the
// library beyond the state type and the neighbor enumeration that defines
// the graph being searched.

#include <algorithm>
#include <climits>
#include <cmath>
#include <cstdint>
#include <map>
#include <numbers>
#include <optional>
#include <queue>
#include <random>
#include <utility>
#include <vector>

#include "qsprep/canon.hpp"
#include "qsprep/qstate.hpp"
#include "qsprep/search.hpp"

namespace oracle {

using namespace qsp;

inline constexpr double kPi = std::numbers::pi;

// Uninformed Dijkstra over the exact-cost STAP graph: no heuristic, no
// canonicalization (states are identified only up to global sign), goal is
// any single basis state. Paths dearer than `bound` are not explored; -1
// means no goal within it. Bounding by a claimed optimum still refutes the
// claim either way: a cheaper path is found, or none at all.
inline int dijkstra_cost(const SparseState& target, int bound = INT_MAX) {
  SearchConfig config;
  config.cost_model = CostModel::exact;
  config.max_cardinality = 64;
  std::map<CanonicalKey, int> dist;
  using Item = std::pair<int, std::pair<CanonicalKey, SparseState>>;
  auto later = [](const Item& a, const Item& b) { return a.first > b.first; };
  std::priority_queue<Item, std::vector<Item>, decltype(later)> open(later);
  dist[state_key(target)] = 0;
  open.push({0, {state_key(target), target}});
  while (!open.empty()) {
    auto [g, entry] = open.top();
    open.pop();
    const auto& [key, state] = entry;
    if (dist.at(key) < g) continue;
    if (state.cardinality() == 1) return g;
    for (auto& nb : enumerate_stap_neighbors(state, config, bound - g)) {
      const int g2 = g + nb.op.cost;
      auto k2 = state_key(nb.state);
      auto it = dist.find(k2);
      if (it != dist.end() && it->second <= g2) continue;
      dist[k2] = g2;
      open.push({g2, {std::move(k2), std::move(nb.state)}});
    }
  }
  return -1;
}

// Normalized state on m random basis states whose amplitudes are hyperspherical
// coordinates with every angle in {±π/4, ±3π/4}.
inline SparseState grid_state(int n, std::size_t m, std::mt19937_64& rng) {
  std::vector<Basis> all(std::size_t{1} << n);
  for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
  std::shuffle(all.begin(), all.end(), rng);
  std::uniform_int_distribution<int> pick(0, 3);
  const double grid[] = {kPi / 4, 3 * kPi / 4, -kPi / 4, -3 * kPi / 4};
  std::vector<Entry> entries;
  double tail = 1.0;
  for (std::size_t i = 0; i < m; ++i) {
    if (i + 1 == m) {
      entries.push_back({all[i], tail});
      break;
    }
    const double a = grid[pick(rng)];
    entries.push_back({all[i], tail * std::cos(a)});
    tail *= std::sin(a);
  }
  return SparseState(n, std::move(entries));
}

// Target 2-vector after Ry(θ0) X^f1 Ry(θ1) ... X^fK Ry(θK) X^fx applied to |0>.
inline std::pair<double, double> run_template(const std::vector<double>& theta, const std::vector<int>& fires,
                                              bool final_x) {
  double a = 1.0, b = 0.0;
  auto ry = [&](double t) {
    const double c = std::cos(t / 2), s = std::sin(t / 2);
    const double a2 = c * a - s * b, b2 = s * a + c * b;
    a = a2;
    b = b2;
  };
  ry(theta[0]);
  for (std::size_t k = 0; k < fires.size(); ++k) {
    if (fires[k]) std::swap(a, b);
    ry(theta[k + 1]);
  }
  if (final_x) std::swap(a, b);
  return {a, b};
}

// Real Gaussian elimination; returns a solution (free variables zero) when
// the system is consistent within tol.
inline std::optional<std::vector<double>> solve_real(std::vector<std::vector<double>> a, std::vector<double> b,
                                                     double tol = 1e-7) {
  const std::size_t rows = a.size(), cols = rows ? a[0].size() : 0;
  std::vector<int> pivot_col;
  std::size_t r = 0;
  for (std::size_t c = 0; c < cols && r < rows; ++c) {
    std::size_t best = r;
    for (std::size_t i = r; i < rows; ++i) {
      if (std::abs(a[i][c]) > std::abs(a[best][c])) best = i;
    }
    if (std::abs(a[best][c]) < 1e-12) continue;
    std::swap(a[r], a[best]);
    std::swap(b[r], b[best]);
    for (std::size_t i = 0; i < rows; ++i) {
      if (i == r) continue;
      const double f = a[i][c] / a[r][c];
      for (std::size_t j = 0; j < cols; ++j) a[i][j] -= f * a[r][j];
      b[i] -= f * b[r];
    }
    pivot_col.push_back(static_cast<int>(c));
    ++r;
  }
  for (std::size_t i = r; i < rows; ++i) {
    if (std::abs(b[i]) > tol) return std::nullopt;
  }
  std::vector<double> x(cols, 0.0);
  for (std::size_t i = 0; i < r; ++i) x[static_cast<std::size_t>(pivot_col[i])] = b[i] / a[i][static_cast<std::size_t>(pivot_col[i])];
  return x;
}

struct Care {
  std::uint64_t pattern;
  double angle;  // final target angle from |0>
};

// Fewest CNOTs of the single-target template (all CNOTs on the target,
// controls drawn from c qubits, optional final X) that sends |0> to angle
// `angle` for each care pattern. Pattern bit (c-1-i) is control i.
// Feasibility: every offset vector z in {-2..2}^rows is tried against a real
// solve of A·θ = b + 4πz, and a found θ is confirmed by direct simulation.
inline int brute_mcry_count(int c, const std::vector<Care>& cares, int max_k) {
  for (int K = 0; K <= max_k; ++K) {
    if (c == 0 && K > 0) break;
    std::vector<int> seq(static_cast<std::size_t>(K), 0);
    while (true) {
      for (bool fx : {false, true}) {
        std::vector<std::vector<double>> a;
        std::vector<double> b;
        std::vector<std::vector<int>> fires;
        for (const auto& care : cares) {
          std::vector<int> f(static_cast<std::size_t>(K));
          for (int k = 0; k < K; ++k) {
            f[static_cast<std::size_t>(k)] = static_cast<int>((care.pattern >> (c - 1 - seq[static_cast<std::size_t>(k)])) & 1U);
          }
          std::vector<double> row(static_cast<std::size_t>(K) + 1);
          int after = fx ? 1 : 0;
          for (int j = K; j >= 0; --j) {
            row[static_cast<std::size_t>(j)] = after % 2 ? -1.0 : 1.0;
            if (j > 0) after += f[static_cast<std::size_t>(j - 1)];
          }
          const bool odd = after % 2 != 0;
          a.push_back(row);
          b.push_back(odd ? care.angle - kPi : care.angle);
          fires.push_back(f);
        }
        const std::size_t rows = b.size();
        std::vector<int> z(rows, -2);
        while (true) {
          std::vector<double> rhs(rows);
          for (std::size_t i = 0; i < rows; ++i) rhs[i] = b[i] + 4 * kPi * z[i];
          if (auto theta = solve_real(a, rhs)) {
            bool ok = true;
            for (std::size_t i = 0; i < rows && ok; ++i) {
              auto [x0, x1] = run_template(*theta, fires[i], fx);
              ok = std::abs(x0 - std::cos(cares[i].angle / 2)) < 1e-6 &&
                   std::abs(x1 - std::sin(cares[i].angle / 2)) < 1e-6;
            }
            if (ok) return K;
          }
          std::size_t i = 0;
          while (i < rows && z[i] == 2) z[i++] = -2;
          if (i == rows) break;
          ++z[i];
        }
      }
      int i = K - 1;
      while (i >= 0 && seq[static_cast<std::size_t>(i)] == c - 1) seq[static_cast<std::size_t>(i--)] = 0;
      if (i < 0) break;
      ++seq[static_cast<std::size_t>(i)];
    }
  }
  return -1;
}

}  // namespace oracle
