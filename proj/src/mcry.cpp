#include "qsprep/mcry.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <cstdlib>
#include <map>
#include <mutex>
#include <stdexcept>
#include <string>
#include <unordered_map>

#include "qsprep/angles.hpp"
#include "qsprep/errors.hpp"

namespace qsp {

RotationTable::RotationTable(std::vector<int> ctrls, std::vector<std::optional<double>> angles)
    : controls(std::move(ctrls)), entries(std::move(angles)) {
  if (controls.size() > 20) throw InvalidArgument("rotation table has too many controls");
  if (entries.size() != (std::size_t{1} << controls.size())) {
    throw InvalidArgument("rotation table needs 2^c entries");
  }
}

RotationTable RotationTable::constant(double theta) { return RotationTable({}, {theta}); }

std::size_t RotationTable::care_count() const {
  return static_cast<std::size_t>(
      std::count_if(entries.begin(), entries.end(), [](const auto& e) { return e.has_value(); }));
}

std::string pattern_string(std::uint64_t pattern, int width) {
  std::string s(static_cast<std::size_t>(width), '0');
  for (int i = 0; i < width; ++i) {
    if ((pattern >> (width - 1 - i)) & 1U) s[static_cast<std::size_t>(i)] = '1';
  }
  return s;
}

namespace {

constexpr double kAngleTol = 1e-9;
constexpr double kSolveTol = 1e-8;
// Upper limit on template systems tried per query before settling for the
// Gray-code circuit.
constexpr long kSystemBudget = 1L << 18;

bool pattern_bit(std::uint64_t pattern, int width, int pos) {
  return (pattern >> (width - 1 - pos)) & 1U;
}

// Pattern restricted to the listed positions (kept in order).
std::uint64_t project(std::uint64_t pattern, int width, const std::vector<int>& keep) {
  std::uint64_t out = 0;
  for (int p : keep) out = (out << 1) | static_cast<std::uint64_t>(pattern_bit(pattern, width, p));
  return out;
}

// Drops control `pos` if every merged pattern pair is compatible.
std::optional<RotationTable> try_drop(const RotationTable& table, int pos) {
  const int c = table.num_controls();
  const std::uint64_t bit = std::uint64_t{1} << (c - 1 - pos);
  std::vector<std::optional<double>> merged;
  merged.reserve(table.num_patterns() / 2);
  for (std::uint64_t x = 0; x < table.num_patterns(); ++x) {
    if (x & bit) continue;
    const auto& a = table.entries[x];
    const auto& b = table.entries[x | bit];
    if (a && b && !same_angle_4pi(*a, *b, kAngleTol)) return std::nullopt;
    merged.push_back(a ? a : b);
  }
  std::vector<int> ctrls = table.controls;
  ctrls.erase(ctrls.begin() + pos);
  return RotationTable(std::move(ctrls), std::move(merged));
}

// Per-pattern rotation angle implied by the constraints, if every pattern's
// constraints agree on a single rotation.
std::optional<RotationTable> rotation_view(const std::vector<int>& controls,
                                           const std::vector<AngleConstraint>& cs) {
  RotationTable table(controls, std::vector<std::optional<double>>(std::size_t{1} << controls.size()));
  for (const auto& k : cs) {
    double theta = wrap_4pi(k.target - k.initial);
    auto& slot = table.entries[k.pattern];
    if (slot && !same_angle_4pi(*slot, theta, kAngleTol)) return std::nullopt;
    if (!slot) slot = theta;
  }
  return table;
}

// Control positions that the template search needs: a control is dropped when
// every group of constraints merged by ignoring it can still be met by one
// rotation or one reflection.
std::vector<int> needed_controls(int c, const std::vector<AngleConstraint>& cs) {
  std::vector<int> keep(static_cast<std::size_t>(c));
  for (int i = 0; i < c; ++i) keep[static_cast<std::size_t>(i)] = i;
  std::vector<std::pair<std::uint64_t, const AngleConstraint*>> order(cs.size());
  auto consistent = [&](const std::vector<int>& trial) {
    for (std::size_t i = 0; i < cs.size(); ++i) order[i] = {project(cs[i].pattern, c, trial), &cs[i]};
    std::sort(order.begin(), order.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    for (std::size_t lo = 0; lo < order.size();) {
      std::size_t hi = lo + 1;
      bool rot = true, refl = true;
      const AngleConstraint* a = order[lo].second;
      for (; hi < order.size() && order[hi].first == order[lo].first; ++hi) {
        const AngleConstraint* b = order[hi].second;
        rot = rot && same_angle_4pi(a->target - a->initial, b->target - b->initial, kAngleTol);
        refl = refl && same_angle_4pi(a->target + a->initial, b->target + b->initial, kAngleTol);
      }
      if (!rot && !refl) return false;
      lo = hi;
    }
    return true;
  };
  bool changed = true;
  while (changed) {
    changed = false;
    for (std::size_t i = 0; i < keep.size(); ++i) {
      std::vector<int> trial = keep;
      trial.erase(trial.begin() + static_cast<long>(i));
      if (consistent(trial)) {
        keep = std::move(trial);
        changed = true;
        break;
      }
    }
  }
  return keep;
}

struct Structure {
  bool gray = false;
  std::vector<int> sequence;  // positions into the full control list
  bool final_x = false;
  int cnots = 0;
};

struct CacheEntry {
  std::optional<Structure> found;
  int searched_limit = -1;
};

std::mutex cache_mutex;
std::unordered_map<std::string, CacheEntry>& cache() {
  static std::unordered_map<std::string, CacheEntry> c;
  return c;
}

void put_i64(std::string& s, std::int64_t v) {
  auto u = static_cast<std::uint64_t>(v);
  for (int i = 7; i >= 0; --i) s.push_back(static_cast<char>((u >> (8 * i)) & 0xFF));
}

std::string cache_key(int c, int gray, const std::vector<AngleConstraint>& cs) {
  std::vector<std::array<std::int64_t, 3>> rows;
  rows.reserve(cs.size());
  for (const auto& k : cs) {
    rows.push_back({static_cast<std::int64_t>(k.pattern), std::llround(wrap_4pi(k.initial) * 1e9),
                    std::llround(wrap_4pi(k.target) * 1e9)});
  }
  std::sort(rows.begin(), rows.end());
  rows.erase(std::unique(rows.begin(), rows.end()), rows.end());
  std::string key;
  key.reserve(8 + rows.size() * 24);
  key.push_back(static_cast<char>(c));
  put_i64(key, gray);
  for (const auto& r : rows) {
    for (auto v : r) put_i64(key, v);
  }
  return key;
}

int gray_cost(const RotationTable& table) {
  int c = reduce_support(table).num_controls();
  return c == 0 ? 0 : (1 << c);
}

// Constraints restricted to the needed controls, with the lowest pattern's
// bits XOR-ed away and its angles subtracted from every constraint. Bit flips
// of a control only toggle the trailing X, and common angle offsets fold into
// the first and last rotations, so the minimal CNOT count is unchanged.
struct Reduced {
  std::vector<int> keep;
  std::vector<AngleConstraint> cs;
};

Reduced reduce_constraints(int c, const std::vector<AngleConstraint>& cs) {
  Reduced r;
  r.keep = needed_controls(c, cs);
  r.cs.reserve(cs.size());
  for (const auto& k : cs) r.cs.push_back({project(k.pattern, c, r.keep), k.initial, k.target});
  const auto ref = *std::min_element(r.cs.begin(), r.cs.end(), [](const auto& a, const auto& b) {
    if (a.pattern != b.pattern) return a.pattern < b.pattern;
    if (a.initial != b.initial) return a.initial < b.initial;
    return a.target < b.target;
  });
  for (auto& k : r.cs) {
    k.pattern ^= ref.pattern;
    k.initial = wrap_4pi(k.initial - ref.initial);
    k.target = wrap_4pi(k.target - ref.target);
  }
  return r;
}

// Feasibility check equivalent to solve_system(build_equality_system(...))
// without allocation. A row's coefficients are all ±1 and, like its sign and
// π offset, are fixed by the mask of negated coefficients, so constraints
// sharing a mask must agree on the right-hand side before any elimination.
class FastFeasibility {
 public:
  bool operator()(int width, const std::vector<int>& seq, bool final_x, const std::vector<AngleConstraint>& cs) {
    const int k = static_cast<int>(seq.size());
    const std::uint64_t full = (k + 1 >= 64) ? ~0ULL : ((1ULL << (k + 1)) - 1);
    rows_.clear();
    for (const auto& c : cs) {
      std::uint64_t neg = 0;
      for (int i = 0; i < k; ++i) {
        if (pattern_bit(c.pattern, width, seq[static_cast<std::size_t>(i)])) neg = ~neg & ((2ULL << i) - 1);
      }
      if (final_x) neg = ~neg & full;
      const bool odd = neg & 1ULL;
      const double rhs = wrap_4pi(c.target - (odd ? -c.initial : c.initial) - (odd ? kPi : 0.0));
      rows_.push_back({neg, rhs});
    }
    std::sort(rows_.begin(), rows_.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
    std::size_t u = 0;
    for (std::size_t i = 0; i < rows_.size(); ++i) {
      if (u > 0 && rows_[u - 1].first == rows_[i].first) {
        if (distance_4pi(rows_[u - 1].second - rows_[i].second) > kSolveTol) return false;
        continue;
      }
      rows_[u++] = rows_[i];
    }
    const std::size_t cols = static_cast<std::size_t>(k + 1);
    a_.assign(u * cols, 0);
    b_.resize(u);
    for (std::size_t i = 0; i < u; ++i) {
      for (std::size_t j = 0; j < cols; ++j) a_[i * cols + j] = (rows_[i].first >> j) & 1ULL ? -1 : 1;
      b_[i] = rows_[i].second;
    }
    std::size_t r = 0;
    for (std::size_t j = 0; j < cols && r < u; ++j) {
      while (true) {
        std::size_t p = u;
        for (std::size_t i = r; i < u; ++i) {
          const long long v = a_[i * cols + j];
          if (v != 0 && (p == u || std::llabs(v) < std::llabs(a_[p * cols + j]))) p = i;
        }
        if (p == u) break;
        if (p != r) {
          for (std::size_t l = 0; l < cols; ++l) std::swap(a_[r * cols + l], a_[p * cols + l]);
          std::swap(b_[r], b_[p]);
        }
        bool clear = true;
        for (std::size_t i = r + 1; i < u; ++i) {
          const long long v = a_[i * cols + j];
          if (v == 0) continue;
          const long long q = v / a_[r * cols + j];
          for (std::size_t l = j; l < cols; ++l) a_[i * cols + l] -= q * a_[r * cols + l];
          b_[i] -= static_cast<double>(q) * b_[r];
          if (a_[i * cols + j] != 0) clear = false;
        }
        if (clear) {
          ++r;
          break;
        }
      }
    }
    for (std::size_t i = r; i < u; ++i) {
      if (distance_4pi(b_[i]) > kSolveTol) return false;
    }
    return true;
  }

 private:
  std::vector<std::pair<std::uint64_t, double>> rows_;
  std::vector<long long> a_;
  std::vector<double> b_;
};

// Template search on reduced constraints: minimal K, then lexicographically
// first sequence, then no trailing X before trailing X. Every control must
// occur in the sequence (reduced constraints need all of them).
std::optional<Structure> search_structure(int width, const std::vector<AngleConstraint>& cs, int gray,
                                          int max_cnots) {
  const int kmax = std::min(max_cnots, gray == INT_MAX ? INT_MAX : gray - 1);
  const std::uint32_t all = width >= 32 ? ~0U : (1U << width) - 1;
  long budget = kSystemBudget;
  FastFeasibility feasible;
  for (int K = width; K <= kmax && budget > 0; ++K) {
    if (width == 0 && K > 0) break;
    std::vector<int> seq(static_cast<std::size_t>(K), 0);
    while (true) {
      std::uint32_t used = 0;
      for (int p : seq) used |= 1U << p;
      --budget;
      if (used == all) {
        for (bool fx : {false, true}) {
          --budget;
          if (feasible(width, seq, fx, cs)) {
            Structure s;
            s.sequence = seq;
            s.final_x = fx;
            s.cnots = K;
            return s;
          }
        }
      }
      int i = K - 1;
      while (i >= 0 && seq[static_cast<std::size_t>(i)] == width - 1) seq[static_cast<std::size_t>(i--)] = 0;
      if (i < 0 || budget <= 0) break;
      ++seq[static_cast<std::size_t>(i)];
    }
  }
  if (gray <= max_cnots) {
    Structure s;
    s.gray = true;
    s.cnots = gray;
    return s;
  }
  return std::nullopt;
}

// Returns the structure with sequence positions into the original control
// list; final_x may need toggling for the original constraints.
std::optional<Structure> find_structure(int c, const std::vector<AngleConstraint>& cs, int max_cnots,
                                        bool use_cache = true) {
  std::vector<int> all(static_cast<std::size_t>(c));
  for (int i = 0; i < c; ++i) all[static_cast<std::size_t>(i)] = i;
  auto rot = rotation_view(all, cs);
  const int gray = rot ? gray_cost(*rot) : INT_MAX;
  const Reduced red = reduce_constraints(c, cs);
  const int width = static_cast<int>(red.keep.size());

  auto lift = [&](std::optional<Structure> s) {
    if (s) {
      for (int& p : s->sequence) p = red.keep[static_cast<std::size_t>(p)];
    }
    return s;
  };
  if (!use_cache) return lift(search_structure(width, red.cs, gray, max_cnots));

  const std::string key = cache_key(width, gray, red.cs);
  {
    std::lock_guard lock(cache_mutex);
    auto it = cache().find(key);
    if (it != cache().end()) {
      const auto& e = it->second;
      if (e.found) {
        if (e.found->cnots <= max_cnots) return lift(e.found);
        return std::nullopt;
      }
      if (e.searched_limit >= max_cnots) return std::nullopt;
    }
  }
  auto result = search_structure(width, red.cs, gray, max_cnots);
  {
    std::lock_guard lock(cache_mutex);
    auto& e = cache()[key];
    if (result) {
      e.found = result;
    } else {
      e.searched_limit = std::max(e.searched_limit, max_cnots);
    }
  }
  return lift(result);
}

Circuit template_circuit(const std::vector<int>& controls, const Structure& s,
                         const std::vector<double>& angles, int target, int n) {
  Circuit circ(n);
  auto rotate = [&](double a) {
    if (distance_4pi(a) > 1e-12) circ.ry(target, a);
  };
  rotate(angles[0]);
  for (std::size_t k = 0; k < s.sequence.size(); ++k) {
    circ.cnot(controls[static_cast<std::size_t>(s.sequence[k])], target);
    rotate(angles[k + 1]);
  }
  if (s.final_x) circ.x(target);
  return circ;
}

}  // namespace

RotationTable reduce_support(const RotationTable& table) {
  RotationTable cur = table;
  bool changed = true;
  while (changed) {
    changed = false;
    for (int pos = 0; pos < cur.num_controls(); ++pos) {
      if (auto next = try_drop(cur, pos)) {
        cur = std::move(*next);
        changed = true;
        break;
      }
    }
  }
  return cur;
}

Circuit gray_code_decompose(const RotationTable& table, int target, int n) {
  const int c = table.num_controls();
  Circuit circ(n);
  if (c == 0) {
    double a = table.angle_or_zero(0);
    if (distance_4pi(a) > 1e-12) circ.ry(target, a);
    return circ;
  }
  const std::uint64_t size = table.num_patterns();
  // Fast Walsh-Hadamard transform: w[g] = Σ_x (−1)^{|x & g|} angle(x).
  std::vector<double> w(size);
  for (std::uint64_t x = 0; x < size; ++x) w[x] = table.angle_or_zero(x);
  for (std::uint64_t h = 1; h < size; h <<= 1) {
    for (std::uint64_t i = 0; i < size; i += 2 * h) {
      for (std::uint64_t k = i; k < i + h; ++k) {
        const double a = w[k], b = w[k + h];
        w[k] = a + b;
        w[k + h] = a - b;
      }
    }
  }
  for (std::uint64_t j = 0; j < size; ++j) {
    const double theta = w[j ^ (j >> 1)] / static_cast<double>(size);
    // Bit flipped between consecutive Gray codes; wraps back to 0 at the end.
    int bitpos = (j + 1 < size) ? std::countr_zero(j + 1) : c - 1;
    circ.ry(target, theta);
    circ.cnot(table.controls[static_cast<std::size_t>(c - 1 - bitpos)], target);
  }
  return circ;
}

EqualitySystem build_equality_system(int num_controls, const std::vector<int>& sequence,
                                     const std::vector<AngleConstraint>& constraints,
                                     bool final_x) {
  EqualitySystem sys;
  sys.num_controls = num_controls;
  sys.sequence = sequence;
  sys.final_x = final_x;
  const int unknowns = sys.num_unknowns();
  sys.coeffs.reserve(constraints.size());
  sys.rhs.reserve(constraints.size());
  for (const auto& k : constraints) {
    // Angle after each stage is coef·θ + sign·initial + pi_count·π;
    // a firing CNOT maps φ to π − φ.
    std::vector<int> coef(static_cast<std::size_t>(unknowns), 0);
    coef[0] = 1;
    int sign = 1, pi_count = 0;
    auto reflect = [&] {
      for (auto& v : coef) v = -v;
      sign = -sign;
      pi_count = 1 - pi_count;
    };
    for (std::size_t i = 0; i < sequence.size(); ++i) {
      if (pattern_bit(k.pattern, num_controls, sequence[i])) reflect();
      coef[i + 1] += 1;
    }
    if (final_x) reflect();
    sys.coeffs.push_back(std::move(coef));
    sys.rhs.push_back(wrap_4pi(k.target - sign * k.initial - pi_count * kPi));
  }
  return sys;
}

std::optional<std::vector<double>> solve_system(const EqualitySystem& system) {
  const std::size_t rows = system.coeffs.size();
  const std::size_t cols = static_cast<std::size_t>(system.num_unknowns());
  std::vector<std::vector<long long>> a(rows, std::vector<long long>(cols));
  for (std::size_t i = 0; i < rows; ++i) {
    for (std::size_t j = 0; j < cols; ++j) a[i][j] = system.coeffs[i][j];
  }
  std::vector<double> b = system.rhs;

  std::vector<std::size_t> pivots;
  std::size_t r = 0;
  for (std::size_t j = 0; j < cols && r < rows; ++j) {
    while (true) {
      std::size_t p = rows;
      for (std::size_t i = r; i < rows; ++i) {
        if (a[i][j] != 0 && (p == rows || std::llabs(a[i][j]) < std::llabs(a[p][j]))) p = i;
      }
      if (p == rows) break;
      std::swap(a[r], a[p]);
      std::swap(b[r], b[p]);
      bool clear = true;
      for (std::size_t i = r + 1; i < rows; ++i) {
        if (a[i][j] == 0) continue;
        long long q = a[i][j] / a[r][j];
        for (std::size_t l = j; l < cols; ++l) a[i][l] -= q * a[r][l];
        b[i] -= static_cast<double>(q) * b[r];
        if (a[i][j] != 0) clear = false;
      }
      if (clear) {
        pivots.push_back(j);
        ++r;
        break;
      }
    }
  }
  for (std::size_t i = r; i < rows; ++i) {
    if (distance_4pi(b[i]) > kSolveTol) return std::nullopt;
  }
  std::vector<double> theta(cols, 0.0);
  for (std::size_t i = r; i-- > 0;) {
    const std::size_t j = pivots[i];
    double s = b[i];
    for (std::size_t l = j + 1; l < cols; ++l) s -= static_cast<double>(a[i][l]) * theta[l];
    theta[j] = s / static_cast<double>(a[i][j]);
  }
  for (auto& t : theta) t = wrap_4pi(t);
  return theta;
}

std::vector<AngleConstraint> table_constraints(const RotationTable& table,
                                               std::optional<double> initial_angle) {
  std::vector<AngleConstraint> cs;
  for (std::uint64_t x = 0; x < table.num_patterns(); ++x) {
    if (!table.is_care(x)) continue;
    const double theta = *table.entries[x];
    if (initial_angle) {
      cs.push_back({x, *initial_angle, *initial_angle + theta});
    } else {
      cs.push_back({x, 0.0, theta});
      cs.push_back({x, kPi, kPi + theta});
    }
  }
  if (cs.empty()) throw InvalidArgument("rotation table has no care entries");
  return cs;
}

bool satisfies_constraints(const Circuit& circuit, const std::vector<int>& controls, int target,
                           const std::vector<AngleConstraint>& constraints, double tol) {
  const int c = static_cast<int>(controls.size());
  for (const auto& k : constraints) {
    auto control_value = [&](int qubit) -> std::optional<bool> {
      for (int i = 0; i < c; ++i) {
        if (controls[static_cast<std::size_t>(i)] == qubit) return pattern_bit(k.pattern, c, i);
      }
      return std::nullopt;
    };
    double v0 = std::cos(k.initial / 2), v1 = std::sin(k.initial / 2);
    for (const auto& g : circuit.gates()) {
      if (const auto* ry = std::get_if<RyGate>(&g)) {
        if (ry->target != target) return false;
        const double co = std::cos(ry->angle / 2), si = std::sin(ry->angle / 2);
        const double w0 = co * v0 - si * v1, w1 = si * v0 + co * v1;
        v0 = w0;
        v1 = w1;
      } else if (const auto* x = std::get_if<XGate>(&g)) {
        if (x->target != target) return false;
        std::swap(v0, v1);
      } else if (const auto* cx = std::get_if<CnotGate>(&g)) {
        auto val = control_value(cx->control);
        if (cx->target != target || !val) return false;
        if (*val != cx->negated) std::swap(v0, v1);
      } else {
        return false;
      }
    }
    if (std::abs(v0 - std::cos(k.target / 2)) > tol || std::abs(v1 - std::sin(k.target / 2)) > tol) {
      return false;
    }
  }
  return true;
}

std::optional<Decomposition> decompose_constraints(const std::vector<int>& controls,
                                                   const std::vector<AngleConstraint>& constraints,
                                                   int target, int n, int max_cnots) {
  const int c = static_cast<int>(controls.size());
  auto build = [&](Structure s) -> std::optional<Circuit> {
    if (s.gray) {
      auto rot = rotation_view(controls, constraints);
      return gray_code_decompose(reduce_support(*rot), target, n);
    }
    for (bool fx : {s.final_x, !s.final_x}) {
      s.final_x = fx;
      if (auto angles = solve_system(build_equality_system(c, s.sequence, constraints, fx))) {
        return template_circuit(controls, s, *angles, target, n);
      }
    }
    return std::nullopt;
  };
  auto s = find_structure(c, constraints, max_cnots);
  if (!s) return std::nullopt;
  auto circ = build(*s);
  if (!circ) {
    // The cached structure came from constraints equal only after quantization.
    s = find_structure(c, constraints, max_cnots, false);
    if (!s) return std::nullopt;
    circ = build(*s);
  }
  if (!circ || !satisfies_constraints(*circ, controls, target, constraints)) {
    throw std::logic_error("MCRy decomposition failed verification");
  }
  Decomposition d;
  d.circuit = std::move(*circ);
  d.cnots = d.circuit.cnot_gate_count();
  return d;
}

std::optional<int> constraint_cnot_count(int num_controls,
                                         const std::vector<AngleConstraint>& constraints,
                                         int max_cnots) {
  auto s = find_structure(num_controls, constraints, max_cnots);
  if (!s) return std::nullopt;
  return s->cnots;
}

int constraint_cnot_lower_bound(int num_controls, const std::vector<AngleConstraint>& constraints) {
  return static_cast<int>(needed_controls(num_controls, constraints).size());
}

Circuit exact_decompose(const RotationTable& table, int target, int n,
                        std::optional<double> initial_angle) {
  auto cs = table_constraints(table, initial_angle);
  auto d = decompose_constraints(table.controls, cs, target, n);
  if (!d) throw std::logic_error("exact MCRy decomposition found no circuit");
  return std::move(d->circuit);
}

int mcry_cnot_cost(const RotationTable& table, CostModel model, std::optional<double> initial_angle) {
  if (model == CostModel::graycode) return gray_cost(table);
  auto k = constraint_cnot_count(table.num_controls(), table_constraints(table, initial_angle));
  if (!k) throw std::logic_error("exact MCRy decomposition found no circuit");
  return *k;
}

}  // namespace qsp

namespace qsp {

std::vector<AngleConstraint> state_constraints(const SparseState& state, const McryGate& gate) {
  const int n = state.num_qubits();
  const Basis tm = qubit_mask(n, gate.target);
  const auto& table = gate.table;
  std::vector<AngleConstraint> cs;
  for (const auto& e : state.entries()) {
    const Basis lo = e.index & ~tm;
    if ((e.index & tm) && state.amplitude(lo) != 0.0) continue;
    const double a0 = state.amplitude(lo), a1 = state.amplitude(lo | tm);
    std::uint64_t pattern = 0;
    for (int q : table.controls) pattern = (pattern << 1) | static_cast<std::uint64_t>(qubit_value(lo, n, q));
    const double phi = pair_angle(a0, a1);
    cs.push_back({pattern, phi, wrap_4pi(phi + table.angle_or_zero(pattern))});
  }
  return cs;
}

}  // namespace qsp
