#include "qsprep/qstate.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <random>
#include <unordered_set>

#include "qsprep/errors.hpp"

namespace qsp {

std::string basis_string(Basis x, int n) {
  std::string s(static_cast<std::size_t>(n), '0');
  for (int q = 0; q < n; ++q) {
    if (qubit_value(x, n, q)) s[static_cast<std::size_t>(q)] = '1';
  }
  return s;
}

Basis parse_basis(const std::string& bits) {
  if (bits.empty() || bits.size() > static_cast<std::size_t>(kMaxQubits)) {
    throw ParseError("bad basis string '" + bits + "'");
  }
  Basis x = 0;
  for (char c : bits) {
    if (c != '0' && c != '1') throw ParseError("bad basis string '" + bits + "'");
    x = (x << 1) | static_cast<Basis>(c == '1');
  }
  return x;
}

SparseState::SparseState(int n, std::vector<Entry> entries) : n_(n) {
  if (n < 1 || n > kMaxQubits) {
    throw InvalidArgument("qubit count out of range: " + std::to_string(n));
  }
  const Basis limit = Basis{1} << n;
  std::erase_if(entries, [](const Entry& e) { return std::abs(e.amp) < kAmplitudeEpsilon; });
  std::sort(entries.begin(), entries.end(),
            [](const Entry& a, const Entry& b) { return a.index < b.index; });
  for (std::size_t i = 0; i < entries.size(); ++i) {
    if (entries[i].index >= limit) {
      throw InvalidArgument("basis index out of range for n=" + std::to_string(n));
    }
    if (!std::isfinite(entries[i].amp)) throw InvalidArgument("non-finite amplitude");
    if (i > 0 && entries[i].index == entries[i - 1].index) {
      throw InvalidArgument("duplicate basis index " + basis_string(entries[i].index, n));
    }
  }
  entries_ = std::move(entries);
}

SparseState SparseState::basis_state(int n, Basis index) {
  return SparseState(n, {{index, 1.0}});
}

double SparseState::amplitude(Basis index) const {
  auto it = std::lower_bound(entries_.begin(), entries_.end(), index,
                             [](const Entry& e, Basis x) { return e.index < x; });
  return (it != entries_.end() && it->index == index) ? it->amp : 0.0;
}

double SparseState::norm_squared() const {
  double s = 0;
  for (const auto& e : entries_) s += e.amp * e.amp;
  return s;
}

std::vector<Basis> SparseState::index_set() const {
  std::vector<Basis> out;
  out.reserve(entries_.size());
  for (const auto& e : entries_) out.push_back(e.index);
  return out;
}

SparseState normalize(const SparseState& state) {
  double norm = std::sqrt(state.norm_squared());
  if (state.empty() || norm == 0.0) throw InvalidArgument("degenerate state");
  std::vector<Entry> entries = state.entries();
  for (auto& e : entries) e.amp /= norm;
  return SparseState(state.num_qubits(), std::move(entries));
}

bool is_normalized(const SparseState& state, double tol) {
  return !state.empty() && std::abs(state.norm_squared() - 1.0) <= tol;
}

bool approx_equal_up_to_sign(const SparseState& a, const SparseState& b, double tol) {
  if (a.num_qubits() != b.num_qubits() || a.cardinality() != b.cardinality()) return false;
  for (double sign : {1.0, -1.0}) {
    bool ok = true;
    for (std::size_t i = 0; i < a.cardinality() && ok; ++i) {
      const auto& x = a.entries()[i];
      const auto& y = b.entries()[i];
      ok = x.index == y.index && std::abs(x.amp - sign * y.amp) <= tol;
    }
    if (ok) return true;
  }
  return false;
}

namespace {

void check_qubit(const SparseState& state, int qubit) {
  if (qubit < 0 || qubit >= state.num_qubits()) {
    throw InvalidArgument("qubit " + std::to_string(qubit) + " out of range");
  }
}

}  // namespace

std::pair<std::vector<Basis>, std::vector<Basis>> cofactor_index_sets(
    const SparseState& state, int qubit) {
  check_qubit(state, qubit);
  const int pos = bit_position(state.num_qubits(), qubit);
  std::vector<Basis> zero, one;
  for (const auto& e : state.entries()) {
    Basis rest = remove_bit(e.index, pos);
    ((e.index >> pos) & 1U ? one : zero).push_back(rest);
  }
  std::sort(zero.begin(), zero.end());
  std::sort(one.begin(), one.end());
  return {std::move(zero), std::move(one)};
}

int entangled_qubit_count(const SparseState& state) {
  // The cofactor index sets are equal exactly when every entry's partner
  // across the qubit is present too.
  const auto& es = state.entries();
  auto present = [&](Basis x) {
    return std::binary_search(es.begin(), es.end(), Entry{x, 0.0},
                              [](const Entry& a, const Entry& b) { return a.index < b.index; });
  };
  int k = 0;
  for (int q = 0; q < state.num_qubits(); ++q) {
    const Basis mask = qubit_mask(state.num_qubits(), q);
    std::size_t ones = 0;
    bool unpaired = false;
    for (const auto& e : es) {
      if (e.index & mask) ++ones;
      if (!unpaired && !present(e.index ^ mask)) unpaired = true;
    }
    if (ones != 0 && ones != es.size() && unpaired) ++k;
  }
  return k;
}

std::optional<double> separable_ratio(const SparseState& state, int qubit) {
  const int n = state.num_qubits();
  const Basis mask = qubit_mask(n, qubit);
  std::vector<Entry> zero, one;
  for (const auto& e : state.entries()) (e.index & mask ? one : zero).push_back(e);
  if (zero.empty() || one.empty() || zero.size() != one.size()) return std::nullopt;
  const double lambda = one[0].amp / zero[0].amp;
  for (std::size_t i = 0; i < zero.size(); ++i) {
    if ((zero[i].index | mask) != one[i].index) return std::nullopt;
    if (std::abs(one[i].amp - lambda * zero[i].amp) > 1e-9) return std::nullopt;
  }
  return lambda;
}

bool is_product_state(const SparseState& state) {
  for (int q = 0; q < state.num_qubits(); ++q) {
    if (fixed_value(state, q) < 0 && !separable_ratio(state, q)) return false;
  }
  return true;
}

int fixed_value(const SparseState& state, int qubit) {
  check_qubit(state, qubit);
  const Basis mask = qubit_mask(state.num_qubits(), qubit);
  bool seen0 = false, seen1 = false;
  for (const auto& e : state.entries()) {
    (e.index & mask ? seen1 : seen0) = true;
    if (seen0 && seen1) return -1;
  }
  return seen1 ? 1 : 0;
}

std::vector<int> active_qubits(const SparseState& state) {
  std::vector<int> out;
  for (int q = 0; q < state.num_qubits(); ++q) {
    if (fixed_value(state, q) < 0) out.push_back(q);
  }
  return out;
}

SparseState make_dicke(int n, int k) {
  if (n < 2 || n > 30 || k <= 0 || k >= n) {
    throw InvalidArgument("make_dicke requires 0 < k < n (n <= 30)");
  }
  std::vector<Entry> entries;
  for (Basis x = 0; x < (Basis{1} << n); ++x) {
    if (std::popcount(x) == k) entries.push_back({x, 1.0});
  }
  return normalize(SparseState(n, std::move(entries)));
}

SparseState make_ghz(int n) {
  if (n < 2 || n > kMaxQubits) throw InvalidArgument("make_ghz requires n >= 2");
  Basis ones = (Basis{1} << n) - 1;
  return normalize(SparseState(n, {{0, 1.0}, {ones, 1.0}}));
}

SparseState make_w(int n) {
  if (n < 2 || n > kMaxQubits) throw InvalidArgument("make_w requires n >= 2");
  std::vector<Entry> entries;
  for (int q = 0; q < n; ++q) entries.push_back({qubit_mask(n, q), 1.0});
  return normalize(SparseState(n, std::move(entries)));
}

SparseState random_state(int n, std::size_t m, std::uint64_t seed) {
  if (n < 1 || n > kMaxQubits) throw InvalidArgument("random_state: bad qubit count");
  const Basis space = Basis{1} << n;
  if (m < 1 || m > space) throw InvalidArgument("random_state: m exceeds 2^n");
  std::mt19937_64 rng(seed);
  // Floyd's sampling: m distinct values from [0, space).
  std::unordered_set<Basis> chosen;
  std::vector<Basis> order;
  for (Basis j = space - m; j < space; ++j) {
    Basis t = std::uniform_int_distribution<Basis>(0, j)(rng);
    if (chosen.insert(t).second) {
      order.push_back(t);
    } else {
      chosen.insert(j);
      order.push_back(j);
    }
  }
  std::sort(order.begin(), order.end());
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<Entry> entries;
  for (Basis x : order) entries.push_back({x, 1.0 - unit(rng)});
  return normalize(SparseState(n, std::move(entries)));
}

SparseState apply_ry(const SparseState& state, int qubit, double theta) {
  check_qubit(state, qubit);
  const Basis mask = qubit_mask(state.num_qubits(), qubit);
  const double c = std::cos(theta / 2), s = std::sin(theta / 2);
  std::vector<Entry> out;
  const auto& in = state.entries();
  for (const auto& e : in) {
    Basis lo = e.index & ~mask;
    if ((e.index & mask) && state.amplitude(lo) != 0.0) continue;  // handled with its partner
    double a0 = state.amplitude(lo);
    double a1 = state.amplitude(lo | mask);
    out.push_back({lo, c * a0 - s * a1});
    out.push_back({lo | mask, s * a0 + c * a1});
  }
  return SparseState(state.num_qubits(), std::move(out));
}

SparseState apply_x(const SparseState& state, int qubit) {
  check_qubit(state, qubit);
  const Basis mask = qubit_mask(state.num_qubits(), qubit);
  std::vector<Entry> out = state.entries();
  for (auto& e : out) e.index ^= mask;
  return SparseState(state.num_qubits(), std::move(out));
}

SparseState apply_cnot(const SparseState& state, int control, int target) {
  check_qubit(state, control);
  check_qubit(state, target);
  if (control == target) throw InvalidArgument("CNOT control equals target");
  const int n = state.num_qubits();
  const Basis cm = qubit_mask(n, control), tm = qubit_mask(n, target);
  std::vector<Entry> out = state.entries();
  for (auto& e : out) {
    if (e.index & cm) e.index ^= tm;
  }
  return SparseState(n, std::move(out));
}

SparseState permute_qubits(const SparseState& state, const std::vector<int>& perm) {
  const int n = state.num_qubits();
  if (static_cast<int>(perm.size()) != n) throw InvalidArgument("permutation size mismatch");
  std::vector<Entry> out;
  out.reserve(state.cardinality());
  for (const auto& e : state.entries()) {
    Basis y = 0;
    for (int q = 0; q < n; ++q) {
      if (qubit_value(e.index, n, q)) y |= qubit_mask(n, perm[static_cast<std::size_t>(q)]);
    }
    out.push_back({y, e.amp});
  }
  return SparseState(n, std::move(out));
}

SparseState negate(const SparseState& state) {
  std::vector<Entry> out = state.entries();
  for (auto& e : out) e.amp = -e.amp;
  return SparseState(state.num_qubits(), std::move(out));
}

}  // namespace qsp
