#include "qsprep/canon.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <optional>
#include <unordered_set>

#include "qsprep/errors.hpp"

namespace qsp {

bool Transform::is_identity() const {
  if (!gates.empty() || negate) return false;
  for (std::size_t q = 0; q < permutation.size(); ++q) {
    if (permutation[q] != static_cast<int>(q)) return false;
  }
  return true;
}

SparseState apply_transform(const SparseState& state, const Transform& transform) {
  SparseState s = apply_circuit(state, transform.gates);
  s = permute_qubits(s, transform.permutation);
  return transform.negate ? negate(s) : s;
}

namespace {

constexpr double kQuantum = 1e9;

std::int64_t quantize(double v) { return std::llround(v * kQuantum); }

void put_u64(std::string& s, std::uint64_t v) {
  for (int i = 7; i >= 0; --i) s.push_back(static_cast<char>((v >> (8 * i)) & 0xFF));
}

struct Candidate {
  std::vector<Entry> entries;  // sorted by index, sign normalized
  bool negated = false;
};

// Largest |amplitude| positive; ties (at key resolution) go to the smallest index.
bool normalize_sign(std::vector<Entry>& entries) {
  std::size_t best = 0;
  for (std::size_t i = 1; i < entries.size(); ++i) {
    if (quantize(std::abs(entries[i].amp)) > quantize(std::abs(entries[best].amp))) best = i;
  }
  if (entries[best].amp >= 0) return false;
  for (auto& e : entries) e.amp = -e.amp;
  return true;
}

int compare(const std::vector<Entry>& a, const std::vector<Entry>& b) {
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i].index != b[i].index) return a[i].index < b[i].index ? -1 : 1;
  }
  for (std::size_t i = 0; i < a.size(); ++i) {
    auto qa = quantize(a[i].amp), qb = quantize(b[i].amp);
    if (qa != qb) return qa < qb ? -1 : 1;
  }
  return 0;
}

struct QubitSignature {
  std::size_t weight;
  std::int64_t mass;
  std::vector<std::size_t> cooccurrence;
  auto operator<=>(const QubitSignature&) const = default;
};

struct Best {
  std::optional<Candidate> cand;
  Basis anchor = 0;
  std::vector<int> perm;
};

void consider(const SparseState& s, Basis anchor, const std::vector<int>& perm, Best& best) {
  const int n = s.num_qubits();
  Candidate c;
  c.entries.reserve(s.cardinality());
  for (const auto& e : s.entries()) {
    const Basis x = e.index ^ anchor;
    Basis y = 0;
    for (int q = 0; q < n; ++q) {
      if (qubit_value(x, n, q)) y |= qubit_mask(n, perm[static_cast<std::size_t>(q)]);
    }
    c.entries.push_back({y, e.amp});
  }
  std::sort(c.entries.begin(), c.entries.end(),
            [](const Entry& a, const Entry& b) { return a.index < b.index; });
  if (best.cand && c.entries[0].index != 0) return;
  c.negated = normalize_sign(c.entries);
  if (!best.cand || compare(c.entries, best.cand->entries) < 0) {
    best.cand = std::move(c);
    best.anchor = anchor;
    best.perm = perm;
  }
}

// Minimizes over flip masks that send some element to 0 and over qubit
// orders consistent with a relabeling-invariant signature order.
void minimize_layout(const SparseState& s, Best& best) {
  const int n = s.num_qubits();
  const auto& entries = s.entries();
  for (const auto& anchor_entry : entries) {
    const Basis anchor = anchor_entry.index;
    std::vector<QubitSignature> sig(static_cast<std::size_t>(n));
    std::vector<std::vector<bool>> column(static_cast<std::size_t>(n));
    for (int q = 0; q < n; ++q) {
      auto& sq = sig[static_cast<std::size_t>(q)];
      sq.weight = 0;
      double mass = 0;
      for (const auto& e : entries) {
        bool b = qubit_value(e.index ^ anchor, n, q);
        column[static_cast<std::size_t>(q)].push_back(b);
        if (b) {
          ++sq.weight;
          mass += e.amp * e.amp;
        }
      }
      sq.mass = quantize(mass);
    }
    for (int q = 0; q < n; ++q) {
      for (int r = 0; r < n; ++r) {
        if (r == q) continue;
        std::size_t both = 0;
        for (std::size_t i = 0; i < entries.size(); ++i) {
          both += column[static_cast<std::size_t>(q)][i] && column[static_cast<std::size_t>(r)][i];
        }
        sig[static_cast<std::size_t>(q)].cooccurrence.push_back(both);
      }
      std::sort(sig[static_cast<std::size_t>(q)].cooccurrence.begin(),
                sig[static_cast<std::size_t>(q)].cooccurrence.end());
    }
    std::vector<int> order(static_cast<std::size_t>(n));
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
      return sig[static_cast<std::size_t>(a)] < sig[static_cast<std::size_t>(b)];
    });
    // Tie groups; within a group only distinct column arrangements matter.
    struct Group {
      std::size_t start;
      std::vector<std::vector<int>> members;  // qubits per column class, increasing index
      std::vector<int> arrangement;           // class id per slot
    };
    std::vector<Group> groups;
    for (std::size_t i = 0; i < order.size();) {
      std::size_t j = i;
      while (j < order.size() && sig[static_cast<std::size_t>(order[j])] == sig[static_cast<std::size_t>(order[i])]) ++j;
      Group g;
      g.start = i;
      std::vector<int> qubits(order.begin() + static_cast<long>(i), order.begin() + static_cast<long>(j));
      std::sort(qubits.begin(), qubits.end());
      std::vector<const std::vector<bool>*> classes;
      for (int q : qubits) {
        const auto& col = column[static_cast<std::size_t>(q)];
        auto it = std::find_if(classes.begin(), classes.end(), [&](const auto* c) { return *c == col; });
        std::size_t id = static_cast<std::size_t>(it - classes.begin());
        if (it == classes.end()) {
          classes.push_back(&col);
          g.members.emplace_back();
        }
        g.members[id].push_back(q);
        g.arrangement.push_back(static_cast<int>(id));
      }
      std::sort(g.arrangement.begin(), g.arrangement.end());
      groups.push_back(std::move(g));
      i = j;
    }
    auto advance = [&] {
      for (std::size_t gi = groups.size(); gi-- > 0;) {
        if (std::next_permutation(groups[gi].arrangement.begin(), groups[gi].arrangement.end())) return true;
      }
      return false;
    };
    std::vector<int> perm(static_cast<std::size_t>(n));
    do {
      for (const auto& g : groups) {
        std::vector<std::size_t> used(g.members.size(), 0);
        for (std::size_t slot = 0; slot < g.arrangement.size(); ++slot) {
          const auto id = static_cast<std::size_t>(g.arrangement[slot]);
          perm[static_cast<std::size_t>(g.members[id][used[id]++])] = static_cast<int>(g.start + slot);
        }
      }
      consider(s, anchor, perm, best);
    } while (advance());
  }
}

}  // namespace

CanonicalKey encode_key(const SparseState& rep) {
  CanonicalKey key;
  key.reserve(8 + rep.cardinality() * 16);
  key.push_back(static_cast<char>(rep.num_qubits()));
  key.push_back(static_cast<char>(entangled_qubit_count(rep)));
  put_u64(key, rep.cardinality());
  for (const auto& e : rep.entries()) put_u64(key, e.index);
  for (const auto& e : rep.entries()) {
    put_u64(key, static_cast<std::uint64_t>(quantize(e.amp)) ^ (std::uint64_t{1} << 63));
  }
  return key;
}

Canonical canonicalize(const SparseState& state) {
  const int n = state.num_qubits();
  Transform t;
  t.gates = Circuit(n);
  SparseState s = state;
  for (bool changed = true; changed;) {
    changed = false;
    for (int q = 0; q < n; ++q) {
      if (auto lambda = separable_ratio(s, q)) {
        const double theta = -2 * std::atan2(*lambda, 1.0);
        s = apply_ry(s, q, theta);
        t.gates.ry(q, theta);
        changed = true;
      }
    }
  }

  Best best;
  minimize_layout(s, best);
  std::vector<Entry> self = s.entries();
  const bool self_negated = normalize_sign(self);
  if (compare(self, best.cand->entries) == 0) {
    best.anchor = 0;
    best.perm.resize(static_cast<std::size_t>(n));
    std::iota(best.perm.begin(), best.perm.end(), 0);
    best.cand->negated = self_negated;
  }
  for (int q = 0; q < n; ++q) {
    if (qubit_value(best.anchor, n, q)) t.gates.x(q);
  }
  t.permutation = best.perm;
  t.negate = best.cand->negated;
  return {SparseState(n, std::move(best.cand->entries)), std::move(t)};
}

CanonicalKey state_key(const SparseState& state) {
  std::vector<Entry> entries = state.entries();
  normalize_sign(entries);
  return encode_key(SparseState(state.num_qubits(), std::move(entries)));
}

CanonicalKey canonical_key(const SparseState& state) {
  return encode_key(canonicalize(state).representative);
}

CanonCount count_canonical_uniform(int n, int m) {
  if (n < 1 || n > 5) throw CapExceeded("count_canonical_uniform supports n <= 5");
  const int size = 1 << n;
  if (m < 1 || m > size) throw InvalidArgument("count_canonical_uniform: m out of range");
  CanonCount out;
  std::unordered_set<CanonicalKey> keys;
  std::vector<int> pick(static_cast<std::size_t>(m));
  std::iota(pick.begin(), pick.end(), 0);
  const double amp = 1.0 / std::sqrt(static_cast<double>(m));
  while (true) {
    ++out.raw;
    std::vector<Entry> entries;
    for (int x : pick) entries.push_back({static_cast<Basis>(x), amp});
    auto rep = canonicalize(SparseState(n, std::move(entries))).representative;
    if (rep.cardinality() == static_cast<std::size_t>(m)) keys.insert(encode_key(rep));
    int i = m - 1;
    while (i >= 0 && pick[static_cast<std::size_t>(i)] == size - m + i) --i;
    if (i < 0) break;
    ++pick[static_cast<std::size_t>(i)];
    for (int j = i + 1; j < m; ++j) pick[static_cast<std::size_t>(j)] = pick[static_cast<std::size_t>(j - 1)] + 1;
  }
  out.canonical = keys.size();
  return out;
}

}  // namespace qsp
