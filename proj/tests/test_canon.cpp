#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "qsprep/canon.hpp"
#include "qsprep/qstate.hpp"

using namespace qsp;

namespace {

SparseState from_bits(std::initializer_list<std::pair<const char*, double>> items) {
  std::vector<Entry> entries;
  int n = 0;
  for (auto [bits, amp] : items) {
    n = static_cast<int>(std::string(bits).size());
    entries.push_back({parse_basis(bits), amp});
  }
  return normalize(SparseState(n, std::move(entries)));
}

bool same_entries(const SparseState& a, const SparseState& b, double tol = 1e-9) {
  if (a.num_qubits() != b.num_qubits() || a.cardinality() != b.cardinality()) return false;
  for (std::size_t i = 0; i < a.cardinality(); ++i) {
    if (a.entries()[i].index != b.entries()[i].index) return false;
    if (std::abs(a.entries()[i].amp - b.entries()[i].amp) > tol) return false;
  }
  return true;
}

// Random zero-CNOT image: X flips, a relabeling and possibly a global sign.
SparseState scramble(const SparseState& s, std::mt19937_64& rng) {
  const int n = s.num_qubits();
  SparseState out = s;
  for (int q = 0; q < n; ++q) {
    if (rng() % 2) out = apply_x(out, q);
  }
  std::vector<int> perm(static_cast<std::size_t>(n));
  std::iota(perm.begin(), perm.end(), 0);
  std::shuffle(perm.begin(), perm.end(), rng);
  out = permute_qubits(out, perm);
  if (rng() % 2) out = negate(out);
  return out;
}

}  // namespace

TEST_SUITE("canon") {
  TEST_CASE("flip-equivalent pairs share a key") {
    const auto phi = from_bits({{"100", 1}, {"010", 1}});
    const auto ref = from_bits({{"000", 1}, {"110", 1}});
    const auto psi3 = from_bits({{"100", 1}, {"001", 1}});
    CHECK(canonical_key(phi) == canonical_key(ref));
    CHECK(canonical_key(psi3) == canonical_key(ref));
  }

  TEST_CASE("ground state is its own representative") {
    for (int n : {1, 3, 6}) {
      const auto g = SparseState::ground(n);
      const auto c = canonicalize(g);
      CHECK(c.representative == g);
      CHECK(c.transform.is_identity());
    }
  }

  TEST_CASE("distinct entanglement gives distinct keys") {
    const auto zero = SparseState::ground(2);
    const auto bell = from_bits({{"00", 1}, {"11", 1}});
    CHECK(canonical_key(zero) != canonical_key(bell));
    CHECK(canonical_key(make_ghz(3)) != canonical_key(make_w(3)));
    CHECK(canonical_key(make_dicke(4, 1)) != canonical_key(make_dicke(4, 2)));
    // Unequal weights are not identified.
    const auto tilted = from_bits({{"00", 1}, {"11", 2}});
    CHECK(canonical_key(tilted) != canonical_key(bell));
  }

  TEST_CASE("separable superposed qubits are rotated away") {
    const auto bell_plus = from_bits({{"000", 1}, {"001", 1}, {"110", 1}, {"111", 1}});
    const auto bell_zero = from_bits({{"000", 1}, {"110", 1}});
    CHECK(canonical_key(bell_plus) == canonical_key(bell_zero));
    CHECK(canonicalize(bell_plus).representative.cardinality() == 2);
    const auto plus = from_bits({{"0", 1}, {"1", 1}});
    CHECK(same_entries(canonicalize(plus).representative, SparseState::ground(1)));
  }

  TEST_CASE("transform maps the state to its representative") {
    std::mt19937_64 rng(21);
    for (int trial = 0; trial < 200; ++trial) {
      const int n = 1 + static_cast<int>(rng() % 6);
      const std::size_t m = 1 + rng() % std::min<std::size_t>(12, std::size_t{1} << n);
      const auto s = random_state(n, m, rng());
      const auto c = canonicalize(s);
      CHECK(same_entries(apply_transform(s, c.transform), c.representative));
      CHECK(c.representative.cardinality() <= s.cardinality());
      CHECK(is_normalized(c.representative));
      // Idempotent.
      const auto again = canonicalize(c.representative);
      CHECK(again.representative == c.representative);
      CHECK(canonical_key(c.representative) == canonical_key(s));
    }
  }

  TEST_CASE("keys are invariant under flips, relabelings and sign") {
    std::mt19937_64 rng(8);
    for (int trial = 0; trial < 300; ++trial) {
      const int n = 2 + static_cast<int>(rng() % 5);
      const std::size_t m = 2 + rng() % std::min<std::size_t>(10, (std::size_t{1} << n) - 1);
      const auto s = random_state(n, m, rng());
      CHECK(canonical_key(scramble(s, rng)) == canonical_key(s));
    }
    // Named states with many symmetric qubits.
    for (const auto& s : {make_dicke(5, 2), make_ghz(5), make_w(6), make_dicke(6, 3)}) {
      for (int k = 0; k < 5; ++k) CHECK(canonical_key(scramble(s, rng)) == canonical_key(s));
    }
  }

  TEST_CASE("state_key identifies only a global sign") {
    const auto a = from_bits({{"01", 1}, {"10", -1}});
    CHECK(state_key(a) == state_key(negate(a)));
    CHECK(state_key(a) != state_key(apply_x(a, 0)));
  }

  TEST_CASE("uniform class counts on four qubits") {
    const auto one = count_canonical_uniform(4, 1);
    CHECK(one.raw == 16);
    CHECK(one.canonical == 1);
    const auto two = count_canonical_uniform(4, 2);
    CHECK(two.raw == 120);
    // Pairs at Hamming distance 2, 3 and 4; distance 1 is separable.
    CHECK(two.canonical == 3);
    CHECK(count_canonical_uniform(4, 16).canonical == 0);
  }
}
