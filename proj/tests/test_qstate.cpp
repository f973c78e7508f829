#include <doctest.h>

#include <cmath>
#include <random>

#include "qsprep/errors.hpp"
#include "qsprep/qstate.hpp"
#include "qsprep/state_io.hpp"

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

std::vector<Basis> bases(std::initializer_list<const char*> bits) {
  std::vector<Basis> out;
  for (auto b : bits) out.push_back(parse_basis(b));
  return out;
}

}  // namespace

TEST_SUITE("qstate") {

TEST_CASE("basis strings put qubit 0 first") {
  CHECK(parse_basis("100") == 4);
  CHECK(basis_string(4, 3) == "100");
  CHECK(qubit_value(4, 3, 0));
  CHECK_FALSE(qubit_value(4, 3, 2));
  CHECK_THROWS_AS(parse_basis("10a"), ParseError);
}

TEST_CASE("normalize") {
  auto s = normalize(SparseState(1, {{0, 1.0}}));
  CHECK(s.amplitude(0) == doctest::Approx(1.0));

  s = normalize(SparseState(2, {{0, 3.0}, {3, 4.0}}));
  CHECK(s.amplitude(0) == doctest::Approx(0.6));
  CHECK(s.amplitude(3) == doctest::Approx(0.8));

  s = normalize(SparseState(1, {{0, 1.0}, {1, 1.0}}));
  CHECK(s.amplitude(1) == doctest::Approx(1 / std::sqrt(2.0)));
  CHECK(is_normalized(s));

  CHECK_THROWS_AS(normalize(SparseState(2, {})), InvalidArgument);
  CHECK_THROWS_AS(normalize(SparseState(2, {{1, 0.0}})), InvalidArgument);
}

TEST_CASE("tiny amplitudes are dropped and bad input rejected") {
  SparseState s(2, {{0, 1.0}, {1, 1e-12}});
  CHECK(s.cardinality() == 1);
  CHECK_THROWS_AS(SparseState(2, {{4, 1.0}}), InvalidArgument);
  CHECK_THROWS_AS(SparseState(2, {{1, 1.0}, {1, 0.5}}), InvalidArgument);
}

TEST_CASE("cofactor index sets") {
  auto psi1 = from_bits({{"000", 1}, {"010", 1}, {"101", 1}, {"111", 1}});
  auto [z1, o1] = cofactor_index_sets(psi1, 1);
  CHECK(z1 == bases({"00", "11"}));
  CHECK(o1 == bases({"00", "11"}));

  auto [z0, o0] = cofactor_index_sets(psi1, 0);
  CHECK(z0 == bases({"00", "10"}));
  CHECK(o0 == bases({"01", "11"}));

  auto [zg, og] = cofactor_index_sets(SparseState::ground(3), 2);
  CHECK(zg == bases({"00"}));
  CHECK(og.empty());

  CHECK_THROWS_AS(cofactor_index_sets(psi1, 3), InvalidArgument);
}

TEST_CASE("cofactors partition the index set") {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 50; ++trial) {
    const int n = 2 + static_cast<int>(rng() % 4);
    const std::size_t m = 1 + rng() % (std::size_t{1} << n);
    auto s = random_state(n, m, rng());
    for (int q = 0; q < n; ++q) {
      auto [zero, one] = cofactor_index_sets(s, q);
      std::vector<Basis> rebuilt;
      const int pos = bit_position(n, q);
      for (auto x : zero) rebuilt.push_back(insert_bit(x, pos, false));
      for (auto x : one) rebuilt.push_back(insert_bit(x, pos, true));
      std::sort(rebuilt.begin(), rebuilt.end());
      CHECK(rebuilt == s.index_set());
    }
  }
}

TEST_CASE("entangled qubit count") {
  CHECK(entangled_qubit_count(make_ghz(4)) == 4);
  CHECK(entangled_qubit_count(SparseState::ground(3)) == 0);
  CHECK(entangled_qubit_count(from_bits({{"00", 1}, {"01", 1}})) == 0);
  auto psi1 = from_bits({{"000", 1}, {"010", 1}, {"101", 1}, {"111", 1}});
  CHECK(entangled_qubit_count(psi1) == 2);
}

TEST_CASE("random product states have no entangled qubits") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> angle(-3.0, 3.0);
  for (int trial = 0; trial < 30; ++trial) {
    const int n = 1 + static_cast<int>(rng() % 5);
    std::vector<double> a(std::size_t{1} << n, 1.0);
    for (int q = 0; q < n; ++q) {
      const double t = angle(rng);
      for (std::size_t x = 0; x < a.size(); ++x) {
        a[x] *= qubit_value(x, n, q) ? std::sin(t) : std::cos(t);
      }
    }
    std::vector<Entry> entries;
    for (std::size_t x = 0; x < a.size(); ++x) entries.push_back({x, a[x]});
    auto s = normalize(SparseState(n, entries));
    CHECK(entangled_qubit_count(s) == 0);
    CHECK(is_product_state(s));
  }
}

TEST_CASE("named states") {
  auto d = make_dicke(4, 2);
  CHECK(d.index_set() == bases({"0011", "0101", "0110", "1001", "1010", "1100"}));
  for (auto& e : d.entries()) CHECK(e.amp == doctest::Approx(1 / std::sqrt(6.0)));

  auto w = make_w(3);
  CHECK(w.index_set() == bases({"001", "010", "100"}));
  CHECK(w.amplitude(1) == doctest::Approx(1 / std::sqrt(3.0)));

  auto bell = make_ghz(2);
  CHECK(bell.index_set() == bases({"00", "11"}));
  CHECK(bell.amplitude(3) == doctest::Approx(1 / std::sqrt(2.0)));

  const int binom[7][7] = {{1}, {1, 1}, {1, 2, 1}, {1, 3, 3, 1}, {1, 4, 6, 4, 1}, {1, 5, 10, 10, 5, 1},
                           {1, 6, 15, 20, 15, 6, 1}};
  for (int n = 2; n <= 6; ++n) {
    for (int k = 1; k < n; ++k) {
      CHECK(make_dicke(n, k).cardinality() == static_cast<std::size_t>(binom[n][k]));
    }
  }
  CHECK_THROWS_AS(make_dicke(3, 0), InvalidArgument);
  CHECK_THROWS_AS(make_dicke(3, 3), InvalidArgument);
  CHECK_THROWS_AS(make_ghz(1), InvalidArgument);
}

TEST_CASE("random states") {
  auto full = random_state(3, 8, 5);
  CHECK(full.cardinality() == 8);
  CHECK(random_state(5, 5, 42) == random_state(5, 5, 42));
  CHECK_FALSE(random_state(5, 5, 42) == random_state(5, 5, 43));
  auto s = random_state(4, 8, 9);
  CHECK(s.cardinality() == 8);
  CHECK(is_normalized(s, 1e-9));
  for (auto& e : s.entries()) CHECK(e.amp > 0.0);
  CHECK_THROWS_AS(random_state(2, 5, 1), InvalidArgument);
}

TEST_CASE("sparse gates keep the norm") {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 100; ++trial) {
    auto s = random_state(4, 1 + rng() % 16, rng());
    const int q = static_cast<int>(rng() % 4);
    s = apply_ry(s, q, 0.37 * static_cast<double>(rng() % 17));
    s = apply_cnot(s, q, (q + 1) % 4);
    s = apply_x(s, (q + 2) % 4);
    CHECK(is_normalized(s, 1e-9));
  }
}

TEST_CASE("separable ratio and product detection") {
  auto s = from_bits({{"00", 1}, {"01", 2}, {"10", 3}, {"11", 6}});
  REQUIRE(separable_ratio(s, 0));
  CHECK(*separable_ratio(s, 0) == doctest::Approx(3.0));
  CHECK(is_product_state(s));
  CHECK_FALSE(is_product_state(make_ghz(2)));
  CHECK_FALSE(separable_ratio(make_ghz(2), 0));
}

TEST_CASE("state files round trip") {
  auto d = make_dicke(4, 2);
  auto via_json = parse_state(state_to_json(d));
  CHECK(approx_equal_up_to_sign(via_json, d));
  auto via_text = parse_state(state_to_text(d));
  CHECK(approx_equal_up_to_sign(via_text, d));

  auto t = parse_state("# comment\n00 3\n11 4\n");
  CHECK(t.amplitude(0) == doctest::Approx(0.6));
  auto j = parse_state(R"({"n": 2, "entries": [{"basis": "11", "amp": 4}, {"basis": "00", "amp": 3}]})");
  CHECK(j.amplitude(3) == doctest::Approx(0.8));

  const std::string text = state_to_text(from_bits({{"11", 1}, {"00", 1}}));
  CHECK(text.find("00") < text.find("11"));

  CHECK_THROWS_AS(parse_state("00 1\n111 1\n"), ParseError);
  CHECK_THROWS_AS(parse_state("00 abc\n"), ParseError);
  CHECK_THROWS_AS(parse_state(R"({"n": 2, "entries": [{"basis": "101", "amp": 1}]})"), ParseError);
}

}  // TEST_SUITE
