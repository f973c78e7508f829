#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "qsprep/errors.hpp"
#include "qsprep/sim.hpp"
#include "qsprep/sim_kernels.hpp"

using namespace qsp;

namespace {

constexpr double kPi = std::numbers::pi;

SparseState uniform(int n, std::initializer_list<const char*> bits) {
  std::vector<Entry> entries;
  for (auto b : bits) entries.push_back({parse_basis(b), 1.0});
  return normalize(SparseState(n, entries));
}

Circuit random_circuit(int n, int gates, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> angle(-2 * kPi, 2 * kPi);
  Circuit c(n);
  for (int i = 0; i < gates; ++i) {
    const int t = static_cast<int>(rng() % static_cast<unsigned>(n));
    const int u = static_cast<int>((t + 1 + rng() % static_cast<unsigned>(std::max(1, n - 1))) % n);
    switch (rng() % 4) {
      case 0: c.ry(t, angle(rng)); break;
      case 1: c.x(t); break;
      case 2:
        if (n > 1) c.cnot(u, t, rng() % 2 == 0);
        break;
      default:
        if (n > 1) {
          RotationTable table({u}, {angle(rng), angle(rng)});
          c.mcry(t, table);
        }
    }
  }
  return c;
}

}  // namespace

TEST_SUITE("sim") {

TEST_CASE("two-CNOT circuit for the motivating state") {
  Circuit c(3);
  c.ry(0, kPi / 2).ry(1, kPi / 2).cnot(0, 2).cnot(1, 0);
  auto psi = uniform(3, {"000", "011", "101", "110"});
  CHECK(fidelity(simulate(c, 3), psi) == doctest::Approx(1.0));
  CHECK(verify(c, psi, 1e-6));
}

TEST_CASE("empty circuit and single rotations") {
  auto v = simulate(Circuit(2), 2);
  CHECK(v.amplitudes()[0] == 1.0);
  CHECK(v.norm_squared() == doctest::Approx(1.0));

  Circuit c(1);
  c.ry(0, kPi / 2);
  auto plus = simulate(c, 1);
  CHECK(plus.amplitudes()[0] == doctest::Approx(1 / std::sqrt(2.0)));
  CHECK(plus.amplitudes()[1] == doctest::Approx(1 / std::sqrt(2.0)));

  Circuit m(1);
  m.ry(0, -kPi / 2);
  CHECK(simulate(m, 1).amplitudes()[1] == doctest::Approx(-1 / std::sqrt(2.0)));
}

TEST_CASE("fidelity") {
  auto psi = random_state(3, 5, 1);
  CHECK(fidelity(psi, psi) == doctest::Approx(1.0));
  CHECK(fidelity(psi, negate(psi)) == doctest::Approx(1.0));
  CHECK(fidelity(SparseState::basis_state(1, 0), SparseState::basis_state(1, 1)) == doctest::Approx(0.0));
  auto a = StateVector::from_sparse(psi);
  CHECK(fidelity(a, psi) == doctest::Approx(1.0));
  CHECK_THROWS_AS(fidelity(psi, SparseState::ground(2)), InvalidArgument);
}

TEST_CASE("verify") {
  CHECK_FALSE(verify(Circuit(2), make_ghz(2), 1e-6));

  // Six-CNOT circuit for D(4,2) with negated controls.
  Circuit d(4);
  d.ry(1, kPi / 4).ry(2, kPi / 2).ry(3, 2 * std::atan(1 / std::sqrt(2.0)));
  d.cnot(3, 1).ry(1, kPi / 4).cnot(3, 1);
  d.cnot(3, 0, true).cnot(2, 3, true).cnot(2, 1, true).cnot(1, 0);
  CHECK(verify(d, make_dicke(4, 2), 1e-6));
}

TEST_CASE("dense and sparse application agree") {
  std::mt19937_64 rng(21);
  for (int trial = 0; trial < 200; ++trial) {
    const int n = 1 + static_cast<int>(rng() % 5);
    auto c = random_circuit(n, 12, rng);
    auto dense = simulate(c, n);
    auto sparse = apply_circuit(SparseState::ground(n), c);
    CHECK(fidelity(dense, sparse) == doctest::Approx(1.0));
  }
}

TEST_CASE("gates preserve the norm") {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 1000; ++trial) {
    const int n = 1 + static_cast<int>(rng() % 5);
    StateVector v(n);
    const auto c = random_circuit(n, 10, rng);
    for (const auto& g : c.gates()) {
      v.apply(g);
      REQUIRE(std::abs(v.norm_squared() - 1.0) < 1e-9);
    }
  }
}

TEST_CASE("a circuit followed by its inverse returns to ground") {
  std::mt19937_64 rng(8);
  for (int trial = 0; trial < 100; ++trial) {
    const int n = 1 + static_cast<int>(rng() % 5);
    auto c = random_circuit(n, 15, rng);
    Circuit both(n);
    both.append(c).append(invert(c));
    CHECK(fidelity(simulate(both, n), SparseState::ground(n)) > 1 - 1e-9);
  }
}

TEST_CASE("dense simulation guards its size") {
  CHECK_THROWS_AS(StateVector(kMaxDenseQubits + 1), CapExceeded);
}

TEST_CASE("AVX2 kernels match the scalar reference") {
  const auto* avx = kernels::avx2();
  if (avx == nullptr) {
    MESSAGE("AVX2 kernels unavailable on this machine; equivalence not exercised");
    return;
  }
  const auto& ref = kernels::scalar();
  std::mt19937_64 rng(13);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int n = 1; n <= 10; ++n) {
    const std::size_t dim = std::size_t{1} << n;
    for (int trial = 0; trial < 20; ++trial) {
      std::vector<double> a(dim), b(dim);
      for (auto& x : a) x = u(rng);
      b = a;
      const int pos = static_cast<int>(rng() % static_cast<unsigned>(n));
      const double th = u(rng) * 6;
      ref.ry(a.data(), dim, pos, std::cos(th / 2), std::sin(th / 2));
      avx->ry(b.data(), dim, pos, std::cos(th / 2), std::sin(th / 2));
      for (std::size_t i = 0; i < dim; ++i) REQUIRE(a[i] == doctest::Approx(b[i]).epsilon(1e-14));

      ref.x(a.data(), dim, pos);
      avx->x(b.data(), dim, pos);
      REQUIRE(a == b);

      if (n > 1) {
        const int cpos = (pos + 1 + static_cast<int>(rng() % static_cast<unsigned>(n - 1))) % n;
        ref.cnot(a.data(), dim, cpos, pos);
        avx->cnot(b.data(), dim, cpos, pos);
        REQUIRE(a == b);
      }
      CHECK(ref.dot(a.data(), b.data(), dim) == doctest::Approx(avx->dot(a.data(), b.data(), dim)));
    }
  }
}

TEST_CASE("active kernel is one of the compiled variants") {
  const auto& k = kernels::active();
  CHECK((k.name == kernels::scalar().name || (kernels::avx2() && k.name == kernels::avx2()->name)));
}

}  // TEST_SUITE
