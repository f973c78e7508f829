#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "qsprep/circuit.hpp"
#include "qsprep/errors.hpp"
#include "qsprep/sim.hpp"

using namespace qsp;

namespace {

constexpr double kPi = std::numbers::pi;

Circuit two_cnot_circuit() {
  Circuit c(3);
  c.ry(0, kPi / 2).ry(1, kPi / 2).cnot(0, 2).cnot(1, 0);
  return c;
}

// Qubit-reduction circuit for the motivating state: one 1-control and one
// 2-control rotation block.
Circuit qubit_reduction_circuit() {
  Circuit c(3);
  c.ry(0, kPi / 2);
  c.mcry(1, RotationTable({0}, {kPi / 2, kPi / 2}));
  c.mcry(2, RotationTable({0, 1}, {0.0, kPi, kPi, 0.0}));
  return c;
}

int count_lines(const std::string& text, const std::string& prefix) {
  int k = 0;
  std::size_t pos = 0;
  while ((pos = text.find(prefix, pos)) != std::string::npos) {
    ++k;
    pos += prefix.size();
  }
  return k;
}

Circuit random_circuit(int n, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> angle(-2 * kPi, 2 * kPi);
  Circuit c(n);
  const int gates = 1 + static_cast<int>(rng() % 8);
  for (int i = 0; i < gates; ++i) {
    const int t = static_cast<int>(rng() % static_cast<unsigned>(n));
    std::vector<int> others;
    for (int q = 0; q < n; ++q) {
      if (q != t) others.push_back(q);
    }
    switch (n == 1 ? rng() % 2 : rng() % 4) {
      case 0: c.ry(t, angle(rng)); break;
      case 1: c.x(t); break;
      case 2: c.cnot(others[rng() % others.size()], t, rng() % 2 == 0); break;
      default: {
        std::shuffle(others.begin(), others.end(), rng);
        const std::size_t k = 1 + rng() % std::min<std::size_t>(2, others.size());
        std::vector<int> ctrls(others.begin(), others.begin() + static_cast<long>(k));
        std::sort(ctrls.begin(), ctrls.end());
        std::vector<std::optional<double>> entries(std::size_t{1} << k);
        for (auto& e : entries) {
          if (rng() % 4 != 0) e = angle(rng);
        }
        if (!entries[0]) entries[0] = 0.0;
        c.mcry(t, RotationTable(ctrls, entries));
      }
    }
  }
  return c;
}

}  // namespace

TEST_SUITE("circuit") {

TEST_CASE("cnot cost") {
  CHECK(cnot_cost(two_cnot_circuit(), CostModel::graycode) == 2);
  CHECK(cnot_cost(two_cnot_circuit(), CostModel::exact) == 2);
  CHECK(cnot_cost(qubit_reduction_circuit(), CostModel::graycode) == 6);
  CHECK(cnot_cost(Circuit(3), CostModel::exact) == 0);
  CHECK(verify(qubit_reduction_circuit(), normalize(SparseState(3, {{0b000, 1}, {0b011, 1}, {0b101, 1}, {0b110, 1}}))));
}

TEST_CASE("cost model names") {
  CHECK(parse_cost_model("exact") == CostModel::exact);
  CHECK(to_string(CostModel::graycode) == "graycode");
  CHECK_THROWS_AS(parse_cost_model("fast"), InvalidArgument);
}

TEST_CASE("gate validation") {
  Circuit c(2);
  CHECK_THROWS_AS(c.cnot(1, 1), InvalidArgument);
  CHECK_THROWS_AS(c.ry(2, 0.1), InvalidArgument);
  CHECK_THROWS_AS(c.mcry(0, RotationTable({0}, {0.1, 0.2})), InvalidArgument);
}

TEST_CASE("lowering small cases") {
  Circuit cx(2);
  cx.cnot(0, 1);
  CHECK(lower_to_basis(cx, CostModel::exact) == cx);

  Circuit cry(2);
  cry.ry(0, 1.1).mcry(1, RotationTable({0}, {0.3, -1.2}));
  auto low = lower_to_basis(cry, CostModel::graycode);
  CHECK(low.is_basis());
  CHECK(low.cnot_gate_count() <= 2);
  CHECK(fidelity(simulate(low, 2), simulate(cry, 2)) == doctest::Approx(1.0));

  Circuit x(1);
  x.x(0);
  auto lx = lower_to_basis(x, CostModel::exact);
  REQUIRE(lx.size() == 1);
  CHECK(std::get<RyGate>(lx.gates()[0]) == RyGate{0, kPi});

  Circuit neg(2);
  neg.cnot(0, 1, true);
  auto ln = lower_to_basis(neg, CostModel::exact);
  CHECK(ln.is_basis());
  CHECK(fidelity(simulate(ln, 2), SparseState::basis_state(2, 0b01)) == doctest::Approx(1.0));
}

TEST_CASE("lowering is simulation-equivalent and counts match the cost") {
  std::mt19937_64 rng(99);
  for (int trial = 0; trial < 1000; ++trial) {
    const int n = 1 + static_cast<int>(rng() % 5);
    auto c = random_circuit(n, rng);
    for (auto model : {CostModel::graycode, CostModel::exact}) {
      auto low = lower_to_basis(c, model);
      REQUIRE(low.is_basis());
      CHECK(fidelity(simulate(low, n), simulate(c, n)) > 1 - 1e-9);
      CHECK(low.cnot_gate_count() == cnot_cost(c, model));
    }
  }
}

TEST_CASE("inversion") {
  Circuit r(1);
  r.ry(0, 0.7);
  CHECK(invert(r).gates()[0] == Gate{RyGate{0, -0.7}});
  Circuit cx(2);
  cx.cnot(0, 1);
  CHECK(invert(cx) == cx);

  std::mt19937_64 rng(4);
  for (int trial = 0; trial < 200; ++trial) {
    const int n = 1 + static_cast<int>(rng() % 4);
    auto c = random_circuit(n, rng);
    CHECK(cnot_cost(invert(c), CostModel::graycode) == cnot_cost(c, CostModel::graycode));
    Circuit both(n);
    both.append(c).append(invert(c));
    CHECK(fidelity(simulate(both, n), SparseState::ground(n)) > 1 - 1e-9);
  }
}

TEST_CASE("qasm emission") {
  Circuit r(1);
  r.ry(0, kPi / 2);
  const std::string q = emit_qasm(r);
  CHECK(q.find("OPENQASM 2.0;") == 0);
  CHECK(q.find("qreg q[1];") != std::string::npos);
  CHECK(q.find("ry(1.5707963267948966) q[0];") != std::string::npos);

  Circuit cx(2);
  cx.cnot(0, 1);
  CHECK(emit_qasm(cx).find("cx q[0],q[1];") != std::string::npos);

  auto lowered = lower_to_basis(two_cnot_circuit(), CostModel::exact);
  CHECK(count_lines(emit_qasm(lowered), "cx ") == 2);
  CHECK(emit_qasm(lowered) == emit_qasm(lowered));

  CHECK_THROWS_AS(emit_qasm(qubit_reduction_circuit()), InvalidArgument);
}

TEST_CASE("qasm round trip") {
  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 200; ++trial) {
    const int n = 1 + static_cast<int>(rng() % 5);
    auto low = lower_to_basis(random_circuit(n, rng), CostModel::graycode);
    CHECK(parse_qasm(emit_qasm(low)) == low);
  }
  auto c = parse_qasm("OPENQASM 2.0;\ninclude \"qelib1.inc\";\nqreg q[2];\nry(pi/2) q[0];\ncx q[0],q[1];\n");
  CHECK(c.num_qubits() == 2);
  CHECK(c.cnot_gate_count() == 1);
  CHECK_THROWS_AS(parse_qasm("OPENQASM 2.0;\nqreg q[1];\nh q[0];\n"), ParseError);
}

TEST_CASE("circuit json has a stable layout") {
  const std::string j = circuit_to_json(two_cnot_circuit());
  CHECK(j.find("\"n\"") < j.find("\"gates\""));
  CHECK(j == circuit_to_json(two_cnot_circuit()));
}

}  // TEST_SUITE
