#include "qsprep/sim.hpp"

#include <cmath>

#include "qsprep/errors.hpp"
#include "qsprep/sim_kernels.hpp"

namespace qsp {

StateVector::StateVector(int n) : n_(n) {
  if (n < 1 || n > kMaxDenseQubits) {
    throw CapExceeded("dense simulation supports 1.." + std::to_string(kMaxDenseQubits) +
                      " qubits, got " + std::to_string(n));
  }
  amps_.assign(std::size_t{1} << n, 0.0);
  amps_[0] = 1.0;
}

StateVector StateVector::from_sparse(const SparseState& state) {
  StateVector v(state.num_qubits());
  v.amps_[0] = 0.0;
  for (const auto& e : state.entries()) v.amps_[e.index] = e.amp;
  return v;
}

double StateVector::norm_squared() const {
  const double* p = amps_.data();
  return kernels::active().dot(p, p, amps_.size());
}

SparseState StateVector::to_sparse() const {
  std::vector<Entry> entries;
  for (std::size_t i = 0; i < amps_.size(); ++i) {
    if (std::abs(amps_[i]) >= kAmplitudeEpsilon) entries.push_back({i, amps_[i]});
  }
  return SparseState(n_, std::move(entries));
}

namespace {

void check(int q, int n) {
  if (q < 0 || q >= n) throw InvalidArgument("gate qubit " + std::to_string(q) + " out of range");
}

}  // namespace

void StateVector::apply(const Gate& gate) {
  const auto& k = kernels::active();
  double* v = amps_.data();
  const std::size_t dim = amps_.size();
  if (const auto* g = std::get_if<RyGate>(&gate)) {
    check(g->target, n_);
    k.ry(v, dim, bit_position(n_, g->target), std::cos(g->angle / 2), std::sin(g->angle / 2));
  } else if (const auto* g = std::get_if<XGate>(&gate)) {
    check(g->target, n_);
    k.x(v, dim, bit_position(n_, g->target));
  } else if (const auto* g = std::get_if<CnotGate>(&gate)) {
    check(g->control, n_);
    check(g->target, n_);
    const int cpos = bit_position(n_, g->control);
    if (g->negated) k.x(v, dim, cpos);
    k.cnot(v, dim, cpos, bit_position(n_, g->target));
    if (g->negated) k.x(v, dim, cpos);
  } else if (const auto* g = std::get_if<McryGate>(&gate)) {
    check(g->target, n_);
    const auto& table = g->table;
    const int c = table.num_controls();
    std::vector<int> cpos;
    for (int q : table.controls) {
      check(q, n_);
      cpos.push_back(bit_position(n_, q));
    }
    std::vector<double> co(table.num_patterns()), si(table.num_patterns());
    for (std::size_t x = 0; x < table.num_patterns(); ++x) {
      co[x] = std::cos(table.angle_or_zero(x) / 2);
      si[x] = std::sin(table.angle_or_zero(x) / 2);
    }
    const std::size_t tm = std::size_t{1} << bit_position(n_, g->target);
    for (std::size_t i = 0; i < dim; ++i) {
      if (i & tm) continue;
      std::size_t x = 0;
      for (int j = 0; j < c; ++j) x = (x << 1) | ((i >> cpos[static_cast<std::size_t>(j)]) & 1U);
      const double a0 = v[i], a1 = v[i | tm];
      v[i] = co[x] * a0 - si[x] * a1;
      v[i | tm] = si[x] * a0 + co[x] * a1;
    }
  }
}

void StateVector::apply(const Circuit& circuit) {
  if (circuit.num_qubits() > n_) throw InvalidArgument("circuit wider than state");
  for (const auto& g : circuit.gates()) apply(g);
}

StateVector simulate(const Circuit& circuit, int n) {
  StateVector v(n);
  v.apply(circuit);
  return v;
}

double fidelity(const StateVector& a, const StateVector& b) {
  if (a.num_qubits() != b.num_qubits()) throw InvalidArgument("fidelity: dimension mismatch");
  return std::abs(kernels::active().dot(a.amplitudes().data(), b.amplitudes().data(), a.dim()));
}

double fidelity(const StateVector& a, const SparseState& b) {
  if (a.num_qubits() != b.num_qubits()) throw InvalidArgument("fidelity: dimension mismatch");
  double s = 0;
  for (const auto& e : b.entries()) s += a.amplitudes()[e.index] * e.amp;
  return std::abs(s);
}

double fidelity(const SparseState& a, const SparseState& b) {
  if (a.num_qubits() != b.num_qubits()) throw InvalidArgument("fidelity: dimension mismatch");
  double s = 0;
  for (const auto& e : a.entries()) s += e.amp * b.amplitude(e.index);
  return std::abs(s);
}

bool verify(const Circuit& circuit, const SparseState& target, double tol) {
  if (circuit.num_qubits() > target.num_qubits()) return false;
  return fidelity(simulate(circuit, target.num_qubits()), target) >= 1.0 - tol;
}

}  // namespace qsp
