#pragma once

#include <vector>

#include "qsprep/circuit.hpp"
#include "qsprep/qstate.hpp"

namespace qsp {

inline constexpr int kMaxDenseQubits = 24;

class StateVector {
 public:
  explicit StateVector(int n);  // |0...0>
  static StateVector from_sparse(const SparseState& state);

  int num_qubits() const { return n_; }
  std::size_t dim() const { return amps_.size(); }
  const std::vector<double>& amplitudes() const { return amps_; }
  std::vector<double>& amplitudes() { return amps_; }
  double norm_squared() const;
  SparseState to_sparse() const;

  void apply(const Gate& gate);
  void apply(const Circuit& circuit);

 private:
  int n_;
  std::vector<double> amps_;
};

StateVector simulate(const Circuit& circuit, int n);

double fidelity(const StateVector& a, const StateVector& b);
double fidelity(const StateVector& a, const SparseState& b);
double fidelity(const SparseState& a, const SparseState& b);

bool verify(const Circuit& circuit, const SparseState& target, double tol = 1e-6);

}  // namespace qsp
