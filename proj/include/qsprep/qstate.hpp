#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace qsp {

// Basis states are bit patterns; qubit 0 is the most significant of n bits,
// so |q0 q1 ... q(n-1)> reads left to right like a bitstring.
using Basis = std::uint64_t;

inline constexpr double kAmplitudeEpsilon = 1e-10;
inline constexpr int kMaxQubits = 62;

inline int bit_position(int n, int qubit) { return n - 1 - qubit; }

inline bool qubit_value(Basis x, int n, int qubit) {
  return (x >> bit_position(n, qubit)) & 1U;
}

inline Basis qubit_mask(int n, int qubit) {
  return Basis{1} << bit_position(n, qubit);
}

// Removes the bit at position pos, shifting higher bits down.
inline Basis remove_bit(Basis x, int pos) {
  Basis low = x & ((Basis{1} << pos) - 1);
  return ((x >> (pos + 1)) << pos) | low;
}

inline Basis insert_bit(Basis x, int pos, bool value) {
  Basis low = x & ((Basis{1} << pos) - 1);
  return ((x >> pos) << (pos + 1)) | (Basis{value} << pos) | low;
}

std::string basis_string(Basis x, int n);
Basis parse_basis(const std::string& bits);

struct Entry {
  Basis index;
  double amp;

  friend bool operator==(const Entry&, const Entry&) = default;
};

// Real-amplitude state stored as a sorted list of (index, amplitude).
// Entries below kAmplitudeEpsilon are dropped on construction; the
// constructor does not normalize (see normalize()).
class SparseState {
 public:
  SparseState() = default;
  SparseState(int n, std::vector<Entry> entries);

  static SparseState basis_state(int n, Basis index);
  static SparseState ground(int n) { return basis_state(n, 0); }

  int num_qubits() const { return n_; }
  std::size_t cardinality() const { return entries_.size(); }
  const std::vector<Entry>& entries() const { return entries_; }
  bool empty() const { return entries_.empty(); }

  double amplitude(Basis index) const;
  double norm_squared() const;
  std::vector<Basis> index_set() const;

  friend bool operator==(const SparseState&, const SparseState&) = default;

 private:
  int n_ = 0;
  std::vector<Entry> entries_;
};

SparseState normalize(const SparseState& state);
bool is_normalized(const SparseState& state, double tol = 1e-9);

// True when a and b agree entrywise up to a global sign.
bool approx_equal_up_to_sign(const SparseState& a, const SparseState& b,
                             double tol = 1e-9);

// Index sets of the qubit=0 and qubit=1 cofactors, projected onto the other
// n-1 qubits (the chosen bit removed), each sorted.
std::pair<std::vector<Basis>, std::vector<Basis>> cofactor_index_sets(
    const SparseState& state, int qubit);

// Qubits whose two cofactor index sets are both nonempty and differ.
int entangled_qubit_count(const SparseState& state);

// Proportionality factor λ with cofactor1 = λ·cofactor0, when the qubit
// factors out of the state in superposition.
std::optional<double> separable_ratio(const SparseState& state, int qubit);

// Every qubit factors out; such states cost no CNOTs to prepare.
bool is_product_state(const SparseState& state);

// -1 if the qubit takes both values, otherwise the value it is fixed to.
int fixed_value(const SparseState& state, int qubit);
std::vector<int> active_qubits(const SparseState& state);

SparseState make_dicke(int n, int k);
SparseState make_ghz(int n);
SparseState make_w(int n);
SparseState random_state(int n, std::size_t m, std::uint64_t seed);

// Sparse gate application. These are exact relabelings or 2x2 rotations
// and are used by canonicalization and tests; circuits are simulated densely.
SparseState apply_ry(const SparseState& state, int qubit, double theta);
SparseState apply_x(const SparseState& state, int qubit);
SparseState apply_cnot(const SparseState& state, int control, int target);
// Qubit q of the input becomes qubit perm[q] of the output.
SparseState permute_qubits(const SparseState& state, const std::vector<int>& perm);
SparseState negate(const SparseState& state);

}  // namespace qsp
