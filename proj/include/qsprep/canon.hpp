#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "qsprep/circuit.hpp"
#include "qsprep/qstate.hpp"

namespace qsp {

// Zero-CNOT map from a state to its representative: single-qubit gates on
// the input's qubits, then the relabeling qubit q -> permutation[q], then an
// optional global sign flip.
struct Transform {
  Circuit gates;
  std::vector<int> permutation;
  bool negate = false;

  bool is_identity() const;
};

// Byte string; equal keys mean identical representatives up to global sign
// with amplitudes quantized at 1e-9. Ordered by std::string comparison.
using CanonicalKey = std::string;

struct Canonical {
  SparseState representative;
  Transform transform;
};

Canonical canonicalize(const SparseState& state);
CanonicalKey canonical_key(const SparseState& state);
// Key of a state that is already a representative (skips the search).
CanonicalKey encode_key(const SparseState& representative);

// Key of the state itself, identified only up to global sign.
CanonicalKey state_key(const SparseState& state);

SparseState apply_transform(const SparseState& state, const Transform& transform);

struct CanonCount {
  std::uint64_t raw = 0;
  std::uint64_t canonical = 0;
};

// Uniform-amplitude states on m of the 2^n basis states, counted up to
// equivalence. States whose representative has fewer than m entries (a
// separable superposed qubit) are not counted, they are classes of smaller m.
CanonCount count_canonical_uniform(int n, int m);

}  // namespace qsp
