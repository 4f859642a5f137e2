#pragma once

#include "qls/qcore.hpp"
#include "qls/weingarten.hpp"

namespace qls {

struct GroupElement {
  GroupKind group = GroupKind::Unitary;
  long dim = 0;
  Matrix matrix;

  // Membership check: unitarity for all kinds, realness + orthogonality for
  // Orthogonal, the J-compatibility relation for Symplectic.
  void validate(double tol = 1e-9) const;
};

// The canonical antisymmetric form [[0, I], [-I, 0]] for even d.
Matrix symplectic_form(long d);

GroupElement haar_unitary(long d, SeededRng& rng);
GroupElement haar_orthogonal(long d, SeededRng& rng);
GroupElement haar_symplectic(long d, SeededRng& rng);  // d even

PureState haar_pure_state(int n, SeededRng& rng);

// Uniform over the n-qubit Clifford group (mod global phase), materialized
// with a canonical phase; 1 <= n <= 6.
GroupElement random_clifford(int n, SeededRng& rng);

// Uniform over the 2(4^n - 1) signed non-identity Pauli strings.
PauliString random_signed_pauli(int n, SeededRng& rng);

}  // namespace qls
