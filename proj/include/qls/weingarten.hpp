#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <utility>
#include <vector>

#include "qls/qcore.hpp"

namespace qls {

using Rational = boost::multiprecision::cpp_rational;
using BigInt = boost::multiprecision::cpp_int;

// Integer partition in weakly decreasing order.
using Partition = std::vector<int>;

std::vector<Partition> partitions_of(int k);

// ---------------------------------------------------------------------------
// Permutations and pair partitions (0-based internally)
// ---------------------------------------------------------------------------

struct Permutation {
  int k = 0;
  std::vector<int> images;

  Permutation() = default;
  explicit Permutation(std::vector<int> imgs);
  static Permutation identity(int k);

  Permutation inverse() const;
  Permutation then(const Permutation& other) const;  // this followed by other
  int signature() const;
};

Partition cycle_type(const Permutation& p);

// Perfect matching on {0..2k-1}; partner[i] is the element paired with i.
struct Pairing {
  int k = 0;
  std::vector<int> partner;

  Pairing() = default;
  explicit Pairing(std::vector<int> partner_map);
  static Pairing identity(int k);

  // Pairs in canonical order: within a pair the smaller element first, pairs
  // sorted by their smaller element.
  std::vector<std::pair<int, int>> pairs() const;
  // The associated permutation sending the identity pairing's slots to this
  // pairing's canonical pair list.
  Permutation to_permutation() const;
  int signature() const { return to_permutation().signature(); }
};

// All (2k-1)!! pairings; k <= 6 guard.
std::vector<Pairing> enumerate_pairings(int k);

// Half-lengths of the alternating loops of the two matchings' union graph,
// sorted decreasing; parts sum to k.
Partition coset_type(const Pairing& m, const Pairing& n);

// ---------------------------------------------------------------------------
// Weingarten functions (exact rationals)
// ---------------------------------------------------------------------------

// Inverse-Gram coefficient for U(d) at a permutation of the given cycle type;
// k = sum of parts <= 6, |d| >= k.
Rational wg_unitary(const Partition& ct, long d);

// Inverse-Gram coefficient for O(d) at a pair of matchings with the given
// coset type; k <= 5. Negative d is allowed (used by the symplectic case).
Rational wg_orthogonal(const Partition& ct, long d);

// Symplectic value for a matching pair with this coset type, evaluated for a
// minimal-length representative: (-1)^k * (-1)^(k - parts) * wg_orthogonal at
// -2*halfdim. The representative-independent form is wg_symplectic_pair.
Rational wg_symplectic(const Partition& ct, long halfdim);

// Fully signed value (-1)^k sgn(m) sgn(n) wg_orthogonal(coset_type(m,n),
// -2*halfdim); the sign is not a function of the coset type alone.
Rational wg_symplectic_pair(const Pairing& m, const Pairing& n, long halfdim);

// Sum of |Wg| over the whole index set at fixed k.
Rational wg_abs_sum_unitary(int k, long d);
Rational wg_abs_sum_orthogonal(int k, long d);
Rational wg_abs_sum_symplectic(int k, long halfdim);

// ---------------------------------------------------------------------------
// Exact Haar moments
// ---------------------------------------------------------------------------

enum class GroupKind { Unitary, Orthogonal, Symplectic };

// E[U_I,J ... conj(U)_Ip,Jp] with all four tuples of equal length k.
Rational haar_moment_unitary(const std::vector<int>& I, const std::vector<int>& J,
                             const std::vector<int>& Ip, const std::vector<int>& Jp, long d);

// E[prod_s O_{i_s j_s}] with |I| = |J| = 2k.
Rational haar_moment_orthogonal(const std::vector<int>& I, const std::vector<int>& J, long d);

// E[prod_s S_{i_s j_s}] with |I| = |J| = 2k and even full dimension d.
Rational haar_moment_symplectic(const std::vector<int>& I, const std::vector<int>& J, long d);

// ---------------------------------------------------------------------------
// Bound checks
// ---------------------------------------------------------------------------

struct WgBoundRow {
  GroupKind group;
  Partition type;
  double ratio = 0;  // normalized Wg ratio against the Catalan product
  double lo = 0, hi = 0;
  bool pass = false;
};

struct WgBoundReport {
  int k = 0;
  long d = 0;
  // One entry per group kind, in enum order; empty rows if the hypothesis
  // d-threshold fails for that group.
  bool in_hypothesis[3] = {false, false, false};
  std::vector<WgBoundRow> rows;
  // Fitted constant c with |Wg(identity) - d^-k| = c * k^p / d^(k+2),
  // p = 7/2 for U and Sp, 7 for O.
  double identity_envelope_constant[3] = {0, 0, 0};
  bool all_pass = true;
};

WgBoundReport check_wg_bounds(int k, long d);

// ---------------------------------------------------------------------------
// Symmetric-subspace statistics
// ---------------------------------------------------------------------------

// Returns (sum over permutations of Tr(pi . tensor of the states),
//          d^T / (d (d+1) ... (d+T-1)) times that overlap).
std::pair<double, double> symmetric_projector_stats(long d, int T,
                                                    const std::vector<PureState>& states);

}  // namespace qls
