#pragma once

#include <Eigen/Dense>
#include <array>
#include <complex>
#include <optional>
#include <string>
#include <vector>

#include "qls/rng.hpp"

namespace qls {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;

inline long dim_of(int n_qubits) { return 1L << n_qubits; }

// ---------------------------------------------------------------------------
// States
// ---------------------------------------------------------------------------

// Normalized statevector on n qubits. Qubit 0 is the leftmost tensor factor
// (most significant bit of the basis index).
struct PureState {
  int n_qubits = 0;
  Vector amplitudes;

  PureState() = default;
  PureState(int n, Vector amps);

  static PureState basis_state(int n, long index);
  static PureState zero_state(int n) { return basis_state(n, 0); }

  Matrix density() const { return amplitudes * amplitudes.adjoint(); }
};

// Hermitian PSD trace-1 matrix on n qubits.
struct DensityMatrix {
  int n_qubits = 0;
  Matrix matrix;

  DensityMatrix() = default;
  DensityMatrix(int n, Matrix m);

  static DensityMatrix maximally_mixed(int n);
  static DensityMatrix from_pure(const PureState& psi);

  long dim() const { return matrix.rows(); }
  double purity() const { return (matrix * matrix).trace().real(); }
};

// ---------------------------------------------------------------------------
// Pauli strings
// ---------------------------------------------------------------------------

enum class PauliLetter : std::uint8_t { I = 0, X = 1, Y = 2, Z = 3 };

struct PauliString {
  int n_qubits = 0;
  std::vector<PauliLetter> letters;
  int sign = +1;  // +1 or -1

  PauliString() = default;
  PauliString(std::vector<PauliLetter> ls, int sgn = +1);

  // Letters from base-4 digits of `code`, qubit 0 = most significant digit.
  static PauliString from_code(int n, long code, int sign = +1);
  long code() const;
  bool is_identity() const;
  std::string str() const;
};

const Eigen::Matrix2cd& pauli_letter_matrix(PauliLetter p);
Matrix pauli_matrix(const PauliString& p);

// Expectation Tr(P rho) without materializing the full 2^n x 2^n matrix.
double pauli_expectation(const PauliString& p, const DensityMatrix& rho);

// All Tr(P rho) for the 4^n unsigned Pauli strings, indexed by code.
std::vector<double> all_pauli_expectations(const DensityMatrix& rho);

// ---------------------------------------------------------------------------
// Measurements
// ---------------------------------------------------------------------------

struct Povm {
  std::vector<Matrix> elements;

  static Povm computational_basis(int n_qubits);
  static Povm two_outcome(const Matrix& effect);  // {E, I - E}
  long dim() const { return elements.empty() ? 0 : elements.front().rows(); }
  void validate(double tol = 1e-9) const;
};

// Rank-1 refinement: weighted projectors with parent-outcome labels so that
// summing child probabilities reproduces the original outcome statistics.
struct Rank1Povm {
  Povm povm;
  std::vector<int> parent;
};

int measure_povm(const DensityMatrix& rho, const Povm& m, SeededRng& rng);
std::vector<double> povm_probabilities(const DensityMatrix& rho, const Povm& m);
Rank1Povm rank1_refine(const Povm& m);

// Swap-test outcome: 0 with probability (1 + Tr(rho1 rho2)) / 2.
int swap_test(const DensityMatrix& rho1, const DensityMatrix& rho2, SeededRng& rng);

// ---------------------------------------------------------------------------
// Bell-basis measurement
// ---------------------------------------------------------------------------

enum class BellLabel : std::uint8_t { PhiPlus = 0, PhiMinus = 1, PsiPlus = 2, PsiMinus = 3 };

// Eigenvalue of P (x) P on the Bell state beta; lambda(I, .) = +1.
int bell_pauli_eigenvalue(PauliLetter p, BellLabel beta);

// Projectively measure a 2n-qubit state pairwise in the Bell basis, pairing
// qubit j with qubit j+n.
std::vector<BellLabel> bell_basis_measure(const DensityMatrix& pair_state, SeededRng& rng);

// Same distribution for the special case pair_state = rho (x) rho, computed
// from precomputed Pauli expectations instead of the 4^n-dimensional matrix.
// `pauli_exp` must be all_pauli_expectations(rho).
std::vector<BellLabel> bell_sample_product(int n_qubits, const std::vector<double>& pauli_exp,
                                           SeededRng& rng);

// Joint Bell-outcome probability for rho (x) rho (oracle for the sampler).
double bell_product_probability(int n_qubits, const std::vector<double>& pauli_exp,
                                const std::vector<BellLabel>& outcome);

// ---------------------------------------------------------------------------
// Channels and register ops
// ---------------------------------------------------------------------------

struct GroupElement;  // ensembles.hpp

enum class ChannelKind { Depolarizing, Conjugation };

struct ChannelSpec {
  ChannelKind kind = ChannelKind::Depolarizing;
  int n_qubits = 0;
  std::optional<Matrix> conjugator;  // required for Conjugation

  static ChannelSpec depolarizing(int n);
  static ChannelSpec conjugation(int n, Matrix a);
};

// (C (x) I_aux)(rho); the channel acts on the first `spec.n_qubits` qubits.
DensityMatrix apply_channel(const ChannelSpec& c, const DensityMatrix& rho, int ancilla = 0);

// Reduced state on the (0-based, ascending) kept qubits.
DensityMatrix partial_trace(const DensityMatrix& rho, const std::vector<int>& keep);

Matrix swap_operator(int n_qubits);
Matrix kron(const Matrix& a, const Matrix& b);

}  // namespace qls
