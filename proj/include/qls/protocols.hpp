#pragma once

#include "qls/ensembles.hpp"

namespace qls {

// ---------------------------------------------------------------------------
// Oracles
// ---------------------------------------------------------------------------

// Produces fresh i.i.d. copies of a fixed hidden state and counts them.
struct StateSource {
  DensityMatrix hidden;
  long copies_consumed = 0;

  explicit StateSource(DensityMatrix rho) : hidden(std::move(rho)) {}
  const DensityMatrix& draw() {
    ++copies_consumed;
    return hidden;
  }
};

// Applies a fixed hidden channel to caller-supplied inputs and counts queries.
struct ChannelOracle {
  ChannelSpec hidden;
  long queries = 0;

  explicit ChannelOracle(ChannelSpec spec) : hidden(std::move(spec)) {}
  DensityMatrix query(const DensityMatrix& input, int ancilla = 0) {
    ++queries;
    return apply_channel(hidden, input, ancilla);
  }
};

// ---------------------------------------------------------------------------
// Classical shadows
// ---------------------------------------------------------------------------

enum class ShadowMode { Clifford, Haar };

struct ShadowSnapshot {
  Matrix basis;  // measurement unitary U
  long outcome;  // observed basis index b

  // Linear-inversion reconstruction (d+1) U^dag |b><b| U - I; trace 1.
  Matrix reconstruction() const;
};

ShadowSnapshot shadow_measure(const DensityMatrix& rho, ShadowMode mode, SeededRng& rng);
std::vector<ShadowSnapshot> classical_shadow_collect(StateSource& src, long t, ShadowMode mode,
                                                     SeededRng& rng);

// Mean (batches == 1) or median-of-means (batches > 1) of Tr(obs * snapshot).
double classical_shadow_estimate(const std::vector<ShadowSnapshot>& snapshots, const Matrix& obs,
                                 int batches = 1);

// Entrywise average of the snapshot reconstructions.
Matrix shadow_mean_reconstruction(const std::vector<ShadowSnapshot>& snapshots);

inline constexpr int kShadowBatches = 10;

// ---------------------------------------------------------------------------
// Pauli estimators
// ---------------------------------------------------------------------------

// Measures each Pauli's +-1 eigenbasis shots_per_obs times; consumes
// |paulis| * shots_per_obs copies; estimates are unbiased for Tr(P rho).
std::vector<double> naive_pauli_estimate(StateSource& src, const std::vector<PauliString>& paulis,
                                         long shots_per_obs, SeededRng& rng);

// Bell-basis two-copy estimator of Tr(P rho)^2 for every unsigned Pauli code
// at once; consumes 2 * pairs copies and one n-qubit memory register.
std::vector<double> bell_all_pauli_sq_estimate(StateSource& src, long pairs, SeededRng& rng);

// Same estimator restricted to a list of Paulis (all reuse the same pairs).
std::vector<double> bell_pauli_sq_estimate(StateSource& src,
                                           const std::vector<PauliString>& paulis, long pairs,
                                           SeededRng& rng);

// ---------------------------------------------------------------------------
// Distribution and purity testing
// ---------------------------------------------------------------------------

enum class UniformityVerdict { Uniform, Far };

// Collision tester: Far iff the pairwise collision count exceeds
// binom(T,2) * (1 + eps^2/2) / d.
UniformityVerdict l2_uniformity_test(const std::vector<long>& samples, long d, double eps);

enum class PurityVerdict { Pure, MaximallyMixed };

inline constexpr double kPurityTestEps = 1.0;
inline constexpr long kPurityBudgetFactor = 12;  // T = 12 * 2^(n/2)

// Measures every copy in one Haar-random basis and collision-tests the
// outcomes; memoryless; consumes T copies.
PurityVerdict purity_test(StateSource& src, long t, SeededRng& rng);

// ---------------------------------------------------------------------------
// Channel distinguishers
// ---------------------------------------------------------------------------

enum class ChannelVerdict { Depolarizing, FixedConjugation };

// Queries the channel T times on |0^n> and purity-tests the outputs.
ChannelVerdict channel_distinguish_memoryless(ChannelOracle& oracle, long t, SeededRng& rng);

inline constexpr int kSwapTestRepeats = 5;

// Per repeat, queries the channel twice on |0^n> and swap-tests the pair;
// FixedConjugation iff every swap test returns 0. Uses one n-qubit memory.
ChannelVerdict channel_distinguish_memory(ChannelOracle& oracle, int repeats, SeededRng& rng);

// ---------------------------------------------------------------------------
// Tomography and symmetry classification
// ---------------------------------------------------------------------------

inline constexpr long kTomographyBudgetPerDim = 64;  // T = 64 * 2^n for eps = 1/5

// Shadow average -> Hermitize -> top eigenvector; assumes the hidden state is
// pure; consumes T copies.
PureState pure_state_tomography(StateSource& src, long t, ShadowMode mode, SeededRng& rng);

enum class SymmetryClass { Unitary, Orthogonal, Symplectic };

// Probe states |0^n>, |+>|0^(n-1)>, |->|0^(n-1)>.
std::array<PureState, 3> symmetry_probe_states(int n);

// Decision thresholds on the tomographed channel outputs phi_1..3:
// Symplectic iff |phi_2^T J phi_3| > 1/2, else Orthogonal iff
// |phi_1^T phi_1| > 1/2, else Unitary. Strict inequalities, so exact ties
// resolve to the less symmetric class.
SymmetryClass symmetry_decide(const Vector& phi1, const Vector& phi2, const Vector& phi3);

// Full protocol: tomographs the channel output on each probe state with
// T_per_state copies (3 * T_per_state queries total).
SymmetryClass symmetry_classify(ChannelOracle& oracle, long t_per_state, SeededRng& rng);

// Tomography-bypassed variant using the exact conjugated probe states.
SymmetryClass symmetry_classify_exact(const Matrix& conjugator, int n);

}  // namespace qls
