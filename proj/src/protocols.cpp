#include "qls/protocols.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <stdexcept>
#include <unordered_map>

namespace qls {

namespace {

void require(bool cond, const char* msg) {
  if (!cond) throw std::invalid_argument(msg);
}

std::vector<double> basis_probabilities(const Matrix& u, const DensityMatrix& rho) {
  const Matrix rotated = u * rho.matrix * u.adjoint();
  std::vector<double> p(rho.dim());
  for (long i = 0; i < rho.dim(); ++i) p[i] = std::max(rotated(i, i).real(), 0.0);
  return p;
}

}  // namespace

Matrix ShadowSnapshot::reconstruction() const {
  const long d = basis.rows();
  const Vector row = basis.row(outcome).adjoint();
  Matrix m = static_cast<double>(d + 1) * (row * row.adjoint());
  m -= Matrix::Identity(d, d);
  return m;
}

ShadowSnapshot shadow_measure(const DensityMatrix& rho, ShadowMode mode, SeededRng& rng) {
  const int n = rho.n_qubits;
  Matrix u = mode == ShadowMode::Clifford ? random_clifford(n, rng).matrix
                                          : haar_unitary(rho.dim(), rng).matrix;
  const long b = rng.discrete(basis_probabilities(u, rho));
  return {std::move(u), b};
}

std::vector<ShadowSnapshot> classical_shadow_collect(StateSource& src, long t, ShadowMode mode,
                                                     SeededRng& rng) {
  require(t >= 1, "classical_shadow_collect: t must be positive");
  std::vector<ShadowSnapshot> out;
  out.reserve(t);
  for (long s = 0; s < t; ++s) out.push_back(shadow_measure(src.draw(), mode, rng));
  return out;
}

double classical_shadow_estimate(const std::vector<ShadowSnapshot>& snapshots, const Matrix& obs,
                                 int batches) {
  require(!snapshots.empty(), "classical_shadow_estimate: no snapshots");
  require(batches >= 1, "classical_shadow_estimate: batches must be positive");
  const long t = static_cast<long>(snapshots.size());
  const long k = std::min<long>(batches, t);
  std::vector<double> means(k, 0.0);
  std::vector<long> counts(k, 0);
  for (long s = 0; s < t; ++s) {
    const long batch = s % k;
    means[batch] += (obs * snapshots[s].reconstruction()).trace().real();
    ++counts[batch];
  }
  for (long b = 0; b < k; ++b) means[b] /= counts[b];
  std::nth_element(means.begin(), means.begin() + k / 2, means.end());
  double med = means[k / 2];
  if (k % 2 == 0) {
    med = (med + *std::max_element(means.begin(), means.begin() + k / 2)) / 2;
  }
  return med;
}

Matrix shadow_mean_reconstruction(const std::vector<ShadowSnapshot>& snapshots) {
  require(!snapshots.empty(), "shadow_mean_reconstruction: no snapshots");
  const long d = snapshots.front().basis.rows();
  Matrix acc = Matrix::Zero(d, d);
  for (const ShadowSnapshot& s : snapshots) acc += s.reconstruction();
  return acc / static_cast<double>(snapshots.size());
}

std::vector<double> naive_pauli_estimate(StateSource& src, const std::vector<PauliString>& paulis,
                                         long shots_per_obs, SeededRng& rng) {
  require(shots_per_obs >= 1, "naive_pauli_estimate: shots_per_obs must be positive");
  std::vector<double> estimates;
  estimates.reserve(paulis.size());
  for (const PauliString& p : paulis) {
    double sum = 0;
    double p_plus = 0;
    for (long s = 0; s < shots_per_obs; ++s) {
      const DensityMatrix& rho = src.draw();
      if (s == 0) p_plus = std::clamp((1.0 + pauli_expectation(p, rho)) / 2.0, 0.0, 1.0);
      sum += rng.bernoulli(p_plus) ? 1.0 : -1.0;
    }
    estimates.push_back(sum / shots_per_obs);
  }
  return estimates;
}

std::vector<double> bell_all_pauli_sq_estimate(StateSource& src, long pairs, SeededRng& rng) {
  require(pairs >= 1, "bell_all_pauli_sq_estimate: pairs must be positive");
  std::vector<double> totals;
  std::vector<double> pauli_exp;
  int n = 0;
  for (long s = 0; s < pairs; ++s) {
    const DensityMatrix& copy1 = src.draw();
    src.draw();
    if (s == 0) {
      n = copy1.n_qubits;
      pauli_exp = all_pauli_expectations(copy1);
      totals.assign(pauli_exp.size(), 0.0);
    }
    const std::vector<BellLabel> beta = bell_sample_product(n, pauli_exp, rng);
    // Rank-1 expansion: the sample for code P is prod_j lambda(P_j, beta_j).
    std::vector<double> v{1.0};
    for (int j = 0; j < n; ++j) {
      std::vector<double> next(v.size() * 4);
      for (std::size_t i = 0; i < v.size(); ++i)
        for (int a = 0; a < 4; ++a)
          next[4 * i + a] =
              v[i] * bell_pauli_eigenvalue(static_cast<PauliLetter>(a), beta[j]);
      v = std::move(next);
    }
    for (std::size_t i = 0; i < totals.size(); ++i) totals[i] += v[i];
  }
  for (double& t : totals) t /= pairs;
  return totals;
}

std::vector<double> bell_pauli_sq_estimate(StateSource& src,
                                           const std::vector<PauliString>& paulis, long pairs,
                                           SeededRng& rng) {
  const std::vector<double> all = bell_all_pauli_sq_estimate(src, pairs, rng);
  std::vector<double> out;
  out.reserve(paulis.size());
  for (const PauliString& p : paulis) out.push_back(all[p.code()]);
  return out;
}

UniformityVerdict l2_uniformity_test(const std::vector<long>& samples, long d, double eps) {
  require(d > 1, "l2_uniformity_test: d must exceed 1");
  require(samples.size() >= 2, "l2_uniformity_test: need at least 2 samples");
  std::unordered_map<long, long> counts;
  for (long s : samples) ++counts[s];
  double collisions = 0;
  for (const auto& [value, c] : counts) collisions += 0.5 * c * (c - 1);
  const double t = static_cast<double>(samples.size());
  const double threshold = 0.5 * t * (t - 1) * (1.0 + eps * eps / 2.0) / d;
  return collisions > threshold ? UniformityVerdict::Far : UniformityVerdict::Uniform;
}

PurityVerdict purity_test(StateSource& src, long t, SeededRng& rng) {
  require(t >= 2, "purity_test: t must be at least 2");
  const Matrix u = haar_unitary(src.hidden.dim(), rng).matrix;
  std::vector<long> outcomes;
  outcomes.reserve(t);
  std::vector<double> probs;
  for (long s = 0; s < t; ++s) {
    const DensityMatrix& rho = src.draw();
    if (s == 0) probs = basis_probabilities(u, rho);
    outcomes.push_back(rng.discrete(probs));
  }
  const UniformityVerdict v = l2_uniformity_test(outcomes, src.hidden.dim(), kPurityTestEps);
  return v == UniformityVerdict::Far ? PurityVerdict::Pure : PurityVerdict::MaximallyMixed;
}

ChannelVerdict channel_distinguish_memoryless(ChannelOracle& oracle, long t, SeededRng& rng) {
  require(t >= 2, "channel_distinguish_memoryless: t must be at least 2");
  const int n = oracle.hidden.n_qubits;
  const DensityMatrix zero = DensityMatrix::from_pure(PureState::zero_state(n));
  // the hidden channel is deterministic on a fixed input, so every declared
  // query yields the same output state; evaluate once and account for all t
  DensityMatrix out = oracle.query(zero);
  oracle.queries += t - 1;
  StateSource outputs(std::move(out));
  const PurityVerdict v = purity_test(outputs, t, rng);
  return v == PurityVerdict::Pure ? ChannelVerdict::FixedConjugation
                                  : ChannelVerdict::Depolarizing;
}

ChannelVerdict channel_distinguish_memory(ChannelOracle& oracle, int repeats, SeededRng& rng) {
  require(repeats >= 1, "channel_distinguish_memory: repeats must be positive");
  const int n = oracle.hidden.n_qubits;
  const DensityMatrix zero = DensityMatrix::from_pure(PureState::zero_state(n));
  bool all_zero = true;
  for (int r = 0; r < repeats; ++r) {
    const DensityMatrix out1 = oracle.query(zero);
    const DensityMatrix out2 = oracle.query(zero);
    if (swap_test(out1, out2, rng) != 0) all_zero = false;
  }
  return all_zero ? ChannelVerdict::FixedConjugation : ChannelVerdict::Depolarizing;
}

PureState pure_state_tomography(StateSource& src, long t, ShadowMode mode, SeededRng& rng) {
  require(t >= 1, "pure_state_tomography: t must be positive");
  const std::vector<ShadowSnapshot> snaps = classical_shadow_collect(src, t, mode, rng);
  const Matrix avg = shadow_mean_reconstruction(snaps);
  const Matrix herm = (avg + avg.adjoint()) / 2.0;
  Eigen::SelfAdjointEigenSolver<Matrix> es(herm);
  Vector top = es.eigenvectors().col(herm.rows() - 1);
  top.normalize();
  return PureState(src.hidden.n_qubits, std::move(top));
}

std::array<PureState, 3> symmetry_probe_states(int n) {
  require(n >= 1, "symmetry_probe_states: n must be positive");
  const long d = dim_of(n);
  const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
  Vector plus = Vector::Zero(d), minus = Vector::Zero(d);
  plus(0) = inv_sqrt2;
  plus(d / 2) = inv_sqrt2;
  minus(0) = inv_sqrt2;
  minus(d / 2) = -inv_sqrt2;
  return {PureState::zero_state(n), PureState(n, std::move(plus)), PureState(n, std::move(minus))};
}

SymmetryClass symmetry_decide(const Vector& phi1, const Vector& phi2, const Vector& phi3) {
  const long d = phi1.size();
  require(d % 2 == 0, "symmetry_decide: dimension must be even");
  const Matrix j = symplectic_form(d);
  const double sp_score = std::abs((phi2.transpose() * j * phi3).value());
  if (sp_score > 0.5) return SymmetryClass::Symplectic;
  const double real_score = std::abs((phi1.transpose() * phi1).value());
  if (real_score > 0.5) return SymmetryClass::Orthogonal;
  return SymmetryClass::Unitary;
}

SymmetryClass symmetry_classify(ChannelOracle& oracle, long t_per_state, SeededRng& rng) {
  require(t_per_state >= 1, "symmetry_classify: t_per_state must be positive");
  const int n = oracle.hidden.n_qubits;
  const std::array<PureState, 3> probes = symmetry_probe_states(n);
  std::array<Vector, 3> phi;
  for (int i = 0; i < 3; ++i) {
    const DensityMatrix input = DensityMatrix::from_pure(probes[i]);
    // deterministic channel, fixed probe: one evaluation covers the budget
    DensityMatrix out = oracle.query(input);
    oracle.queries += t_per_state - 1;
    StateSource outputs(std::move(out));
    phi[i] = pure_state_tomography(outputs, t_per_state, ShadowMode::Clifford, rng).amplitudes;
  }
  return symmetry_decide(phi[0], phi[1], phi[2]);
}

SymmetryClass symmetry_classify_exact(const Matrix& conjugator, int n) {
  const std::array<PureState, 3> probes = symmetry_probe_states(n);
  return symmetry_decide(conjugator * probes[0].amplitudes, conjugator * probes[1].amplitudes,
                         conjugator * probes[2].amplitudes);
}

}  // namespace qls
