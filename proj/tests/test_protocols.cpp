#include "doctest.h"
#include "qls/protocols.hpp"

#include <cmath>

using namespace qls;

namespace {

DensityMatrix random_density(int n, SeededRng& rng, int rank = 0) {
  const long d = dim_of(n);
  const int r = rank > 0 ? rank : static_cast<int>(d);
  Matrix g(d, r);
  for (long i = 0; i < d; ++i)
    for (int j = 0; j < r; ++j) g(i, j) = Complex(rng.gaussian(), rng.gaussian());
  Matrix m = g * g.adjoint();
  m /= m.trace().real();
  return DensityMatrix(n, std::move(m));
}

double trace_distance_pure(const PureState& a, const PureState& b) {
  const Complex ov = a.amplitudes.dot(b.amplitudes);
  return std::sqrt(std::max(0.0, 1.0 - std::norm(ov)));
}

}  // namespace

TEST_CASE("naive pauli estimates") {
  SeededRng rng(41);
  const int shots = 4000;
  {
    StateSource src(DensityMatrix::from_pure(PureState::zero_state(3)));
    auto est = naive_pauli_estimate(
        src, {PauliString({PauliLetter::Z, PauliLetter::Z, PauliLetter::Z})}, shots, rng);
    CHECK(std::abs(est[0] - 1.0) < 3.0 / std::sqrt(shots));
    CHECK(src.copies_consumed == shots);
  }
  {
    StateSource src(DensityMatrix::maximally_mixed(2));
    auto est = naive_pauli_estimate(src, {PauliString({PauliLetter::X, PauliLetter::Y})}, shots,
                                    rng);
    CHECK(std::abs(est[0]) < 3.0 / std::sqrt(shots));
  }
  {
    const double eps = 0.3;
    const PauliString p({PauliLetter::X, PauliLetter::Z});
    Matrix m = (Matrix::Identity(4, 4) + eps * pauli_matrix(p)) / 4.0;
    StateSource src(DensityMatrix(2, std::move(m)));
    auto est = naive_pauli_estimate(src, {p}, shots, rng);
    CHECK(std::abs(est[0] - eps) < 3.0 / std::sqrt(shots));
  }
}

TEST_CASE("shadow snapshots reconstruct with trace one") {
  SeededRng rng(42);
  StateSource src(random_density(2, rng));
  for (ShadowMode mode : {ShadowMode::Clifford, ShadowMode::Haar}) {
    auto snaps = classical_shadow_collect(src, 50, mode, rng);
    for (const auto& s : snaps) CHECK(std::abs(s.reconstruction().trace().real() - 1.0) < 1e-9);
    CHECK(classical_shadow_estimate(snaps, Matrix::Identity(4, 4)) == doctest::Approx(1.0));
  }
  CHECK(src.copies_consumed == 100);
}

TEST_CASE("shadow estimator hits a simple expectation") {
  SeededRng rng(43);
  StateSource src(DensityMatrix::from_pure(PureState::zero_state(1)));
  auto snaps = classical_shadow_collect(src, 10000, ShadowMode::Clifford, rng);
  const Matrix z = pauli_matrix(PauliString({PauliLetter::Z}));
  CHECK(std::abs(classical_shadow_estimate(snaps, z) - 1.0) < 0.1);
  CHECK(std::abs(classical_shadow_estimate(snaps, z, kShadowBatches) - 1.0) < 0.1);
}

TEST_CASE("shadow reconstruction mean is unbiased") {
  SeededRng rng(44);
  const DensityMatrix rho = random_density(2, rng);
  StateSource src(rho);
  for (ShadowMode mode : {ShadowMode::Clifford, ShadowMode::Haar}) {
    auto snaps = classical_shadow_collect(src, 100000, mode, rng);
    const Matrix mean = shadow_mean_reconstruction(snaps);
    CHECK((mean - rho.matrix).cwiseAbs().maxCoeff() < 0.02);
  }
}

TEST_CASE("bell two-copy estimator of squared pauli expectations") {
  SeededRng rng(45);
  const int pairs = 4000;
  {
    StateSource src(DensityMatrix::from_pure(PureState::zero_state(2)));
    auto est = bell_pauli_sq_estimate(src, {PauliString({PauliLetter::Z, PauliLetter::Z})},
                                      pairs, rng);
    CHECK(std::abs(est[0] - 1.0) < 3.0 / std::sqrt(pairs));
    CHECK(src.copies_consumed == 2 * pairs);
  }
  {
    StateSource src(DensityMatrix::maximally_mixed(2));
    auto est = bell_pauli_sq_estimate(src, {PauliString({PauliLetter::X, PauliLetter::Z})},
                                      pairs, rng);
    CHECK(std::abs(est[0]) < 3.0 / std::sqrt(pairs));
  }
}

TEST_CASE("bell estimator is unbiased on random states") {
  SeededRng rng(46);
  for (int rep = 0; rep < 10; ++rep) {
    const int n = 1 + rng.below(2);
    const DensityMatrix rho = random_density(n, rng);
    const auto exact = all_pauli_expectations(rho);
    StateSource src(rho);
    const int pairs = 20000;
    const auto est = bell_all_pauli_sq_estimate(src, pairs, rng);
    for (std::size_t c = 1; c < est.size(); ++c) {
      const double truth = exact[c] * exact[c];
      // Per-sample variance of a +-1-valued product is at most 1.
      CHECK(std::abs(est[c] - truth) < 4.0 / std::sqrt(pairs));
    }
  }
}

TEST_CASE("bell and naive estimators agree on eigenstates") {
  SeededRng rng(47);
  const int shots = 20000, pairs = 20000;
  for (long index : {0L, 3L}) {
    StateSource src1(DensityMatrix::from_pure(PureState::basis_state(2, index)));
    StateSource src2(DensityMatrix::from_pure(PureState::basis_state(2, index)));
    const PauliString p({PauliLetter::Z, PauliLetter::Z});
    const double naive = naive_pauli_estimate(src1, {p}, shots, rng)[0];
    const double bell = bell_pauli_sq_estimate(src2, {p}, pairs, rng)[0];
    const double sigma = std::sqrt(1.0 / shots + 1.0 / pairs);
    CHECK(std::abs(bell - naive * naive) < 4 * sigma + 1e-6);
  }
}

TEST_CASE("collision uniformity tester") {
  {
    std::vector<long> same(100, 7);
    CHECK(l2_uniformity_test(same, 16, 1.0) == UniformityVerdict::Far);
  }
  SeededRng rng(48);
  const long d = 256;
  const long t = 8 * 16;  // 8 sqrt(d)
  int uniform_ok = 0, far_ok = 0;
  for (int rep = 0; rep < 1000; ++rep) {
    std::vector<long> u, half;
    for (long s = 0; s < t; ++s) {
      u.push_back(rng.below(d));
      half.push_back(2 * rng.below(d / 2));
    }
    uniform_ok += l2_uniformity_test(u, d, 1.0) == UniformityVerdict::Uniform;
    far_ok += l2_uniformity_test(half, d, 1.0) == UniformityVerdict::Far;
  }
  CHECK(uniform_ok >= 850);
  CHECK(far_ok >= 850);
}

TEST_CASE("purity test separates pure from maximally mixed") {
  SeededRng rng(49);
  const int n = 4;
  const long t = kPurityBudgetFactor << (n / 2);
  int ok_mm = 0, ok_pure = 0;
  const int trials = 400;
  for (int rep = 0; rep < trials; ++rep) {
    {
      StateSource src(DensityMatrix::maximally_mixed(n));
      ok_mm += purity_test(src, t, rng) == PurityVerdict::MaximallyMixed;
      CHECK(src.copies_consumed == t);
    }
    {
      StateSource src(DensityMatrix::from_pure(haar_pure_state(n, rng)));
      ok_pure += purity_test(src, t, rng) == PurityVerdict::Pure;
    }
  }
  CHECK(ok_mm >= 2 * trials / 3);
  CHECK(ok_pure >= 2 * trials / 3);
}

TEST_CASE("memoryless channel distinguisher") {
  SeededRng rng(50);
  const int n = 4;
  const long t = kPurityBudgetFactor << (n / 2);
  int ok_d = 0, ok_c = 0, ok_o = 0;
  const int trials = 200;
  for (int rep = 0; rep < trials; ++rep) {
    {
      ChannelOracle oracle(ChannelSpec::depolarizing(n));
      ok_d += channel_distinguish_memoryless(oracle, t, rng) == ChannelVerdict::Depolarizing;
      CHECK(oracle.queries == t);
    }
    {
      ChannelOracle oracle(
          ChannelSpec::conjugation(n, haar_unitary(dim_of(n), rng).matrix));
      ok_c += channel_distinguish_memoryless(oracle, t, rng) == ChannelVerdict::FixedConjugation;
    }
    {
      ChannelOracle oracle(
          ChannelSpec::conjugation(n, haar_orthogonal(dim_of(n), rng).matrix));
      ok_o += channel_distinguish_memoryless(oracle, t, rng) == ChannelVerdict::FixedConjugation;
    }
  }
  CHECK(ok_d >= 2 * trials / 3);
  CHECK(ok_c >= 2 * trials / 3);
  CHECK(ok_o >= 2 * trials / 3);
}

TEST_CASE("swap-test channel distinguisher with memory") {
  SeededRng rng(51);
  const int n = 4;
  {
    ChannelOracle oracle(ChannelSpec::conjugation(n, haar_unitary(dim_of(n), rng).matrix));
    for (int rep = 0; rep < 50; ++rep)
      CHECK(channel_distinguish_memory(oracle, kSwapTestRepeats, rng) ==
            ChannelVerdict::FixedConjugation);
    CHECK(oracle.queries == 50 * 2 * kSwapTestRepeats);
  }
  {
    int ok = 0;
    const int trials = 400;
    for (int rep = 0; rep < trials; ++rep) {
      ChannelOracle oracle(ChannelSpec::depolarizing(n));
      ok += channel_distinguish_memory(oracle, kSwapTestRepeats, rng) ==
            ChannelVerdict::Depolarizing;
    }
    // Error probability ((1 + 2^-n)/2)^5 = 0.53125^5, about 0.042.
    CHECK(ok >= static_cast<int>(trials * 0.9));
  }
}

TEST_CASE("pure state tomography") {
  SeededRng rng(52);
  const int n = 3;
  const long t = kTomographyBudgetPerDim * dim_of(n);
  const PureState hidden = PureState::zero_state(n);
  int ok = 0;
  const int trials = 200;
  for (int rep = 0; rep < trials; ++rep) {
    StateSource src(DensityMatrix::from_pure(hidden));
    const PureState est = pure_state_tomography(src, t, ShadowMode::Clifford, rng);
    CHECK(std::abs(est.amplitudes.norm() - 1.0) < 1e-9);
    ok += trace_distance_pure(est, hidden) <= 0.2;
    CHECK(src.copies_consumed == t);
  }
  CHECK(ok >= static_cast<int>(trials * 0.9));

  // Phase invariance: a global phase on the hidden state changes nothing
  // observable.
  PureState rotated = hidden;
  rotated.amplitudes *= Complex(0, 1);
  StateSource src(DensityMatrix::from_pure(rotated));
  const PureState est = pure_state_tomography(src, t, ShadowMode::Clifford, rng);
  CHECK(trace_distance_pure(est, hidden) <= 0.2);
}

TEST_CASE("exact symmetry classification") {
  SeededRng rng(53);
  // Symplectic conjugation gives |phi2^T J phi3| = 1 exactly, at any n.
  for (int n : {2, 3, 4})
    for (int rep = 0; rep < 50; ++rep)
      CHECK(symmetry_classify_exact(haar_symplectic(dim_of(n), rng).matrix, n) ==
            SymmetryClass::Symplectic);
  // Orthogonal and unitary rely on O(2^{-n/2}) concentration of the competing
  // scores, so test them at n = 5 where the fluctuations are small.
  const int n5 = 5;
  const long d5 = dim_of(n5);
  const int trials = 200;
  int ok_o = 0, ok_u = 0;
  for (int rep = 0; rep < trials; ++rep) {
    ok_o += symmetry_classify_exact(haar_orthogonal(d5, rng).matrix, n5) ==
            SymmetryClass::Orthogonal;
    ok_u += symmetry_classify_exact(haar_unitary(d5, rng).matrix, n5) ==
            SymmetryClass::Unitary;
  }
  CHECK(ok_o >= static_cast<int>(trials * 0.95));
  CHECK(ok_u >= static_cast<int>(trials * 0.9));
}

TEST_CASE("symmetry classification via tomography") {
  SeededRng rng(54);
  const int n = 3;
  const long d = dim_of(n);
  const long t = kTomographyBudgetPerDim * d;
  int ok = 0;
  const int per_class = 25;
  for (int rep = 0; rep < per_class; ++rep) {
    {
      ChannelOracle oracle(ChannelSpec::conjugation(n, haar_symplectic(d, rng).matrix));
      ok += symmetry_classify(oracle, t, rng) == SymmetryClass::Symplectic;
      CHECK(oracle.queries == 3 * t);
    }
    {
      ChannelOracle oracle(ChannelSpec::conjugation(n, haar_orthogonal(d, rng).matrix));
      ok += symmetry_classify(oracle, t, rng) == SymmetryClass::Orthogonal;
    }
    {
      ChannelOracle oracle(ChannelSpec::conjugation(n, haar_unitary(d, rng).matrix));
      ok += symmetry_classify(oracle, t, rng) == SymmetryClass::Unitary;
    }
  }
  CHECK(ok >= 2 * (3 * per_class) / 3);
}

TEST_CASE("symmetry decision thresholds") {
  // Exact ties resolve to the less symmetric class.
  Vector e0 = Vector::Zero(4);
  e0(0) = 1;
  Vector half = Vector::Zero(4);
  half(0) = 0.5;
  half(1) = 0.5;  // |half^T half| = 0.5 exactly
  CHECK(symmetry_decide(half, e0, e0) != SymmetryClass::Orthogonal);
  CHECK(symmetry_decide(e0, e0, e0) == SymmetryClass::Orthogonal);
}
