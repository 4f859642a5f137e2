#include "qls/qcore.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>
#include <stdexcept>

namespace qls {

namespace {

void require(bool cond, const char* msg) {
  if (!cond) throw std::invalid_argument(msg);
}

}  // namespace

// ---------------------------------------------------------------------------
// States
// ---------------------------------------------------------------------------

PureState::PureState(int n, Vector amps) : n_qubits(n), amplitudes(std::move(amps)) {
  require(amplitudes.size() == dim_of(n), "PureState: amplitude length != 2^n");
  require(std::abs(amplitudes.norm() - 1.0) < 1e-9, "PureState: not normalized");
}

PureState PureState::basis_state(int n, long index) {
  Vector v = Vector::Zero(dim_of(n));
  v(index) = 1.0;
  return PureState(n, std::move(v));
}

DensityMatrix::DensityMatrix(int n, Matrix m) : n_qubits(n), matrix(std::move(m)) {
  const long d = dim_of(n);
  require(matrix.rows() == d && matrix.cols() == d, "DensityMatrix: wrong dimension");
  require((matrix - matrix.adjoint()).cwiseAbs().maxCoeff() < 1e-9, "DensityMatrix: not Hermitian");
  require(std::abs(matrix.trace().real() - 1.0) < 1e-9 && std::abs(matrix.trace().imag()) < 1e-9,
          "DensityMatrix: trace != 1");
}

DensityMatrix DensityMatrix::maximally_mixed(int n) {
  const long d = dim_of(n);
  return DensityMatrix(n, Matrix::Identity(d, d) / static_cast<double>(d));
}

DensityMatrix DensityMatrix::from_pure(const PureState& psi) {
  return DensityMatrix(psi.n_qubits, psi.density());
}

// ---------------------------------------------------------------------------
// Pauli strings
// ---------------------------------------------------------------------------

PauliString::PauliString(std::vector<PauliLetter> ls, int sgn)
    : n_qubits(static_cast<int>(ls.size())), letters(std::move(ls)), sign(sgn) {
  require(sign == 1 || sign == -1, "PauliString: sign must be +1 or -1");
}

PauliString PauliString::from_code(int n, long code, int sign) {
  std::vector<PauliLetter> ls(n);
  for (int q = n - 1; q >= 0; --q) {
    ls[q] = static_cast<PauliLetter>(code & 3);
    code >>= 2;
  }
  require(code == 0, "PauliString: code out of range");
  return PauliString(std::move(ls), sign);
}

long PauliString::code() const {
  long c = 0;
  for (PauliLetter l : letters) c = 4 * c + static_cast<long>(l);
  return c;
}

bool PauliString::is_identity() const {
  for (PauliLetter l : letters)
    if (l != PauliLetter::I) return false;
  return true;
}

std::string PauliString::str() const {
  std::string s(sign > 0 ? "+" : "-");
  for (PauliLetter l : letters) s += "IXYZ"[static_cast<int>(l)];
  return s;
}

const Eigen::Matrix2cd& pauli_letter_matrix(PauliLetter p) {
  static const std::array<Eigen::Matrix2cd, 4> mats = [] {
    std::array<Eigen::Matrix2cd, 4> m;
    const Complex i(0, 1);
    m[0] << 1, 0, 0, 1;
    m[1] << 0, 1, 1, 0;
    m[2] << 0, -i, i, 0;
    m[3] << 1, 0, 0, -1;
    return m;
  }();
  return mats[static_cast<int>(p)];
}

Matrix pauli_matrix(const PauliString& p) {
  Matrix out = Matrix::Identity(1, 1);
  for (PauliLetter l : p.letters) out = kron(out, pauli_letter_matrix(l)).eval();
  return static_cast<double>(p.sign) * out;
}

double pauli_expectation(const PauliString& p, const DensityMatrix& rho) {
  const int n = p.n_qubits;
  require(n == rho.n_qubits, "pauli_expectation: qubit count mismatch");
  const long d = rho.dim();
  Complex acc = 0;
  // Each letter is a permutation times a phase: P|c> = phase(c) |c ^ flip>.
  long flip = 0;
  for (int q = 0; q < n; ++q) {
    PauliLetter l = p.letters[q];
    if (l == PauliLetter::X || l == PauliLetter::Y) flip |= (1L << (n - 1 - q));
  }
  const Complex i(0, 1);
  for (long c = 0; c < d; ++c) {
    Complex phase = 1.0;
    for (int q = 0; q < n; ++q) {
      const int bit = static_cast<int>((c >> (n - 1 - q)) & 1);
      switch (p.letters[q]) {
        case PauliLetter::I:
          break;
        case PauliLetter::X:
          break;
        case PauliLetter::Y:
          phase *= bit ? -i : i;
          break;
        case PauliLetter::Z:
          if (bit) phase = -phase;
          break;
      }
    }
    acc += phase * rho.matrix(c, c ^ flip);
  }
  acc *= static_cast<double>(p.sign);
  return acc.real();
}

std::vector<double> all_pauli_expectations(const DensityMatrix& rho) {
  const int n = rho.n_qubits;
  // t[code] = Tr(P_code rho), built qubit by qubit: a 2x2 Pauli transform of
  // the matrix indices of each qubit in turn.
  // We use the recursion over the first qubit: write rho in 2x2 blocks
  // rho = [[A,B],[C,D]]; then Tr((sigma (x) Q) rho) = Tr(Q (A+D)) for I,
  // Tr(Q (B+C)) for X, Tr(Q i(B-C)) for Y, Tr(Q (A-D)) for Z.
  struct Rec {
    static std::vector<double> go(const Matrix& m, int n) {
      if (n == 0) return {m(0, 0).real()};
      const long h = m.rows() / 2;
      const Matrix a = m.topLeftCorner(h, h), b = m.topRightCorner(h, h);
      const Matrix c = m.bottomLeftCorner(h, h), d = m.bottomRightCorner(h, h);
      const Complex i(0, 1);
      std::vector<double> out;
      out.reserve(1L << (2 * n));
      for (const Matrix& sub : {Matrix(a + d), Matrix(b + c), Matrix(i * (b - c)), Matrix(a - d)}) {
        auto part = go(sub, n - 1);
        out.insert(out.end(), part.begin(), part.end());
      }
      return out;
    }
  };
  return Rec::go(rho.matrix, n);
}

// ---------------------------------------------------------------------------
// Measurements
// ---------------------------------------------------------------------------

Povm Povm::computational_basis(int n_qubits) {
  const long d = dim_of(n_qubits);
  Povm m;
  m.elements.reserve(d);
  for (long i = 0; i < d; ++i) {
    Matrix e = Matrix::Zero(d, d);
    e(i, i) = 1.0;
    m.elements.push_back(std::move(e));
  }
  return m;
}

Povm Povm::two_outcome(const Matrix& effect) {
  Povm m;
  m.elements.push_back(effect);
  m.elements.push_back(Matrix::Identity(effect.rows(), effect.cols()) - effect);
  return m;
}

void Povm::validate(double tol) const {
  require(!elements.empty(), "Povm: empty");
  Matrix sum = Matrix::Zero(dim(), dim());
  for (const Matrix& e : elements) {
    require(e.rows() == dim() && e.cols() == dim(), "Povm: mixed dimensions");
    require((e - e.adjoint()).cwiseAbs().maxCoeff() < tol, "Povm: element not Hermitian");
    Eigen::SelfAdjointEigenSolver<Matrix> es(e, Eigen::EigenvaluesOnly);
    require(es.eigenvalues().minCoeff() > -tol, "Povm: element not PSD");
    sum += e;
  }
  require((sum - Matrix::Identity(dim(), dim())).cwiseAbs().maxCoeff() < tol,
          "Povm: elements do not sum to identity");
}

std::vector<double> povm_probabilities(const DensityMatrix& rho, const Povm& m) {
  require(m.dim() == rho.dim(), "povm: dimension mismatch");
  std::vector<double> probs;
  probs.reserve(m.elements.size());
  double total = 0.0;
  for (const Matrix& e : m.elements) {
    double p = (e * rho.matrix).trace().real();
    if (p < -1e-9) throw std::runtime_error("povm: negative outcome probability");
    p = std::max(p, 0.0);
    probs.push_back(p);
    total += p;
  }
  if (std::abs(total - 1.0) > 1e-9) throw std::runtime_error("povm: probabilities do not sum to 1");
  return probs;
}

int measure_povm(const DensityMatrix& rho, const Povm& m, SeededRng& rng) {
  return rng.discrete(povm_probabilities(rho, m));
}

Rank1Povm rank1_refine(const Povm& m) {
  Rank1Povm out;
  for (int s = 0; s < static_cast<int>(m.elements.size()); ++s) {
    Eigen::SelfAdjointEigenSolver<Matrix> es(m.elements[s]);
    for (long j = 0; j < es.eigenvalues().size(); ++j) {
      const double w = es.eigenvalues()(j);
      if (w < 1e-12) continue;
      const Vector v = es.eigenvectors().col(j);
      out.povm.elements.push_back(w * (v * v.adjoint()));
      out.parent.push_back(s);
    }
  }
  return out;
}

int swap_test(const DensityMatrix& rho1, const DensityMatrix& rho2, SeededRng& rng) {
  require(rho1.dim() == rho2.dim(), "swap_test: dimension mismatch");
  const double overlap = (rho1.matrix * rho2.matrix).trace().real();
  const double p0 = (1.0 + overlap) / 2.0;
  return rng.bernoulli(p0) ? 0 : 1;
}

// ---------------------------------------------------------------------------
// Bell-basis measurement
// ---------------------------------------------------------------------------

int bell_pauli_eigenvalue(PauliLetter p, BellLabel beta) {
  // Rows P in {I,X,Y,Z}, columns beta in {Phi+, Phi-, Psi+, Psi-}.
  static const int table[4][4] = {
      {+1, +1, +1, +1},
      {+1, -1, +1, -1},
      {-1, +1, +1, -1},
      {+1, +1, -1, -1},
  };
  return table[static_cast<int>(p)][static_cast<int>(beta)];
}

namespace {

// The four Bell statevectors on (qubit, partner), index order |00>,|01>,|10>,|11>.
const std::array<Eigen::Vector4cd, 4>& bell_vectors() {
  static const std::array<Eigen::Vector4cd, 4> vs = [] {
    const double s = 1.0 / std::sqrt(2.0);
    std::array<Eigen::Vector4cd, 4> v;
    v[0] << s, 0, 0, s;    // Phi+
    v[1] << s, 0, 0, -s;   // Phi-
    v[2] << 0, s, s, 0;    // Psi+
    v[3] << 0, s, -s, 0;   // Psi-
    return v;
  }();
  return vs;
}

// Projector onto Bell state beta on the pair (j, j+n) of a 2n-qubit register.
Matrix bell_pair_projector(int two_n, int j, BellLabel beta) {
  const int n = two_n / 2;
  const long d = 1L << two_n;
  const Eigen::Vector4cd& v = bell_vectors()[static_cast<int>(beta)];
  Matrix proj = Matrix::Zero(d, d);
  const long bit1 = 1L << (two_n - 1 - j);
  const long bit2 = 1L << (two_n - 1 - (j + n));
  for (long r = 0; r < d; ++r) {
    const int rb = static_cast<int>(((r & bit1) ? 2 : 0) | ((r & bit2) ? 1 : 0));
    const long rbase = r & ~(bit1 | bit2);
    for (int cb = 0; cb < 4; ++cb) {
      const long c = rbase | ((cb & 2) ? bit1 : 0) | ((cb & 1) ? bit2 : 0);
      proj(r, c) = v(rb) * std::conj(v(cb));
    }
  }
  return proj;
}

}  // namespace

std::vector<BellLabel> bell_basis_measure(const DensityMatrix& pair_state, SeededRng& rng) {
  const int two_n = pair_state.n_qubits;
  require(two_n % 2 == 0, "bell_basis_measure: odd qubit count");
  const int n = two_n / 2;
  Matrix state = pair_state.matrix;
  double norm = 1.0;
  std::vector<BellLabel> outcome(n);
  for (int j = 0; j < n; ++j) {
    std::array<double, 4> probs{};
    std::array<Matrix, 4> post;
    for (int b = 0; b < 4; ++b) {
      const Matrix proj = bell_pair_projector(two_n, j, static_cast<BellLabel>(b));
      post[b] = proj * state * proj;
      probs[b] = std::max(post[b].trace().real() / norm, 0.0);
    }
    const int b = rng.discrete(probs);
    outcome[j] = static_cast<BellLabel>(b);
    state = std::move(post[b]);
    norm = state.trace().real();
    if (norm <= 0) throw std::runtime_error("bell_basis_measure: vanishing branch");
  }
  return outcome;
}

double bell_product_probability(int n_qubits, const std::vector<double>& pauli_exp,
                                const std::vector<BellLabel>& outcome) {
  require(static_cast<int>(outcome.size()) == n_qubits, "bell: outcome length mismatch");
  // Pr(beta) = 4^{-n} sum_P prod_j lambda(P_j, beta_j) Tr(P rho)^2.
  double sum = 0.0;
  const long codes = 1L << (2 * n_qubits);
  for (long code = 0; code < codes; ++code) {
    double term = pauli_exp[code] * pauli_exp[code];
    long c = code;
    for (int q = n_qubits - 1; q >= 0; --q) {
      term *= bell_pauli_eigenvalue(static_cast<PauliLetter>(c & 3), outcome[q]);
      c >>= 2;
    }
    sum += term;
  }
  return sum / static_cast<double>(codes);
}

std::vector<BellLabel> bell_sample_product(int n_qubits, const std::vector<double>& pauli_exp,
                                           SeededRng& rng) {
  require(static_cast<long>(pauli_exp.size()) == (1L << (2 * n_qubits)),
          "bell: expectation table size mismatch");
  // Sequential conditional sampling over qubits. After fixing the first m
  // Bell outcomes, the prefix weight is sum over the first m Pauli letters of
  // prod lambda * s(tail), where s(tail) = sum over remaining letters of
  // Tr(P rho)^2. We keep the vector of tail sums indexed by the first-m Pauli
  // prefix, contracted one qubit at a time.
  const long codes = 1L << (2 * n_qubits);
  // tail[prefix_code] for prefix length m, starting at m = n (squared table).
  // Marginalizing the Bell outcome of a later pair keeps only the identity
  // letter there (the lambda rows for X, Y, Z each sum to zero), so the
  // contraction picks the l = I slot rather than summing all four.
  std::vector<double> tail(codes);
  for (long i = 0; i < codes; ++i) tail[i] = pauli_exp[i] * pauli_exp[i];
  std::vector<std::vector<double>> tails(n_qubits + 1);
  tails[n_qubits] = std::move(tail);
  for (int m = n_qubits; m > 0; --m) {
    const std::vector<double>& t = tails[m];
    std::vector<double> up(t.size() / 4);
    for (std::size_t i = 0; i < up.size(); ++i) up[i] = t[4 * i];
    tails[m - 1] = std::move(up);
  }
  std::vector<BellLabel> outcome(n_qubits);
  // lambda-weighted prefix sums over the first m qubits' Pauli letters.
  std::vector<double> weighted = {1.0};
  for (int m = 0; m < n_qubits; ++m) {
    std::array<double, 4> probs{};
    std::array<std::vector<double>, 4> next;
    for (int b = 0; b < 4; ++b) {
      next[b].resize(weighted.size() * 4);
      double total = 0.0;
      const std::vector<double>& t = tails[m + 1];
      for (std::size_t i = 0; i < weighted.size(); ++i) {
        for (int l = 0; l < 4; ++l) {
          const double w = weighted[i] *
                           bell_pauli_eigenvalue(static_cast<PauliLetter>(l),
                                                 static_cast<BellLabel>(b));
          next[b][4 * i + l] = w;
          total += w * t[4 * i + l];
        }
      }
      probs[b] = std::max(total, 0.0);
    }
    const double z = probs[0] + probs[1] + probs[2] + probs[3];
    if (z <= 0) throw std::runtime_error("bell_sample_product: vanishing prefix");
    for (double& p : probs) p /= z;
    const int b = rng.discrete(probs);
    outcome[m] = static_cast<BellLabel>(b);
    weighted = std::move(next[b]);
  }
  return outcome;
}

// ---------------------------------------------------------------------------
// Channels and register ops
// ---------------------------------------------------------------------------

ChannelSpec ChannelSpec::depolarizing(int n) {
  ChannelSpec c;
  c.kind = ChannelKind::Depolarizing;
  c.n_qubits = n;
  return c;
}

ChannelSpec ChannelSpec::conjugation(int n, Matrix a) {
  ChannelSpec c;
  c.kind = ChannelKind::Conjugation;
  c.n_qubits = n;
  require(a.rows() == dim_of(n) && a.cols() == dim_of(n), "ChannelSpec: conjugator dimension");
  c.conjugator = std::move(a);
  return c;
}

DensityMatrix apply_channel(const ChannelSpec& c, const DensityMatrix& rho, int ancilla) {
  require(rho.n_qubits == c.n_qubits + ancilla, "apply_channel: qubit count mismatch");
  if (c.kind == ChannelKind::Conjugation) {
    const Matrix a = ancilla == 0
                         ? *c.conjugator
                         : kron(*c.conjugator, Matrix::Identity(dim_of(ancilla), dim_of(ancilla)));
    return DensityMatrix(rho.n_qubits, a * rho.matrix * a.adjoint());
  }
  // Depolarizing: replace the first n qubits by rho_mm, keep the ancilla part.
  std::vector<int> keep(ancilla);
  for (int i = 0; i < ancilla; ++i) keep[i] = c.n_qubits + i;
  if (ancilla == 0) return DensityMatrix::maximally_mixed(c.n_qubits);
  const DensityMatrix aux = partial_trace(rho, keep);
  const long dsys = dim_of(c.n_qubits);
  return DensityMatrix(rho.n_qubits,
                       kron(Matrix::Identity(dsys, dsys) / static_cast<double>(dsys), aux.matrix));
}

DensityMatrix partial_trace(const DensityMatrix& rho, const std::vector<int>& keep) {
  const int n = rho.n_qubits;
  const int nk = static_cast<int>(keep.size());
  std::vector<int> traced;
  {
    std::vector<bool> kept(n, false);
    for (int q : keep) {
      require(q >= 0 && q < n && !kept[q], "partial_trace: bad keep set");
      kept[q] = true;
    }
    for (int q = 0; q < n; ++q)
      if (!kept[q]) traced.push_back(q);
  }
  const long dk = 1L << nk;
  const long dt = 1L << traced.size();
  Matrix out = Matrix::Zero(dk, dk);
  auto full_index = [&](long kbits, long tbits) {
    long idx = 0;
    for (int i = 0; i < nk; ++i)
      if ((kbits >> (nk - 1 - i)) & 1) idx |= 1L << (n - 1 - keep[i]);
    for (std::size_t i = 0; i < traced.size(); ++i)
      if ((tbits >> (traced.size() - 1 - i)) & 1) idx |= 1L << (n - 1 - traced[i]);
    return idx;
  };
  for (long r = 0; r < dk; ++r)
    for (long c = 0; c < dk; ++c)
      for (long t = 0; t < dt; ++t) out(r, c) += rho.matrix(full_index(r, t), full_index(c, t));
  return DensityMatrix(nk, std::move(out));
}

Matrix swap_operator(int n_qubits) {
  const long d = dim_of(n_qubits);
  Matrix s = Matrix::Zero(d * d, d * d);
  for (long i = 0; i < d; ++i)
    for (long j = 0; j < d; ++j) s(i * d + j, j * d + i) = 1.0;
  return s;
}

Matrix kron(const Matrix& a, const Matrix& b) {
  Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (long i = 0; i < a.rows(); ++i)
    for (long j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

}  // namespace qls
