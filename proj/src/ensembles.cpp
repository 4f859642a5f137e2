#include "qls/ensembles.hpp"

#include <Eigen/QR>
#include <stdexcept>

namespace qls {

namespace {

void require(bool cond, const char* msg) {
  if (!cond) throw std::invalid_argument(msg);
}

Matrix complex_ginibre(long rows, long cols, SeededRng& rng) {
  Matrix g(rows, cols);
  for (long i = 0; i < rows; ++i)
    for (long j = 0; j < cols; ++j) g(i, j) = Complex(rng.gaussian(), rng.gaussian());
  return g;
}

}  // namespace

void GroupElement::validate(double tol) const {
  const Matrix& a = matrix;
  require(a.rows() == dim && a.cols() == dim, "GroupElement: wrong dimension");
  const double unitary_err =
      (a.adjoint() * a - Matrix::Identity(dim, dim)).cwiseAbs().maxCoeff();
  if (unitary_err > tol) throw std::runtime_error("GroupElement: not unitary");
  if (group == GroupKind::Orthogonal) {
    if (a.imag().cwiseAbs().maxCoeff() > 1e-12)
      throw std::runtime_error("GroupElement: orthogonal matrix has complex entries");
  }
  if (group == GroupKind::Symplectic) {
    const Matrix j = symplectic_form(dim);
    if ((a * j * a.transpose() - j).cwiseAbs().maxCoeff() > tol)
      throw std::runtime_error("GroupElement: symplectic relation violated");
  }
}

Matrix symplectic_form(long d) {
  require(d % 2 == 0 && d >= 2, "symplectic_form: d must be even");
  const long h = d / 2;
  Matrix j = Matrix::Zero(d, d);
  for (long i = 0; i < h; ++i) {
    j(i, i + h) = 1.0;
    j(i + h, i) = -1.0;
  }
  return j;
}

GroupElement haar_unitary(long d, SeededRng& rng) {
  require(d >= 1, "haar_unitary: d must be positive");
  Matrix g = complex_ginibre(d, d, rng);
  Eigen::HouseholderQR<Matrix> qr(g);
  Matrix q = qr.householderQ();
  Matrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  // Phase correction: make R's diagonal positive real so Q is exactly Haar.
  for (long i = 0; i < d; ++i) {
    const Complex rd = r(i, i);
    const double mag = std::abs(rd);
    q.col(i) *= (mag > 0 ? rd / mag : Complex(1, 0));
  }
  return {GroupKind::Unitary, d, std::move(q)};
}

GroupElement haar_orthogonal(long d, SeededRng& rng) {
  require(d >= 1, "haar_orthogonal: d must be positive");
  Eigen::MatrixXd g(d, d);
  for (long i = 0; i < d; ++i)
    for (long j = 0; j < d; ++j) g(i, j) = rng.gaussian();
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(g);
  Eigen::MatrixXd q = qr.householderQ();
  Eigen::MatrixXd r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (long i = 0; i < d; ++i)
    if (r(i, i) < 0) q.col(i) *= -1.0;
  return {GroupKind::Orthogonal, d, q.cast<Complex>()};
}

GroupElement haar_symplectic(long d, SeededRng& rng) {
  require(d >= 2 && d % 2 == 0, "haar_symplectic: d must be even and >= 2");
  const long h = d / 2;
  const Matrix j = symplectic_form(d);
  // Quaternionic Gram-Schmidt: each accepted column q_s brings its partner
  // p_s = -J conj(q_s); the partner is automatically unit, orthogonal to q_s
  // and to all previously accepted columns.
  Matrix s(d, d);
  std::vector<Vector> accepted;
  for (long col = 0; col < h; ++col) {
    Vector v;
    while (true) {
      v = complex_ginibre(d, 1, rng).col(0);
      for (const Vector& u : accepted) v -= u.dot(v) * u;
      const double norm = v.norm();
      if (norm > 1e-8) {
        v /= norm;
        break;
      }
    }
    Vector p = -j * v.conjugate();
    s.col(col) = v;
    s.col(col + h) = p;
    accepted.push_back(std::move(v));
    accepted.push_back(std::move(p));
  }
  return {GroupKind::Symplectic, d, std::move(s)};
}

PureState haar_pure_state(int n, SeededRng& rng) {
  require(n >= 1, "haar_pure_state: n must be positive");
  Vector v = complex_ginibre(dim_of(n), 1, rng).col(0);
  v.normalize();
  return PureState(n, std::move(v));
}

PauliString random_signed_pauli(int n, SeededRng& rng) {
  require(n >= 1, "random_signed_pauli: n must be positive");
  const long code = 1 + static_cast<long>(rng.below((1uLL << (2 * n)) - 1));
  return PauliString::from_code(n, code, rng.bernoulli(0.5) ? 1 : -1);
}

}  // namespace qls
