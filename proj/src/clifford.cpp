#include "qls/ensembles.hpp"

#include <cstdint>
#include <stdexcept>
#include <vector>

namespace qls {

namespace {

// GF(2) symplectic vectors over 2n coordinates packed as x | (z << n).
struct Gf2 {
  static int parity(std::uint32_t v) { return __builtin_popcount(v) & 1; }
};

// Symplectic product <(x1,z1),(x2,z2)> = x1.z2 + z1.x2 as a parity functional
// with mask z2 | (x2 << n) applied to x1 | (z1 << n).
std::uint32_t sp_mask(std::uint32_t packed, int n) {
  const std::uint32_t x = packed & ((1u << n) - 1);
  const std::uint32_t z = packed >> n;
  return z | (x << n);
}

// Solve the linear system {parity(u & mask_i) = rhs_i} over GF(2); returns a
// particular solution plus a kernel basis.
struct Gf2System {
  int vars;
  std::vector<std::uint32_t> masks;
  std::vector<int> rhs;

  std::pair<std::uint32_t, std::vector<std::uint32_t>> solve() const {
    std::vector<std::uint64_t> rows;  // mask | (rhs << 32)
    for (std::size_t i = 0; i < masks.size(); ++i)
      rows.push_back(static_cast<std::uint64_t>(masks[i]) |
                     (static_cast<std::uint64_t>(rhs[i]) << 32));
    std::vector<int> pivot_col;
    std::size_t r = 0;
    for (int c = 0; c < vars && r < rows.size(); ++c) {
      std::size_t sel = r;
      while (sel < rows.size() && !((rows[sel] >> c) & 1)) ++sel;
      if (sel == rows.size()) continue;
      std::swap(rows[r], rows[sel]);
      for (std::size_t i = 0; i < rows.size(); ++i)
        if (i != r && ((rows[i] >> c) & 1)) rows[i] ^= rows[r];
      pivot_col.push_back(c);
      ++r;
    }
    for (std::size_t i = r; i < rows.size(); ++i)
      if (rows[i] >> 32) throw std::logic_error("gf2: inconsistent system");

    std::vector<bool> is_pivot(vars, false);
    std::uint32_t particular = 0;
    for (std::size_t i = 0; i < pivot_col.size(); ++i) {
      is_pivot[pivot_col[i]] = true;
      if (rows[i] >> 32) particular |= 1u << pivot_col[i];
    }
    std::vector<std::uint32_t> kernel;
    for (int c = 0; c < vars; ++c) {
      if (is_pivot[c]) continue;
      std::uint32_t vec = 1u << c;
      for (std::size_t i = 0; i < pivot_col.size(); ++i)
        if ((rows[i] >> c) & 1) vec |= 1u << pivot_col[i];
      kernel.push_back(vec);
    }
    return {particular, kernel};
  }
};

std::uint32_t random_kernel_element(const std::vector<std::uint32_t>& kernel, SeededRng& rng) {
  std::uint32_t v = 0;
  for (std::uint32_t b : kernel)
    if (rng.bernoulli(0.5)) v ^= b;
  return v;
}

std::uint32_t random_nonzero_kernel_element(const std::vector<std::uint32_t>& kernel,
                                            SeededRng& rng) {
  while (true) {
    const std::uint32_t v = random_kernel_element(kernel, rng);
    if (v != 0) return v;
  }
}

// Heisenberg tableau: row i is the image of X_i, row i+n the image of Z_i.
struct Row {
  std::uint32_t x = 0, z = 0;
  int sign = 0;  // 1 means an overall minus
};

struct Gate {
  enum Kind { H, S, Cnot, X, Z } kind;
  int a = 0, b = 0;
};

struct Tableau {
  int n;
  std::vector<Row> rows;
  std::vector<Gate> gates;

  explicit Tableau(int n_) : n(n_), rows(2 * n_) {}

  void h(int q) {
    const std::uint32_t m = 1u << q;
    for (Row& r : rows) {
      r.sign ^= ((r.x & r.z & m) != 0);
      const std::uint32_t xq = r.x & m, zq = r.z & m;
      r.x = (r.x & ~m) | zq;
      r.z = (r.z & ~m) | xq;
    }
    gates.push_back({Gate::H, q, 0});
  }
  void s(int q) {
    const std::uint32_t m = 1u << q;
    for (Row& r : rows) {
      r.sign ^= ((r.x & r.z & m) != 0);
      r.z ^= r.x & m;
    }
    gates.push_back({Gate::S, q, 0});
  }
  void cnot(int c, int t) {
    const std::uint32_t mc = 1u << c, mt = 1u << t;
    for (Row& r : rows) {
      const bool xc = r.x & mc, zt = r.z & mt, xt = r.x & mt, zc = r.z & mc;
      r.sign ^= (xc && zt && !(xt ^ zc));
      if (xc) r.x ^= mt;
      if (zt) r.z ^= mc;
    }
    gates.push_back({Gate::Cnot, c, t});
  }
  void pauli_x(int q) {
    const std::uint32_t m = 1u << q;
    for (Row& r : rows) r.sign ^= ((r.z & m) != 0);
    gates.push_back({Gate::X, q, 0});
  }
  void pauli_z(int q) {
    const std::uint32_t m = 1u << q;
    for (Row& r : rows) r.sign ^= ((r.x & m) != 0);
    gates.push_back({Gate::Z, q, 0});
  }
  void swap(int a, int b) {
    cnot(a, b);
    cnot(b, a);
    cnot(a, b);
  }

  // Reduce row `ri` to the bare X_i generator using gates on qubits >= i,
  // assuming the row has x_i = 1 already or some support on qubits >= i.
  void eliminate_x_like(int ri, int i, bool allow_pivot) {
    Row& r0 = rows[ri];
    if (allow_pivot) {
      if (!(r0.x >> i)) {
        for (int j = i; j < n; ++j)
          if ((r0.z >> j) & 1) {
            h(j);
            break;
          }
      }
      int piv = -1;
      for (int j = i; j < n; ++j)
        if ((rows[ri].x >> j) & 1) {
          piv = j;
          break;
        }
      if (piv < 0) throw std::logic_error("clifford: degenerate tableau row");
      if (piv != i) swap(i, piv);
    }
    for (int j = i + 1; j < n; ++j) {
      const bool xj = (rows[ri].x >> j) & 1, zj = (rows[ri].z >> j) & 1;
      if (xj && zj)
        s(j);
      else if (zj)
        h(j);
    }
    for (int j = i + 1; j < n; ++j)
      if ((rows[ri].x >> j) & 1) cnot(i, j);
    if ((rows[ri].z >> i) & 1) s(i);
  }

  void reduce() {
    for (int i = 0; i < n; ++i) {
      eliminate_x_like(i, i, true);
      h(i);
      eliminate_x_like(i + n, i, false);
      h(i);
      if (rows[i].sign) pauli_z(i);
      if (rows[i + n].sign) pauli_x(i);
    }
  }
};

// Column operations realizing U := U * g^{-1}. Qubit q corresponds to bit
// (n-1-q) of the basis index.
void right_multiply_inverse(Matrix& u, const Gate& g, int n) {
  const long d = u.rows();
  const long bit_a = 1L << (n - 1 - g.a);
  const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
  switch (g.kind) {
    case Gate::H: {
      for (long c = 0; c < d; ++c) {
        if (c & bit_a) continue;
        const Vector lo = u.col(c), hi = u.col(c | bit_a);
        u.col(c) = (lo + hi) * inv_sqrt2;
        u.col(c | bit_a) = (lo - hi) * inv_sqrt2;
      }
      break;
    }
    case Gate::S: {
      // S^{-1} scales the |1> column by -i.
      const Complex mi(0, -1);
      for (long c = 0; c < d; ++c)
        if (c & bit_a) u.col(c) *= mi;
      break;
    }
    case Gate::Cnot: {
      const long bit_b = 1L << (n - 1 - g.b);
      for (long c = 0; c < d; ++c)
        if ((c & bit_a) && !(c & bit_b)) u.col(c).swap(u.col(c | bit_b));
      break;
    }
    case Gate::X: {
      for (long c = 0; c < d; ++c)
        if (!(c & bit_a)) u.col(c).swap(u.col(c | bit_a));
      break;
    }
    case Gate::Z: {
      for (long c = 0; c < d; ++c)
        if (c & bit_a) u.col(c) *= -1.0;
      break;
    }
  }
}

}  // namespace

GroupElement random_clifford(int n, SeededRng& rng) {
  if (n < 1 || n > 6) throw std::invalid_argument("random_clifford: n out of range [1,6]");
  const int nv = 2 * n;

  // Sample a uniform symplectic basis over GF(2): pairs (v_i, w_i) with
  // <v_i, w_i> = 1, all other products zero.
  std::vector<std::uint32_t> vs, ws;
  for (int i = 0; i < n; ++i) {
    Gf2System sys;
    sys.vars = nv;
    for (int j = 0; j < i; ++j) {
      sys.masks.push_back(sp_mask(vs[j], n));
      sys.rhs.push_back(0);
      sys.masks.push_back(sp_mask(ws[j], n));
      sys.rhs.push_back(0);
    }
    auto [part_v, kernel_v] = sys.solve();
    (void)part_v;
    const std::uint32_t v = random_nonzero_kernel_element(kernel_v, rng);

    sys.masks.push_back(sp_mask(v, n));
    sys.rhs.push_back(1);
    auto [part_w, kernel_w] = sys.solve();
    const std::uint32_t w = part_w ^ random_kernel_element(kernel_w, rng);
    vs.push_back(v);
    ws.push_back(w);
  }

  Tableau t(n);
  const std::uint32_t xmask = (1u << n) - 1;
  for (int i = 0; i < n; ++i) {
    t.rows[i] = {vs[i] & xmask, vs[i] >> n, rng.bernoulli(0.5) ? 1 : 0};
    t.rows[i + n] = {ws[i] & xmask, ws[i] >> n, rng.bernoulli(0.5) ? 1 : 0};
  }
  t.reduce();

  const long d = dim_of(n);
  Matrix u = Matrix::Identity(d, d);
  for (const Gate& g : t.gates) right_multiply_inverse(u, g, n);

  // Canonical global phase: first entry of nonnegligible magnitude becomes
  // positive real.
  for (long r = 0; r < d; ++r) {
    bool done = false;
    for (long c = 0; c < d; ++c) {
      const double mag = std::abs(u(r, c));
      if (mag > 1e-8) {
        u *= std::conj(u(r, c)) / mag;
        done = true;
        break;
      }
    }
    if (done) break;
  }
  return {GroupKind::Unitary, d, std::move(u)};
}

}  // namespace qls
