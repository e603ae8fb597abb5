#include "tnsym/ansatz.hpp"

#include <cmath>
#include <random>
#include <stdexcept>

#include "tnsym/linalg.hpp"
#include "tnsym/mpo.hpp"

namespace tnsym {

namespace {

std::size_t ipow(std::size_t b, std::size_t e) {
  std::size_t r = 1;
  while (e--) r *= b;
  return r;
}

int mod(int a, int n) { return ((a % n) + n) % n; }

}  // namespace

// ---- PermPhase -------------------------------------------------------------

PermPhase PermPhase::identity(std::size_t dim) {
  PermPhase p;
  p.dim = dim;
  p.perm.resize(dim);
  p.phase.assign(dim, cdbl(1, 0));
  for (std::size_t s = 0; s < dim; ++s) p.perm[s] = s;
  return p;
}

PermPhase PermPhase::then(const PermPhase& second) const {
  if (second.dim != dim) throw std::invalid_argument("then: dimension mismatch");
  PermPhase r;
  r.dim = dim;
  r.perm.resize(dim);
  r.phase.resize(dim);
  for (std::size_t s = 0; s < dim; ++s) {
    r.perm[s] = second.perm[perm[s]];
    r.phase[s] = phase[s] * second.phase[perm[s]];
  }
  return r;
}

PermPhase PermPhase::inverse() const {
  PermPhase r;
  r.dim = dim;
  r.perm.resize(dim);
  r.phase.resize(dim);
  for (std::size_t s = 0; s < dim; ++s) {
    r.perm[perm[s]] = s;
    r.phase[perm[s]] = std::conj(phase[s]);
  }
  return r;
}

Tensor PermPhase::dense() const {
  Tensor m({dim, dim});
  for (std::size_t s = 0; s < dim; ++s) m.data()[perm[s] * dim + s] = phase[s];
  return m;
}

bool PermPhase::is_diagonal() const {
  for (std::size_t s = 0; s < dim; ++s)
    if (perm[s] != s) return false;
  return true;
}

Tensor PermPhase::apply_left(const Tensor& M) const {
  if (M.rank() != 2 || M.dims()[0] != dim)
    throw std::invalid_argument("apply_left: shape mismatch");
  const std::size_t cols = M.dims()[1];
  Tensor r({dim, cols});
  for (std::size_t s = 0; s < dim; ++s) {
    const std::size_t dst = perm[s] * cols, src = s * cols;
    for (std::size_t c = 0; c < cols; ++c) r.data()[dst + c] = phase[s] * M.data()[src + c];
  }
  return r;
}

Tensor PermPhase::apply_right(const Tensor& M) const {
  if (M.rank() != 2 || M.dims()[1] != dim)
    throw std::invalid_argument("apply_right: shape mismatch");
  const std::size_t rows = M.dims()[0];
  Tensor r({rows, dim});
  // (M P)[r, s] = phase[s] M[r, perm[s]]
  for (std::size_t row = 0; row < rows; ++row) {
    const std::size_t base = row * dim;
    for (std::size_t s = 0; s < dim; ++s)
      r.data()[base + s] = phase[s] * M.data()[base + perm[s]];
  }
  return r;
}

Tensor PermPhase::conjugate(const Tensor& M) const {
  return apply_left(inverse().apply_right(M).reshaped(M.dims()));
}

PermPhase to_perm_phase(const GateCircuit& c) {
  const std::size_t dim = ipow(static_cast<std::size_t>(c.N), c.n_spins);
  const int N = c.N;
  PermPhase p = PermPhase::identity(dim);
  std::vector<std::size_t> weight(c.n_spins);  // weight of spin q (spin 0 most significant)
  for (std::size_t q = 0; q < c.n_spins; ++q)
    weight[q] = ipow(static_cast<std::size_t>(N), c.n_spins - 1 - q);
  const double two_pi = 2.0 * M_PI;
  for (std::size_t s = 0; s < dim; ++s) {
    std::size_t state = s;
    int expo = 0;  // accumulated power of w
    for (const Gate& g : c.gates) {
      const int a = static_cast<int>(state / weight[g.i]) % N;
      const int b = static_cast<int>(state / weight[g.j]) % N;
      if (g.kind == Gate::CZ) {
        expo = mod(expo - g.power * a * b, N);
      } else {  // CX|a,b> = |a, b - p a>
        const int nb = mod(b - g.power * a, N);
        state += (static_cast<std::size_t>(nb) - static_cast<std::size_t>(b)) * weight[g.j];
      }
    }
    p.perm[s] = state;
    p.phase[s] = std::polar(1.0, two_pi * expo / N);
  }
  return p;
}

// ---- circuits ---------------------------------------------------------------

GateCircuit build_disentangler(std::size_t K, int N) {
  if (K < 2) throw std::invalid_argument("build_disentangler: need K >= 2");
  GateCircuit c;
  c.N = N;
  c.n_spins = 2 * K;
  // D_2K = prod_{j=1..K-1} CX_{1,2j+1} CX_{2K,2j}  (1-based labels); all the
  // factors commute, so the order below is immaterial.
  for (std::size_t j = 1; j < K; ++j) {
    c.gates.push_back({Gate::CX, 1, 0, 2 * j});
    c.gates.push_back({Gate::CX, 1, 2 * K - 1, 2 * j - 1});
  }
  return c;
}

GateCircuit residual_symmetry(std::size_t K, int N, int alpha3) {
  if (K < 2) throw std::invalid_argument("residual_symmetry: need K >= 2");
  GateCircuit c;
  c.N = N;
  c.n_spins = 2 * K - 2;
  // parent-block spins 2..2K-1 relabeled to 0..2K-3. With our sign convention
  // CZ|a,b> = w^{-ab}|a,b>, the string that the disentangler actually leaves
  // behind carries CZ^{-a3} on pairs (2j, 2j+1) and CZ^{a3} on (2j-1, 2j);
  // this is pinned by the segment-decoupling test against the dense MPO.
  const int a3 = mod(alpha3, N);
  if (a3 == 0) return c;
  for (std::size_t j = 1; j < K; ++j)
    c.gates.push_back({Gate::CZ, -a3, 2 * j - 2, 2 * j - 1});
  for (std::size_t j = 2; j < K; ++j)
    c.gates.push_back({Gate::CZ, a3, 2 * j - 3, 2 * j - 2});
  return c;
}

std::vector<int> residual_exponents(std::size_t K, int N) {
  const std::size_t n = 2 * K - 2;
  const std::size_t dim = ipow(static_cast<std::size_t>(N), n);
  std::vector<std::size_t> weight(n);
  for (std::size_t q = 0; q < n; ++q)
    weight[q] = ipow(static_cast<std::size_t>(N), n - 1 - q);
  std::vector<int> expo(dim, 0);
  for (std::size_t s = 0; s < dim; ++s) {
    int e = 0;
    for (std::size_t j = 1; j < K; ++j) {
      const int a = static_cast<int>(s / weight[2 * j - 2]) % N;
      const int b = static_cast<int>(s / weight[2 * j - 1]) % N;
      e += a * b;
      if (j >= 2) {
        const int c = static_cast<int>(s / weight[2 * j - 3]) % N;
        e -= c * a;
      }
    }
    expo[s] = mod(e, N);
  }
  return expo;
}

std::vector<cdbl> residual_phases(std::size_t K, int N) {
  const std::vector<int> expo = residual_exponents(K, N);
  std::vector<cdbl> ph(expo.size());
  for (std::size_t s = 0; s < expo.size(); ++s)
    ph[s] = std::polar(1.0, 2.0 * M_PI * expo[s] / N);
  return ph;
}

// ---- symmetric tensors -------------------------------------------------------

Tensor assemble(const Tensor& t, std::size_t A, std::size_t B, int N) {
  if (A < 1 || B < 2) throw std::invalid_argument("assemble: need A >= 1, B >= 2");
  const std::size_t d = static_cast<std::size_t>(N);
  const std::size_t rows = ipow(d, 2 * B - 2), cols = ipow(d, 2 * A - 2);
  if (t.rank() != 2 || t.dims()[0] != rows || t.dims()[1] != cols)
    throw std::invalid_argument("assemble: residual shape mismatch");
  // 1 x t x 1 with the identity legs on the first and last spin of each block;
  // A = 1 is the ternary-scheme isometry: both coarse spins pass through and
  // t is a state on the interior, so no input disentangler is needed
  Tensor M = kron(kron(Tensor::identity(d), t), Tensor::identity(d));
  const PermPhase Din = (A >= 2) ? to_perm_phase(build_disentangler(A, N))
                                 : PermPhase::identity(d * d);
  const PermPhase Dout = to_perm_phase(build_disentangler(B, N));
  return Dout.inverse().apply_left(Din.apply_right(M).reshaped(M.dims()));
}

Tensor symmetrize_residual(const Tensor& t, std::size_t A, std::size_t B, int N) {
  const std::vector<int> ein = residual_exponents(A, N);
  const std::vector<int> eout = residual_exponents(B, N);
  if (t.rank() != 2 || t.dims()[0] != eout.size() || t.dims()[1] != ein.size())
    throw std::invalid_argument("symmetrize_residual: shape mismatch");
  Tensor r = t;
  for (std::size_t o = 0; o < eout.size(); ++o)
    for (std::size_t i = 0; i < ein.size(); ++i)
      if (eout[o] != ein[i]) r.data()[o * ein.size() + i] = cdbl(0, 0);
  return r;
}

std::size_t commutant_dimension(std::size_t A, std::size_t B, int N) {
  const std::vector<int> ein = residual_exponents(A, N);
  const std::vector<int> eout = residual_exponents(B, N);
  std::vector<std::size_t> cin(static_cast<std::size_t>(N), 0),
      cout(static_cast<std::size_t>(N), 0);
  for (int e : ein) ++cin[static_cast<std::size_t>(e)];
  for (int e : eout) ++cout[static_cast<std::size_t>(e)];
  std::size_t dim = 0;
  for (int e = 0; e < N; ++e) dim += cin[e] * cout[e];
  return dim;
}

Tensor symmetric_polar(const Tensor& env, std::size_t A, std::size_t B, int N) {
  const std::vector<int> ein = residual_exponents(A, N);
  const std::vector<int> eout = residual_exponents(B, N);
  if (env.rank() != 2 || env.dims()[0] != eout.size() || env.dims()[1] != ein.size())
    throw std::invalid_argument("symmetric_polar: shape mismatch");
  const std::size_t cols = ein.size();
  Tensor w({eout.size(), cols});
  for (int e = 0; e < N; ++e) {
    std::vector<std::size_t> oi, ii;
    for (std::size_t o = 0; o < eout.size(); ++o)
      if (eout[o] == e) oi.push_back(o);
    for (std::size_t i = 0; i < cols; ++i)
      if (ein[i] == e) ii.push_back(i);
    if (ii.empty()) continue;
    if (oi.size() < ii.size())
      throw std::invalid_argument("symmetric_polar: sector too small for isometry");
    Tensor block({oi.size(), ii.size()});
    for (std::size_t p = 0; p < oi.size(); ++p)
      for (std::size_t q = 0; q < ii.size(); ++q)
        block.data()[p * ii.size() + q] = env.data()[oi[p] * cols + ii[q]];
    Tensor wb;
    if (block.norm() < 1e-13) {
      // environment vanished on this sector: any isometry is optimal
      wb = Tensor({oi.size(), ii.size()});
      for (std::size_t q = 0; q < ii.size(); ++q)
        wb.data()[q * ii.size() + q] = cdbl(-1, 0);
    } else {
      wb = polar_isometry(block, {0}, {1});
    }
    for (std::size_t p = 0; p < oi.size(); ++p)
      for (std::size_t q = 0; q < ii.size(); ++q)
        w.data()[oi[p] * cols + ii[q]] = wb.data()[p * ii.size() + q];
  }
  return w;
}

Tensor random_symmetric_residual(std::size_t A, std::size_t B, int N, unsigned seed) {
  const std::size_t d = static_cast<std::size_t>(N);
  const std::size_t rows = ipow(d, 2 * B - 2), cols = ipow(d, 2 * A - 2);
  std::mt19937 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  Tensor t({rows, cols});
  for (auto& z : t.data()) z = cdbl(gauss(rng), gauss(rng));
  return symmetric_polar(symmetrize_residual(t, A, B, N), A, B, N);
}

// ---- MPO pull-through ---------------------------------------------------------

Tensor apply_open_mpo_rows(const GroupElement& g, const Tensor& M, std::size_t L) {
  const std::size_t N = static_cast<std::size_t>(g.N), site = N * N;
  if (M.rank() != 2 || M.dims()[0] != ipow(site, L))
    throw std::invalid_argument("apply_open_mpo_rows: shape mismatch");
  const std::size_t C = M.dims()[1];
  const Tensor& B = build_mpo_tensor(g).B;  // [l, r, out, in]
  std::vector<std::size_t> shape(L, site);
  shape.push_back(C);
  // invariant: cur = [l, r, out_1..out_k, s_{k+1}..s_L, C]
  Tensor cur = contract(B, M.reshaped(shape), {{3, 0}});
  for (std::size_t k = 1; k < L; ++k) {
    cur = contract(cur, B, {{1, 0}, {2 + k, 3}});
    // now [l, out_1..out_k, s_{k+2}.., C, r, out_{k+1}]
    std::vector<std::size_t> perm;
    perm.push_back(0);
    perm.push_back(L + 1);
    for (std::size_t p = 1; p <= k; ++p) perm.push_back(p);
    perm.push_back(L + 2);
    for (std::size_t p = k + 1; p <= L; ++p) perm.push_back(p);
    cur = cur.permuted(perm);
  }
  return cur.reshaped({N, N, ipow(site, L), C});
}

Tensor apply_open_mpo_cols(const GroupElement& g, const Tensor& M, std::size_t L) {
  const std::size_t N = static_cast<std::size_t>(g.N), site = N * N;
  if (M.rank() != 2 || M.dims()[1] != ipow(site, L))
    throw std::invalid_argument("apply_open_mpo_cols: shape mismatch");
  const std::size_t R = M.dims()[0];
  const Tensor& B = build_mpo_tensor(g).B;
  std::vector<std::size_t> shape{R};
  for (std::size_t s = 0; s < L; ++s) shape.push_back(site);
  // invariant: cur = [l, r, R, in_1..in_k, c_{k+1}..c_L]
  Tensor cur = contract(M.reshaped(shape), B, {{1, 2}});
  {
    std::vector<std::size_t> perm{L, L + 1, 0, L + 2};
    for (std::size_t p = 1; p < L; ++p) perm.push_back(p);
    cur = cur.permuted(perm);
  }
  for (std::size_t k = 1; k < L; ++k) {
    cur = contract(cur, B, {{1, 0}, {3 + k, 2}});
    // now [l, R, in_1..in_k, c_{k+2}.., r, in_{k+1}]
    std::vector<std::size_t> perm;
    perm.push_back(0);
    perm.push_back(L + 1);
    perm.push_back(1);
    for (std::size_t p = 2; p <= k + 1; ++p) perm.push_back(p);
    perm.push_back(L + 2);
    for (std::size_t p = k + 2; p <= L; ++p) perm.push_back(p);
    cur = cur.permuted(perm);
  }
  return cur.reshaped({N, N, R, ipow(site, L)});
}

double verify_pullthrough(const Tensor& T, std::size_t A, std::size_t B,
                          const GroupElement& g) {
  Tensor fine = apply_open_mpo_rows(g, T, B);
  Tensor coarse = apply_open_mpo_cols(g, T, A);
  return distance(fine, coarse);
}

}  // namespace tnsym
