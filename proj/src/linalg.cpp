#include "tnsym/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>
#include <random>

#define lapack_complex_float std::complex<float>
#define lapack_complex_double std::complex<double>
#include <lapacke.h>

extern "C" {
void openblas_set_num_threads(int);
}

namespace tnsym {

void set_blas_threads(int n) { openblas_set_num_threads(n > 0 ? n : 1); }

namespace {

// permute t so row_group indices come first, return matrix dims too
Tensor to_matrix(const Tensor& t, const std::vector<std::size_t>& row_group,
                 const std::vector<std::size_t>& col_group, std::size_t& rows,
                 std::size_t& cols, std::vector<std::size_t>& rdims,
                 std::vector<std::size_t>& cdims) {
  if (row_group.empty() || col_group.empty())
    throw std::invalid_argument("svd: empty side of the split");
  std::vector<bool> seen(t.rank(), false);
  std::vector<std::size_t> perm;
  rows = cols = 1;
  for (auto i : row_group) {
    if (i >= t.rank() || seen[i]) throw std::invalid_argument("svd: bad split");
    seen[i] = true;
    perm.push_back(i);
    rows *= t.dims()[i];
    rdims.push_back(t.dims()[i]);
  }
  for (auto i : col_group) {
    if (i >= t.rank() || seen[i]) throw std::invalid_argument("svd: bad split");
    seen[i] = true;
    perm.push_back(i);
    cols *= t.dims()[i];
    cdims.push_back(t.dims()[i]);
  }
  if (perm.size() != t.rank()) throw std::invalid_argument("svd: split must cover all indices");
  return t.permuted(perm);
}

}  // namespace

SvdResult svd(const Tensor& t, const std::vector<std::size_t>& row_group,
              const std::vector<std::size_t>& col_group) {
  std::size_t rows, cols;
  std::vector<std::size_t> rdims, cdims;
  Tensor m = to_matrix(t, row_group, col_group, rows, cols, rdims, cdims);
  const std::size_t k = std::min(rows, cols);
  std::vector<cdbl> a = m.data();
  std::vector<double> s(k);
  std::vector<cdbl> u(rows * k), vt(k * cols);
  int info = LAPACKE_zgesdd(LAPACK_ROW_MAJOR, 'S', (int)rows, (int)cols, a.data(),
                            (int)cols, s.data(), u.data(), (int)k, vt.data(),
                            (int)cols);
  if (info != 0) throw std::runtime_error("svd: LAPACK zgesdd failed");
  SvdResult r;
  rdims.push_back(k);
  r.U = Tensor(rdims, std::move(u));
  r.S = std::move(s);
  std::vector<std::size_t> vdims{k};
  vdims.insert(vdims.end(), cdims.begin(), cdims.end());
  r.Vt = Tensor(vdims, std::move(vt));
  return r;
}

Tensor polar_isometry(const Tensor& env, const std::vector<std::size_t>& row_group,
                      const std::vector<std::size_t>& col_group) {
  SvdResult r = svd(env, row_group, col_group);
  bool alive = false;
  for (double s : r.S)
    if (s >= 1e-14) alive = true;
  if (!alive) throw std::runtime_error("stalled environment");
  const std::size_t k = r.S.size();
  Tensor U = r.U.reshaped({r.U.size() / k, k});
  Tensor Vt = r.Vt.reshaped({k, r.Vt.size() / k});
  Tensor W = matmul(U, Vt).scaled(cdbl(-1, 0));
  // shape like env with rows first
  std::vector<std::size_t> odims;
  for (auto i : row_group) odims.push_back(env.dims()[i]);
  for (auto i : col_group) odims.push_back(env.dims()[i]);
  return W.reshaped(odims);
}

HermEig eig_hermitian(const Tensor& m) {
  if (m.rank() != 2 || m.dims()[0] != m.dims()[1])
    throw std::invalid_argument("eig_hermitian: square matrix required");
  const std::size_t n = m.dims()[0];
  HermEig out;
  out.values.resize(n);
  std::vector<cdbl> a = m.data();
  int info = LAPACKE_zheevd(LAPACK_ROW_MAJOR, 'V', 'U', (int)n, a.data(), (int)n,
                            out.values.data());
  if (info != 0) throw std::runtime_error("eig_hermitian: LAPACK zheevd failed");
  out.vectors = Tensor({n, n}, std::move(a));
  return out;
}

std::vector<EigPair> eig_dense(const Tensor& m, std::size_t k, std::size_t cap) {
  if (m.rank() != 2 || m.dims()[0] != m.dims()[1])
    throw std::invalid_argument("eig_dense: square matrix required");
  const std::size_t n = m.dims()[0];
  if (n > cap) throw std::runtime_error("eig_dense: dimension above cap");
  std::vector<cdbl> a = m.data();
  std::vector<cdbl> w(n), vr(n * n);
  int info = LAPACKE_zgeev(LAPACK_ROW_MAJOR, 'N', 'V', (int)n, a.data(), (int)n,
                           w.data(), nullptr, (int)n, vr.data(), (int)n);
  if (info != 0) throw std::runtime_error("eig_dense: LAPACK zgeev did not converge");
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) {
    return std::abs(w[i]) > std::abs(w[j]);
  });
  k = std::min(k, n);
  std::vector<EigPair> out(k);
  for (std::size_t p = 0; p < k; ++p) {
    const std::size_t j = order[p];
    out[p].value = w[j];
    out[p].vector.resize(n);
    for (std::size_t i = 0; i < n; ++i) out[p].vector[i] = vr[i * n + j];
    // residual check ||m v - lambda v|| / ||v||
    double rnorm = 0, vnorm = 0;
    for (std::size_t i = 0; i < n; ++i) {
      cdbl acc = 0;
      for (std::size_t q = 0; q < n; ++q) acc += m.data()[i * n + q] * out[p].vector[q];
      acc -= out[p].value * out[p].vector[i];
      rnorm += std::norm(acc);
      vnorm += std::norm(out[p].vector[i]);
    }
    if (std::sqrt(rnorm / vnorm) > 1e-9)
      throw std::runtime_error("eig_dense: residual exceeds tolerance");
  }
  return out;
}

std::vector<EigPair> eig_arnoldi(
    const std::function<std::vector<cdbl>(const std::vector<cdbl>&)>& apply,
    std::size_t dim, std::size_t k, std::size_t krylov, std::size_t max_restarts,
    double tol, unsigned seed) {
  if (krylov == 0) krylov = std::min(dim, std::max<std::size_t>(2 * k + 20, 40));
  krylov = std::min(krylov, dim);
  k = std::min(k, krylov);
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::vector<cdbl> start(dim);
  for (auto& v : start) v = cdbl(gauss(rng), gauss(rng));

  auto nrm = [](const std::vector<cdbl>& v) {
    double s = 0;
    for (auto& x : v) s += std::norm(x);
    return std::sqrt(s);
  };
  auto dot = [](const std::vector<cdbl>& a, const std::vector<cdbl>& b) {
    cdbl s = 0;
    for (std::size_t i = 0; i < a.size(); ++i) s += std::conj(a[i]) * b[i];
    return s;
  };

  std::vector<EigPair> result;
  for (std::size_t restart = 0; restart < max_restarts; ++restart) {
    std::vector<std::vector<cdbl>> V;
    V.reserve(krylov + 1);
    double n0 = nrm(start);
    if (n0 < 1e-300) throw std::runtime_error("eig_arnoldi: zero start vector");
    std::vector<cdbl> v0 = start;
    for (auto& x : v0) x /= n0;
    V.push_back(std::move(v0));
    const std::size_t mK = krylov;
    std::vector<cdbl> H(mK * mK, cdbl(0, 0));  // upper Hessenberg, row-major
    std::size_t m = 0;
    double hlast = 0;
    for (; m < mK; ++m) {
      std::vector<cdbl> w = apply(V[m]);
      // modified Gram-Schmidt, twice
      for (int pass = 0; pass < 2; ++pass)
        for (std::size_t j = 0; j <= m; ++j) {
          cdbl h = dot(V[j], w);
          H[j * mK + m] += h;  // second pass accumulates the reorthogonalization
          for (std::size_t i = 0; i < dim; ++i) w[i] -= h * V[j][i];
        }
      double hn = nrm(w);
      hlast = hn;
      if (m + 1 < mK) {
        if (hn < 1e-13) { ++m; break; }  // invariant subspace found
        H[(m + 1) * mK + m] = hn;
        for (auto& x : w) x /= hn;
        V.push_back(std::move(w));
      }
    }
    const std::size_t msz = std::min(m + (m < mK ? 0 : 0), mK);
    const std::size_t n = std::min<std::size_t>(V.size(), mK);
    // eigen-decompose the n x n leading block of H
    std::vector<cdbl> Hs(n * n);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) Hs[i * n + j] = H[i * mK + j];
    (void)msz;
    std::vector<cdbl> w(n), vr(n * n);
    int info = LAPACKE_zgeev(LAPACK_ROW_MAJOR, 'N', 'V', (int)n, Hs.data(), (int)n,
                             w.data(), nullptr, (int)n, vr.data(), (int)n);
    if (info != 0) throw std::runtime_error("eig_arnoldi: small eig failed");
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) {
      return std::abs(w[i]) > std::abs(w[j]);
    });
    const std::size_t kk = std::min(k, n);
    result.clear();
    bool converged = true;
    for (std::size_t p = 0; p < kk; ++p) {
      const std::size_t j = order[p];
      EigPair ep;
      ep.value = w[j];
      ep.vector.assign(dim, cdbl(0, 0));
      for (std::size_t q = 0; q < n; ++q) {
        const cdbl c = vr[q * n + j];
        for (std::size_t i = 0; i < dim; ++i) ep.vector[i] += c * V[q][i];
      }
      // Ritz residual estimate: |h_{m+1,m}| * |last component of small vec|
      double res = hlast * std::abs(vr[(n - 1) * n + j]);
      if (res > tol * std::max(1.0, std::abs(ep.value))) converged = false;
      result.push_back(std::move(ep));
    }
    if (converged || n == dim) return result;
    // restart from the sum of wanted Ritz vectors
    std::fill(start.begin(), start.end(), cdbl(0, 0));
    for (std::size_t p = 0; p < kk; ++p)
      for (std::size_t i = 0; i < dim; ++i) start[i] += result[p].vector[i];
  }
  return result;  // best effort after restart budget
}

}  // namespace tnsym
