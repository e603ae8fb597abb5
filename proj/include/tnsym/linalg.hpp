#pragma once
// Dense linear algebra on Tensors: SVD, polar isometry updates, Hermitian and
// general eigendecomposition. All routines are deterministic (single-threaded
// LAPACK unless the caller raises the thread count).

#include <functional>
#include <vector>

#include "tnsym/tensor.hpp"

namespace tnsym {

struct SvdResult {
  Tensor U;                // dims: (row-group dims..., k)
  std::vector<double> S;   // descending, length k = min(rows, cols)
  Tensor Vt;               // dims: (k, col-group dims...)
};

// SVD after permuting `t` so that `row_group` indices come first.
// row_group/col_group must cover every index exactly once.
SvdResult svd(const Tensor& t, const std::vector<std::size_t>& row_group,
              const std::vector<std::size_t>& col_group);

// Isometry W = -U V^dagger minimizing tr(W^dagger env) over isometries.
// Shaped like env (with row_group rows). Throws "stalled environment" when
// every singular value is below 1e-14.
Tensor polar_isometry(const Tensor& env, const std::vector<std::size_t>& row_group,
                      const std::vector<std::size_t>& col_group);

struct EigPair {
  cdbl value;
  std::vector<cdbl> vector;
};

// Full dense non-Hermitian eigendecomposition of a square matrix (rank-2
// tensor), top-k pairs sorted by |lambda| descending. Dimension capped.
std::vector<EigPair> eig_dense(const Tensor& m, std::size_t k,
                               std::size_t cap = 8192);

// Hermitian eigendecomposition, eigenvalues ascending.
// Returns (values, column eigenvectors as rank-2 tensor V with m = V diag V^dagger).
struct HermEig {
  std::vector<double> values;
  Tensor vectors;  // [i][j]: component i of eigenvector j
};
HermEig eig_hermitian(const Tensor& m);

// Largest-|lambda| eigenpairs of an implicitly defined linear map, via Arnoldi
// iteration with full reorthogonalization. Used where the dense route does
// not fit in memory.
std::vector<EigPair> eig_arnoldi(
    const std::function<std::vector<cdbl>(const std::vector<cdbl>&)>& apply,
    std::size_t dim, std::size_t k, std::size_t krylov = 0,
    std::size_t max_restarts = 40, double tol = 1e-10, unsigned seed = 7);

// Set the BLAS worker-thread count (default 1 for reproducibility).
void set_blas_threads(int n);

}  // namespace tnsym
