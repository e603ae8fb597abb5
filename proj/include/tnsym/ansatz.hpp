#pragma once
// Disentangling-circuit parameterization of MPO-symmetric MERA tensors.
//
// A layer tensor mapping 2A spins (coarse) to 2B spins (fine), B >= A, is
//    T = D_{2B}^dag (1 x t x 1) D_{2A}
// where D_{2K} = prod_{j=1}^{K-1} CX_{1,2j+1} CX_{2K,2j} is the boundary
// disentangler and t is a free residual tensor on 2(A-1) -> 2(B-1) spins.
// T is isometric iff t is. T pulls every group MPO through iff t commutes
// with the residual CZ strings
//    u^{(2K-2)} = prod_{j=1}^{K-1} CZ_{2j,2j+1} prod_{j=2}^{K-1} CZ^dag_{2j-1,2j}
// (spin labels of the parent 2K-spin block; the string acts on the 2K-2
// interior spins). With our diagonal convention CZ|a,b> = w^{-ab}|a,b> the
// string decoupled by the circuit carries the opposite powers, see
// residual_symmetry.

#include <cstdint>

#include "tnsym/gates.hpp"
#include "tnsym/group.hpp"
#include "tnsym/tensor.hpp"

namespace tnsym {

// ---- gate circuits as monomial (permutation-phase) matrices ---------------

struct Gate {
  enum Kind { CX, CZ } kind;
  int power;          // negative = dagger
  std::size_t i, j;   // 0-based spin indices, i = control/first slot
};

struct GateCircuit {
  int N = 2;
  std::size_t n_spins = 0;
  std::vector<Gate> gates;  // applied first-to-last
};

// action on basis states: |s> -> phase[s] |perm[s]>
struct PermPhase {
  std::size_t dim = 0;
  std::vector<std::size_t> perm;
  std::vector<cdbl> phase;

  static PermPhase identity(std::size_t dim);
  PermPhase then(const PermPhase& second) const;  // second ∘ this
  PermPhase inverse() const;
  Tensor dense() const;
  bool is_diagonal() const;
  // conjugate a dense matrix: this * M * this^dag
  Tensor conjugate(const Tensor& M) const;
  // left/right multiplication against dense matrices
  Tensor apply_left(const Tensor& M) const;   // this * M
  Tensor apply_right(const Tensor& M) const;  // M * this
};

PermPhase to_perm_phase(const GateCircuit& c);

// D_{2K} on 2K N-dimensional spins (K >= 2)
GateCircuit build_disentangler(std::size_t K, int N);
// residual CZ string, alpha3-th power, on the 2K-2 interior spins (K >= 2)
GateCircuit residual_symmetry(std::size_t K, int N, int alpha3);

// diagonal phases of residual_symmetry(K, N, 1) over the N^{2K-2} basis,
// and the same data as integer exponents of w = exp(2 pi i / N)
std::vector<cdbl> residual_phases(std::size_t K, int N);
std::vector<int> residual_exponents(std::size_t K, int N);

// ---- symmetric tensors -----------------------------------------------------

// assemble T = D_{2B}^dag (1 x t x 1) D_{2A} as a matrix [N^{2B}, N^{2A}];
// t must be a matrix [N^{2B-2}, N^{2A-2}]
Tensor assemble(const Tensor& t, std::size_t A, std::size_t B, int N);

// twirl projection (1/N) sum_a u_out^a t u_in^{-a}; exact and idempotent
Tensor symmetrize_residual(const Tensor& t, std::size_t A, std::size_t B, int N);

// blockwise polar: the isometry closest to -env that is exactly symmetric;
// env is a residual-shaped environment matrix [N^{2B-2}, N^{2A-2}]
Tensor symmetric_polar(const Tensor& env, std::size_t A, std::size_t B, int N);

// dimension of the residual commutant (= number of free complex parameters)
std::size_t commutant_dimension(std::size_t A, std::size_t B, int N);

// random symmetric isometric residual from a seeded Gaussian
Tensor random_symmetric_residual(std::size_t A, std::size_t B, int N, unsigned seed);

// ---- MPO pull-through -------------------------------------------------------

// contract the open MPO chain of g onto the row (output) index of M, which is
// interpreted as L sites of dimension N^2; result dims [l, r, rows, cols]
Tensor apply_open_mpo_rows(const GroupElement& g, const Tensor& M, std::size_t L);
// same on the column (input) index: M * chain
Tensor apply_open_mpo_cols(const GroupElement& g, const Tensor& M, std::size_t L);

// || U_g(fine) T - T U_g(coarse) || with matched dangling bonds
double verify_pullthrough(const Tensor& T, std::size_t A, std::size_t B,
                          const GroupElement& g);

}  // namespace tnsym
