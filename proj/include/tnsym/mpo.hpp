#pragma once
// Anomalous MPO representation of Z_N^3 on a chain of two-spin (red, blue)
// sites, its reduction tensors, representation/reduction/zipper checks, and
// extraction of the 3-cocycle from reduction associativity.
//
// Conventions:
//  * physical site basis |i, j> = |red, blue>, flattened as i*N + j.
//  * MPO tensor B of the element (a1,a2,a3) has indices [l, r, out, in]
//    (virtual left, virtual right, physical out, physical in), bond dim N:
//       B[l, r, (i+a1, j+a2), (i, j)] = delta_{l,i} * w^{j a3 (r - i)}
//    with every other entry zero.
//  * reduction tensors: K(g,h) maps the gh bond into the stacked (g below,
//    h above) bond pair,  K|x> = w^{-x g2 h3} |x + g1>_h-slot |x>_g-slot,
//    and K^dag (stack) K = B_{gh} holds exactly.

#include "tnsym/group.hpp"
#include "tnsym/tensor.hpp"

namespace tnsym {

struct MpoTensor {
  GroupElement g;
  Tensor B;  // dims {N, N, N*N, N*N} = [l, r, out, in]
};

MpoTensor build_mpo_tensor(const GroupElement& g);

// K(g,h): dims {N, N, N} = [h-slot (upper), g-slot (lower), fused gh bond]
Tensor reduction_tensor(const GroupElement& g, const GroupElement& h);

// MPO tensor for a run of nq consecutive single spins (the site tensor B
// factorizes per spin with bond dimension N at every cut, including inside a
// (red, blue) site). start_odd selects the alternation phase: false = the run
// starts on a red spin. mpo_qubit_run(g, 2, false) equals build_mpo_tensor.
// dims {N, N, N^nq, N^nq} = [l, r, out, in]
Tensor mpo_qubit_run(const GroupElement& g, std::size_t nq, bool start_odd);

// stacked two-MPO site tensor, g applied first (below), h above:
// dims {N, N, N, N, N*N, N*N} = [lh, lg, rh, rg, out, in]
Tensor stacked_site(const GroupElement& g, const GroupElement& h);

// dense periodic operator U_g on L sites (dimension N^{2L}); cap on rows
Tensor assemble_operator(const GroupElement& g, std::size_t L,
                         std::size_t cap_rows = 4096);

// ||U_g U_h - U_{gh}||_F on L sites
double verify_representation(const GroupElement& g, const GroupElement& h,
                             std::size_t L);

// open-boundary L-site chain residual of K^dag (stack of g,h) K = chain of gh
double verify_reduction(const GroupElement& g, const GroupElement& h, std::size_t L);

// local zipper identity: (stack site) K = K (gh site) on the virtual bond
double zipper_check(const GroupElement& g, const GroupElement& h);

// the scalar relating the two reduction orders of a triple stack; equals
// phi(f,g,h) for the built-in representation
cdbl extract_cocycle(const GroupElement& f, const GroupElement& g,
                     const GroupElement& h);

// Apply the MPO of g to sites [0, cut) of a dense window state
// (rank-1 tensor of dimension (N^2)^n). Returns a tensor of dims
// {N^{2n}, N}: the transformed window with the dangling virtual index at the
// cut. The left boundary is closed with the all-ones bond covector.
Tensor apply_mpo_halfline(const GroupElement& g, const Tensor& window,
                          std::size_t n_sites, std::size_t cut);

// same closure as a dense operator on the window (for oracles and twists):
// dims {N^{2n}, N^{2n}, N}: out, in, dangling bond at the cut
Tensor halfline_operator(const GroupElement& g, std::size_t n_sites, std::size_t cut);

}  // namespace tnsym
