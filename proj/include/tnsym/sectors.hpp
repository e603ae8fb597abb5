#pragma once
// Topological sectors of the anomalous Z_N^3 symmetry: the projective group
// action on twisted scaling fields, projectors onto projective irreps,
// central idempotents over the direct sum of twisted spaces, Dehn-twist
// phases and conformal spins from dense twisted rings, operator-product
// coefficients, and the sector fusion table.
//
// Conventions:
//  * sectors are pairs (g, mu) of a twist and a phi^(g)-projective irrep;
//    the topological spin is arg(chi_mu(g)/d_mu)/2pi mod 1.
//  * the genuine g-twisted field space is the image of the one-leg twisted
//    superoperator S_g; all maps here act on an orthonormal basis of that
//    image. The raw diagrammatic action (full-block MPO run of h on the ket
//    layer, its conjugate on the bra layer, left edge closed by reduction
//    tensors) is divided by the gauge phase omega^(g1 h2 h3 - g2 h1 h3 +
//    g3 h1 h2) so that V_h V_k = phi^(g)(h,k) V_hk holds with the slant
//    product on the nose.

#include <string>
#include <vector>

#include "tnsym/ed.hpp"
#include "tnsym/group.hpp"
#include "tnsym/linalg.hpp"
#include "tnsym/mera.hpp"
#include "tnsym/tensor.hpp"

namespace tnsym {

struct SectorLabel {
  GroupElement twist;
  std::string irrep;    // label from projective_irreps(twist)
  std::size_t dim = 1;  // quantum dimension d_mu
  double spin = 0;      // topological spin in [0,1)
};

// all (twist, irrep) pairs in twist-index order; 22 labels at N = 2
std::vector<SectorLabel> sector_labels(int N);

// gauge phase aligning the diagrammatic action with slant_product(g)
cdbl projective_gauge(const GroupElement& g, const GroupElement& h);

struct TwistedFieldSpace {
  GroupElement twist;
  std::size_t dc = 0, chi = 0;  // two-site and MPO bond dimensions
  Tensor basis;                 // [dc^2*chi, rank], orthonormal columns
  Tensor smat;                  // restricted twisted superoperator [rank, rank]
  std::vector<Tensor> action;   // gauge-fixed V^(g)_h, indexed by h
  std::size_t rank() const { return basis.dims()[1]; }
};

// builds the image basis of S_g (relative singular-value cutoff) and the
// projective action matrices; throws when the state is not symmetric
TwistedFieldSpace twisted_field_space(const MeraState& s, const GroupElement& g,
                                      double cutoff = 1e-9,
                                      double sym_tol = 1e-8);

// V^(g)_h on the twisted-field basis: unitary, V_e = 1, commutes with the
// restricted superoperator, V_h V_k = phi^(g)(h,k) V_hk
Tensor projective_action(const TwistedFieldSpace& space, const GroupElement& h);

// P_{g,mu} = (d_mu/|G|) sum_h conj(chi_mu(h)) V_h; idempotent, mutually
// orthogonal, complete over mu
Tensor sector_projector(const TwistedFieldSpace& space,
                        const ProjectiveIrrep& mu);

// direct sum over twists (index order) of the restricted superoperators
Tensor superoperator_direct_sum(const std::vector<TwistedFieldSpace>& spaces);

// sector projector embedded in the direct sum: P_{g,mu} on the g block,
// zero on every other block
Tensor central_idempotent(const std::vector<TwistedFieldSpace>& spaces,
                          const GroupElement& g, const ProjectiveIrrep& mu);

// Dehn phase prod_{i=1..o(g)-1} phi(g, g^i, g), algebraically and from a
// dense twisted translation on a small periodic ring; dehn_phase checks
// that the two agree to 1e-10 and throws otherwise
cdbl dehn_phase_algebraic(const GroupElement& g);
cdbl dehn_phase_ring(const GroupElement& g, std::size_t pair_sites);
cdbl dehn_phase(const GroupElement& g, std::size_t pair_sites = 3);

// dense twisted translation T_g on pair_sites two-spin sites plus the MPO
// bond register: one-site cyclic shift composed with the MPO site tensor at
// the cut; T_g / sqrt(N) is unitary and T_g^(L o(g)) is a phase
Tensor twisted_translation(const GroupElement& g, std::size_t pair_sites);

// g-twisted Hamiltonian on the ring built by averaging translates of the
// local density: H_g = sum_k T_g^k (h tensor 1) T_g^-k; commutes with T_g
Tensor twisted_ring_hamiltonian(const HamiltonianDensity& density,
                                const GroupElement& g, std::size_t pair_sites);

struct SpinEntry {
  double energy = 0;
  double spin = 0;        // L arg(lambda_T) / 2pi mod 1
  std::string sector;     // irrep label, possibly empty when unresolved
  double weight = 0;      // norm^2 captured by the tagged sector projector
};

// low-lying g-twisted ring states: energies, twisted-translation spins, and
// sector tags from ring-level projective action
std::vector<SpinEntry> conformal_spins(const HamiltonianDensity& density,
                                       const GroupElement& g,
                                       std::size_t pair_sites, std::size_t k);

}  // namespace tnsym
