#pragma once
// Scaling superoperators of the scale-invariant layer, plain and
// symmetry-twisted, scaling-dimension extraction, central charge from
// entanglement-entropy growth, and post-processing of near-degenerate towers.
//
// Conventions:
//  * the plain superoperator is the middle-leg channel o -> W^dag (1 x o x 1) W
//    acting on two-site operators; it is completely positive and unital.
//  * a g-twisted field is a two-site operator terminating a half-line MPO
//    string on the ket layer, tensor dims [dc, dc, chi] = [out, in, bond]
//    with dc the two-site dimension and chi the MPO bond dimension. The
//    twisted channel routes the block's leftmost fine ket site through the
//    MPO site tensor; the output bond is the site tensor's left virtual leg.

#include <functional>
#include <string>
#include <vector>

#include "tnsym/group.hpp"
#include "tnsym/linalg.hpp"
#include "tnsym/mera.hpp"

namespace tnsym {

// linear size rescaling per layer; throws on unknown scheme names
double scheme_scale_factor(const std::string& scheme);

struct ScalingEntry {
  cdbl lambda;
  double delta = 0;          // -log|lambda| / log(scale factor)
  double delta_raw = 0;      // before degeneracy averaging
  std::vector<cdbl> field;   // eigen-operator components (unnormalized)
  std::string sector;        // filled by sector classification, else empty
};

struct ScalingSpectrum {
  GroupElement twist;
  double scale_factor = 2.0;
  std::vector<ScalingEntry> entries;  // ascending delta (descending |lambda|)
};

// dense matrix [dc^2, dc^2] acting on vec(o)
Tensor scaling_superoperator(const MeraState& s);

struct TwistedMap {
  GroupElement twist;
  std::size_t dc = 0, chi = 0;
  std::function<std::vector<cdbl>(const std::vector<cdbl>&)> apply;
  std::size_t dim() const { return dc * dc * chi; }
};

// throws when the state does not pull g through (residual > sym_tol)
TwistedMap twisted_superoperator(const MeraState& s, const GroupElement& g,
                                 double sym_tol = 1e-8);
// dense matrix of the same map; throws when the dimension exceeds cap
Tensor twisted_superoperator_dense(const MeraState& s, const GroupElement& g,
                                   std::size_t cap = 4096, double sym_tol = 1e-8);

// top-k eigenpairs, dense below dense_cap and Arnoldi above
std::vector<EigPair> superoperator_spectrum(const MeraState& s,
                                            const GroupElement& g, std::size_t k,
                                            std::size_t dense_cap = 1100);

ScalingSpectrum extract_dimensions(const std::vector<EigPair>& pairs,
                                   const GroupElement& twist,
                                   double scale_factor,
                                   bool drop_identity = false);

// c = 3 (S(rho_4sites) - S(rho_2sites)) / log(scale factor) at the descending
// fixed point of the scale-invariant layer
double central_charge(const MeraState& s, double fp_tol = 1e-12);

// cluster delta values with gaps <= tol and replace each cluster by its mean;
// original values stay in delta_raw
ScalingSpectrum degeneracy_average(const ScalingSpectrum& in, double tol);

}  // namespace tnsym
