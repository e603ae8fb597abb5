#pragma once
// Layered 4:2 MERA built from the disentangling-circuit ansatz, together with
// the abc-model Hamiltonian, the ascending/descending channel calculus, energy
// evaluation, and an alternating environment/polar optimizer.
//
// Geometry. Every layer is a single isometry W = assemble(t, m, 2m, N) viewed
// as a map from 2 coarse sites of m spins each (dimension d = N^m) to 4 fine
// sites of m spins (the scale-invariant grouping) or, for the bottom layer, to
// 2m physical pair-sites of dimension N^2 (the transitional grouping). Blocks
// of consecutive layers are stacked with an offset of one site, so a local
// term never meets a block boundary the same way twice.
//
// Channel calculus. With the offset stacking, a translation-averaged local
// Hamiltonian closes on a pair (h2, h4) of two-site and four-site terms that
// sit at odd positions relative to the blocks of the layer above:
//   h2 at an in-block bond      -> two-site coarse term
//   h2 straddling two blocks    -> four-site coarse term
//   h4 straddling two blocks    -> four-site coarse terms (3|1 and 1|3 splits)
// The descending map on density-matrix pairs (r2, r4) is the exact adjoint:
//   tr(h2' r2) + tr(h4' r4) = s * (tr(h2 r2_fine) + tr(h4 r4_fine))
// where s is the number of fine positions per coarse position (2 for a
// scale-invariant layer, 2m for the transitional layer).

#include <cstddef>
#include <string>
#include <vector>

#include "tnsym/ansatz.hpp"
#include "tnsym/tensor.hpp"

namespace tnsym {

// two-site term on qubit-pair sites; summed over all sites it reproduces
//   H = sum_q -(a/2) X_q - (b/2) Z_q Z_{q+2} - (c/2) Z_q X_{q+1} Z_{q+2}
struct HamiltonianDensity {
  double a = 0, b = 0, c = 0;
  int N = 2;
  Tensor term;  // [16,16], two pair-sites (4 qubits)
};

// throws on negative couplings
HamiltonianDensity build_abc_hamiltonian(double a, double b, double c);

// translation-averaged local-term pair / density pair on one layer
struct TermPair {
  Tensor h2, h4;
};
struct DensityPair {
  Tensor r2, r4;
};

struct MeraState {
  std::string scheme = "4:2";
  int N = 2;
  std::size_t m = 3;  // spins per coarse site; bond dimension N^m
  bool symmetric = true;
  // residual tensors, one per distinct layer; the last one is repeated
  // scale-invariantly, the ones before it are transitional
  std::vector<Tensor> residual;

  std::size_t transitional() const { return residual.size() - 1; }
  std::size_t site_dim() const;      // N^m
  Tensor layer(std::size_t i) const; // assembled isometry [d^4, d^2]
};

// random twirl-projected initialization (symmetric=true) or plain Gaussian
// isometries (symmetric=false); layers = total number of distinct tensors
MeraState random_mera(std::size_t m, std::size_t layers, unsigned seed,
                      bool symmetric = true, int N = 2);
// closest (symmetric) isometry to the identity embedding, for solvable points
MeraState identity_mera(std::size_t m, std::size_t layers, bool symmetric = true,
                        int N = 2);

// throws if any layer fails isometry (1e-10) or, in symmetric mode,
// pull-through (1e-9)
void validate_mera(const MeraState& state, double tol = 1e-9);

// ---- channel calculus -------------------------------------------------------
// W is an assembled layer [d^4, d^2]; m gives the fine-site grouping.

// physical chain (pair-sites, uniform two-site term) -> coarse pair
TermPair ascend_physical(const Tensor& h2_phys, const Tensor& W, std::size_t m,
                         int N = 2);
// scale-invariant layer: coarse pair of the layer below -> coarse pair above
TermPair ascend_pair(const TermPair& h, const Tensor& W, std::size_t m, int N = 2);
// adjoints (trace preserving on each component)
DensityPair descend_pair(const DensityPair& rho, const Tensor& W, std::size_t m,
                         int N = 2);
Tensor descend_physical(const DensityPair& rho, const Tensor& W, std::size_t m,
                        int N = 2);  // averaged physical two-site density

// fixed point of descend_pair at a scale-invariant layer (power iteration,
// warm start optional); result is Hermitian, unit trace, PSD up to tol
DensityPair fixed_point_density(const Tensor& W, std::size_t m, double tol = 1e-12,
                                std::size_t max_iter = 400,
                                const DensityPair* warm = nullptr, int N = 2);

// translation-averaged energy per pair-site; throws if the imaginary residue
// exceeds 1e-10
double energy(const MeraState& state, const HamiltonianDensity& H,
              double fp_tol = 1e-12);

// ---- optimization -----------------------------------------------------------

struct OptimizeConfig {
  std::size_t iterations = 100;   // sweeps
  double tolerance = 1e-8;        // energy-change convergence threshold
  unsigned seed = 1;              // used only when an initial state is absent
  std::size_t passes = 3;         // tensor updates per layer per sweep
  double series_tol = 1e-10;      // truncation of the ascended-term series
  std::size_t series_max = 40;    // hard cap on scale-invariant series terms
  double fp_tol = 1e-11;          // descending fixed-point tolerance
  std::string checkpoint_path;    // empty = no checkpoints
  std::size_t checkpoint_every = 5;
  bool verbose = false;           // per-sweep energy to stderr
};

struct OptimizeResult {
  MeraState state;            // best state seen
  std::vector<double> trace;  // per-sweep energies
  bool converged = false;
};

OptimizeResult optimize(MeraState init, const HamiltonianDensity& H,
                        const OptimizeConfig& cfg);

// ---- checkpoints --------------------------------------------------------------
// Structured-text header followed by one tensor record per residual; written
// atomically (temp file then rename). The loader re-validates all invariants.

void checkpoint_save(const MeraState& state, const std::string& path);
MeraState checkpoint_load(const std::string& path);

}  // namespace tnsym
