#pragma once
// Exact diagonalization of the two-coupling-family ("abc") spin chain on
// small periodic lattices, with simultaneous resolution of the on-site
// Z_2 x Z_2 charges, the diagonal CZ-circuit generator, and translations by
// one site (a red-blue pair) and by one spin.
//
// Hamiltonian on n = 2L spins (qubits, spin 0 most significant), periodic:
//   H = sum_q [ -(a/2) X_q - (b/2) Z_q Z_{q+2} - (c/2) Z_q X_{q+1} Z_{q+2} ]
// At (a,b,c) = (3,0,0) the ground energy is exactly -3 per site.
//
// Diagonalization is blocked by the abelian permutation group generated by
// the two X strings and the one-site translation; each (momentum, charge,
// charge) block is diagonalized densely, so all low-lying states come with
// unambiguous labels.

#include <cstddef>
#include <functional>
#include <vector>

#include "tnsym/tensor.hpp"

namespace tnsym {

struct SpectrumEntry {
  double energy = 0;
  double u100 = 0, u010 = 0;  // on-site X-string charges, +-1
  double u001 = 0;            // CZ-circuit charge; NaN unless a == c
  int momentum = 0;           // T_site eigenvalue exp(2 pi i momentum / L)
  cdbl thalf{0, 0};           // one-spin translation; NaN unless u100 == u010
  double rescaled = 0;        // filled by rescaled_levels
};

struct SpectrumTable {
  std::size_t L = 0;
  double a = 0, b = 0, c = 0;
  std::vector<SpectrumEntry> states;  // sorted by energy
};

// dense matrix of H, dimension 4^L (cap guards the dense route)
Tensor dense_hamiltonian(double a, double b, double c, std::size_t L,
                         std::size_t cap_dim = 4096);

// diagonal of the CZ-circuit generator U_{(0,0,1)} over the 4^L basis
std::vector<double> u001_diagonal(std::size_t L);

// k lowest eigenstates with all labels, via charge/momentum blocking
// (4^L <= 65536, i.e. L <= 8)
SpectrumTable lowest_states(double a, double b, double c, std::size_t L,
                            std::size_t k);

double ground_energy(double a, double b, double c, std::size_t L);

// affine rescaling: level i -> delta_ref * (E_i - E_0) / (E_1 - E_0),
// where E_1 is the lowest energy above the ground level
void rescaled_levels(SpectrumTable& table, double delta_ref);

struct LinearFit {
  double intercept = 0;  // L -> infinity value
  double slope = 0;      // coefficient of 1/L
  double rms = 0;        // fit residual
};

// least-squares fit y = intercept + slope / L; throws with < 2 points
LinearFit fit_inverse_length(const std::vector<std::pair<std::size_t, double>>& pts);

// per-level 1/L extrapolation of the rescaled levels that pass `select`,
// matched across system sizes by energy order within the selection
std::vector<LinearFit> extrapolate_levels(
    const std::vector<SpectrumTable>& tables,
    const std::function<bool(const SpectrumEntry&)>& select,
    std::size_t max_levels);

// ground energy per site extrapolated linearly in 1/L
LinearFit extrapolated_density(double a, double b, double c,
                               const std::vector<std::size_t>& Ls);

// smallest nonzero scaling dimension on the critical line: the compact-boson
// radius at coupling b is R^2 = pi / (2 arccos(2b/(b-3))), and the minimal
// dimension is min(1/R^2, R^2/4)
double smallest_dimension(double b);

}  // namespace tnsym
