#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "tnsym/ed.hpp"
#include "tnsym/group.hpp"
#include "tnsym/linalg.hpp"
#include "tnsym/mpo.hpp"
#include "tnsym/tensor.hpp"

using namespace tnsym;

TEST_CASE("dense Hamiltonian basics") {
  // product paramagnet: exactly -3 per site, single-flip gap a
  Tensor H = dense_hamiltonian(3, 0, 0, 4);
  HermEig eig = eig_hermitian(H);
  CHECK(eig.values[0] == doctest::Approx(-12.0).epsilon(1e-12));
  CHECK(eig.values[1] == doctest::Approx(-9.0).epsilon(1e-12));

  // Hermiticity for random couplings
  std::mt19937 rng(17);
  std::uniform_real_distribution<double> uni(-2, 2);
  for (int trial = 0; trial < 3; ++trial) {
    Tensor Hr = dense_hamiltonian(uni(rng), uni(rng), uni(rng), 3);
    CHECK(distance(Hr, dagger(Hr)) < 1e-12 * (1 + Hr.norm()));
  }

  CHECK_THROWS(dense_hamiltonian(1, 1, 1, 7));  // dimension cap
}

TEST_CASE("CZ-circuit generator: diagonal matches the MPO, conserved iff a = c") {
  const std::size_t L = 3;
  const std::vector<double> d = u001_diagonal(L);
  Tensor U = assemble_operator(GroupElement(0, 0, 1, 2), L);
  for (std::size_t s = 0; s < d.size(); ++s) {
    CHECK(std::abs(U.data()[s * d.size() + s] - d[s]) < 1e-12);
  }

  auto comm_norm = [&](double a, double c) {
    Tensor H = dense_hamiltonian(a, 1, c, L);
    Tensor HU = H, UH = H;
    for (std::size_t r = 0; r < d.size(); ++r)
      for (std::size_t s = 0; s < d.size(); ++s) {
        HU.data()[r * d.size() + s] = H.data()[r * d.size() + s] * d[s];
        UH.data()[r * d.size() + s] = d[r] * H.data()[r * d.size() + s];
      }
    return distance(HU, UH);
  };
  CHECK(comm_norm(1.0, 1.0) < 1e-12);
  CHECK(comm_norm(1.3, 0.4) > 1e-2);
}

TEST_CASE("blocked spectra agree with dense diagonalization") {
  for (auto [a, b, c] : std::vector<std::array<double, 3>>{
           {1, 1, 1}, {1.0, 0.7, 0.3}, {0.5, -0.4, 1.2}}) {
    const std::size_t L = 3, dim = 64;
    HermEig dense = eig_hermitian(dense_hamiltonian(a, b, c, L));
    SpectrumTable blocked = lowest_states(a, b, c, L, dim);
    REQUIRE(blocked.states.size() == dim);
    for (std::size_t i = 0; i < dim; ++i)
      CHECK(blocked.states[i].energy == doctest::Approx(dense.values[i]).epsilon(1e-9));
  }
}

TEST_CASE("frozen reference energies") {
  // independently computed by sparse/dense diagonalization of the same chain
  SpectrumTable t4 = lowest_states(1, 1, 1, 4, 12);
  CHECK(t4.states[0].energy == doctest::Approx(-7.302186817874).epsilon(1e-10));
  CHECK(t4.states[1].energy == doctest::Approx(-6.948343148566).epsilon(1e-10));
  CHECK(t4.states[2].energy == doctest::Approx(-6.948343148566).epsilon(1e-10));
  CHECK(t4.states[3].energy == doctest::Approx(-6.256838127689).epsilon(1e-10));
  CHECK(t4.states[11].energy == doctest::Approx(-4.346195348663).epsilon(1e-10));

  SpectrumTable t6 = lowest_states(1, 1, 1, 6, 4);
  CHECK(t6.states[0].energy == doctest::Approx(-10.774781834890).epsilon(1e-10));
  CHECK(t6.states[1].energy == doctest::Approx(-10.543710125427).epsilon(1e-10));
  CHECK(t6.states[3].energy == doctest::Approx(-10.063086807485).epsilon(1e-10));

  SpectrumTable s4 = lowest_states(1, 0.6, 1, 4, 4);
  CHECK(s4.states[0].energy == doctest::Approx(-6.385390334750).epsilon(1e-10));
  CHECK(s4.states[1].energy == doctest::Approx(-6.002157800768).epsilon(1e-10));
  SpectrumTable s6 = lowest_states(1, 0.6, 1, 6, 2);
  CHECK(s6.states[0].energy == doctest::Approx(-9.425026587305).epsilon(1e-10));
  CHECK(s6.states[1].energy == doctest::Approx(-9.171672497248).epsilon(1e-10));
}

TEST_CASE("ground state on the critical line is fully symmetric") {
  for (std::size_t L : {std::size_t(4), std::size_t(6)}) {
    SpectrumTable t = lowest_states(1, 1, 1, L, 2);
    const SpectrumEntry& gs = t.states[0];
    CHECK(gs.u100 == doctest::Approx(1.0));
    CHECK(gs.u010 == doctest::Approx(1.0));
    CHECK(gs.u001 == doctest::Approx(1.0));
    CHECK(gs.momentum == 0);
    CHECK(std::abs(gs.thalf - cdbl(1, 0)) < 1e-9);
    // unique symmetric ground state: no degeneracy at finite size
    CHECK(t.states[1].energy > gs.energy + 1e-6);
  }
}

TEST_CASE("rescaled levels and extrapolation") {
  // synthetic exact recovery of a line through two points
  std::vector<std::pair<std::size_t, double>> pts{{4, 2.0 + 3.0 / 4}, {8, 2.0 + 3.0 / 8}};
  LinearFit fit = fit_inverse_length(pts);
  CHECK(fit.intercept == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(fit.slope == doctest::Approx(3.0).epsilon(1e-12));
  CHECK(fit.rms < 1e-12);
  CHECK_THROWS(fit_inverse_length({{4, 1.0}}));

  // the affine rescale pins the first excited level at delta_ref exactly
  for (double b : {1.0, 0.6}) {
    SpectrumTable t = lowest_states(1, b, 1, 4, 12);
    rescaled_levels(t, smallest_dimension(b));
    CHECK(t.states[0].rescaled == doctest::Approx(0.0));
    CHECK(t.states[1].rescaled == doctest::Approx(smallest_dimension(b)).epsilon(1e-12));
    // that level is the X-string-charged doublet at momentum zero
    CHECK(t.states[1].u100 * t.states[1].u010 == doctest::Approx(-1.0));
    CHECK(t.states[1].momentum == 0);
  }
}

TEST_CASE("closed-form smallest dimensions on the critical line") {
  CHECK(smallest_dimension(1.0) == doctest::Approx(0.125).epsilon(1e-12));
  CHECK(smallest_dimension(0.6) == doctest::Approx(0.1875).epsilon(1e-12));
  CHECK(smallest_dimension(0.0) == doctest::Approx(0.25).epsilon(1e-12));
  CHECK_THROWS(smallest_dimension(3.0));
}

TEST_CASE("symmetric channels: uniform vs staggered translation") {
  // the uniform fully-symmetric channel has no relevant level, while the
  // staggered (half-translation odd) channel does
  std::vector<SpectrumTable> tables;
  for (std::size_t L : {std::size_t(4), std::size_t(6)}) {
    SpectrumTable t = lowest_states(1, 0.6, 1, L, 40);
    rescaled_levels(t, smallest_dimension(0.6));
    tables.push_back(std::move(t));
  }
  auto symmetric = [](const SpectrumEntry& s) {
    return s.u100 > 0 && s.u010 > 0 && s.u001 > 0 && s.momentum == 0;
  };
  auto uniform = [&](const SpectrumEntry& s) {
    return symmetric(s) && std::real(s.thalf) > 0 && s.rescaled > 1e-9;
  };
  auto staggered = [&](const SpectrumEntry& s) {
    return symmetric(s) && std::real(s.thalf) < 0;
  };
  std::vector<LinearFit> uni = extrapolate_levels(tables, uniform, 2);
  REQUIRE(!uni.empty());
  for (const LinearFit& f : uni) CHECK(f.intercept > 1.5);
  std::vector<LinearFit> stag = extrapolate_levels(tables, staggered, 1);
  REQUIRE(!stag.empty());
  CHECK(stag[0].intercept < 1.2);  // relevant level in the staggered channel
}

TEST_CASE("density extrapolation on the critical line") {
  LinearFit fit = extrapolated_density(1, 1, 1, {4, 6});
  // ground energies per site: -1.825547 (L=4), -1.795797 (L=6); the
  // extrapolation must land between the L=6 value and a CFT-ish estimate
  CHECK(fit.intercept > -1.80);
  CHECK(fit.intercept < -1.70);
}
