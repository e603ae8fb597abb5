#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <complex>
#include <random>

#include "doctest.h"
#include "tnsym/ansatz.hpp"
#include "tnsym/conformal.hpp"
#include "tnsym/gates.hpp"
#include "tnsym/mera.hpp"
#include "tnsym/mpo.hpp"

using namespace tnsym;

namespace {

std::size_t ipow(std::size_t b, std::size_t e) {
  std::size_t r = 1;
  while (e--) r *= b;
  return r;
}

MeraState symmetric_state(std::size_t m, unsigned seed) {
  return random_mera(m, 2, seed, true);
}

// product paramagnet network at (3,0,0): every layer maps |+..+> to |+..+>
MeraState product_state(std::size_t m) {
  const std::size_t rows = ipow(2, 4 * m - 2), cols = ipow(2, 2 * m - 2);
  Tensor f1({2, 2});
  const double s = 1.0 / std::sqrt(2.0);
  f1[0] = s; f1[1] = s; f1[2] = s; f1[3] = -s;
  Tensor Fr = f1, Fc = f1;
  while (Fr.dims()[0] < rows) Fr = kron(Fr, f1);
  while (Fc.dims()[0] < cols) Fc = kron(Fc, f1);
  Tensor t({rows, cols});
  for (std::size_t i = 0; i < cols; ++i) t[i * cols + i] = 1.0;
  t = matmul(Fr, matmul(t, Fc));
  MeraState st;
  st.m = m;
  st.symmetric = false;
  st.residual = {t, t};
  return st;
}

}  // namespace

TEST_CASE("per-spin MPO factors reproduce the site tensor") {
  for (int N : {2, 3}) {
    for (int idx = 0; idx < N * N * N; ++idx) {
      GroupElement g = GroupElement::from_index(idx, N);
      Tensor run = mpo_qubit_run(g, 2, false);
      CHECK(distance(run, build_mpo_tensor(g).B) < 1e-14);

      // composing two runs equals one long run
      Tensor a = mpo_qubit_run(g, 3, false);
      Tensor b = mpo_qubit_run(g, 2, true);  // continues on a blue spin
      Tensor ab = contract(a, b, {{1, 0}});  // [l, OUT, IN, r, out, in]
      const std::size_t da = a.dims()[2], db = b.dims()[2];
      ab = ab.permuted({0, 3, 1, 4, 2, 5})
               .reshaped({(std::size_t)N, (std::size_t)N, da * db, da * db});
      CHECK(distance(ab, mpo_qubit_run(g, 5, false)) < 1e-13);
    }
  }
  CHECK_THROWS(mpo_qubit_run(GroupElement(1, 0, 0, 2), 0, false));
}

TEST_CASE("scheme registry scale factors") {
  CHECK(scheme_scale_factor("4:2") == 2.0);
  CHECK(scheme_scale_factor("ternary") == 3.0);
  CHECK_THROWS(scheme_scale_factor("5:4"));
}

TEST_CASE("scaling superoperator is unital with leading eigenvalue one") {
  MeraState s = symmetric_state(2, 31);
  Tensor S = scaling_superoperator(s);
  const std::size_t dc = s.site_dim() * s.site_dim(), n = dc * dc;
  REQUIRE(S.dims()[0] == n);

  Tensor id({n});
  for (std::size_t i = 0; i < dc; ++i) id[i * dc + i] = 1.0;
  Tensor out = contract(S, id.reshaped({n}), {{1, 0}});
  CHECK(distance(out, id) < 1e-10);

  auto eigs = eig_dense(S, 6);
  CHECK(std::abs(eigs[0].value) <= 1.0 + 1e-6);
  bool has_unit = false;
  for (const auto& p : eigs)
    if (std::abs(p.value - cdbl(1, 0)) < 1e-8) has_unit = true;
  CHECK(has_unit);
}

TEST_CASE("twisted superoperators: embedding, radius, and guards") {
  MeraState s = symmetric_state(2, 47);
  const std::size_t dc = s.site_dim() * s.site_dim();

  // identity twist reduces to the plain superoperator once both virtual bonds
  // are closed with the uniform covector; the site tensor's bond row-sum
  // contributes a factor N^(m-1)
  {
    TwistedMap te = twisted_superoperator(s, GroupElement(0, 0, 0, 2));
    REQUIRE(te.dim() == dc * dc * 2);
    Tensor Se = twisted_superoperator_dense(s, GroupElement(0, 0, 0, 2));
    Tensor S = scaling_superoperator(s);
    const std::size_t chi = 2, norm = 2;  // N^(m-1) at N = 2, m = 2
    Tensor closed({dc * dc, dc * dc});
    for (std::size_t r = 0; r < dc * dc; ++r)
      for (std::size_t c = 0; c < dc * dc; ++c) {
        cdbl acc = 0;
        for (std::size_t l = 0; l < chi; ++l)
          for (std::size_t k = 0; k < chi; ++k)
            acc += Se[(r * chi + l) * dc * dc * chi + c * chi + k];
        closed[r * dc * dc + c] = acc / (double)norm;
      }
    CHECK(distance(closed, S) < 1e-10 * (1.0 + S.norm()));
  }

  // spectral radius stays within 1 + 1e-6 for every twist
  for (int idx = 0; idx < 8; ++idx) {
    GroupElement g = GroupElement::from_index(idx, 2);
    Tensor M = twisted_superoperator_dense(s, g);
    auto eigs = eig_dense(M, 1);
    CHECK(std::abs(eigs[0].value) <= 1.0 + 1e-6);
  }

  // unsymmetric states are rejected for nontrivial twists
  MeraState u = random_mera(2, 2, 11, false);
  CHECK_THROWS(twisted_superoperator(u, GroupElement(1, 1, 1, 2)));
}

TEST_CASE("product state has zero central charge and a gapped spectrum") {
  MeraState st = product_state(2);
  CHECK(std::abs(central_charge(st)) < 1e-6);

  // all non-unit eigenvalues sit well below one: no low scaling dimensions
  auto eigs = superoperator_spectrum(st, GroupElement(0, 0, 0, 2), 8);
  CHECK(std::abs(eigs[0].value - cdbl(1, 0)) < 1e-8);
  // second eigenvalue ~2e-9 here; anything below 1/4 means every
  // non-identity field has dimension above two
  CHECK(std::abs(eigs[1].value) < 0.25);
}

TEST_CASE("dimension extraction and trivial logarithms") {
  std::vector<EigPair> pairs;
  pairs.push_back({cdbl(1, 0), {}});
  pairs.push_back({cdbl(0.5, 0), {}});
  pairs.push_back({cdbl(1.0 / 3.0, 0), {}});
  GroupElement e(0, 0, 0, 2);

  ScalingSpectrum s2 = extract_dimensions(pairs, e, 2.0);
  CHECK(s2.entries[0].delta == doctest::Approx(0.0));
  CHECK(s2.entries[1].delta == doctest::Approx(1.0));

  ScalingSpectrum s3 = extract_dimensions(pairs, e, 3.0);
  CHECK(s3.entries[2].delta == doctest::Approx(1.0));

  ScalingSpectrum sd = extract_dimensions(pairs, e, 2.0, true);
  CHECK(sd.entries.size() == 2);
  CHECK(sd.entries[0].delta == doctest::Approx(1.0));

  CHECK_THROWS(extract_dimensions(pairs, e, 1.0));
}

TEST_CASE("degeneracy averaging groups split towers") {
  ScalingSpectrum sp;
  sp.twist = GroupElement(0, 0, 0, 2);
  auto add = [&sp](double d) {
    ScalingEntry e;
    e.lambda = std::pow(2.0, -d);
    e.delta = e.delta_raw = d;
    sp.entries.push_back(e);
  };
  add(0.99);
  add(1.01);
  add(2.5);

  ScalingSpectrum avg = degeneracy_average(sp, 0.05);
  CHECK(avg.entries[0].delta == doctest::Approx(1.0));
  CHECK(avg.entries[1].delta == doctest::Approx(1.0));
  CHECK(avg.entries[0].delta_raw == doctest::Approx(0.99));
  CHECK(avg.entries[2].delta == doctest::Approx(2.5));

  // isolated values pass through unchanged
  ScalingSpectrum lone = degeneracy_average(sp, 1e-6);
  CHECK(lone.entries[0].delta == doctest::Approx(0.99));

  // synthetic split tower recovers its mean
  ScalingSpectrum tower;
  tower.twist = sp.twist;
  for (double eps : {-0.02, -0.01, 0.01, 0.02}) {
    ScalingEntry e;
    e.delta = e.delta_raw = 0.125 + eps;
    tower.entries.push_back(e);
  }
  ScalingSpectrum rec = degeneracy_average(tower, 0.05);
  for (const auto& e : rec.entries) CHECK(e.delta == doctest::Approx(0.125));
}
