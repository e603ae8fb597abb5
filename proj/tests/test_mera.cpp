#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cstdio>
#include <fstream>
#include <random>
#include <vector>

#include "tnsym/ansatz.hpp"
#include "tnsym/ed.hpp"
#include "tnsym/gates.hpp"
#include "tnsym/linalg.hpp"
#include "tnsym/mera.hpp"
#include "tnsym/tensor.hpp"

using namespace tnsym;

namespace {

std::size_t ipow(std::size_t b, std::size_t e) {
  std::size_t r = 1;
  while (e--) r *= b;
  return r;
}

Tensor random_hermitian(std::size_t n, unsigned seed) {
  std::mt19937 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  Tensor t({n, n});
  for (auto& z : t.data()) z = cdbl(gauss(rng), gauss(rng));
  Tensor h = dagger(t);
  for (std::size_t i = 0; i < t.size(); ++i) t[i] = 0.5 * (t[i] + h[i]);
  return t;
}

Tensor random_density(std::size_t n, unsigned seed) {
  std::mt19937 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  Tensor a({n, n});
  for (auto& z : a.data()) z = cdbl(gauss(rng), gauss(rng));
  Tensor rho = matmul(a, dagger(a));
  cdbl tr = rho.trace();
  return rho.scaled(1.0 / tr.real());
}

cdbl trace_product(const Tensor& a, const Tensor& b) {
  const std::size_t n = a.dims()[0], m = a.dims()[1];
  cdbl s = 0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < m; ++j) s += a[i * m + j] * b[j * n + i];
  return s;
}

}  // namespace

TEST_CASE("abc Hamiltonian density reproduces the spin chain and its symmetries") {
  CHECK_THROWS(build_abc_hamiltonian(-1, 0, 0));

  HamiltonianDensity H = build_abc_hamiltonian(1.3, 0.7, 0.4);
  CHECK(distance(H.term, dagger(H.term)) < 1e-14);

  // summed over pair-sites of an L=4 ring it must equal the dense Hamiltonian
  const std::size_t L = 4;
  Tensor sum({256, 256});
  for (std::size_t j = 0; j < L; ++j)
    sum += embed_two_site(H.term, 4, L, j, (j + 1) % L);
  CHECK(distance(sum, dense_hamiltonian(1.3, 0.7, 0.4, L)) < 1e-12);

  // the sublattice spin flips commute with the density term itself
  Tensor xr = Tensor::identity(16), xb = Tensor::identity(16);
  for (std::size_t q = 0; q < 4; q += 2) xr = matmul(xr, embed_one_site(pauli_x(2), 2, 4, q));
  for (std::size_t q = 1; q < 4; q += 2) xb = matmul(xb, embed_one_site(pauli_x(2), 2, 4, q));
  CHECK(distance(matmul(H.term, xr), matmul(xr, H.term)) < 1e-12);
  CHECK(distance(matmul(H.term, xb), matmul(xb, H.term)) < 1e-12);

  // the diagonal symmetry factor commutes with the full ring iff a = c, and
  // conjugation exchanges the a and c terms
  std::vector<double> d = u001_diagonal(L);
  auto conj_by_u = [&](const Tensor& M) {
    Tensor out = M;
    for (std::size_t r = 0; r < 256; ++r)
      for (std::size_t c = 0; c < 256; ++c) out[r * 256 + c] *= d[r] * d[c];
    return out;
  };
  Tensor Hd = dense_hamiltonian(2.0, 0.5, 0.0, L);
  CHECK(distance(conj_by_u(Hd), dense_hamiltonian(0.0, 0.5, 2.0, L)) < 1e-12);
  Tensor Hs = dense_hamiltonian(1.0, 1.0, 1.0, L);
  CHECK(distance(conj_by_u(Hs), Hs) < 1e-12);
}

TEST_CASE("identity terms ascend to identity with the channel multiplicities") {
  const std::size_t m = 2, d = 4, dc = 16, d4 = 256;
  Tensor W = assemble(random_symmetric_residual(m, 2 * m, 2, 41), m, 2 * m, 2);
  TermPair id{Tensor::identity(dc), Tensor::identity(d4)};
  TermPair up = ascend_pair(id, W, m);
  CHECK(distance(up.h2, Tensor::identity(dc)) < 1e-11);
  CHECK(distance(up.h4, Tensor::identity(d4).scaled(3.0)) < 1e-11);
  (void)d;
}

TEST_CASE("ascending channels match dense window conjugation") {
  const std::size_t m = 2, d = 4, dc = 16, d4 = 256;
  Tensor W = assemble(random_symmetric_residual(m, 2 * m, 2, 7), m, 2 * m, 2);
  Tensor h2 = random_hermitian(dc, 11);
  Tensor h4 = random_hermitian(d4, 12);
  TermPair up2 = ascend_pair({h2, Tensor({d4, d4})}, W, m);
  TermPair up4 = ascend_pair({Tensor({dc, dc}), h4}, W, m);

  // in-block channel: W^dag (1 x h2 x 1) W
  Tensor mid = kron(kron(Tensor::identity(d), h2), Tensor::identity(d));
  Tensor o2 = matmul(dagger(W), matmul(mid, W));
  CHECK(distance(up2.h2, o2) < 1e-11);

  // straddle channels against the dense two-block isometry
  Tensor WW = kron(W, W);  // [d^8, d^4]
  auto dense_window = [&](const Tensor& op, std::size_t pre, std::size_t post) {
    Tensor X = WW.reshaped({pre, op.dims()[0], post, dc * dc});
    X = contract(op, X, {{1, 1}});                       // [out, pre, post, C]
    X = X.permuted({1, 0, 2, 3}).reshaped({WW.dims()[0], dc * dc});
    return matmul(dagger(WW), X);
  };
  CHECK(distance(up2.h4, dense_window(h2, ipow(d, 3), ipow(d, 3))) < 1e-10);
  Tensor o31 = dense_window(h4, d, ipow(d, 3));
  Tensor o13 = dense_window(h4, ipow(d, 3), d);
  CHECK(distance(up4.h4, o31 + o13) < 1e-10);
  CHECK(up4.h2.norm() < 1e-12);
}

TEST_CASE("descend is the exact adjoint of ascend") {
  const std::size_t m = 2, dc = 16, d4 = 256;
  Tensor W = assemble(random_symmetric_residual(m, 2 * m, 2, 19), m, 2 * m, 2);
  TermPair h{random_hermitian(dc, 21), random_hermitian(d4, 22)};
  DensityPair rho{random_density(dc, 23), random_density(d4, 24)};

  TermPair up = ascend_pair(h, W, m);
  DensityPair down = descend_pair(rho, W, m);
  cdbl lhs = trace_product(up.h2, rho.r2) + trace_product(up.h4, rho.r4);
  cdbl rhs = trace_product(h.h2, down.r2) + trace_product(h.h4, down.r4);
  CHECK(std::abs(lhs - 2.0 * rhs) < 1e-10 * std::abs(lhs));

  // trace preservation of both density components
  CHECK(std::abs(down.r2.trace() - cdbl(1, 0)) < 1e-12);
  CHECK(std::abs(down.r4.trace() - cdbl(1, 0)) < 1e-12);

  // transitional layer: 2m physical positions per block
  Tensor hp = random_hermitian(16, 31);
  TermPair upt = ascend_physical(hp, W, m);
  Tensor downp = descend_physical(rho, W, m);
  cdbl lhst = trace_product(upt.h2, rho.r2) + trace_product(upt.h4, rho.r4);
  cdbl rhst = trace_product(hp, downp);
  CHECK(std::abs(lhst - 2.0 * (double)m * rhst) < 1e-10 * std::abs(lhst));
  CHECK(std::abs(downp.trace() - cdbl(1, 0)) < 1e-12);
}

TEST_CASE("descending fixed point is a valid state") {
  const std::size_t m = 2;
  Tensor W = assemble(random_symmetric_residual(m, 2 * m, 2, 57), m, 2 * m, 2);
  DensityPair fp = fixed_point_density(W, m, 1e-13, 500);
  DensityPair again = descend_pair(fp, W, m);
  CHECK(distance(again.r2, fp.r2) < 1e-11);
  CHECK(distance(again.r4, fp.r4) < 1e-11);
  CHECK(std::abs(fp.r2.trace() - cdbl(1, 0)) < 1e-12);
  CHECK(std::abs(fp.r4.trace() - cdbl(1, 0)) < 1e-12);
  for (const Tensor& r : {fp.r2, fp.r4}) {
    CHECK(distance(r, dagger(r)) < 1e-11);
    HermEig eg = eig_hermitian(r);
    for (double v : eg.values) CHECK(v > -1e-10);
  }
}

TEST_CASE("product mera reproduces the paramagnet energy") {
  // t = F (identity embedding) F^dag maps the uniform superposition to the
  // uniform superposition, so the assembled network is the product paramagnet
  const std::size_t m = 2;
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
  validate_mera(st);
  HamiltonianDensity H = build_abc_hamiltonian(3, 0, 0);
  CHECK(energy(st, H) == doctest::Approx(-3.0).epsilon(1e-9));
}

TEST_CASE("energy respects the variational bound and layer-count consistency") {
  MeraState st = random_mera(2, 2, 2024, true);
  validate_mera(st);
  HamiltonianDensity H = build_abc_hamiltonian(1, 1, 1);
  const double e = energy(st, H);
  // infinite-chain ground density extrapolated from exact diagonalization
  CHECK(e > -1.787);

  // duplicating the scale-invariant tensor as an extra transitional layer
  // must not move the energy
  MeraState st2 = st;
  st2.residual.push_back(st.residual.back());
  CHECK(energy(st2, H) == doctest::Approx(e).epsilon(1e-9));
}

TEST_CASE("optimizer reaches the exactly solvable point") {
  HamiltonianDensity H = build_abc_hamiltonian(3, 0, 0);
  OptimizeConfig cfg;
  cfg.iterations = 200;
  cfg.tolerance = 1e-10;
  cfg.passes = 3;
  MeraState init = random_mera(2, 2, 5, false);
  OptimizeResult r = optimize(init, H, cfg);
  CHECK(r.trace.back() == doctest::Approx(-3.0).epsilon(1e-6));

  // monotone-ish decrease: transient increases below 1e-8
  for (std::size_t k = 1; k < r.trace.size(); ++k)
    CHECK(r.trace[k] <= r.trace[k - 1] + 1e-8);

  // determinism: identical seed, identical trace
  OptimizeResult r2 = optimize(random_mera(2, 2, 5, false), H, cfg);
  REQUIRE(r2.trace.size() == r.trace.size());
  for (std::size_t k = 0; k < r.trace.size(); ++k) CHECK(r2.trace[k] == r.trace[k]);
}

TEST_CASE("symmetric optimization stays on the symmetric manifold") {
  HamiltonianDensity H = build_abc_hamiltonian(1, 1, 1);
  OptimizeConfig cfg;
  cfg.iterations = 8;
  cfg.tolerance = 0;  // run all sweeps
  MeraState init = random_mera(2, 2, 99, true);
  OptimizeResult r = optimize(init, H, cfg);
  validate_mera(r.state, 1e-9);
  CHECK(r.trace.back() < r.trace.front());
  for (std::size_t k = 1; k < r.trace.size(); ++k)
    CHECK(r.trace[k] <= r.trace[k - 1] + 1e-8);
}

TEST_CASE("checkpoints round-trip and reject corruption") {
  MeraState st = random_mera(2, 2, 7, true);
  const std::string p1 = "mera_ckpt_a.bin", p2 = "mera_ckpt_b.bin";
  checkpoint_save(st, p1);
  MeraState back = checkpoint_load(p1);
  checkpoint_save(back, p2);

  auto slurp = [](const std::string& p) {
    std::ifstream f(p, std::ios::binary);
    return std::string((std::istreambuf_iterator<char>(f)),
                       std::istreambuf_iterator<char>());
  };
  std::string b1 = slurp(p1), b2 = slurp(p2);
  REQUIRE(!b1.empty());
  CHECK(b1 == b2);

  // flip the exponent byte of one stored coefficient
  std::string tampered = b1;
  const std::size_t off = b1.find("data\n");
  REQUIRE(off != std::string::npos);
  tampered[off + 12] = (char)0x7f;
  {
    std::ofstream f(p1, std::ios::binary);
    f.write(tampered.data(), (std::streamsize)tampered.size());
  }
  CHECK_THROWS(checkpoint_load(p1));

  // version bump must be rejected explicitly
  std::string versioned = b2;
  versioned.replace(versioned.find("v1"), 2, "v9");
  {
    std::ofstream f(p2, std::ios::binary);
    f.write(versioned.data(), (std::streamsize)versioned.size());
  }
  CHECK_THROWS_WITH_AS(checkpoint_load(p2),
                       doctest::Contains("unsupported version"),
                       std::runtime_error);
  std::remove(p1.c_str());
  std::remove(p2.c_str());
}
