#include "tnsym/mera.hpp"

#include <cmath>
#include <complex>
#include <cstdio>
#include <fstream>
#include <random>
#include <sstream>
#include <stdexcept>
#include <string>

#include "tnsym/checkpoint.hpp"
#include "tnsym/gates.hpp"
#include "tnsym/linalg.hpp"

namespace tnsym {

namespace {

std::size_t ipow(std::size_t b, std::size_t e) {
  std::size_t r = 1;
  while (e--) r *= b;
  return r;
}

cdbl trace_product(const Tensor& a, const Tensor& b) {  // tr(a b)
  const std::size_t n = a.dims()[0], m = a.dims()[1];
  if (b.dims()[0] != m || b.dims()[1] != n)
    throw std::invalid_argument("trace_product: shape mismatch");
  cdbl s = 0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < m; ++j) s += a[i * m + j] * b[j * n + i];
  return s;
}

Tensor hermitized(const Tensor& t) {
  Tensor h = dagger(t);
  const std::size_t n = t.size();
  Tensor out = t;
  for (std::size_t i = 0; i < n; ++i) out[i] = 0.5 * (out[i] + h[i]);
  return out;
}

Tensor scaled_identity(std::size_t n, cdbl s) {
  Tensor t({n, n});
  for (std::size_t i = 0; i < n; ++i) t[i * n + i] = s;
  return t;
}

// layer reshapes reused by every channel; d = fine site dimension
struct LayerViews {
  std::size_t d, d3, dc, rows;
  Tensor Wr;   // [f0, f123, C]
  Tensor Wl;   // [f012, f3, C]
  Tensor Wm;   // [f0, f12, f3, C]
  Tensor PR;   // sum_{f123} W*[f0o f123; Co] W[f0i f123; Ci] -> [f0o, Co, f0i, Ci]
  Tensor PL;   // sum_{f012} W*[f012 f3o; Co] W[f012 f3i; Ci] -> [f3o, Co, f3i, Ci]
};

LayerViews make_views(const Tensor& W, std::size_t d) {
  LayerViews v;
  v.d = d;
  v.d3 = d * d * d;
  v.dc = W.dims()[1];
  v.rows = W.dims()[0];
  if (v.rows != d * v.d3 || v.dc != d * d)
    throw std::invalid_argument("layer tensor has unexpected shape");
  v.Wr = W.reshaped({d, v.d3, v.dc});
  v.Wl = W.reshaped({v.d3, d, v.dc});
  v.Wm = W.reshaped({d, d * d, d, v.dc});
  v.PR = contract(v.Wr.conjugated(), v.Wr, {{1, 1}});
  v.PL = contract(v.Wl.conjugated(), v.Wl, {{0, 0}});
  return v;
}

// density tensor [in-legs..., out-legs...]: tr(O rho) = sum O[o,i] rho[i,o]
Tensor rho4_view(const Tensor& r4, std::size_t dc) {
  return r4.reshaped({dc, dc, dc, dc});  // [CLi, CRi, CLo, CRo]
}

}  // namespace

// ---- Hamiltonian ---------------------------------------------------------------

HamiltonianDensity build_abc_hamiltonian(double a, double b, double c) {
  if (a < 0 || b < 0 || c < 0)
    throw std::invalid_argument("build_abc_hamiltonian: couplings must be >= 0");
  const int N = 2;
  const Tensor X = pauli_x(N), Z = pauli_z(N);
  auto one = [&](const Tensor& op, std::size_t q) { return embed_one_site(op, N, 4, q); };
  Tensor h({16, 16});
  // on-site transverse field, split between the two adjacent window terms
  for (std::size_t q = 0; q < 4; ++q) h += one(X, q).scaled(-a / 4.0);
  // sublattice Ising couplings (qubits two apart)
  h += matmul(one(Z, 0), one(Z, 2)).scaled(-b / 2.0);
  h += matmul(one(Z, 1), one(Z, 3)).scaled(-b / 2.0);
  // three-qubit cluster couplings
  h += matmul(matmul(one(Z, 0), one(X, 1)), one(Z, 2)).scaled(-c / 2.0);
  h += matmul(matmul(one(Z, 1), one(X, 2)), one(Z, 3)).scaled(-c / 2.0);
  return HamiltonianDensity{a, b, c, N, h};
}

// ---- state ---------------------------------------------------------------------

std::size_t MeraState::site_dim() const { return ipow((std::size_t)N, m); }

Tensor MeraState::layer(std::size_t i) const {
  return assemble(residual.at(i), m, 2 * m, N);
}

MeraState random_mera(std::size_t m, std::size_t layers, unsigned seed,
                      bool symmetric, int N) {
  if (layers < 2) throw std::invalid_argument("random_mera: need >= 2 layers");
  MeraState s;
  s.N = N;
  s.m = m;
  s.symmetric = symmetric;
  for (std::size_t i = 0; i < layers; ++i) {
    Tensor t = random_symmetric_residual(m, 2 * m, N, seed + 977u * (unsigned)i);
    if (!symmetric) {
      // keep the Gaussian data, drop the commutant mask
      std::mt19937 rng(seed + 977u * (unsigned)i + 13u);
      std::normal_distribution<double> gauss(0.0, 1.0);
      for (auto& z : t.data()) z = cdbl(gauss(rng), gauss(rng));
      t = polar_isometry(t, {0}, {1});
    }
    s.residual.push_back(t);
  }
  return s;
}

MeraState identity_mera(std::size_t m, std::size_t layers, bool symmetric, int N) {
  if (layers < 2) throw std::invalid_argument("identity_mera: need >= 2 layers");
  const std::size_t rows = ipow((std::size_t)N, 4 * m - 2);
  const std::size_t cols = ipow((std::size_t)N, 2 * m - 2);
  Tensor e({rows, cols});
  for (std::size_t i = 0; i < cols; ++i) e[i * cols + i] = -1.0;
  Tensor t = symmetric ? symmetric_polar(e, m, 2 * m, N) : polar_isometry(e, {0}, {1});
  MeraState s;
  s.N = N;
  s.m = m;
  s.symmetric = symmetric;
  s.residual.assign(layers, t);
  return s;
}

void validate_mera(const MeraState& s, double tol) {
  if (s.residual.size() < 2)
    throw std::invalid_argument("mera state needs a transitional and a scale-invariant layer");
  for (std::size_t i = 0; i < s.residual.size(); ++i) {
    Tensor W = s.layer(i);
    const std::size_t dc = W.dims()[1];
    // negated comparisons so that NaN/Inf from corrupted data also fail
    if (!(distance(matmul(dagger(W), W), Tensor::identity(dc)) <= 1e-10))
      throw std::runtime_error("mera invariant violation: layer not isometric");
    if (s.symmetric) {
      for (const GroupElement& g : all_elements(s.N))
        if (!(verify_pullthrough(W, s.m, 2 * s.m, g) <= tol))
          throw std::runtime_error("mera invariant violation: pull-through failed");
    }
  }
}

// ---- ascending channels ----------------------------------------------------------

// scale-invariant layer: inputs sit at odd positions relative to the blocks,
// outputs at even positions of the coarse chain (shifted odd for the next layer)
TermPair ascend_pair(const TermPair& h, const Tensor& W, std::size_t m, int N) {
  const std::size_t d = ipow((std::size_t)N, m);
  LayerViews v = make_views(W, d);
  const std::size_t dc = v.dc, d4 = dc * dc;

  // in-block bond (fine sites 1,2)
  Tensor X = contract(h.h2, v.Wm, {{1, 1}});  // [out, f0, f3, C]
  X = X.permuted({1, 0, 2, 3}).reshaped({v.rows, dc});
  Tensor h2p = matmul(dagger(W), X);

  // two-site straddle -> four-site coarse
  Tensor h2r = h.h2.reshaped({d, d, d, d});  // [xo, yo, xi, yi]
  Tensor Q = contract(h2r, v.PR, {{1, 0}, {3, 2}});   // [xo, xi, CRo, CRi]
  Tensor O = contract(v.PL, Q, {{0, 0}, {2, 1}});     // [CLo, CLi, CRo, CRi]
  Tensor h4p = O.permuted({0, 2, 1, 3}).reshaped({d4, d4});

  // four-site straddle, 3|1 split
  Tensor h4r = h.h4.reshaped({v.d3, d, v.d3, d});  // [f123o, yo, f123i, yi]
  Tensor S1 = contract(h4r, v.Wr, {{2, 1}});       // [f123o, yo, yi, g, CLi]
  Tensor S2 = contract(v.Wr.conjugated(), S1, {{0, 3}, {1, 0}});  // [CLo, yo, yi, CLi]
  S1 = Tensor();
  Tensor O31 = contract(S2, v.PR, {{1, 0}, {2, 2}});  // [CLo, CLi, CRo, CRi]
  h4p += O31.permuted({0, 2, 1, 3}).reshaped({d4, d4});

  // four-site straddle, 1|3 split
  Tensor h4s = h.h4.reshaped({d, v.d3, d, v.d3});  // [xo, fRo, xi, fRi]
  Tensor T1 = contract(h4s, v.Wl, {{3, 0}});       // [xo, fRo, xi, h, CRi]
  Tensor T2 = contract(v.Wl.conjugated(), T1, {{0, 1}, {1, 3}});  // [CRo, xo, xi, CRi]
  T1 = Tensor();
  Tensor O13 = contract(v.PL, T2, {{0, 1}, {2, 2}});  // [CLo, CLi, CRo, CRi]
  h4p += O13.permuted({0, 2, 1, 3}).reshaped({d4, d4});

  return {hermitized(h2p), hermitized(h4p)};
}

// transitional layer: a uniform two-site physical term, fine legs grouped as
// 2m pair-sites of dimension N^2
TermPair ascend_physical(const Tensor& h2_phys, const Tensor& W, std::size_t m,
                         int N) {
  const std::size_t p = (std::size_t)(N * N), p2 = p * p;
  const std::size_t np = 2 * m;
  const std::size_t rows = W.dims()[0], dc = W.dims()[1], d4 = dc * dc;
  if (rows != ipow(p, np) || h2_phys.dims().size() != 2 ||
      h2_phys.dims()[0] != p2)
    throw std::invalid_argument("ascend_physical: shape mismatch");

  Tensor h2p({dc, dc});
  for (std::size_t q = 0; q + 1 < np; ++q) {
    const std::size_t pre = ipow(p, q), post = ipow(p, np - 2 - q);
    Tensor Wq = W.reshaped({pre, p2, post, dc});
    Tensor X = contract(h2_phys, Wq, {{1, 1}});  // [out, pre, post, C]
    X = X.permuted({1, 0, 2, 3}).reshaped({rows, dc});
    h2p += matmul(dagger(W), X);
  }

  // straddle of the block boundary
  Tensor Wl = W.reshaped({rows / p, p, dc});
  Tensor Wr = W.reshaped({p, rows / p, dc});
  Tensor PL = contract(Wl.conjugated(), Wl, {{0, 0}});  // [xo, Co, xi, Ci]
  Tensor PR = contract(Wr.conjugated(), Wr, {{1, 1}});  // [yo, Co, yi, Ci]
  Tensor h2r = h2_phys.reshaped({p, p, p, p});
  Tensor Q = contract(h2r, PR, {{1, 0}, {3, 2}});  // [xo, xi, CRo, CRi]
  Tensor O = contract(PL, Q, {{0, 0}, {2, 1}});    // [CLo, CLi, CRo, CRi]
  Tensor h4p = O.permuted({0, 2, 1, 3}).reshaped({d4, d4});
  return {hermitized(h2p), hermitized(h4p)};
}

// ---- descending channels ---------------------------------------------------------

DensityPair descend_pair(const DensityPair& rho, const Tensor& W, std::size_t m,
                         int N) {
  const std::size_t d = ipow((std::size_t)N, m);
  LayerViews v = make_views(W, d);
  const std::size_t dc = v.dc, d4 = dc * dc;
  Tensor PRd = v.PR.conjugated();  // [yr, Cr, yc, Cc] (ket leg first)
  Tensor PLd = v.PL.conjugated();
  Tensor r4 = rho4_view(rho.r4, dc);  // here read as [CLr, CRr, CLc, CRc]

  // in-block bond
  Tensor X = contract(v.Wm, rho.r2, {{3, 0}});  // [f0, f12r, f3, Cc]
  Tensor r2a = contract(X, v.Wm.conjugated(), {{0, 0}, {2, 2}, {3, 3}});  // [f12r, f12c]

  // straddle channel of the two-site term
  Tensor Q = contract(r4, PRd, {{1, 1}, {3, 3}});  // [CLr, CLc, yr, yc]
  Tensor r2b = contract(PLd, Q, {{1, 0}, {3, 1}}); // [xr, xc, yr, yc]
  r2b = r2b.permuted({0, 2, 1, 3}).reshaped({dc, dc});

  // four-site channels
  Tensor S = contract(v.Wr, Q, {{2, 0}});               // [g, f123r, CLc, yr, yc]
  Tensor Z = contract(S, v.Wr.conjugated(), {{0, 0}, {2, 2}});  // [f123r, yr, yc, f123c]
  S = Tensor();
  Tensor r4a = Z.permuted({0, 1, 3, 2}).reshaped({d4, d4});
  Z = Tensor();

  Tensor Q2 = contract(r4, PLd, {{0, 1}, {2, 3}});  // [CRr, CRc, xr, xc]
  Tensor S2 = contract(v.Wl, Q2, {{2, 0}});         // [f012r, h, CRc, xr, xc]
  Tensor Z2 = contract(S2, v.Wl.conjugated(), {{1, 1}, {2, 2}});  // [f012r, xr, xc, f012c]
  S2 = Tensor();
  Tensor r4b = Z2.permuted({1, 0, 2, 3}).reshaped({d4, d4});

  DensityPair out;
  out.r2 = hermitized((r2a + r2b).scaled(0.5));
  out.r4 = hermitized((r4a + r4b).scaled(0.5));
  return out;
}

Tensor descend_physical(const DensityPair& rho, const Tensor& W, std::size_t m,
                        int N) {
  const std::size_t p = (std::size_t)(N * N), p2 = p * p;
  const std::size_t np = 2 * m;
  const std::size_t rows = W.dims()[0], dc = W.dims()[1];
  Tensor acc({p2, p2});
  for (std::size_t q = 0; q + 1 < np; ++q) {
    const std::size_t pre = ipow(p, q), post = ipow(p, np - 2 - q);
    Tensor Wq = W.reshaped({pre, p2, post, dc});
    Tensor X = contract(Wq, rho.r2, {{3, 0}});
    acc += contract(X, Wq.conjugated(), {{0, 0}, {2, 2}, {3, 3}});
  }
  Tensor Wl = W.reshaped({rows / p, p, dc});
  Tensor Wr = W.reshaped({p, rows / p, dc});
  Tensor PLd = contract(Wl, Wl.conjugated(), {{0, 0}});  // [xr, Cr, xc, Cc]
  Tensor PRd = contract(Wr, Wr.conjugated(), {{1, 1}});  // [yr, Cr, yc, Cc]
  Tensor r4 = rho4_view(rho.r4, dc);
  Tensor Q = contract(r4, PRd, {{1, 1}, {3, 3}});   // [CLr, CLc, yr, yc]
  Tensor r2b = contract(PLd, Q, {{1, 0}, {3, 1}});  // [xr, xc, yr, yc]
  acc += r2b.permuted({0, 2, 1, 3}).reshaped({p2, p2});
  return hermitized(acc.scaled(1.0 / (double)np));
}

DensityPair fixed_point_density(const Tensor& W, std::size_t m, double tol,
                                std::size_t max_iter, const DensityPair* warm,
                                int N) {
  const std::size_t d = ipow((std::size_t)N, m);
  const std::size_t dc = d * d, d4 = dc * dc;
  DensityPair r;
  if (warm && warm->r2.size() == dc * dc && warm->r4.size() == d4 * d4) {
    r = *warm;
  } else {
    r.r2 = scaled_identity(dc, cdbl(1.0 / (double)dc, 0));
    r.r4 = scaled_identity(d4, cdbl(1.0 / (double)d4, 0));
  }
  for (std::size_t it = 0; it < max_iter; ++it) {
    DensityPair next = descend_pair(r, W, m, N);
    const double diff = distance(next.r2, r.r2) + distance(next.r4, r.r4);
    r = next;
    if (diff < tol) break;
  }
  return r;
}

// ---- energy ----------------------------------------------------------------------

double energy(const MeraState& s, const HamiltonianDensity& H, double fp_tol) {
  if (s.residual.size() < 2)
    throw std::invalid_argument("energy: mera state needs >= 2 layers");
  const std::size_t T = s.transitional();
  TermPair h = ascend_physical(H.term, s.layer(0), s.m, s.N);
  for (std::size_t i = 1; i < T; ++i) h = ascend_pair(h, s.layer(i), s.m, s.N);
  DensityPair rho = fixed_point_density(s.layer(T), s.m, fp_tol, 400, nullptr, s.N);
  cdbl e = trace_product(h.h2, rho.r2) + trace_product(h.h4, rho.r4);
  const double denom = (double)(2 * s.m) * (double)ipow(2, T - 1);
  if (std::abs(e.imag()) / denom > 1e-10)
    throw std::runtime_error("energy: imaginary residue too large");
  return e.real() / denom;
}

// ---- environments ----------------------------------------------------------------

namespace {

// d(E)/d(W*) for one scale-invariant layer with term pair h below and density
// pair rho above; rho.r4 is read as [CLi, CRi, CLo, CRo]
Tensor env_si(const TermPair& h, const DensityPair& rho, const Tensor& W,
              std::size_t m, int N) {
  const std::size_t d = ipow((std::size_t)N, m);
  LayerViews v = make_views(W, d);
  const std::size_t dc = v.dc;
  Tensor r4 = rho4_view(rho.r4, dc);

  // in-block bond
  Tensor X = contract(h.h2, v.Wm, {{1, 1}}).permuted({1, 0, 2, 3}).reshaped({v.rows, dc});
  Tensor env = matmul(X, rho.r2);
  X = Tensor();

  // two-site straddle
  Tensor h2r = h.h2.reshaped({d, d, d, d});
  Tensor Q = contract(h2r, v.PR, {{1, 0}, {3, 2}});  // [xo, xi, CRo, CRi]
  Tensor R = contract(Q, r4, {{2, 3}, {3, 1}});      // [xo, xi, CLi, CLo]
  env += contract(v.Wl, R, {{1, 1}, {2, 2}}).reshaped({v.rows, dc});  // [f012, xo, CLo]
  Tensor Q2 = contract(v.PL, h2r, {{0, 0}, {2, 2}});  // [CLo, CLi, yo, yi]
  Tensor R2 = contract(Q2, r4, {{0, 2}, {1, 0}});     // [yo, yi, CRi, CRo]
  env += contract(R2, v.Wr, {{1, 0}, {2, 2}}).permuted({0, 2, 1}).reshaped({v.rows, dc});

  // four-site straddle, 3|1 split
  Tensor h4r = h.h4.reshaped({v.d3, d, v.d3, d});     // [f123o, yo, f123i, yi]
  Tensor R3 = contract(v.PR, r4, {{1, 3}, {3, 1}});   // [yo, yi, CLi, CLo]
  Tensor S = contract(v.Wr, R3, {{2, 2}});            // [g, f123i, yo, yi, CLo]
  Tensor E3 = contract(h4r, S, {{1, 2}, {2, 1}, {3, 3}});  // [f123o, g, CLo]
  S = Tensor();
  env += E3.permuted({1, 0, 2}).reshaped({v.rows, dc});
  Tensor S1 = contract(h4r, v.Wr.conjugated(), {{0, 1}});  // [yo, f123i, yi, g, CLo]
  Tensor S2 = contract(S1, v.Wr, {{1, 1}, {3, 0}});        // [yo, yi, CLo, CLi]
  S1 = Tensor();
  Tensor S3 = contract(S2, r4, {{2, 2}, {3, 0}});          // [yo, yi, CRi, CRo]
  env += contract(S3, v.Wr, {{1, 0}, {2, 2}}).permuted({0, 2, 1}).reshaped({v.rows, dc});

  // four-site straddle, 1|3 split
  Tensor h4s = h.h4.reshaped({d, v.d3, d, v.d3});     // [xo, fRo, xi, fRi]
  Tensor R4 = contract(v.PL, r4, {{1, 2}, {3, 0}});   // [xo, xi, CRi, CRo]
  Tensor S4 = contract(v.Wl, R4, {{2, 2}});           // [fRi, h, xo, xi, CRo]
  Tensor E5 = contract(h4s, S4, {{0, 2}, {2, 3}, {3, 0}});  // [fRo, h, CRo]
  S4 = Tensor();
  env += E5.reshaped({v.rows, dc});
  Tensor S5 = contract(h4s, v.Wl.conjugated(), {{1, 0}});  // [xo, xi, fRi, h, CRo]
  Tensor S6 = contract(S5, v.Wl, {{2, 0}, {3, 1}});        // [xo, xi, CRo, CRi]
  S5 = Tensor();
  Tensor S7 = contract(S6, r4, {{2, 3}, {3, 1}});          // [xo, xi, CLi, CLo]
  env += contract(v.Wl, S7, {{1, 1}, {2, 2}}).reshaped({v.rows, dc});  // [f012, xo, CLo]
  return env;
}

// transitional analogue: uniform physical term below, density pair above
Tensor env_transitional(const Tensor& h2_phys, const DensityPair& rho,
                        const Tensor& W, std::size_t m, int N) {
  const std::size_t p = (std::size_t)(N * N), p2 = p * p;
  const std::size_t np = 2 * m;
  const std::size_t rows = W.dims()[0], dc = W.dims()[1];
  Tensor r4 = rho4_view(rho.r4, dc);

  Tensor env({rows, dc});
  for (std::size_t q = 0; q + 1 < np; ++q) {
    const std::size_t pre = ipow(p, q), post = ipow(p, np - 2 - q);
    Tensor Wq = W.reshaped({pre, p2, post, dc});
    Tensor X = contract(h2_phys, Wq, {{1, 1}}).permuted({1, 0, 2, 3}).reshaped({rows, dc});
    env += matmul(X, rho.r2);
  }
  Tensor Wl = W.reshaped({rows / p, p, dc});
  Tensor Wr = W.reshaped({p, rows / p, dc});
  Tensor PL = contract(Wl.conjugated(), Wl, {{0, 0}});
  Tensor PR = contract(Wr.conjugated(), Wr, {{1, 1}});
  Tensor h2r = h2_phys.reshaped({p, p, p, p});
  Tensor Q = contract(h2r, PR, {{1, 0}, {3, 2}});   // [xo, xi, CRo, CRi]
  Tensor R = contract(Q, r4, {{2, 3}, {3, 1}});     // [xo, xi, CLi, CLo]
  env += contract(Wl, R, {{1, 1}, {2, 2}}).reshaped({rows, dc});
  Tensor Q2 = contract(PL, h2r, {{0, 0}, {2, 2}});  // [CLo, CLi, yo, yi]
  Tensor R2 = contract(Q2, r4, {{0, 2}, {1, 0}});   // [yo, yi, CRi, CRo]
  env += contract(R2, Wr, {{1, 0}, {2, 2}}).permuted({0, 2, 1}).reshaped({rows, dc});
  return env;
}

// pull the layer environment back through the boundary circuits to an
// environment for the residual tensor t
Tensor residual_environment(const Tensor& envW, std::size_t A, std::size_t B,
                            int N) {
  const std::size_t d = (std::size_t)N;
  const PermPhase Dout = to_perm_phase(build_disentangler(B, N));
  const PermPhase Din = (A >= 2) ? to_perm_phase(build_disentangler(A, N))
                                 : PermPhase::identity(d * d);
  Tensor M = Din.inverse().apply_right(Dout.apply_left(envW));
  const std::size_t rt = ipow(d, 2 * B - 2), ct = ipow(d, 2 * A - 2);
  Tensor out({rt, ct});
  const std::size_t cols = ipow(d, 2 * A);
  for (std::size_t x = 0; x < d; ++x)
    for (std::size_t r = 0; r < rt; ++r)
      for (std::size_t y = 0; y < d; ++y) {
        const std::size_t row = (x * rt + r) * d + y;
        for (std::size_t c = 0; c < ct; ++c)
          out[r * ct + c] += M[row * cols + (x * ct + c) * d + y];
      }
  return out;
}

// Gershgorin upper bound on the largest eigenvalue of a Hermitian matrix
double eig_upper_bound(const Tensor& h) {
  const std::size_t n = h.dims()[0];
  double best = 0;
  for (std::size_t i = 0; i < n; ++i) {
    double row = h[i * n + i].real();
    for (std::size_t j = 0; j < n; ++j)
      if (j != i) row += std::abs(h[i * n + j]);
    if (i == 0 || row > best) best = row;
  }
  return best;
}

// shift every term to be negative semidefinite; the polar update then lowers
// the energy monotonically up to linearization error
Tensor shifted_down(const Tensor& h) {
  const double lam = eig_upper_bound(h);
  if (lam <= 0) return h;
  return h - scaled_identity(h.dims()[0], lam);
}

TermPair shifted_down(const TermPair& h) {
  return {shifted_down(h.h2), shifted_down(h.h4)};
}

TermPair center_terms(const TermPair& h, const DensityPair& rho) {
  TermPair out = h;
  const cdbl s2 = trace_product(h.h2, rho.r2);
  const cdbl s4 = trace_product(h.h4, rho.r4);
  out.h2 -= scaled_identity(h.h2.dims()[0], s2);
  out.h4 -= scaled_identity(h.h4.dims()[0], s4);
  return out;
}

double pair_norm(const TermPair& h) { return h.h2.norm() + h.h4.norm(); }

}  // namespace

// ---- optimization ----------------------------------------------------------------

OptimizeResult optimize(MeraState init, const HamiltonianDensity& H,
                        const OptimizeConfig& cfg) {
  MeraState s = std::move(init);
  if (s.residual.size() < 2)
    throw std::invalid_argument("optimize: mera state needs >= 2 layers");
  const std::size_t m = s.m, T = s.transitional();
  const int N = s.N;
  const double denom = (double)(2 * m) * (double)ipow(2, T - 1);

  std::vector<Tensor> W(s.residual.size());
  for (std::size_t i = 0; i < W.size(); ++i) W[i] = s.layer(i);

  auto ascend_chain = [&](std::size_t upto) {
    // term pair entering layer `upto` (upto >= 1)
    TermPair h = ascend_physical(H.term, W[0], m, N);
    for (std::size_t i = 1; i < upto; ++i) h = ascend_pair(h, W[i], m, N);
    return h;
  };
  auto update_layer = [&](std::size_t i, const Tensor& envW) {
    Tensor envT = residual_environment(envW, m, 2 * m, N);
    s.residual[i] = s.symmetric ? symmetric_polar(envT, m, 2 * m, N)
                                : polar_isometry(envT, {0}, {1});
    W[i] = s.layer(i);
  };

  OptimizeResult res;
  double best = 0;
  bool have_best = false;
  DensityPair rho;  // scale-invariant fixed point, warm-started across sweeps

  for (std::size_t sweep = 0; sweep < cfg.iterations; ++sweep) {
    rho = fixed_point_density(W[T], m, cfg.fp_tol, 400,
                              sweep ? &rho : nullptr, N);

    // energy before this sweep's updates
    {
      TermPair hT = ascend_chain(T);
      cdbl e = trace_product(hT.h2, rho.r2) + trace_product(hT.h4, rho.r4);
      res.trace.push_back(e.real() / denom);
      if (!have_best || res.trace.back() < best) {
        best = res.trace.back();
        res.state = s;
        have_best = true;
      }
      if (cfg.verbose)
        std::fprintf(stderr, "sweep %zu energy %.12f\n", sweep, res.trace.back());
      const std::size_t k = res.trace.size();
      if (k >= 2 && std::abs(res.trace[k - 1] - res.trace[k - 2]) < cfg.tolerance) {
        res.converged = true;
        break;
      }
    }

    for (std::size_t pass = 0; pass < cfg.passes; ++pass) {
      // density pairs at the coarse legs of each layer, walking down from the
      // scale-invariant fixed point
      std::vector<DensityPair> rho_at(T + 1);
      rho_at[T] = rho;
      for (std::size_t i = T; i-- > 0;)
        rho_at[i] = (i + 1 == T) ? rho : descend_pair(rho_at[i + 1], W[i + 1], m, N);

      // transitional layers, bottom up; each term is shifted to be negative
      // semidefinite so the polar update can only lower the energy
      update_layer(0, env_transitional(shifted_down(H.term), rho_at[0], W[0], m, N));
      for (std::size_t i = 1; i < T; ++i)
        update_layer(i, env_si(shifted_down(ascend_chain(i)), rho_at[i], W[i], m, N));

      // scale-invariant layer: geometric series of ascended, recentered terms
      TermPair hT = ascend_chain(T);
      TermPair term = center_terms(hT, rho);
      TermPair heff = term;
      const double scale0 = std::max(pair_norm(term), 1e-300);
      for (std::size_t j = 1; j < cfg.series_max; ++j) {
        term = ascend_pair(term, W[T], m, N);
        term = center_terms(term, rho);
        term.h2 = term.h2.scaled(0.5);
        term.h4 = term.h4.scaled(0.5);
        heff.h2 += term.h2;
        heff.h4 += term.h4;
        if (pair_norm(term) < cfg.series_tol * scale0) break;
      }
      update_layer(T, env_si(shifted_down(heff), rho, W[T], m, N));
    }

    if (!cfg.checkpoint_path.empty() &&
        (sweep + 1) % cfg.checkpoint_every == 0)
      checkpoint_save(s, cfg.checkpoint_path);
  }

  // final energy
  rho = fixed_point_density(W[T], m, cfg.fp_tol, 400, &rho, N);
  TermPair hT = ascend_chain(T);
  cdbl e = trace_product(hT.h2, rho.r2) + trace_product(hT.h4, rho.r4);
  res.trace.push_back(e.real() / denom);
  if (!have_best || res.trace.back() < best) {
    res.state = s;
  }
  if (!cfg.checkpoint_path.empty()) checkpoint_save(res.state, cfg.checkpoint_path);
  return res;
}

// ---- checkpoints -----------------------------------------------------------------

void checkpoint_save(const MeraState& s, const std::string& path) {
  std::ostringstream os;
  os << "tnsym-mera v1\n";
  os << "scheme " << s.scheme << "\n";
  os << "modulus " << s.N << "\n";
  os << "spins_per_site " << s.m << "\n";
  os << "layers " << s.residual.size() << "\n";
  os << "symmetric " << (s.symmetric ? 1 : 0) << "\n";
  for (std::size_t i = 0; i < s.residual.size(); ++i)
    write_tensor_record(os, "residual" + std::to_string(i), s.residual[i]);
  const std::string tmp = path + ".tmp";
  {
    std::ofstream f(tmp, std::ios::binary);
    if (!f) throw std::runtime_error("checkpoint_save: cannot open " + tmp);
    const std::string blob = os.str();
    f.write(blob.data(), (std::streamsize)blob.size());
  }
  if (std::rename(tmp.c_str(), path.c_str()) != 0)
    throw std::runtime_error("checkpoint_save: rename failed for " + path);
}

MeraState checkpoint_load(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("checkpoint_load: cannot open " + path);
  std::string line;
  if (!std::getline(f, line) || line.rfind("tnsym-mera", 0) != 0)
    throw std::runtime_error("checkpoint_load: malformed header");
  if (line != "tnsym-mera v1")
    throw std::runtime_error("checkpoint_load: unsupported version: " + line);
  MeraState s;
  std::size_t layers = 0;
  int symmetric = 1;
  for (int i = 0; i < 5; ++i) {
    if (!std::getline(f, line))
      throw std::runtime_error("checkpoint_load: malformed header");
    std::istringstream ls(line);
    std::string key;
    ls >> key;
    if (key == "scheme") ls >> s.scheme;
    else if (key == "modulus") ls >> s.N;
    else if (key == "spins_per_site") ls >> s.m;
    else if (key == "layers") ls >> layers;
    else if (key == "symmetric") ls >> symmetric;
    else throw std::runtime_error("checkpoint_load: malformed header key " + key);
    if (!ls) throw std::runtime_error("checkpoint_load: malformed header");
  }
  s.symmetric = symmetric != 0;
  if (layers < 2 || s.m < 2 || s.N < 2)
    throw std::runtime_error("checkpoint_load: malformed header");
  for (std::size_t i = 0; i < layers; ++i) {
    std::string name;
    s.residual.push_back(read_tensor_record(f, name));
  }
  validate_mera(s);
  return s;
}

}  // namespace tnsym
