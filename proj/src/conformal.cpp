#include "tnsym/conformal.hpp"

#include <cmath>
#include <stdexcept>

#include "tnsym/mpo.hpp"

namespace tnsym {

namespace {

// scale-invariant layer with its fine-site and coarse-pair dimensions
struct SiLayer {
  Tensor W;         // [d^4, dc], dc = d^2
  std::size_t d;    // fine site dimension N^m
  std::size_t dc;   // two-site dimension d^2
};

SiLayer si_layer(const MeraState& s) {
  if (s.residual.empty()) throw std::invalid_argument("missing scale-invariant layer");
  SiLayer out;
  out.W = s.layer(s.residual.size() - 1);
  out.d = s.site_dim();
  out.dc = out.d * out.d;
  if (out.W.dims()[0] != out.dc * out.dc || out.W.dims()[1] != out.dc)
    throw std::invalid_argument("scale-invariant layer has unexpected shape");
  return out;
}

double entropy(const Tensor& rho) {
  HermEig e = eig_hermitian(rho);
  double s = 0;
  for (double p : e.values)
    if (p > 1e-14) s -= p * std::log(p);
  return s;
}

}  // namespace

double scheme_scale_factor(const std::string& scheme) {
  if (scheme == "4:2") return 2.0;
  if (scheme == "ternary") return 3.0;
  throw std::invalid_argument("unknown scheme: " + scheme);
}

Tensor scaling_superoperator(const MeraState& s) {
  SiLayer L = si_layer(s);
  Tensor Wm = L.W.reshaped({L.d, L.dc, L.d, L.dc});  // [f0, x, f3, C]
  // M[(r,c),(x,y)] = sum_{f0,f3} W*[f0,x,f3,r] W[f0,y,f3,c]
  Tensor M = contract(Wm.conjugated(), Wm, {{0, 0}, {2, 2}});  // [x, r, y, c]
  return M.permuted({1, 3, 0, 2}).reshaped({L.dc * L.dc, L.dc * L.dc});
}

TwistedMap twisted_superoperator(const MeraState& s, const GroupElement& g,
                                 double sym_tol) {
  SiLayer L = si_layer(s);
  if (g.N != s.N) throw std::invalid_argument("twist modulus mismatch");
  if (!g.is_identity() &&
      !(verify_pullthrough(L.W, s.m, 2 * s.m, g) <= sym_tol))
    throw std::invalid_argument("state not symmetric under the requested twist");

  const std::size_t chi = (std::size_t)s.N;
  // MPO run covering the block's leftmost fine ket site (m spins, red start)
  Tensor M0 = mpo_qubit_run(g, s.m, false);         // [l, r, out, in]
  Tensor W4 = L.W.reshaped({L.d, L.dc, L.d, L.dc});  // [f0, x, f3, C]
  Tensor W4c = W4.conjugated();

  TwistedMap map;
  map.twist = g;
  map.dc = L.dc;
  map.chi = chi;
  const std::size_t dc = L.dc;
  map.apply = [M0, W4, W4c, dc, chi](const std::vector<cdbl>& v) {
    Tensor F({dc, dc, chi}, v);  // [out, in, bond]
    // A1 [o, k, f0, f3, Ck]: absorb the ket-layer pair leg
    Tensor A1 = contract(F, W4, {{1, 1}});
    // A2 [o, f3, Ck, l, mo]: bond meets the site tensor's right leg, the
    // ket f0 its physical input; the MPO output mo heads for the bra layer
    Tensor A2 = contract(A1, M0, {{1, 1}, {2, 3}});
    // A3 [Ck, l, Cb]: close the bra layer on (pair leg, f3, mo)
    Tensor A3 = contract(A2, W4c, {{0, 1}, {1, 2}, {4, 0}});
    return A3.permuted({2, 0, 1}).data();  // [Cb, Ck, l] = [out, in, bond]
  };
  return map;
}

Tensor twisted_superoperator_dense(const MeraState& s, const GroupElement& g,
                                   std::size_t cap, double sym_tol) {
  TwistedMap map = twisted_superoperator(s, g, sym_tol);
  const std::size_t n = map.dim();
  if (n > cap) throw std::invalid_argument("twisted superoperator exceeds dense cap");
  Tensor M({n, n});
  std::vector<cdbl> e(n, cdbl(0, 0));
  for (std::size_t j = 0; j < n; ++j) {
    e[j] = 1.0;
    std::vector<cdbl> col = map.apply(e);
    e[j] = 0.0;
    for (std::size_t i = 0; i < n; ++i) M[i * n + j] = col[i];
  }
  return M;
}

std::vector<EigPair> superoperator_spectrum(const MeraState& s,
                                            const GroupElement& g, std::size_t k,
                                            std::size_t dense_cap) {
  if (g.is_identity()) {
    Tensor S = scaling_superoperator(s);
    const std::size_t n = S.dims()[0];
    if (n <= dense_cap) return eig_dense(S, k);
    auto apply = [&S, n](const std::vector<cdbl>& v) {
      Tensor x({n}, v);
      return contract(S.reshaped({n, n}), x, {{1, 0}}).data();
    };
    return eig_arnoldi(apply, n, k);
  }
  TwistedMap map = twisted_superoperator(s, g);
  if (map.dim() <= dense_cap)
    return eig_dense(twisted_superoperator_dense(s, g, dense_cap), k);
  return eig_arnoldi(map.apply, map.dim(), k);
}

ScalingSpectrum extract_dimensions(const std::vector<EigPair>& pairs,
                                   const GroupElement& twist,
                                   double scale_factor, bool drop_identity) {
  if (!(scale_factor > 1.0))
    throw std::invalid_argument("extract_dimensions: scale factor must exceed 1");
  ScalingSpectrum out;
  out.twist = twist;
  out.scale_factor = scale_factor;
  bool dropped = false;
  for (const EigPair& p : pairs) {
    if (drop_identity && !dropped && std::abs(p.value - cdbl(1, 0)) < 1e-6) {
      dropped = true;
      continue;
    }
    ScalingEntry e;
    e.lambda = p.value;
    const double mag = std::abs(p.value);
    if (!(mag > 0)) throw std::runtime_error("extract_dimensions: zero eigenvalue");
    e.delta = -std::log(mag) / std::log(scale_factor);
    e.delta_raw = e.delta;
    e.field = p.vector;
    out.entries.push_back(std::move(e));
  }
  return out;
}

double central_charge(const MeraState& s, double fp_tol) {
  SiLayer L = si_layer(s);
  DensityPair rho = fixed_point_density(L.W, s.m, fp_tol, 400, nullptr, s.N);
  const double growth = entropy(rho.r4) - entropy(rho.r2);
  return 3.0 * growth / std::log(scheme_scale_factor(s.scheme));
}

ScalingSpectrum degeneracy_average(const ScalingSpectrum& in, double tol) {
  ScalingSpectrum out = in;
  std::size_t i = 0;
  while (i < out.entries.size()) {
    std::size_t j = i + 1;
    while (j < out.entries.size() &&
           out.entries[j].delta_raw - out.entries[j - 1].delta_raw <= tol)
      ++j;
    double mean = 0;
    for (std::size_t k = i; k < j; ++k) mean += out.entries[k].delta_raw;
    mean /= (double)(j - i);
    for (std::size_t k = i; k < j; ++k) out.entries[k].delta = mean;
    i = j;
  }
  return out;
}

}  // namespace tnsym
