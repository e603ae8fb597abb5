#include "tnsym/mpo.hpp"

#include <cmath>

namespace tnsym {

MpoTensor build_mpo_tensor(const GroupElement& g) {
  const int N = g.N;
  const std::size_t nn = (std::size_t)N * N;
  Tensor B({(std::size_t)N, (std::size_t)N, nn, nn});
  for (int i = 0; i < N; ++i)
    for (int j = 0; j < N; ++j) {
      const std::size_t in = (std::size_t)i * N + j;
      const std::size_t out = (std::size_t)((i + g.a1) % N) * N + (j + g.a2) % N;
      for (int r = 0; r < N; ++r)
        B.at({(std::size_t)i, (std::size_t)r, out, in}) =
            root_of_unity(N, (long long)j * g.a3 * (r - i));
    }
  return {g, B};
}

Tensor reduction_tensor(const GroupElement& g, const GroupElement& h) {
  if (g.N != h.N) throw std::invalid_argument("reduction_tensor: modulus mismatch");
  const int N = g.N;
  Tensor K({(std::size_t)N, (std::size_t)N, (std::size_t)N});  // [h-slot, g-slot, fused]
  for (int x = 0; x < N; ++x)
    K.at({(std::size_t)((x + g.a1) % N), (std::size_t)x, (std::size_t)x}) =
        root_of_unity(N, -(long long)x * g.a2 * h.a3);
  return K;
}

Tensor mpo_qubit_run(const GroupElement& g, std::size_t nq, bool start_odd) {
  if (nq == 0) throw std::invalid_argument("mpo_qubit_run: empty run");
  const int N = g.N;
  const std::size_t n = (std::size_t)N;
  // red spin: shift by a1, bond passes the red value through
  Tensor R({n, n, n, n});  // [l, r, out, in]
  for (int i = 0; i < N; ++i)
    R.at({(std::size_t)i, (std::size_t)i, (std::size_t)((i + g.a1) % N),
          (std::size_t)i}) = 1.0;
  // blue spin: shift by a2, phase couples the blue value to both bond values
  Tensor Bl({n, n, n, n});
  for (int j = 0; j < N; ++j)
    for (int k = 0; k < N; ++k)
      for (int r = 0; r < N; ++r)
        Bl.at({(std::size_t)k, (std::size_t)r, (std::size_t)((j + g.a2) % N),
               (std::size_t)j}) = root_of_unity(N, (long long)j * g.a3 * (r - k));

  Tensor chain = (start_odd ? Bl : R);
  std::size_t pd = n;
  for (std::size_t q = 1; q < nq; ++q) {
    const Tensor& f = ((q + (start_odd ? 1 : 0)) % 2 == 0) ? R : Bl;
    Tensor t = contract(chain, f, {{1, 0}});  // [l, OUT, IN, r2, out, in]
    chain = t.permuted({0, 3, 1, 4, 2, 5}).reshaped({n, n, pd * n, pd * n});
    pd *= n;
  }
  return chain;
}

Tensor stacked_site(const GroupElement& g, const GroupElement& h) {
  MpoTensor bg = build_mpo_tensor(g), bh = build_mpo_tensor(h);
  // contract middle physical: bh.in with bg.out
  // bg: [lg, rg, mid, in]; bh: [lh, rh, out, mid]
  Tensor s = contract(bh.B, bg.B, {{3, 2}});  // -> [lh, rh, out, lg, rg, in]
  return s.permuted({0, 3, 1, 4, 2, 5});      // [lh, lg, rh, rg, out, in]
}

Tensor assemble_operator(const GroupElement& g, std::size_t L, std::size_t cap_rows) {
  const int N = g.N;
  const std::size_t nn = (std::size_t)N * N;
  std::size_t rows = 1;
  for (std::size_t s = 0; s < L; ++s) {
    rows *= nn;
    if (rows > cap_rows) throw std::runtime_error("assemble_operator: dense cap exceeded");
  }
  MpoTensor b = build_mpo_tensor(g);
  // chain: [l, r, OUT, IN]
  Tensor chain = b.B;
  std::size_t od = nn, id = nn;
  for (std::size_t s = 1; s < L; ++s) {
    // chain [l, r, OUT, IN] x B [l2, r2, out, in] over r = l2
    Tensor t = contract(chain, b.B, {{1, 0}});  // [l, OUT, IN, r2, out, in]
    chain = t.permuted({0, 3, 1, 4, 2, 5}).reshaped({(std::size_t)N, (std::size_t)N,
                                                     od * nn, id * nn});
    od *= nn;
    id *= nn;
  }
  // periodic trace over the virtual bond
  Tensor U({od, id});
  for (std::size_t l = 0; l < (std::size_t)N; ++l)
    for (std::size_t o = 0; o < od; ++o)
      for (std::size_t i = 0; i < id; ++i) U.at({o, i}) += chain.at({l, l, o, i});
  return U;
}

double verify_representation(const GroupElement& g, const GroupElement& h,
                             std::size_t L) {
  Tensor ug = assemble_operator(g, L);
  Tensor uh = assemble_operator(h, L);
  Tensor ugh = assemble_operator(g * h, L);
  return distance(matmul(ug, uh), ugh);
}

double verify_reduction(const GroupElement& g, const GroupElement& h, std::size_t L) {
  const int N = g.N;
  const std::size_t nn = (std::size_t)N * N;
  // open -chain of stacked sites: [LH, LG, rh, rg, OUT, IN]
  Tensor s = stacked_site(g, h);
  Tensor chain = s;
  std::size_t od = nn, id = nn;
  for (std::size_t k = 1; k < L; ++k) {
    // chain [LH, LG, rh, rg, OUT, IN] x s [lh, lg, rh2, rg2, out, in]
    Tensor t = contract(chain, s, {{2, 0}, {3, 1}});
    // -> [LH, LG, OUT, IN, rh2, rg2, out, in]
    chain = t.permuted({0, 1, 4, 5, 2, 6, 3, 7})
                .reshaped({(std::size_t)N, (std::size_t)N, (std::size_t)N,
                           (std::size_t)N, od * nn, id * nn});
    od *= nn;
    id *= nn;
  }
  // sandwich: K^dag on the left pair, K on the right pair
  Tensor K = reduction_tensor(g, h);           // [h, g, fused]
  Tensor Kc = K.conjugated();
  // chain [LH, LG, rh, rg, OUT, IN] with Kc over (LH, LG) -> [rh, rg, OUT, IN, fusedL]
  Tensor t = contract(chain, Kc, {{0, 0}, {1, 1}});
  // then K over (rh, rg) -> [OUT, IN, fusedL, fusedR]
  t = contract(t, K, {{0, 0}, {1, 1}});
  Tensor lhs = t.permuted({2, 3, 0, 1});  // [fusedL, fusedR, OUT, IN]

  // reference: open chain of B_{gh}
  MpoTensor bgh = build_mpo_tensor(g * h);
  Tensor ref = bgh.B;
  od = nn;
  id = nn;
  for (std::size_t k = 1; k < L; ++k) {
    Tensor u = contract(ref, bgh.B, {{1, 0}});  // [l, OUT, IN, r2, out, in]
    ref = u.permuted({0, 3, 1, 4, 2, 5}).reshaped({(std::size_t)N, (std::size_t)N,
                                                   od * nn, id * nn});
    od *= nn;
    id *= nn;
  }
  return distance(lhs, ref);
}

double zipper_check(const GroupElement& g, const GroupElement& h) {
  const int N = g.N;
  Tensor s = stacked_site(g, h);  // [lh, lg, rh, rg, out, in]
  Tensor K = reduction_tensor(g, h);  // [h, g, fused]
  // lhs: stack site with K attached on the right bond pair -> [lh, lg, out, in, fusedR]
  Tensor lhs = contract(s, K, {{2, 0}, {3, 1}});
  // rhs: K on the left  bond of B_gh -> [lh, lg, fused] x B[fused, r, out, in]
  Tensor rhs = contract(K, build_mpo_tensor(g * h).B, {{2, 0}});
  // rhs dims [lh, lg, r, out, in] -> match lhs [lh, lg, out, in, r]
  rhs = rhs.permuted({0, 1, 3, 4, 2});
  return distance(lhs, rhs);
}

cdbl extract_cocycle(const GroupElement& f, const GroupElement& g,
                     const GroupElement& h) {
  const int N = f.N;
  const std::size_t n = (std::size_t)N;
  // triple-stack bond space slots ordered (h, g, f) = top to bottom.
  // route A (top pair first):   K_{g,h} on slots (h,g), then K_{f,gh}
  // route B (bottom pair first): K_{f,g} on slots (g,f), then K_{fg,h}
  Tensor kgh = reduction_tensor(g, h);    // [h, g, gh]
  Tensor kfgh = reduction_tensor(f, g * h);  // [gh, f, fgh]
  // A[h, g, f, x] = sum_gh kgh[h, g, gh] kfgh[gh, f, x]
  Tensor A = contract(kgh, kfgh, {{2, 0}});  // [h, g, f, x]
  Tensor kfg = reduction_tensor(f, g);    // [g, f, fg]
  Tensor kfgh2 = reduction_tensor(f * g, h);  // [h, fg, x]
  // B[h, g, f, x] = sum_fg kfg[g, f, fg] kfgh2[h, fg, x]
  Tensor Bt = contract(kfg, kfgh2, {{2, 1}});  // [g, f, h, x]
  Bt = Bt.permuted({2, 0, 1, 3});              // [h, g, f, x]
  // proportionality: B = phi(f,g,h) A
  const cdbl num = contract(A.conjugated(), Bt, {{0, 0}, {1, 1}, {2, 2}, {3, 3}}).data()[0];
  const cdbl den = contract(A.conjugated(), A, {{0, 0}, {1, 1}, {2, 2}, {3, 3}}).data()[0];
  if (std::abs(den) < 1e-14) throw std::runtime_error("extract_cocycle: degenerate reduction");
  const cdbl ratio = num / den;
  Tensor diff = Bt - A.scaled(ratio);
  if (diff.norm() > 1e-10 * A.norm())
    throw std::runtime_error("extract_cocycle: reduction orders are not proportional");
  (void)n;
  return ratio;
}

Tensor halfline_operator(const GroupElement& g, std::size_t n_sites, std::size_t cut) {
  if (cut > n_sites) throw std::invalid_argument("halfline: termination site out of range");
  const int N = g.N;
  const std::size_t nn = (std::size_t)N * N;
  std::size_t dim = 1;
  for (std::size_t s = 0; s < n_sites; ++s) dim *= nn;
  if (cut == 0) {
    // nothing applied; dangling bond is trivial (all-ones closure on an empty chain)
    Tensor out({dim, dim, (std::size_t)N});
    for (std::size_t i = 0; i < dim; ++i)
      for (std::size_t v = 0; v < (std::size_t)N; ++v) out.at({i, i, v}) = 1.0;
    return out;
  }
  MpoTensor b = build_mpo_tensor(g);
  // chain over the first `cut` sites, left bond closed with all-ones covector
  Tensor chain({(std::size_t)N, nn, nn});  // [r, OUT, IN] after closing left
  {
    Tensor ones({(std::size_t)N});
    for (auto& v : ones.data()) v = 1.0;
    chain = contract(ones, b.B, {{0, 0}});  // [r, out, in]
  }
  std::size_t od = nn, id = nn;
  for (std::size_t s = 1; s < cut; ++s) {
    Tensor t = contract(chain, b.B, {{0, 0}});  // [OUT, IN, r2, out, in]
    chain = t.permuted({2, 0, 3, 1, 4}).reshaped({(std::size_t)N, od * nn, id * nn});
    od *= nn;
    id *= nn;
  }
  // extend with identity on the remaining sites
  std::size_t rest = dim / od;
  Tensor out({dim, dim, (std::size_t)N});
  for (std::size_t o = 0; o < od; ++o)
    for (std::size_t i = 0; i < id; ++i)
      for (std::size_t v = 0; v < (std::size_t)N; ++v) {
        const cdbl val = chain.at({v, o, i});
        if (val == cdbl(0, 0)) continue;
        for (std::size_t q = 0; q < rest; ++q)
          out.at({o * rest + q, i * rest + q, v}) = val;
      }
  return out;
}

Tensor apply_mpo_halfline(const GroupElement& g, const Tensor& window,
                          std::size_t n_sites, std::size_t cut) {
  Tensor op = halfline_operator(g, n_sites, cut);  // [out, in, v]
  const std::size_t dim = op.dims()[0];
  Tensor psi = window.reshaped({dim});
  Tensor res = contract(op, psi, {{1, 0}});  // [out, v]
  return res;
}

}  // namespace tnsym
