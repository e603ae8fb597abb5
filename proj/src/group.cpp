#include "tnsym/group.hpp"

#include <cmath>
#include <map>
#include <numbers>
#include <random>

#include "tnsym/linalg.hpp"

namespace tnsym {

GroupElement::GroupElement(int x1, int x2, int x3, int modulus) : N(modulus) {
  if (modulus < 2) throw std::invalid_argument("group: modulus must be >= 2");
  auto m = [modulus](int x) { return ((x % modulus) + modulus) % modulus; };
  a1 = m(x1);
  a2 = m(x2);
  a3 = m(x3);
}

GroupElement GroupElement::operator*(const GroupElement& o) const {
  if (N != o.N) throw std::invalid_argument("group: modulus mismatch");
  return GroupElement(a1 + o.a1, a2 + o.a2, a3 + o.a3, N);
}

GroupElement GroupElement::inverse() const { return GroupElement(-a1, -a2, -a3, N); }

GroupElement GroupElement::pow(int k) const {
  return GroupElement(a1 * k, a2 * k, a3 * k, N);
}

int GroupElement::order() const {
  for (int k = 1; k <= N; ++k)
    if (pow(k).is_identity()) return k;
  return N;  // unreachable: component orders divide N
}

GroupElement GroupElement::from_index(int idx, int N) {
  return GroupElement(idx / (N * N), (idx / N) % N, idx % N, N);
}

std::vector<GroupElement> all_elements(int N) {
  std::vector<GroupElement> out;
  out.reserve(static_cast<std::size_t>(N) * N * N);
  for (int i = 0; i < N * N * N; ++i) out.push_back(GroupElement::from_index(i, N));
  return out;
}

cdbl root_of_unity(int N, long long k) {
  const double arg = 2.0 * std::numbers::pi * static_cast<double>(((k % N) + N) % N) / N;
  return cdbl(std::cos(arg), std::sin(arg));
}

cdbl phi(const GroupElement& f, const GroupElement& g, const GroupElement& h) {
  if (f.N != g.N || g.N != h.N) throw std::invalid_argument("phi: modulus mismatch");
  return root_of_unity(f.N, static_cast<long long>(f.a1) * g.a2 * h.a3);
}

double cocycle_condition_residual(const Cochain3& c3, int N, std::size_t samples,
                                  unsigned seed) {
  // five-term condition: c(g1,g2,g3) c(g0,g1g2,g3) c(g0,g1,g2)
  //                    = c(g0g1,g2,g3) c(g0,g1,g2g3)
  auto ratio = [&](const GroupElement& g0, const GroupElement& g1,
                   const GroupElement& g2, const GroupElement& g3) {
    const cdbl lhs = c3(g1, g2, g3) * c3(g0, g1 * g2, g3) * c3(g0, g1, g2);
    const cdbl rhs = c3(g0 * g1, g2, g3) * c3(g0, g1, g2 * g3);
    return std::abs(lhs / rhs - cdbl(1, 0));
  };
  double worst = 0;
  const int n3 = N * N * N;
  if (N <= 4) {
    for (int i0 = 0; i0 < n3; ++i0)
      for (int i1 = 0; i1 < n3; ++i1)
        for (int i2 = 0; i2 < n3; ++i2)
          for (int i3 = 0; i3 < n3; ++i3)
            worst = std::max(worst, ratio(GroupElement::from_index(i0, N),
                                          GroupElement::from_index(i1, N),
                                          GroupElement::from_index(i2, N),
                                          GroupElement::from_index(i3, N)));
  } else {
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<int> pick(0, n3 - 1);
    for (std::size_t s = 0; s < samples; ++s)
      worst = std::max(worst, ratio(GroupElement::from_index(pick(rng), N),
                                    GroupElement::from_index(pick(rng), N),
                                    GroupElement::from_index(pick(rng), N),
                                    GroupElement::from_index(pick(rng), N)));
  }
  return worst;
}

cdbl Cocycle2::operator()(const GroupElement& h, const GroupElement& k) const {
  return phi(g, h, k) * phi(h, k, g) / phi(h, g, k);
}

Cocycle2 slant_product(const GroupElement& g) { return Cocycle2{g}; }

cdbl slant_product_of(const Cochain3& c3, const GroupElement& g,
                      const GroupElement& h, const GroupElement& k) {
  return c3(g, h, k) * c3(h, k, g) / c3(h, g, k);
}

double two_cocycle_residual(const Cochain3& c3, const GroupElement& g, int N) {
  double worst = 0;
  const auto els = all_elements(N);
  for (const auto& h : els)
    for (const auto& k : els)
      for (const auto& l : els) {
        const cdbl lhs = slant_product_of(c3, g, h, k) * slant_product_of(c3, g, h * k, l);
        const cdbl rhs = slant_product_of(c3, g, k, l) * slant_product_of(c3, g, h, k * l);
        worst = std::max(worst, std::abs(lhs / rhs - cdbl(1, 0)));
      }
  return worst;
}

int restricted_class(const Cochain3& c3, const GroupElement& g) {
  if (g.is_identity()) return 0;
  const int o = g.order();
  cdbl prod(1, 0);
  for (int i = 1; i <= o - 1; ++i) prod *= c3(g, g.pow(i), g);
  for (int k = 0; k < o; ++k)
    if (std::abs(prod - root_of_unity(o, k)) < 1e-8) return k;
  throw std::runtime_error("restricted_class: product is not an o(g)-th root of unity");
}

int restricted_class(const GroupElement& g) {
  return restricted_class([](const GroupElement& f, const GroupElement& a,
                             const GroupElement& b) { return phi(f, a, b); },
                          g);
}

ConjugacyData conjugacy_data(const GroupElement& g) {
  ConjugacyData d;
  d.cls = {g};
  d.centralizer = all_elements(g.N);
  return d;
}

namespace {

// unitary matrices of the phi^(g)-twisted left regular representation,
// D(h)|k> = phi^(g)(h,k) |hk>
Tensor twisted_regular(const GroupElement& g, const GroupElement& h) {
  const int N = g.N;
  const std::size_t n = static_cast<std::size_t>(N) * N * N;
  const Cocycle2 c2 = slant_product(g);
  Tensor D({n, n});
  for (std::size_t k = 0; k < n; ++k) {
    const GroupElement ke = GroupElement::from_index((int)k, N);
    const GroupElement hk = h * ke;
    D.data()[static_cast<std::size_t>(hk.index()) * n + k] = c2(h, ke);
  }
  return D;
}

// N=2 closed-form labels, keyed by (twist index, topological spin numerator in
// quarters): chi^k_+/- for the trivial twist, alpha/beta/gamma for the rest.
std::string sector_label_n2(const GroupElement& g, const ProjectiveIrrep& irrep,
                            int copy_index) {
  if (g.N != 2) return "mu" + std::to_string(copy_index);
  // topological spin phase: chi(g)/d
  const cdbl spin_phase = irrep.character[g.index()] / cdbl((double)irrep.dim, 0);
  auto close = [&](cdbl z) { return std::abs(spin_phase - z) < 1e-6; };
  if (g.is_identity()) {
    // chi^k_{+/-}: the +/- sign is the character of (0,0,1); the superscript
    // 1..4 enumerates the Z_2 x Z_2 characters of ((1,0,0),(0,1,0)) as
    // (+,+)->1, (+,-)->2, (-,+)->3, (-,-)->4
    const double c100 = irrep.character[GroupElement(1, 0, 0, 2).index()].real();
    const double c010 = irrep.character[GroupElement(0, 1, 0, 2).index()].real();
    const double c001 = irrep.character[GroupElement(0, 0, 1, 2).index()].real();
    int k = 1;
    if (c100 > 0 && c010 > 0) k = 1;
    else if (c100 > 0 && c010 < 0) k = 2;
    else if (c100 < 0 && c010 > 0) k = 3;
    else k = 4;
    return "chi" + std::to_string(k) + (c001 > 0 ? "+" : "-");
  }
  std::string stem;
  // single-generator twists -> alpha^k, double -> beta^k, triple -> gamma
  const int w = g.a1 + g.a2 + g.a3;
  if (w == 1) stem = "alpha" + std::to_string(g.a1 ? 1 : (g.a2 ? 2 : 3));
  else if (w == 2) stem = "beta" + std::to_string(!g.a1 ? 1 : (!g.a2 ? 2 : 3));
  else stem = "gamma";
  if (stem == "gamma") {
    // gamma_+ has spin 3/4, gamma_- has spin 1/4 (phases -/+ i)
    if (close(cdbl(0, -1))) return "gamma+";
    if (close(cdbl(0, 1))) return "gamma-";
  } else {
    if (close(cdbl(1, 0))) return stem + "+";
    if (close(cdbl(-1, 0))) return stem + "-";
  }
  return stem + "?" + std::to_string(copy_index);
}

}  // namespace

std::vector<ProjectiveIrrep> projective_irreps(const GroupElement& g) {
  const int N = g.N;
  const std::size_t n = static_cast<std::size_t>(N) * N * N;
  const auto els = all_elements(N);
  std::vector<Tensor> D;
  D.reserve(n);
  for (const auto& h : els) D.push_back(twisted_regular(g, h));

  // random-Hermitian commutant element: C = (1/|G|) sum_h D(h) H D(h)^dagger
  std::mt19937_64 rng(20240517u + static_cast<unsigned>(g.index()));
  std::normal_distribution<double> gauss(0, 1);
  Tensor H({n, n});
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i; j < n; ++j) {
      const cdbl v(gauss(rng), i == j ? 0.0 : gauss(rng));
      H.data()[i * n + j] = v;
      H.data()[j * n + i] = std::conj(v);
    }
  Tensor C({n, n});
  for (const auto& Dh : D) C += matmul(matmul(Dh, H), dagger(Dh));
  C = C.scaled(cdbl(1.0 / static_cast<double>(n), 0));

  HermEig eig = eig_hermitian(C);
  // cluster eigenvalues: each cluster spans one irrep copy
  std::vector<std::pair<std::size_t, std::size_t>> clusters;  // [begin, end)
  std::size_t b = 0;
  for (std::size_t i = 1; i <= n; ++i) {
    if (i == n || std::abs(eig.values[i] - eig.values[i - 1]) > 1e-7) {
      clusters.push_back({b, i});
      b = i;
    }
  }
  std::vector<ProjectiveIrrep> found;
  for (const auto& [lo, hi] : clusters) {
    const std::size_t d = hi - lo;
    // isometry P: n x d, columns = eigenvectors of the cluster
    Tensor P({n, d});
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < d; ++j)
        P.data()[i * d + j] = eig.vectors.data()[i * n + (lo + j)];
    ProjectiveIrrep ir;
    ir.twist = g;
    ir.dim = d;
    ir.matrices.reserve(n);
    ir.character.reserve(n);
    for (std::size_t h = 0; h < n; ++h) {
      Tensor rho = matmul(matmul(dagger(P), D[h]), P);
      ir.character.push_back(rho.trace());
      ir.matrices.push_back(std::move(rho));
    }
    // deduplicate by character (the regular rep holds d_mu copies of each irrep)
    bool dup = false;
    for (const auto& other : found) {
      if (other.dim != ir.dim) continue;
      double dist = 0;
      for (std::size_t h = 0; h < n; ++h)
        dist = std::max(dist, std::abs(other.character[h] - ir.character[h]));
      if (dist < 1e-6) {
        dup = true;
        break;
      }
    }
    if (!dup) found.push_back(std::move(ir));
  }
  // completeness: sum d^2 = |G|
  std::size_t total = 0;
  for (const auto& ir : found) total += ir.dim * ir.dim;
  if (total != n)
    throw std::runtime_error("projective_irreps: incomplete decomposition (sum d^2 != |G|)");
  int copy = 0;
  for (auto& ir : found) ir.label = sector_label_n2(g, ir, copy++);
  return found;
}

}  // namespace tnsym
