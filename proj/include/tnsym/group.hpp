#pragma once
// Z_N^3 group arithmetic, the type-III 3-cocycle phi(f,g,h) = omega^{f1 g2 h3}
// with omega = exp(2 pi i / N), its slant products (2-cocycles on centralizers),
// restricted classes [phi_g], and projective irreducible representations.

#include <array>
#include <complex>
#include <functional>
#include <string>
#include <vector>

#include "tnsym/tensor.hpp"

namespace tnsym {

struct GroupElement {
  int a1 = 0, a2 = 0, a3 = 0;  // components mod N
  int N = 2;

  GroupElement() = default;
  GroupElement(int x1, int x2, int x3, int modulus);

  bool is_identity() const { return a1 == 0 && a2 == 0 && a3 == 0; }
  GroupElement operator*(const GroupElement& o) const;  // componentwise addition mod N
  GroupElement inverse() const;
  GroupElement pow(int k) const;
  int order() const;  // o(g): smallest k >= 1 with g^k = e
  bool operator==(const GroupElement& o) const {
    return a1 == o.a1 && a2 == o.a2 && a3 == o.a3 && N == o.N;
  }
  // flat index in [0, N^3): a1*N^2 + a2*N + a3
  int index() const { return (a1 * N + a2) * N + a3; }
  static GroupElement from_index(int idx, int N);
};

// all N^3 elements in index order
std::vector<GroupElement> all_elements(int N);

// omega^k for omega = exp(2 pi i / N)
cdbl root_of_unity(int N, long long k);

// type-III 3-cocycle phi(f,g,h) = omega^{f1 g2 h3}
cdbl phi(const GroupElement& f, const GroupElement& g, const GroupElement& h);

// a generic 3-cochain for gauge-invariance tests and corrupted-cocycle fixtures
using Cochain3 = std::function<cdbl(const GroupElement&, const GroupElement&,
                                    const GroupElement&)>;

// max |five-term ratio - 1| over all quadruples (exhaustive N <= 4, sampled above)
double cocycle_condition_residual(const Cochain3& c3, int N,
                                  std::size_t samples = 20000, unsigned seed = 11);

// slant product: phi^(g)(h,k) = phi(g,h,k) phi(h,k,g) / phi(h,g,k)
struct Cocycle2 {
  GroupElement g;
  cdbl operator()(const GroupElement& h, const GroupElement& k) const;
};
Cocycle2 slant_product(const GroupElement& g);
// same, for an arbitrary 3-cochain (used by gauge tests)
cdbl slant_product_of(const Cochain3& c3, const GroupElement& g,
                      const GroupElement& h, const GroupElement& k);

// 2-cocycle condition residual of phi^(g), exhaustive over the (abelian) group
double two_cocycle_residual(const Cochain3& c3, const GroupElement& g, int N);

// [phi_g] in Z_{o(g)}: discrete log of prod_{i=1..o(g)-1} phi(g, g^i, g)
int restricted_class(const Cochain3& c3, const GroupElement& g);
int restricted_class(const GroupElement& g);  // built-in phi

struct ProjectiveIrrep {
  GroupElement twist;            // g
  std::string label;             // e.g. "chi1+", "gamma-" at N=2
  std::size_t dim = 1;
  std::vector<Tensor> matrices;  // indexed by GroupElement::index() of h
  std::vector<cdbl> character;   // chi(h) = tr rho(h)
};

// Complete set of phi^(g)-projective irreps of Z_N^3 (the centralizer is the
// whole group). Found by decomposing the twisted regular representation; at
// N=2 labels follow the chi/alpha/beta/gamma naming with +/- signs.
std::vector<ProjectiveIrrep> projective_irreps(const GroupElement& g);

// conjugacy class and centralizer (trivial for the abelian group; kept general)
struct ConjugacyData {
  std::vector<GroupElement> cls;
  std::vector<GroupElement> centralizer;
};
ConjugacyData conjugacy_data(const GroupElement& g);

}  // namespace tnsym
