#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "tnsym/group.hpp"
#include "tnsym/tensor.hpp"

using namespace tnsym;

namespace {
Cochain3 builtin_phi() {
  return [](const GroupElement& f, const GroupElement& g, const GroupElement& h) {
    return phi(f, g, h);
  };
}
}  // namespace

TEST_CASE("group arithmetic") {
  GroupElement g(1, 2, 3, 4);
  CHECK(g.a3 == 3);
  CHECK((g * g.inverse()).is_identity());
  CHECK(GroupElement(1, 0, 0, 2).order() == 2);
  CHECK(GroupElement(0, 2, 0, 4).order() == 2);
  CHECK(GroupElement(0, 1, 0, 4).order() == 4);
  CHECK(GroupElement(2, 2, 2, 6).order() == 3);
  CHECK(all_elements(3).size() == 27);
  for (int i = 0; i < 8; ++i) CHECK(GroupElement::from_index(i, 2).index() == i);
}

TEST_CASE("three-cocycle values") {
  CHECK(std::abs(phi(GroupElement(1, 0, 0, 2), GroupElement(0, 1, 0, 2),
                     GroupElement(0, 0, 1, 2)) -
                 cdbl(-1, 0)) < 1e-14);
  // normalized: any identity slot gives 1
  CHECK(std::abs(phi(GroupElement(0, 0, 0, 2), GroupElement(1, 1, 1, 2),
                     GroupElement(1, 1, 1, 2)) -
                 cdbl(1, 0)) < 1e-14);
  // N=3: omega^{1*2*1} = exp(4 pi i/3)
  const cdbl expect = std::polar(1.0, 4.0 * std::acos(-1.0) / 3.0);
  CHECK(std::abs(phi(GroupElement(1, 0, 0, 3), GroupElement(0, 2, 0, 3),
                     GroupElement(0, 0, 1, 3)) -
                 expect) < 1e-14);
}

TEST_CASE("cocycle condition holds exhaustively") {
  CHECK(cocycle_condition_residual(builtin_phi(), 2) < 1e-12);
  CHECK(cocycle_condition_residual(builtin_phi(), 3) < 1e-12);
  SUBCASE("constant cochain passes trivially") {
    Cochain3 one = [](const GroupElement&, const GroupElement&, const GroupElement&) {
      return cdbl(1, 0);
    };
    CHECK(cocycle_condition_residual(one, 2) == 0.0);
  }
  SUBCASE("corrupting one value breaks the condition badly") {
    Cochain3 bad = [](const GroupElement& f, const GroupElement& g, const GroupElement& h) {
      cdbl v = phi(f, g, h);
      if (f.index() == 7 && g.index() == 7 && h.index() == 7) v = -v;
      return v;
    };
    CHECK(cocycle_condition_residual(bad, 2) > 0.5);
  }
}

TEST_CASE("slant product") {
  SUBCASE("identity twist is trivial") {
    Cocycle2 c2 = slant_product(GroupElement(0, 0, 0, 2));
    for (const auto& h : all_elements(2))
      for (const auto& k : all_elements(2))
        CHECK(std::abs(c2(h, k) - cdbl(1, 0)) < 1e-14);
  }
  SUBCASE("explicit value at g=(1,0,0)") {
    Cocycle2 c2 = slant_product(GroupElement(1, 0, 0, 2));
    CHECK(std::abs(c2(GroupElement(0, 1, 0, 2), GroupElement(0, 0, 1, 2)) - cdbl(-1, 0)) <
          1e-14);
  }
  SUBCASE("(1,1,1) twist is a nontrivial 2-cocycle") {
    Cocycle2 c2 = slant_product(GroupElement(1, 1, 1, 2));
    bool saw_minus = false;
    for (const auto& h : all_elements(2))
      for (const auto& k : all_elements(2))
        if (std::abs(c2(h, k) + cdbl(1, 0)) < 1e-14) saw_minus = true;
    CHECK(saw_minus);
  }
  SUBCASE("2-cocycle condition for every twist, N in {2,3}") {
    for (int N : {2, 3})
      for (const auto& g : all_elements(N))
        CHECK(two_cocycle_residual(builtin_phi(), g, N) < 1e-12);
  }
}

TEST_CASE("restricted class") {
  CHECK(restricted_class(GroupElement(1, 1, 1, 2)) == 1);
  CHECK(restricted_class(GroupElement(1, 1, 0, 2)) == 0);
  CHECK(restricted_class(GroupElement(0, 0, 0, 2)) == 0);
  // N=3: the exponent sum over powers is 1+2 = 3 = 0 mod 3
  CHECK(restricted_class(GroupElement(1, 1, 1, 3)) == 0);
  CHECK(restricted_class(GroupElement(1, 1, 1, 4)) == 2);  // 1+2+3 = 6 = 2 mod 4
  SUBCASE("gauge invariance under coboundaries") {
    // d(beta)(f,g,h) = beta(g,h) beta(f,gh) / (beta(fg,h) beta(f,g))
    for (int N : {2, 3}) {
      std::mt19937_64 rng(123);
      std::uniform_real_distribution<double> u(0, 2 * std::acos(-1.0));
      const int n3 = N * N * N;
      std::vector<cdbl> beta(n3 * n3);
      for (auto& v : beta) v = std::polar(1.0, u(rng));
      // normalized 2-cochain: beta(e,y) = beta(x,e) = 1
      for (int x = 0; x < n3; ++x) beta[x * n3 + 0] = beta[0 * n3 + x] = cdbl(1, 0);
      Cochain3 gauged = [N, n3, beta](const GroupElement& f, const GroupElement& g,
                                      const GroupElement& h) {
        auto B = [&](const GroupElement& x, const GroupElement& y) {
          return beta[x.index() * n3 + y.index()];
        };
        const cdbl db = B(g, h) * B(f, g * h) / (B(f * g, h) * B(f, g));
        return phi(f, g, h) * db;
      };
      for (const auto& g : all_elements(N))
        CHECK(restricted_class(gauged, g) == restricted_class(g));
    }
  }
}

TEST_CASE("conjugacy data is trivial for the abelian group") {
  auto d = conjugacy_data(GroupElement(1, 0, 1, 2));
  CHECK(d.cls.size() == 1);
  CHECK(d.centralizer.size() == 8);
  auto d3 = conjugacy_data(GroupElement(2, 1, 0, 3));
  CHECK(d3.centralizer.size() == 27);
}

TEST_CASE("projective irreps N=2") {
  SUBCASE("trivial twist: 8 one-dimensional irreps") {
    auto irr = projective_irreps(GroupElement(0, 0, 0, 2));
    CHECK(irr.size() == 8);
    for (const auto& ir : irr) CHECK(ir.dim == 1);
  }
  SUBCASE("(1,1,1) twist: two irreps gamma_+- of dimension 2") {
    auto irr = projective_irreps(GroupElement(1, 1, 1, 2));
    REQUIRE(irr.size() == 2);
    CHECK(irr[0].dim == 2);
    CHECK(irr[1].dim == 2);
    bool plus = false, minus = false;
    for (const auto& ir : irr) {
      if (ir.label == "gamma+") plus = true;
      if (ir.label == "gamma-") minus = true;
    }
    CHECK(plus);
    CHECK(minus);
  }
  SUBCASE("completeness for all twists, N in {2,3}") {
    for (int N : {2, 3})
      for (const auto& g : all_elements(N)) {
        auto irr = projective_irreps(g);
        std::size_t total = 0;
        for (const auto& ir : irr) total += ir.dim * ir.dim;
        CHECK(total == static_cast<std::size_t>(N * N * N));
      }
  }
  SUBCASE("projective multiplication law holds") {
    const GroupElement g(1, 1, 1, 2);
    Cocycle2 c2 = slant_product(g);
    auto irr = projective_irreps(g);
    for (const auto& ir : irr)
      for (const auto& h : all_elements(2))
        for (const auto& k : all_elements(2)) {
          Tensor lhs = matmul(ir.matrices[h.index()], ir.matrices[k.index()]);
          Tensor rhs = ir.matrices[(h * k).index()].scaled(c2(h, k));
          CHECK(distance(lhs, rhs) < 1e-10);
        }
  }
  SUBCASE("22 sectors at N=2") {
    std::size_t sectors = 0;
    for (const auto& g : all_elements(2)) sectors += projective_irreps(g).size();
    CHECK(sectors == 22);
  }
}
