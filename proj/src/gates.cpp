#include "tnsym/gates.hpp"

#include "tnsym/group.hpp"  // root_of_unity

namespace tnsym {

Tensor pauli_z(int N, int power) {
  Tensor z({(std::size_t)N, (std::size_t)N});
  for (int a = 0; a < N; ++a)
    z.at({(std::size_t)a, (std::size_t)a}) = root_of_unity(N, (long long)power * a);
  return z;
}

Tensor pauli_x(int N, int power) {
  Tensor x({(std::size_t)N, (std::size_t)N});
  for (int a = 0; a < N; ++a) {
    const int b = (((a + power) % N) + N) % N;  // |a> -> |a+power>
    x.at({(std::size_t)b, (std::size_t)a}) = 1.0;
  }
  return x;
}

Tensor gate_cz(int N, int power) {
  const std::size_t d = (std::size_t)N * N;
  Tensor g({d, d});
  for (int a = 0; a < N; ++a)
    for (int b = 0; b < N; ++b) {
      const std::size_t s = (std::size_t)a * N + b;
      g.at({s, s}) = root_of_unity(N, -(long long)power * a * b);
    }
  return g;
}

Tensor gate_cx(int N, int power) {
  const std::size_t d = (std::size_t)N * N;
  Tensor g({d, d});
  for (int a = 0; a < N; ++a)
    for (int b = 0; b < N; ++b) {
      const int bp = (((b - power * a) % N) + N) % N;  // |a,b> -> |a, b - power*a>
      g.at({(std::size_t)a * N + bp, (std::size_t)a * N + b}) = 1.0;
    }
  return g;
}

Tensor embed_two_site(const Tensor& gate, int N, std::size_t n, std::size_t i,
                      std::size_t j) {
  if (i == j || i >= n || j >= n) throw std::invalid_argument("embed: bad spin indices");
  std::size_t dim = 1;
  for (std::size_t k = 0; k < n; ++k) dim *= N;
  Tensor out({dim, dim});
  std::vector<std::size_t> digits(n);
  for (std::size_t c = 0; c < dim; ++c) {
    std::size_t rem = c;
    for (std::size_t k = n; k-- > 0;) {
      digits[k] = rem % N;
      rem /= N;
    }
    const std::size_t ci = digits[i], cj = digits[j];
    for (int ai = 0; ai < N; ++ai)
      for (int aj = 0; aj < N; ++aj) {
        const cdbl v = gate.data()[((std::size_t)ai * N + aj) * N * N + (ci * N + cj)];
        if (v == cdbl(0, 0)) continue;
        // rebuild the row index with digits i, j replaced
        std::size_t r = 0;
        for (std::size_t k = 0; k < n; ++k) {
          std::size_t dk = digits[k];
          if (k == i) dk = ai;
          if (k == j) dk = aj;
          r = r * N + dk;
        }
        out.data()[r * dim + c] += v;
      }
  }
  return out;
}

Tensor embed_one_site(const Tensor& op, int N, std::size_t n, std::size_t i) {
  if (i >= n) throw std::invalid_argument("embed: bad spin index");
  std::size_t dim = 1;
  for (std::size_t k = 0; k < n; ++k) dim *= N;
  Tensor out({dim, dim});
  std::vector<std::size_t> digits(n);
  for (std::size_t c = 0; c < dim; ++c) {
    std::size_t rem = c;
    for (std::size_t k = n; k-- > 0;) {
      digits[k] = rem % N;
      rem /= N;
    }
    for (int ai = 0; ai < N; ++ai) {
      const cdbl v = op.data()[(std::size_t)ai * N + digits[i]];
      if (v == cdbl(0, 0)) continue;
      std::size_t r = 0;
      for (std::size_t k = 0; k < n; ++k) r = r * N + (k == i ? (std::size_t)ai : digits[k]);
      out.data()[r * dim + c] += v;
    }
  }
  return out;
}

}  // namespace tnsym
