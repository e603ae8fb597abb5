#pragma once
// Generalized Pauli operators on N-dimensional spins and the controlled
// gates built from them:
//   Z = diag(1, w, w^2, ...),  X|k> = |k+1>,  with ZX = w XZ,  w = exp(2 pi i/N)
//   CZ = (1/N) sum_{ij} w^{ij} Z^i x Z^j   (diagonal: CZ|a,b> = w^{-ab}|a,b>)
//   CX = (1/N) sum_{ij} w^{ij} Z^i x X^j   (shift:    CX|a,b> = |a, b-a>)

#include "tnsym/tensor.hpp"

namespace tnsym {

Tensor pauli_z(int N, int power = 1);
Tensor pauli_x(int N, int power = 1);
Tensor gate_cz(int N, int power = 1);   // power -1 = dagger
Tensor gate_cx(int N, int power = 1);

// embed a two-site gate on spins (i, j) of an n-spin register (0-based, i != j)
Tensor embed_two_site(const Tensor& gate, int N, std::size_t n, std::size_t i,
                      std::size_t j);
// embed a one-site operator on spin i
Tensor embed_one_site(const Tensor& op, int N, std::size_t n, std::size_t i);

}  // namespace tnsym
