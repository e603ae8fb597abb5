#pragma once
// Dense multi-index complex tensors with row-major storage.
//
// Conventions used throughout the codebase:
//  * data is linearized row-major: the LAST index varies fastest.
//  * contract(a, b, pairs) returns the uncontracted indices of a (in their
//    original order) followed by the uncontracted indices of b.
//  * reshapes are free as long as the total size is preserved.

#include <complex>
#include <cstddef>
#include <initializer_list>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace tnsym {

using cdbl = std::complex<double>;

class Tensor {
public:
  Tensor() = default;
  explicit Tensor(std::vector<std::size_t> dims, cdbl fill = cdbl(0, 0));
  Tensor(std::vector<std::size_t> dims, std::vector<cdbl> data);

  static Tensor identity(std::size_t d);                // dims {d, d}
  static Tensor identity_matrix(std::size_t rows);      // alias of identity

  const std::vector<std::size_t>& dims() const { return dims_; }
  std::size_t rank() const { return dims_.size(); }
  std::size_t size() const { return data_.size(); }
  std::vector<cdbl>& data() { return data_; }
  const std::vector<cdbl>& data() const { return data_; }

  // optional index tags, purely informational
  std::vector<std::string> labels;

  cdbl& at(const std::vector<std::size_t>& idx);
  cdbl at(const std::vector<std::size_t>& idx) const;
  cdbl& operator[](std::size_t flat) { return data_[flat]; }
  cdbl operator[](std::size_t flat) const { return data_[flat]; }

  // flat offset of a multi-index
  std::size_t offset(const std::vector<std::size_t>& idx) const;

  Tensor reshaped(std::vector<std::size_t> new_dims) const;
  // permute: result index k is old index perm[k]
  Tensor permuted(const std::vector<std::size_t>& perm) const;
  Tensor conjugated() const;
  // dagger of a square matrix view given a row-group size
  Tensor scaled(cdbl s) const;

  Tensor& operator+=(const Tensor& o);
  Tensor& operator-=(const Tensor& o);
  friend Tensor operator+(Tensor a, const Tensor& b) { return a += b; }
  friend Tensor operator-(Tensor a, const Tensor& b) { return a -= b; }

  double norm() const;                     // Frobenius
  cdbl trace() const;                      // square matrix only

private:
  std::vector<std::size_t> dims_;
  std::vector<cdbl> data_;
};

// Pairwise contraction. pairs = list of (index-of-a, index-of-b).
Tensor contract(const Tensor& a, const Tensor& b,
                const std::vector<std::pair<std::size_t, std::size_t>>& pairs);

// Matrix product of two rank-2 tensors (BLAS-backed).
Tensor matmul(const Tensor& a, const Tensor& b);

// Dagger of a rank-2 tensor.
Tensor dagger(const Tensor& m);

// Kronecker product of two square matrices (row-major, standard ordering).
Tensor kron(const Tensor& a, const Tensor& b);

double distance(const Tensor& a, const Tensor& b);  // ||a-b||_F

}  // namespace tnsym
