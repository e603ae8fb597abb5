#include "tnsym/tensor.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <numeric>

// OpenBLAS complex GEMM
extern "C" {
void cblas_zgemm(int order, int transA, int transB, int m, int n, int k,
                 const void* alpha, const void* A, int lda, const void* B,
                 int ldb, const void* beta, void* C, int ldc);
}
namespace {
constexpr int kRowMajor = 101, kNoTrans = 111;
}

namespace tnsym {

Tensor::Tensor(std::vector<std::size_t> dims, cdbl fill) : dims_(std::move(dims)) {
  std::size_t n = 1;
  for (auto d : dims_) n *= d;
  data_.assign(n, fill);
}

Tensor::Tensor(std::vector<std::size_t> dims, std::vector<cdbl> data)
    : dims_(std::move(dims)), data_(std::move(data)) {
  std::size_t n = 1;
  for (auto d : dims_) n *= d;
  if (n != data_.size()) throw std::invalid_argument("tensor: dims do not match data length");
}

Tensor Tensor::identity(std::size_t d) {
  Tensor t({d, d});
  for (std::size_t i = 0; i < d; ++i) t.data_[i * d + i] = 1.0;
  return t;
}
Tensor Tensor::identity_matrix(std::size_t rows) { return identity(rows); }

std::size_t Tensor::offset(const std::vector<std::size_t>& idx) const {
  if (idx.size() != dims_.size()) throw std::invalid_argument("tensor: index rank mismatch");
  std::size_t off = 0;
  for (std::size_t k = 0; k < idx.size(); ++k) {
    if (idx[k] >= dims_[k]) throw std::out_of_range("tensor: index out of range");
    off = off * dims_[k] + idx[k];
  }
  return off;
}

cdbl& Tensor::at(const std::vector<std::size_t>& idx) { return data_[offset(idx)]; }
cdbl Tensor::at(const std::vector<std::size_t>& idx) const { return data_[offset(idx)]; }

Tensor Tensor::reshaped(std::vector<std::size_t> new_dims) const {
  std::size_t n = 1;
  for (auto d : new_dims) n *= d;
  if (n != data_.size()) throw std::invalid_argument("reshape: size mismatch");
  Tensor t;
  t.dims_ = std::move(new_dims);
  t.data_ = data_;
  return t;
}

Tensor Tensor::permuted(const std::vector<std::size_t>& perm) const {
  const std::size_t r = rank();
  if (perm.size() != r) throw std::invalid_argument("permute: rank mismatch");
  std::vector<bool> seen(r, false);
  for (auto p : perm) {
    if (p >= r || seen[p]) throw std::invalid_argument("permute: invalid permutation");
    seen[p] = true;
  }
  std::vector<std::size_t> nd(r);
  for (std::size_t k = 0; k < r; ++k) nd[k] = dims_[perm[k]];
  Tensor out(nd);
  if (r == 0) {
    out.data_ = data_;
    return out;
  }
  // strides of the source in its own layout
  std::vector<std::size_t> sstride(r, 1);
  for (std::size_t k = r - 1; k > 0; --k) sstride[k - 1] = sstride[k] * dims_[k];
  // walk the destination in order, tracking the source offset incrementally
  std::vector<std::size_t> dstride_src(r);  // source stride of destination axis k
  for (std::size_t k = 0; k < r; ++k) dstride_src[k] = sstride[perm[k]];
  std::vector<std::size_t> idx(r, 0);
  std::size_t soff = 0;
  const std::size_t n = data_.size();
  for (std::size_t doff = 0; doff < n; ++doff) {
    out.data_[doff] = data_[soff];
    // increment multi-index
    for (std::size_t k = r; k-- > 0;) {
      idx[k]++;
      soff += dstride_src[k];
      if (idx[k] < nd[k]) break;
      soff -= idx[k] * dstride_src[k];
      idx[k] = 0;
    }
  }
  return out;
}

Tensor Tensor::conjugated() const {
  Tensor t = *this;
  for (auto& v : t.data_) v = std::conj(v);
  return t;
}

Tensor Tensor::scaled(cdbl s) const {
  Tensor t = *this;
  for (auto& v : t.data_) v *= s;
  return t;
}

Tensor& Tensor::operator+=(const Tensor& o) {
  if (dims_ != o.dims_) throw std::invalid_argument("tensor +: shape mismatch");
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += o.data_[i];
  return *this;
}
Tensor& Tensor::operator-=(const Tensor& o) {
  if (dims_ != o.dims_) throw std::invalid_argument("tensor -: shape mismatch");
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] -= o.data_[i];
  return *this;
}

double Tensor::norm() const {
  double s = 0;
  for (const auto& v : data_) s += std::norm(v);
  return std::sqrt(s);
}

cdbl Tensor::trace() const {
  if (rank() != 2 || dims_[0] != dims_[1]) throw std::invalid_argument("trace: not a square matrix");
  cdbl s = 0;
  for (std::size_t i = 0; i < dims_[0]; ++i) s += data_[i * dims_[0] + i];
  return s;
}

Tensor matmul(const Tensor& a, const Tensor& b) {
  if (a.rank() != 2 || b.rank() != 2 || a.dims()[1] != b.dims()[0])
    throw std::invalid_argument("matmul: shape mismatch");
  const std::size_t m = a.dims()[0], k = a.dims()[1], n = b.dims()[1];
  Tensor c({m, n});
  const cdbl one(1, 0), zero(0, 0);
  if (m && n && k)
    cblas_zgemm(kRowMajor, kNoTrans, kNoTrans, (int)m, (int)n, (int)k, &one,
                a.data().data(), (int)k, b.data().data(), (int)n, &zero,
                c.data().data(), (int)n);
  return c;
}

Tensor dagger(const Tensor& m) {
  if (m.rank() != 2) throw std::invalid_argument("dagger: rank-2 only");
  return m.permuted({1, 0}).conjugated();
}

Tensor kron(const Tensor& a, const Tensor& b) {
  if (a.rank() != 2 || b.rank() != 2) throw std::invalid_argument("kron: rank-2 only");
  const std::size_t ar = a.dims()[0], ac = a.dims()[1];
  const std::size_t br = b.dims()[0], bc = b.dims()[1];
  Tensor c({ar * br, ac * bc});
  for (std::size_t i = 0; i < ar; ++i)
    for (std::size_t j = 0; j < ac; ++j) {
      const cdbl aij = a.data()[i * ac + j];
      if (aij == cdbl(0, 0)) continue;
      for (std::size_t p = 0; p < br; ++p)
        for (std::size_t q = 0; q < bc; ++q)
          c.data()[(i * br + p) * (ac * bc) + (j * bc + q)] = aij * b.data()[p * bc + q];
    }
  return c;
}

Tensor contract(const Tensor& a, const Tensor& b,
                const std::vector<std::pair<std::size_t, std::size_t>>& pairs) {
  const std::size_t ra = a.rank(), rb = b.rank();
  std::vector<bool> ca(ra, false), cb(rb, false);
  std::size_t csize = 1;
  for (auto [ia, ib] : pairs) {
    if (ia >= ra || ib >= rb) throw std::invalid_argument("contract: index out of range");
    if (ca[ia] || cb[ib]) throw std::invalid_argument("contract: repeated index in pairs");
    if (a.dims()[ia] != b.dims()[ib]) throw std::invalid_argument("contract: size mismatch on pair");
    ca[ia] = true;
    cb[ib] = true;
    csize *= a.dims()[ia];
  }
  // permute a: free indices first (original order), contracted last (pair order)
  std::vector<std::size_t> pa, pb;
  std::vector<std::size_t> out_dims;
  for (std::size_t k = 0; k < ra; ++k)
    if (!ca[k]) {
      pa.push_back(k);
      out_dims.push_back(a.dims()[k]);
    }
  for (auto [ia, ib] : pairs) pa.push_back(ia);
  // permute b: contracted first (pair order), free last (original order)
  for (auto [ia, ib] : pairs) pb.push_back(ib);
  for (std::size_t k = 0; k < rb; ++k)
    if (!cb[k]) {
      pb.push_back(k);
      out_dims.push_back(b.dims()[k]);
    }
  Tensor ap = a.permuted(pa);
  Tensor bp = b.permuted(pb);
  const std::size_t m = ap.size() / csize;
  const std::size_t n = bp.size() / csize;
  std::vector<cdbl> cbuf(m * n, cdbl(0, 0));
  const cdbl one(1, 0), zero(0, 0);
  if (m && n && csize)
    cblas_zgemm(kRowMajor, kNoTrans, kNoTrans, (int)m, (int)n, (int)csize, &one,
                ap.data().data(), (int)csize, bp.data().data(), (int)n, &zero,
                cbuf.data(), (int)n);
  return Tensor(out_dims, std::move(cbuf));
}

double distance(const Tensor& a, const Tensor& b) {
  Tensor d = a;
  d -= b;
  return d.norm();
}

}  // namespace tnsym
