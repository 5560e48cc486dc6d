#include "tbcont/sparse.hpp"

#include <algorithm>
#include <cmath>

#include "tbcont/error.hpp"

namespace tbcont {

namespace {

struct Csr {
  std::vector<std::size_t> ptr;
  std::vector<std::uint32_t> col;
  std::vector<cplx> val;
};

Csr build(std::size_t dim, std::vector<Triplet>& t) {
  std::stable_sort(t.begin(), t.end(), [](const Triplet& a, const Triplet& b) {
    return a.row != b.row ? a.row < b.row : a.col < b.col;
  });
  Csr m;
  m.ptr.assign(dim + 1, 0);
  for (std::size_t k = 0; k < t.size();) {
    std::size_t e = k;
    cplx s = 0.0;
    while (e < t.size() && t[e].row == t[k].row && t[e].col == t[k].col) s += t[e++].value;
    m.col.push_back(t[k].col);
    m.val.push_back(s);
    m.ptr[t[k].row + 1]++;
    k = e;
  }
  for (std::size_t r = 0; r < dim; ++r) m.ptr[r + 1] += m.ptr[r];
  return m;
}

cplx lookup(const Csr& m, std::size_t r, std::uint32_t c) {
  const auto b = m.col.begin() + std::ptrdiff_t(m.ptr[r]);
  const auto e = m.col.begin() + std::ptrdiff_t(m.ptr[r + 1]);
  const auto it = std::lower_bound(b, e, c);
  if (it != e && *it == c) return m.val[std::size_t(it - m.col.begin())];
  return 0.0;
}

}  // namespace

SparseHamiltonian SparseHamiltonian::from_triplets_hermitian(std::size_t dim, std::vector<Triplet> t) {
  for (const auto& x : t)
    if (x.row >= dim || x.col >= dim) fail(Errc::invalid_parameter, "triplet index out of range");
  Csr A = build(dim, t);
  // pattern of A + A^T
  std::vector<Triplet> pat;
  pat.reserve(2 * A.val.size());
  for (std::size_t r = 0; r < dim; ++r)
    for (std::size_t k = A.ptr[r]; k < A.ptr[r + 1]; ++k) {
      pat.push_back({std::uint32_t(r), A.col[k], 0.0});
      pat.push_back({A.col[k], std::uint32_t(r), 0.0});
    }
  Csr P = build(dim, pat);
  SparseHamiltonian H;
  H.dim_ = dim;
  H.row_ptr_ = P.ptr;
  H.col_ = P.col;
  H.val_.resize(P.col.size());
  for (std::size_t r = 0; r < dim; ++r)
    for (std::size_t k = P.ptr[r]; k < P.ptr[r + 1]; ++k) {
      const std::uint32_t c = P.col[k];
      H.val_[k] = 0.5 * (lookup(A, r, c) + std::conj(lookup(A, c, std::uint32_t(r))));
    }
  return H;
}

void SparseHamiltonian::apply(const cplx* x, cplx* y) const {
  const std::ptrdiff_t n = std::ptrdiff_t(dim_);
  const std::size_t* rp = row_ptr_.data();
  const std::uint32_t* cp = col_.data();
  const cplx* vp = val_.data();
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t r = 0; r < n; ++r) {
    double re = 0.0, im = 0.0;
    for (std::size_t k = rp[r]; k < rp[r + 1]; ++k) {
      const cplx a = vp[k], b = x[cp[k]];
      re += a.real() * b.real() - a.imag() * b.imag();
      im += a.real() * b.imag() + a.imag() * b.real();
    }
    y[r] = cplx(re, im);
  }
}

cplx SparseHamiltonian::entry(std::size_t r, std::size_t c) const {
  for (std::size_t k = row_ptr_[r]; k < row_ptr_[r + 1]; ++k)
    if (col_[k] == c) return val_[k];
  return 0.0;
}

CMat SparseHamiltonian::dense() const {
  CMat D = CMat::Zero(Eigen::Index(dim_), Eigen::Index(dim_));
  for (std::size_t r = 0; r < dim_; ++r)
    for (std::size_t k = row_ptr_[r]; k < row_ptr_[r + 1]; ++k) D(Eigen::Index(r), col_[k]) += val_[k];
  return D;
}

double SparseHamiltonian::hermitian_defect() const {
  double d = 0.0;
  for (std::size_t r = 0; r < dim_; ++r)
    for (std::size_t k = row_ptr_[r]; k < row_ptr_[r + 1]; ++k)
      d = std::max(d, std::abs(val_[k] - std::conj(entry(col_[k], r))));
  return d;
}

std::size_t SparseHamiltonian::max_row_nnz() const {
  std::size_t m = 0;
  for (std::size_t r = 0; r < dim_; ++r) m = std::max(m, row_ptr_[r + 1] - row_ptr_[r]);
  return m;
}

double SparseHamiltonian::norm_bound() const {
  double m = 0.0;
  for (std::size_t r = 0; r < dim_; ++r) {
    double s = 0.0;
    for (std::size_t k = row_ptr_[r]; k < row_ptr_[r + 1]; ++k) s += std::abs(val_[k]);
    m = std::max(m, s);
  }
  return m;
}

}  // namespace tbcont
