#pragma once

#include <cstdint>
#include <vector>

#include <json.hpp>

#include "tbcont/common.hpp"

namespace tbcont {

struct Triplet {
  std::uint32_t row, col;
  cplx value;
};

// Compressed sparse rows; Hermitian by construction when built with from_triplets_hermitian.
class SparseHamiltonian {
 public:
  SparseHamiltonian() = default;

  // Sums duplicates, then replaces H by (H + H^dagger) / 2 so that H = H^dagger holds bitwise.
  static SparseHamiltonian from_triplets_hermitian(std::size_t dim, std::vector<Triplet> triplets);

  std::size_t dim() const { return dim_; }
  std::size_t nnz() const { return val_.size(); }
  const std::vector<std::size_t>& row_ptr() const { return row_ptr_; }
  const std::vector<std::uint32_t>& cols() const { return col_; }
  const std::vector<cplx>& values() const { return val_; }
  nlohmann::json& metadata() { return meta_; }
  const nlohmann::json& metadata() const { return meta_; }

  // y = H x; y and x must not alias.
  void apply(const cplx* x, cplx* y) const;
  void apply(const CVec& x, CVec& y) const { apply(x.data(), y.data()); }

  cplx entry(std::size_t r, std::size_t c) const;
  CMat dense() const;
  // max |H_ij - conj(H_ji)|
  double hermitian_defect() const;
  std::size_t max_row_nnz() const;
  // max absolute row sum, an upper bound on the spectral radius
  double norm_bound() const;

 private:
  std::size_t dim_ = 0;
  std::vector<std::size_t> row_ptr_{0};
  std::vector<std::uint32_t> col_;
  std::vector<cplx> val_;
  nlohmann::json meta_ = nlohmann::json::object();
};

}  // namespace tbcont
