#pragma once

#include <cstdint>
#include <map>
#include <utility>
#include <vector>

#include "tiltlab/modular.hpp"

namespace tiltlab {

// Sorted by index, no zero entries.
using sparse_vec = std::vector<std::pair<std::uint32_t, u64>>;

sparse_vec sv_axpy(const modulus& md, const sparse_vec& x, u64 a, const sparse_vec& y);  // x + a*y
sparse_vec sv_scale(const modulus& md, const sparse_vec& x, u64 a);
sparse_vec sv_from_dense(const std::vector<u64>& d);
std::vector<u64> sv_to_dense(const sparse_vec& v, std::size_t n);

// Row echelon form over Z/p^n kept in Howell form: after every insertion the
// span of the rows with leading index >= k is exactly the set of span elements
// vanishing on the first k coordinates. That makes membership a plain
// reduction and kernels readable off an augmented basis.
class howell_basis {
 public:
  explicit howell_basis(const modulus& md) : md_(md) {}

  void insert(sparse_vec v);
  // Reduces as far as possible; stops once the leading index reaches `stop`.
  sparse_vec reduce(sparse_vec v, std::uint32_t stop = UINT32_MAX) const;
  bool contains(const sparse_vec& v) const { return reduce(v).empty(); }

  std::size_t size() const { return rows_.size(); }
  const std::map<std::uint32_t, sparse_vec>& rows() const { return rows_; }
  const modulus& mod() const { return md_; }
  // Number of pivots whose leading coefficient is a unit (the F_p rank when n = 1).
  std::size_t unit_pivots() const;

 private:
  modulus md_;
  std::map<std::uint32_t, sparse_vec> rows_;
};

// A Z/p^n-linear map given by its columns (images of the standard basis).
struct linear_map {
  std::uint32_t rows = 0;
  std::uint32_t cols = 0;
  std::vector<sparse_vec> columns;
};

std::size_t fp_rank(u64 p, const linear_map& f);
// Generators of the kernel of f over Z/p^n.
std::vector<sparse_vec> kernel(const modulus& md, const linear_map& f);
// Howell basis of the image.
howell_basis image(const modulus& md, const linear_map& f);
// Some x with f(x) = y, if one exists.
bool solve(const modulus& md, const linear_map& f, const sparse_vec& y, sparse_vec& x);

// Subspace equality of two generator lists.
bool same_span(const modulus& md, const std::vector<sparse_vec>& a, const std::vector<sparse_vec>& b);

}  // namespace tiltlab

namespace tiltlab {

// Reusable preimage finder for one linear map.
class linear_solver {
 public:
  linear_solver(const modulus& md, const linear_map& f);
  bool solve(const sparse_vec& y, sparse_vec& x) const;

 private:
  modulus md_;
  std::uint32_t rows_;
  howell_basis aug_;
};

}  // namespace tiltlab
