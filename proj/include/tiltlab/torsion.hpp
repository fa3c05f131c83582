#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "tiltlab/layer.hpp"
#include "tiltlab/linalg.hpp"

namespace tiltlab {

// Genuine f-torsion of a truncated module: the image at precision N of
// ker(f^c) computed at doubled precision, for growing c until it stabilizes.
// Elements that merely vanish because of the truncation are not torsion.
struct torsion_problem {
  modulus base;
  modulus refined;
  std::uint32_t base_dim = 0;
  std::uint32_t refined_dim = 0;
  std::function<linear_map(int c)> refined_power_map;          // x -> f^c x at doubled precision
  std::function<linear_map()> base_map;                        // x -> f x at precision N
  std::function<sparse_vec(const sparse_vec&)> project;        // refined coords -> base coords
  int max_power = 1;
};

struct torsion_span {
  std::vector<sparse_vec> generators;  // Howell rows over Z/p^N
  bool precision_artifact = false;      // naive kernel nonzero, genuine torsion zero
  std::size_t naive_kernel_rank = 0;
  int power = 0;
};

torsion_span genuine_torsion(const torsion_problem& prob);

struct torsion_result {
  std::vector<layer_elem> basis;
  bool precision_artifact = false;
  std::size_t naive_kernel_rank = 0;
  int power = 0;
  bool empty() const { return basis.empty(); }
};

// pre: f nonzero. Generators of {x : f^c x = 0 for some c <= N*e}.
torsion_result torsion_submodule(const layer_ring_ptr& ring, const layer_elem& f);

// Matrix of x -> g*x on the coordinate module of g's ring.
linear_map multiplication_map(const layer_elem& g);

}  // namespace tiltlab
