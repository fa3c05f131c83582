#include "tiltlab/sampling.hpp"

#include <algorithm>

namespace tiltlab {

rng_t make_rng(std::uint64_t seed, std::uint64_t stream) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(stream >> 32), 0x7117u};
  return rng_t(seq);
}

namespace {

std::vector<std::size_t> pick_indices(std::size_t dim, rng_t& rng, std::size_t max_terms) {
  std::vector<std::size_t> idx;
  if (dim == 0) return idx;
  if (max_terms == 0 || max_terms >= dim) {
    idx.resize(dim);
    for (std::size_t i = 0; i < dim; ++i) idx[i] = i;
    return idx;
  }
  std::uniform_int_distribution<std::size_t> count(1, max_terms);
  std::uniform_int_distribution<std::size_t> pos(0, dim - 1);
  std::size_t n = count(rng);
  for (std::size_t i = 0; i < n; ++i) idx.push_back(pos(rng));
  std::sort(idx.begin(), idx.end());
  idx.erase(std::unique(idx.begin(), idx.end()), idx.end());
  return idx;
}

}  // namespace

layer_elem random_layer_elem(const layer_ring_ptr& r, rng_t& rng, std::size_t max_terms) {
  std::vector<u64> coords(r->module_dim(), 0);
  std::uniform_int_distribution<u64> coeff(0, r->mod().m - 1);
  for (auto i : pick_indices(coords.size(), rng, max_terms)) coords[i] = coeff(rng);
  return layer_elem::from_coordinates(r, coords);
}

quot_elem random_quot_elem(const layer_ring_ptr& r, rng_t& rng, std::size_t max_terms) {
  quot_elem q(r);
  std::uniform_int_distribution<std::uint32_t> coeff(0, static_cast<std::uint32_t>(r->p() - 1));
  for (auto i : pick_indices(q.dim(), rng, max_terms)) q.set(i, coeff(rng));
  return q;
}

}  // namespace tiltlab
