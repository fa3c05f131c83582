#pragma once

#include <cstdint>
#include <random>

#include "tiltlab/layer.hpp"

namespace tiltlab {

using rng_t = std::mt19937_64;

// Derives an independent stream for (seed, stream id) so that results do not
// depend on evaluation order.
rng_t make_rng(std::uint64_t seed, std::uint64_t stream);

// Random element with up to max_terms basis monomials (0 = dense).
layer_elem random_layer_elem(const layer_ring_ptr& r, rng_t& rng, std::size_t max_terms);
quot_elem random_quot_elem(const layer_ring_ptr& r, rng_t& rng, std::size_t max_terms);

}  // namespace tiltlab
