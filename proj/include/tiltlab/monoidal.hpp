#pragma once

#include <string>
#include <vector>

#include "tiltlab/sampling.hpp"
#include "tiltlab/tilt.hpp"
#include "tiltlab/verdict.hpp"

namespace tiltlab {

struct sharp_result {
  layer_elem value;  // in layer j+m
  rational effective_precision{0};
  int layer = 0;
  int target = 0;
};

// lift(x_m)^(p^m), precision measured against lift(x_{m-1})^(p^(m-1)).
sharp_result sharp(const small_tilt_elem& x);
// Same with lifts perturbed by random elements of I_0.
sharp_result sharp_randomized(const small_tilt_elem& x, rng_t& rng);

small_tilt_elem random_tilt_elem(const tower_ptr& h, int j, int m, rng_t& rng);

// reduce(sharp(x)) equals the image of x_0 in Quot(j+m), on sampled x.
check_result check_sharp_phi(const tower_ptr& h, int j, int m, int samples, std::uint64_t seed);
// The map F_p[T]/(T^{c_j}) -> R_j/I_0 induced by sharp is a ring isomorphism.
check_result check_sharp1_iso(const tower_ptr& h, int j, int m, int samples, std::uint64_t seed);
// sharp(f_j^flat) = f_j * unit, compared factor by factor.
check_result check_sharpf(const tower_ptr& h, int j, int m);
check_result check_multiplicativity(const tower_ptr& h, int j, int m, int pairs, std::uint64_t seed);
check_result check_lift_independence(const tower_ptr& h, int j, int m, int count, std::uint64_t seed);

// Idempotents of a characteristic-p layer ring (an F_p-algebra).
std::vector<layer_elem> fp_idempotents(const layer_ring_ptr& r);
// Idempotents of a layer over Z/p^N, lifted from those mod p.
std::vector<layer_elem> layer_idempotents(const layer_ring_ptr& r);

struct idempotent_report {
  check_result result;
  int layer = 0;
  int depth = 0;
  std::vector<std::string> tilt_side;
  std::vector<std::string> layer_side;
};

idempotent_report idempotent_transfer(const tower_ptr& h, int j, int m);

struct torsion_transfer_row {
  int level = 0;
  std::size_t tilt_order_log = 0;   // log_p of the torsion order, tilt side
  std::size_t layer_order_log = 0;  // same, layer side
};

struct torsion_transfer_report {
  check_result result;
  std::vector<torsion_transfer_row> rows;
};

torsion_transfer_report torsion_transfer_check(const tower_ptr& h, int m);

}  // namespace tiltlab
