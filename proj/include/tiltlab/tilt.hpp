#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "tiltlab/tower.hpp"

namespace tiltlab {

// Depth-m truncation of the small tilt of layer j, presented as the deepest
// quotient F_p[T]/(T^K) (K = c_{j+m}) with T the class of the uniformizer of
// layer j+m. The ring is a characteristic-p layer whose ideal is I_0^flat = (T^{c_j}).
struct tilt_presentation {
  tower_ptr source;
  int layer = 0;  // relative index j
  int depth = 0;  // m
  layer_ring_ptr ring;

  std::vector<int> quotient_exponents() const;  // K per factor
  std::string describe() const;
};

tilt_presentation small_tilt(const tower_ptr& h, int j, int m);

// An element of the depth-m small tilt, stored by its deepest component.
class small_tilt_elem {
 public:
  small_tilt_elem() = default;
  small_tilt_elem(tower_ptr h, int j, int m, quot_elem deepest);

  static small_tilt_elem one(const tower_ptr& h, int j, int m);
  static small_tilt_elem from_presentation(const tilt_presentation& pr, const layer_elem& x);
  layer_elem to_presentation(const tilt_presentation& pr) const;

  const tower_ptr& tower() const { return h_; }
  int layer() const { return j_; }
  int depth() const { return m_; }
  const quot_elem& deepest() const { return deepest_; }
  // x_i in Quot(j+i), 0 <= i <= m
  quot_elem component(int i) const;

  small_tilt_elem operator+(const small_tilt_elem& o) const;
  small_tilt_elem operator*(const small_tilt_elem& o) const;
  small_tilt_elem pow(u64 e) const;
  bool operator==(const small_tilt_elem& o) const;
  bool operator!=(const small_tilt_elem& o) const { return !(*this == o); }

 private:
  void check_same(const small_tilt_elem& o) const;
  tower_ptr h_;
  int j_ = 0;
  int m_ = 0;
  quot_elem deepest_;
};

small_tilt_elem p_flat(const tower_ptr& h, int j, int m);
small_tilt_elem f_flat_generator(const tower_ptr& h, int j, int m);

// Characteristic-p tower of presentations j = 0 .. depth-m.
tower_ptr tilt_tower(const tower_ptr& h, int m);

// Tilt expressions: integer sums of `T^{k}`, `x1^{a/d}`, `pflat`, `fflat`;
// tuples `( , )` address product factors.
small_tilt_elem parse_tilt_elem(const tilt_presentation& pr, const std::string& text);
std::string to_text(const tilt_presentation& pr, const small_tilt_elem& x);
std::string presentation_text(const layer_elem& x);

nlohmann::ordered_json tilt_to_json(const tilt_presentation& pr);

}  // namespace tiltlab
