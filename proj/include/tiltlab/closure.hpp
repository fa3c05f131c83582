#pragma once

#include <memory>
#include <string>
#include <vector>

#include "tiltlab/layer.hpp"
#include "tiltlab/linalg.hpp"
#include "tiltlab/rational.hpp"
#include "tiltlab/tower.hpp"

namespace tiltlab {

using coords = std::vector<u64>;

// A finite Z/p^N-algebra that is free as a module. Backed either by a layer
// ring or by integer structure constants (basis element 0 being 1).
class finite_algebra {
 public:
  static std::shared_ptr<const finite_algebra> from_layer(layer_ring_ptr r);
  // table[i][j] = integer coordinates of e_i * e_j
  static std::shared_ptr<const finite_algebra> from_table(std::string name, u64 p, int n_digits,
                                                          std::vector<std::string> basis_names,
                                                          std::vector<std::vector<std::vector<std::int64_t>>> table);
  // Z/p^N[y]/(y^d - sum c_k y^k), relation coefficients c_0..c_{d-1}
  static std::shared_ptr<const finite_algebra> monogenic(std::string name, u64 p, int n_digits, std::string var,
                                                         const std::vector<std::int64_t>& relation);

  const std::string& name() const { return name_; }
  u64 p() const { return md_.p; }
  int n_digits() const { return md_.n; }
  const modulus& mod() const { return md_; }
  std::size_t dim() const { return dim_; }
  const layer_ring_ptr& layer() const { return layer_; }

  coords one() const;
  coords unit_vector(std::size_t i) const;
  coords mul(const coords& a, const coords& b) const;
  coords add(const coords& a, const coords& b) const;
  coords pow(const coords& a, u64 e) const;
  std::string text(const coords& a) const;

  // Generators of the genuine f-torsion (see torsion_submodule).
  std::vector<sparse_vec> torsion(const coords& f) const;
  linear_map multiplication_map(const coords& g) const;

 private:
  finite_algebra() = default;
  // x -> x^p as a linear map, for F_p-algebras
  void init_frobenius();
  std::string name_;
  modulus md_;
  std::size_t dim_ = 0;
  layer_ring_ptr layer_;
  std::vector<std::string> names_;
  std::vector<std::vector<std::vector<std::int64_t>>> table_;
  std::vector<sparse_vec> frob_;
};

using finite_algebra_ptr = std::shared_ptr<const finite_algebra>;

enum class pair_kind { extension, localization };

// A -> B with distinguished f in A. For localization pairs B plays the role of
// A[1/f], modeled as fractions a/f^c with c bounded by the precision.
struct ring_pair {
  std::string name;
  pair_kind kind = pair_kind::extension;
  finite_algebra_ptr A;  // may be null for a subring given by generators
  finite_algebra_ptr B;
  linear_map map;                      // A coords -> B coords
  std::vector<sparse_vec> image_gens;  // Z/p^N span of the image of A in B
  coords f;                            // in A (localization) or B
  rational f_valuation{1};
  rational precision_valuation{1};
};

// Verifies that map is a unital ring homomorphism on basis products.
ring_pair make_extension(std::string name, finite_algebra_ptr A, finite_algebra_ptr B, linear_map map, coords f_in_A);
// A given as the Z/p^N span of generators inside B (checked closed under products).
ring_pair make_subring(std::string name, finite_algebra_ptr B, const std::vector<coords>& gens);
// f must be a non-zero-divisor at precision.
ring_pair make_localization(std::string name, finite_algebra_ptr A, coords f, rational f_valuation,
                            rational precision_valuation);
ring_pair identity_pair(std::string name, finite_algebra_ptr A);
// layer j -> layer j+1 of a tower with f = f_0
ring_pair tower_step_pair(const tower_handle& h, int j);
// r with the element f inverted
ring_pair localization_of_layer(std::string name, const layer_ring_ptr& r, const layer_elem& f);
// layer with f = f_0, as a localization pair
ring_pair layer_localization(const tower_handle& h, int j);

enum class closure_verdict { pass_exact, pass_sampled, fail, undecided };
std::string to_string(closure_verdict v);

enum class closure_mode { exact, sampled };

struct closure_result {
  std::string property;
  closure_verdict v = closure_verdict::pass_exact;
  std::string witness;
  std::string detail;
  std::size_t checked = 0;

  bool failed() const { return v == closure_verdict::fail; }
};

constexpr double enumeration_limit = 1 << 20;

closure_result is_cartesian_mod_f(const ring_pair& pair);
closure_result check_root_closed(const ring_pair& pair, u64 n, closure_mode mode, int samples = 1000,
                                 std::uint64_t seed = 0);
// b = a / f^c0; searches c <= c_cap with f^c b^k in A for every k <= n_cap.
closure_result almost_integral_witness(const ring_pair& pair, const coords& a, int c0, int c_cap, int n_cap);

// Local F_p-algebra with principal maximal ideal (m = nilradical, dim m/m^2 <= 1).
closure_result monogenic_presentation_check(const finite_algebra& A);

struct transfer_row {
  std::string check;
  int level = 0;
  closure_result result;
};

struct transfer_report {
  std::vector<transfer_row> rows;
  bool passed() const;
};

transfer_report transfer_suite(const tower_ptr& h, closure_mode mode, int samples, std::uint64_t seed);

}  // namespace tiltlab
