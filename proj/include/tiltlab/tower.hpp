#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "tiltlab/layer.hpp"
#include "tiltlab/linalg.hpp"
#include "tiltlab/torsion.hpp"
#include "tiltlab/verdict.hpp"

namespace tiltlab {

enum class tower_kind { pure, kummer, product };

struct tower_spec {
  u64 prime = 5;
  precision_budget precision{6, 3, rational(0)};
  tower_kind kind = tower_kind::pure;
  int kummer_m = 1;
  int num_vars = 0;
  rational ideal_exp{1};
  int start_level = 0;
  std::vector<tower_spec> components;  // product only
};

tower_spec tower_spec_from_json(const nlohmann::json& j);
nlohmann::ordered_json tower_spec_to_json(const tower_spec& s);

tower_spec pure_spec(u64 p, int n_digits, int depth, int num_vars = 0, rational var_cap = rational(0));
tower_spec kummer_spec(u64 p, int m, const rational& eps, int start_level, int n_digits, int depth);
tower_spec product_spec(const std::vector<tower_spec>& parts);

// Deliberate defects for negative controls; default-constructed means none.
struct tower_defects {
  int transition_exponent = 0;           // t^k -> s^(g*k); 0 means g = p
  u64 frob_scale = 1;                    // F multiplied by this constant
  std::optional<rational> pillar_valuation;  // overrides the valuation of f_1
  std::optional<rational> raw_ideal_exp;     // bypasses the eps <= 1 validation
  int killed_factor = -1;                // f_0 forced to 0 in this factor

  bool any() const;
};

class tower_handle {
 public:
  tower_handle(tower_spec spec, std::vector<layer_ring_ptr> layers, tower_defects defects, bool char_p);

  const tower_spec& spec() const { return spec_; }
  const tower_defects& defects() const { return defects_; }
  int depth() const { return static_cast<int>(layers_.size()) - 1; }
  int start_level() const { return spec_.start_level; }
  int level(int j) const { return spec_.start_level + j; }
  bool char_p() const { return char_p_; }
  u64 p() const { return layers_.front()->p(); }
  const layer_ring_ptr& layer(int j) const;

  layer_elem transition(int j, const layer_elem& x) const;  // layer j -> j+1
  layer_elem transport(int from, int to, const layer_elem& x) const;
  quot_elem quot_transition(int j, const quot_elem& x) const;
  quot_elem quot_transport(int from, int to, const quot_elem& x) const;
  // Quot(j+1) -> Quot(j)
  quot_elem frob_projection(int j, const quot_elem& x) const;
  // composite Frobenius projection Quot(from) -> Quot(to), to <= from
  quot_elem frob_down(int from, int to, const quot_elem& x) const;

  linear_map quot_transition_map(int j) const;
  linear_map frob_map(int j) const;

  layer_elem ideal_generator(int j) const;  // f_0 in layer j
  layer_elem pillar() const;                // f_1 in layer 1

 private:
  void check_level(int j, int hi) const;
  int transition_exp() const;
  // basis index of the image monomial, -1 when it vanishes
  long quot_transition_index(int j, std::size_t idx) const;
  long frob_index(int j, std::size_t idx) const;

  tower_spec spec_;
  std::vector<layer_ring_ptr> layers_;
  tower_defects defects_;
  bool char_p_;
};

using tower_ptr = std::shared_ptr<const tower_handle>;

tower_ptr build_tower(const tower_spec& spec, const tower_defects& defects = {});
// A tower over already-built layers (used for tilted towers).
tower_ptr tower_from_layers(const tower_spec& spec, std::vector<layer_ring_ptr> layers, bool char_p);

struct axiom_verdict {
  std::string axiom;  // "a", "b", "c", "d", "e", "f-1", "f-2", "g"
  check_result result;
};

struct level_torsion {
  int level = 0;
  std::vector<std::string> basis;
  bool precision_artifact = false;
};

struct axiom_report {
  std::vector<axiom_verdict> verdicts;
  std::string pillar;  // I_1 generator
  std::vector<level_torsion> torsion;
  std::size_t truncation_dim = 0;  // variable-truncation part of Ker F (see f-2)

  bool passed() const;
  const axiom_verdict* find(const std::string& id) const;
};

axiom_report check_axioms(const tower_handle& h, int samples, std::uint64_t seed);

// p lies in the ideal generated by g (exact module membership)
bool ideal_contains(const layer_elem& g, const layer_elem& x);

}  // namespace tiltlab
