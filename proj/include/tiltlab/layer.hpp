#pragma once

#include <array>
#include <compare>
#include <cstdint>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "tiltlab/modular.hpp"
#include "tiltlab/rational.hpp"

namespace tiltlab {

constexpr int max_vars = 3;

struct precision_budget {
  int n_digits = 1;
  int depth = 0;
  rational var_degree_cap{0};

  bool operator==(const precision_budget&) const = default;
};

struct exp_lattice {
  std::int64_t denominator = 1;
};

// t-exponent in units of the layer uniformizer, variable exponents as
// numerators over the factor's variable denominator.
struct monomial {
  std::int32_t t = 0;
  std::array<std::int32_t, max_vars> x{};

  auto operator<=>(const monomial&) const = default;
  std::int32_t var_degree() const { return x[0] + x[1] + x[2]; }
};

struct layer_factor {
  int eisen_exp = 1;    // t^e = p
  int ideal_t_exp = 1;  // f_0 = t^c
  int var_den = 1;
  int num_vars = 0;

  rational ideal_exp() const { return rational(ideal_t_exp, eisen_exp); }
  exp_lattice var_lattice() const { return {var_den}; }
  bool operator==(const layer_factor&) const = default;
};

// A finite product of truncated Eisenstein layers
// (Z/p^N)[t, x^(1/d)]/(t^e - p, var degree > D) sharing p and N.
// In characteristic p (N = 1) the same arithmetic reads F_p[t]/(t^e); the flag
// only changes how precision is refined.
class layer_ring {
 public:
  layer_ring(u64 p, precision_budget prec, std::vector<layer_factor> factors, bool char_p = false);

  u64 p() const { return md_.p; }
  int n_digits() const { return md_.n; }
  const modulus& mod() const { return md_; }
  const precision_budget& precision() const { return prec_; }
  const std::vector<layer_factor>& factors() const { return factors_; }
  const layer_factor& factor(std::size_t f) const { return factors_[f]; }
  std::size_t num_factors() const { return factors_.size(); }
  bool char_p() const { return char_p_; }

  std::int32_t var_cap(std::size_t f) const { return var_cap_[f]; }
  const std::vector<monomial>& var_monomials(std::size_t f) const { return var_monos_[f]; }
  int var_index(std::size_t f, const monomial& m) const;
  // index of the product of two variable monomials, -1 if truncated
  int var_add(std::size_t f, int a, int b) const;

  // F_p basis of the quotient mod (p, f_0): (factor, k < c, variable monomial)
  std::size_t quot_dim() const { return quot_off_.back(); }
  std::size_t quot_offset(std::size_t f) const { return quot_off_[f]; }
  std::size_t quot_index(std::size_t f, int k, int vi) const {
    return quot_off_[f] + static_cast<std::size_t>(k) * var_monos_[f].size() + vi;
  }
  std::pair<std::size_t, monomial> quot_basis(std::size_t idx) const;

  // Z/p^N basis of the ring: (factor, k < e, variable monomial)
  std::size_t module_dim() const { return mod_off_.back(); }
  std::size_t module_index(std::size_t f, const monomial& m) const;
  std::pair<std::size_t, monomial> module_basis(std::size_t idx) const;

  // Same presentation at doubled precision (2N digits, or doubled t-adic
  // length in characteristic p). Bases of this ring embed monomial-wise.
  std::shared_ptr<const layer_ring> refined() const;

  bool operator==(const layer_ring& o) const;
  std::string describe() const;

 private:
  modulus md_;
  precision_budget prec_;
  std::vector<layer_factor> factors_;
  bool char_p_;
  std::vector<std::int32_t> var_cap_;
  std::vector<std::vector<monomial>> var_monos_;
  std::vector<std::map<monomial, int>> var_lookup_;
  std::vector<std::size_t> quot_off_;
  std::vector<std::size_t> mod_off_;
};

using layer_ring_ptr = std::shared_ptr<const layer_ring>;

// Validated constructor for one factor. var_den = 0 means the p-part of e.
layer_ring_ptr layer_make(u64 p, const precision_budget& prec, int e, int v, const rational& ideal_exp,
                          int var_den = 0);
layer_ring_ptr layer_product(const std::vector<layer_ring_ptr>& parts);

bool same_ring(const layer_ring_ptr& a, const layer_ring_ptr& b);

struct term {
  monomial mono;
  u64 coeff = 0;
  bool operator==(const term&) const = default;
};

class layer_elem {
 public:
  layer_elem() = default;
  explicit layer_elem(layer_ring_ptr r);

  static layer_elem constant(const layer_ring_ptr& r, std::int64_t c);
  // c * t^k * x^a in factor f; k may exceed e (folded into p-powers)
  static layer_elem mono(const layer_ring_ptr& r, std::size_t f, const monomial& m, u64 c = 1);
  // Builds from arbitrary (possibly unnormalized, repeated) terms.
  static layer_elem from_terms(const layer_ring_ptr& r, std::size_t f, const std::vector<term>& ts);

  const layer_ring_ptr& ring() const { return ring_; }
  const std::vector<std::vector<term>>& parts() const { return parts_; }
  const std::vector<term>& part(std::size_t f) const { return parts_[f]; }
  bool lossy() const { return lossy_; }
  void mark_lossy() { lossy_ = true; }
  bool is_zero() const;
  std::size_t num_terms() const;

  layer_elem operator+(const layer_elem& o) const;
  layer_elem operator-(const layer_elem& o) const;
  layer_elem operator-() const;
  layer_elem operator*(const layer_elem& o) const;
  layer_elem scaled(u64 c) const;
  layer_elem pow(u64 e) const;
  // keeps only factor f (others zero)
  layer_elem restricted(std::size_t f) const;

  bool operator==(const layer_elem& o) const;
  bool operator!=(const layer_elem& o) const { return !(*this == o); }

  std::vector<u64> coordinates() const;  // over ring()->module_dim()
  static layer_elem from_coordinates(const layer_ring_ptr& r, const std::vector<u64>& c);

 private:
  void check_same(const layer_elem& o) const;
  layer_ring_ptr ring_;
  std::vector<std::vector<term>> parts_;
  bool lossy_ = false;
};

layer_elem elem_mul(const layer_elem& x, const layer_elem& y);

struct rat_valuation {
  bool above_precision = true;
  rational value{0};

  static rat_valuation above() { return {}; }
  static rat_valuation of(const rational& r) { return {false, r}; }
  bool operator==(const rat_valuation&) const = default;
  // ABOVE_PRECISION compares greater than everything
  bool operator<(const rat_valuation& o) const;
  std::string text() const;
};

rat_valuation valuation(const layer_elem& x);
rat_valuation valuation_in_factor(const layer_elem& x, std::size_t f);

// Divides by t^k in every factor; terms below t^k must carry p-divisible
// coefficients (one digit is lost, so the result is marked lossy).
layer_elem divide_by_t_power(const layer_elem& x, const std::vector<int>& k);

// Unit test by residue: the ring is a product of local rings with residue field F_p.
bool is_unit(const layer_elem& x);

class quot_elem {
 public:
  quot_elem() = default;
  explicit quot_elem(layer_ring_ptr r);
  static quot_elem basis(const layer_ring_ptr& r, std::size_t idx, std::uint32_t c = 1);
  static quot_elem one(const layer_ring_ptr& r);

  const layer_ring_ptr& ring() const { return ring_; }
  const std::vector<std::uint32_t>& coeffs() const { return c_; }
  std::uint32_t operator[](std::size_t i) const { return c_[i]; }
  void set(std::size_t i, std::uint32_t v) { c_[i] = static_cast<std::uint32_t>(v % ring_->p()); }
  std::size_t dim() const { return c_.size(); }
  bool is_zero() const;

  quot_elem operator+(const quot_elem& o) const;
  quot_elem operator-(const quot_elem& o) const;
  quot_elem operator*(const quot_elem& o) const;
  quot_elem scaled(std::uint32_t a) const;
  quot_elem pow(u64 e) const;
  bool operator==(const quot_elem& o) const;
  bool operator!=(const quot_elem& o) const { return !(*this == o); }

 private:
  void check_same(const quot_elem& o) const;
  layer_ring_ptr ring_;
  std::vector<std::uint32_t> c_;
};

quot_elem reduce_mod_ideal(const layer_elem& x);
// coefficient-wise lift F_p -> {0..p-1}
layer_elem canonical_lift(const quot_elem& x);

}  // namespace tiltlab
