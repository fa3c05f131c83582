#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "tiltlab/layer.hpp"
#include "tiltlab/rational.hpp"

namespace tiltlab {

// Syntax: sums of terms `c*t^{k/d}*x1^{a/d}`; exponents as `^k` or `^{a/b}`.
// A product-ring element is a tuple `(e1, e2, ...)`; a plain expression is
// read diagonally in every factor.
struct parsed_atom {
  std::string name;
  rational exp{1};
};

struct parsed_term {
  std::int64_t coeff = 1;
  std::vector<parsed_atom> atoms;
};

using parsed_expr = std::vector<parsed_term>;

std::vector<parsed_expr> parse_expression(const std::string& text);

// Names: `t` (exponent = valuation, so t^{1/e} is the uniformizer), `p`,
// `x1`..`x3` (exponents in the factor's variable lattice).
layer_elem parse_layer_elem(const layer_ring_ptr& r, const std::string& text);

std::string to_text(const layer_elem& x);
std::string to_text(const quot_elem& x);

// One factor's terms; `t_name` is printed with the exponent k/e reduced, or
// with the raw integer k when `integer_t` is set.
std::string terms_text(const std::vector<term>& ts, const layer_factor& f, const std::string& t_name, bool integer_t);

}  // namespace tiltlab
