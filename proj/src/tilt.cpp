#include "tiltlab/tilt.hpp"

#include <sstream>

#include "tiltlab/element_text.hpp"
#include "tiltlab/errors.hpp"

namespace tiltlab {

namespace {

void check_range(const tower_handle& h, int j, int m) {
  if (m < 0) throw level_out_of_range("negative tilt depth");
  if (j < 0 || j + m > h.depth())
    throw level_out_of_range("tilt of layer " + std::to_string(j) + " at depth " + std::to_string(m) +
                             " needs layers up to " + std::to_string(j + m) + ", realized up to " +
                             std::to_string(h.depth()));
}

quot_elem deepest_monomial(const tower_handle& h, int j, int m, const std::vector<int>& k) {
  const auto& deep = h.layer(j + m);
  quot_elem q(deep);
  for (std::size_t f = 0; f < deep->num_factors(); ++f)
    if (k[f] < deep->factor(f).ideal_t_exp) q.set(deep->quot_index(f, k[f], 0), 1);
  return q;
}

}  // namespace

std::vector<int> tilt_presentation::quotient_exponents() const {
  std::vector<int> k;
  for (const auto& f : ring->factors()) k.push_back(f.eisen_exp);
  return k;
}

std::string tilt_presentation::describe() const {
  std::ostringstream os;
  for (std::size_t f = 0; f < ring->num_factors(); ++f) {
    const auto& fac = ring->factor(f);
    if (f) os << " x ";
    os << "F_" << ring->p() << "[T";
    for (int i = 0; i < fac.num_vars; ++i) os << ", x" << i + 1 << "^{1/" << fac.var_den << "}";
    os << "]/(T^{" << fac.eisen_exp << "}";
    if (fac.num_vars) os << ", degree > " << to_string(ring->precision().var_degree_cap);
    os << ")";
  }
  return os.str();
}

tilt_presentation small_tilt(const tower_ptr& h, int j, int m) {
  check_range(*h, j, m);
  const auto& deep = h->layer(j + m);
  const auto& base = h->layer(j);
  std::vector<layer_factor> fs;
  for (std::size_t f = 0; f < deep->num_factors(); ++f) {
    layer_factor lf = deep->factor(f);
    lf.eisen_exp = deep->factor(f).ideal_t_exp;
    lf.ideal_t_exp = base->factor(f).ideal_t_exp;
    fs.push_back(lf);
  }
  precision_budget prec = deep->precision();
  prec.n_digits = 1;
  prec.depth = m;
  tilt_presentation pr;
  pr.source = h;
  pr.layer = j;
  pr.depth = m;
  pr.ring = std::make_shared<layer_ring>(deep->p(), prec, fs, true);
  return pr;
}

small_tilt_elem::small_tilt_elem(tower_ptr h, int j, int m, quot_elem deepest)
    : h_(std::move(h)), j_(j), m_(m), deepest_(std::move(deepest)) {
  check_range(*h_, j_, m_);
  if (!same_ring(deepest_.ring(), h_->layer(j_ + m_))) throw ring_mismatch("deepest component is not at level j+m");
}

small_tilt_elem small_tilt_elem::one(const tower_ptr& h, int j, int m) {
  check_range(*h, j, m);
  return small_tilt_elem(h, j, m, quot_elem::one(h->layer(j + m)));
}

small_tilt_elem small_tilt_elem::from_presentation(const tilt_presentation& pr, const layer_elem& x) {
  if (!same_ring(x.ring(), pr.ring)) throw ring_mismatch("element is not in this presentation");
  const auto& deep = pr.source->layer(pr.layer + pr.depth);
  quot_elem q(deep);
  const u64 p = deep->p();
  for (std::size_t f = 0; f < x.parts().size(); ++f)
    for (const auto& t : x.part(f)) {
      if (t.coeff % p == 0) continue;
      int vi = deep->var_index(f, t.mono);
      if (vi < 0 || t.mono.t >= deep->factor(f).ideal_t_exp) continue;
      std::size_t k = deep->quot_index(f, t.mono.t, vi);
      q.set(k, static_cast<std::uint32_t>((q[k] + t.coeff) % p));
    }
  return small_tilt_elem(pr.source, pr.layer, pr.depth, q);
}

layer_elem small_tilt_elem::to_presentation(const tilt_presentation& pr) const {
  if (pr.source != h_ || pr.layer != j_ || pr.depth != m_) throw ring_mismatch("presentation of another tilt");
  layer_elem out(pr.ring);
  const auto& deep = deepest_.ring();
  for (std::size_t i = 0; i < deepest_.dim(); ++i) {
    if (!deepest_[i]) continue;
    auto [f, mono] = deep->quot_basis(i);
    out = out + layer_elem::mono(pr.ring, f, mono, deepest_[i]);
  }
  return out;
}

quot_elem small_tilt_elem::component(int i) const {
  if (i < 0 || i > m_) throw level_out_of_range("component index outside 0..m");
  return h_->frob_down(j_ + m_, j_ + i, deepest_);
}

void small_tilt_elem::check_same(const small_tilt_elem& o) const {
  if (h_ != o.h_ || j_ != o.j_ || m_ != o.m_) throw ring_mismatch("tilt elements of different tilts");
}

small_tilt_elem small_tilt_elem::operator+(const small_tilt_elem& o) const {
  check_same(o);
  return small_tilt_elem(h_, j_, m_, deepest_ + o.deepest_);
}

small_tilt_elem small_tilt_elem::operator*(const small_tilt_elem& o) const {
  check_same(o);
  return small_tilt_elem(h_, j_, m_, deepest_ * o.deepest_);
}

small_tilt_elem small_tilt_elem::pow(u64 e) const { return small_tilt_elem(h_, j_, m_, deepest_.pow(e)); }

bool small_tilt_elem::operator==(const small_tilt_elem& o) const {
  return h_ == o.h_ && j_ == o.j_ && m_ == o.m_ && deepest_ == o.deepest_;
}

small_tilt_elem p_flat(const tower_ptr& h, int j, int m) {
  check_range(*h, j, m);
  std::vector<int> k;
  for (const auto& f : h->layer(j)->factors()) k.push_back(f.eisen_exp);
  return small_tilt_elem(h, j, m, deepest_monomial(*h, j, m, k));
}

small_tilt_elem f_flat_generator(const tower_ptr& h, int j, int m) {
  check_range(*h, j, m);
  std::vector<int> k;
  for (const auto& f : h->layer(0)->factors()) k.push_back(f.ideal_t_exp);
  return small_tilt_elem(h, j, m, deepest_monomial(*h, j, m, k));
}

tower_ptr tilt_tower(const tower_ptr& h, int m) {
  if (m < 0) throw level_out_of_range("negative tilt depth");
  if (h->depth() - m < 2)
    throw insufficient_depth("tilting at depth " + std::to_string(m) + " leaves " + std::to_string(h->depth() - m) +
                             " transitions; at least 2 are needed");
  std::vector<layer_ring_ptr> layers;
  for (int j = 0; j + m <= h->depth(); ++j) layers.push_back(small_tilt(h, j, m).ring);
  tower_spec spec = h->spec();
  spec.precision.depth = h->depth() - m;
  spec.precision.n_digits = 1;
  return tower_from_layers(spec, std::move(layers), true);
}

small_tilt_elem parse_tilt_elem(const tilt_presentation& pr, const std::string& text) {
  auto comps = parse_expression(text);
  const auto& r = pr.ring;
  if (comps.size() != 1 && comps.size() != r->num_factors())
    throw parse_error("tuple of size " + std::to_string(comps.size()) + " for a tilt with " +
                      std::to_string(r->num_factors()) + " factors");
  const auto& base = pr.source->layer(pr.layer);
  const auto& bottom = pr.source->layer(0);
  layer_elem out(r);
  for (std::size_t f = 0; f < r->num_factors(); ++f) {
    const auto& expr = comps.size() == 1 ? comps[0] : comps[f];
    const auto& fac = r->factor(f);
    std::vector<term> ts;
    for (const auto& pt : expr) {
      monomial mono;
      std::int64_t k = 0;
      for (const auto& a : pt.atoms) {
        if (a.exp < 0) throw parse_error("negative exponent in '" + text + "'");
        bool integral_name = a.name == "T" || a.name == "pflat" || a.name == "fflat";
        if (integral_name && !is_integral(a.exp)) throw parse_error(a.name + " needs an integer exponent");
        if (a.name == "T") {
          k += a.exp.numerator();
        } else if (a.name == "pflat") {
          k += a.exp.numerator() * base->factor(f).eisen_exp;
        } else if (a.name == "fflat") {
          k += a.exp.numerator() * bottom->factor(f).ideal_t_exp;
        } else if (a.name.size() == 2 && a.name[0] == 'x' && a.name[1] >= '1' && a.name[1] < '1' + max_vars) {
          int s = a.name[1] - '1';
          if (s >= fac.num_vars) throw parse_error("variable " + a.name + " is not present in this tilt");
          rational n = a.exp * fac.var_den;
          if (!is_integral(n)) throw parse_error(a.name + "^{" + to_string(a.exp) + "} is not in the tilt lattice");
          mono.x[s] += static_cast<std::int32_t>(n.numerator());
        } else {
          throw parse_error("unknown name '" + a.name + "' in tilt expression '" + text + "'");
        }
      }
      if (k >= fac.eisen_exp) continue;
      mono.t = static_cast<std::int32_t>(k);
      ts.push_back({mono, r->mod().from_signed(pt.coeff)});
    }
    out = out + layer_elem::from_terms(r, f, ts);
  }
  return small_tilt_elem::from_presentation(pr, out);
}

std::string presentation_text(const layer_elem& x) { return to_text(x); }

std::string to_text(const tilt_presentation& pr, const small_tilt_elem& x) {
  return presentation_text(x.to_presentation(pr));
}

nlohmann::ordered_json tilt_to_json(const tilt_presentation& pr) {
  nlohmann::ordered_json j;
  const auto& h = *pr.source;
  j["layer"] = h.level(pr.layer);
  j["depth"] = pr.depth;
  auto ks = pr.quotient_exponents();
  if (ks.size() == 1)
    j["quotient_exponent"] = ks.front();
  else
    j["quotient_exponent"] = ks;
  j["presentation"] = pr.describe();
  std::vector<int> ideal;
  for (const auto& f : pr.ring->factors()) ideal.push_back(f.ideal_t_exp);
  if (ideal.size() == 1)
    j["ideal_exponent"] = ideal.front();
  else
    j["ideal_exponent"] = ideal;
  std::vector<int> ones(pr.ring->num_factors(), 1);
  small_tilt_elem gen(pr.source, pr.layer, pr.depth, deepest_monomial(h, pr.layer, pr.depth, ones));
  auto map = nlohmann::ordered_json::array();
  for (int i = 0; i <= pr.depth; ++i) {
    nlohmann::ordered_json c;
    c["level"] = h.level(pr.layer + i);
    c["image"] = to_text(gen.component(i));
    map.push_back(c);
  }
  j["generator_map"] = map;
  j["p_flat"] = to_text(pr, p_flat(pr.source, pr.layer, pr.depth));
  j["f_flat"] = to_text(pr, f_flat_generator(pr.source, pr.layer, pr.depth));
  return j;
}

}  // namespace tiltlab
