#include "tiltlab/monoidal.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "tiltlab/element_text.hpp"
#include "tiltlab/errors.hpp"
#include "tiltlab/torsion.hpp"

namespace tiltlab {

namespace {

layer_elem power_p_times(layer_elem x, u64 p, int times) {
  for (int i = 0; i < times; ++i) x = x.pow(p);
  return x;
}

rational precision_of(const layer_elem& diff, int n_digits) {
  rat_valuation v = valuation(diff);
  rational cap(n_digits);
  if (v.above_precision || v.value > cap) return cap;
  return v.value;
}

sharp_result sharp_impl(const small_tilt_elem& x, rng_t* rng) {
  const int m = x.depth();
  if (m < 1) throw zero_depth("sharp needs a tilt element of depth at least 1");
  const auto& h = *x.tower();
  const int j = x.layer();
  const u64 p = h.p();
  auto lift = [&](int i) {
    layer_elem l = canonical_lift(x.component(i));
    if (rng) l = l + h.ideal_generator(j + i) * random_layer_elem(h.layer(j + i), *rng, 4);
    return l;
  };
  sharp_result r;
  r.layer = j;
  r.target = j + m;
  r.value = power_p_times(lift(m), p, m);
  layer_elem prev = h.transport(j + m - 1, j + m, power_p_times(lift(m - 1), p, m - 1));
  r.effective_precision = precision_of(r.value - prev, h.layer(j + m)->n_digits());
  return r;
}

// index in Quot(j+m) of each basis element of Quot(j), via the transition maps
std::vector<long> transport_indices(const tower_handle& h, int j, int m) {
  const auto& base = h.layer(j);
  std::vector<long> idx(base->quot_dim(), -1);
  for (std::size_t i = 0; i < base->quot_dim(); ++i) {
    quot_elem q = h.quot_transport(j, j + m, quot_elem::basis(base, i));
    for (std::size_t k = 0; k < q.dim(); ++k)
      if (q[k]) idx[i] = static_cast<long>(k);
  }
  return idx;
}

// Preimage in Quot(j) of y in Quot(j+m) under the (monomial) transport, if any.
bool transport_preimage(const layer_ring_ptr& base, const std::vector<long>& idx, const quot_elem& y, quot_elem& out) {
  std::map<long, std::size_t> inv;
  for (std::size_t i = 0; i < idx.size(); ++i)
    if (idx[i] >= 0) inv[idx[i]] = i;
  out = quot_elem(base);
  for (std::size_t k = 0; k < y.dim(); ++k) {
    if (!y[k]) continue;
    auto it = inv.find(static_cast<long>(k));
    if (it == inv.end()) return false;
    out.set(it->second, y[k]);
  }
  return true;
}

std::string tilt_text(const small_tilt_elem& x) {
  return to_text(small_tilt(x.tower(), x.layer(), x.depth()), x);
}

std::string level_tag(const tower_handle& h, int j, int m) {
  return "level " + std::to_string(h.level(j)) + ", depth " + std::to_string(m);
}

}  // namespace

sharp_result sharp(const small_tilt_elem& x) { return sharp_impl(x, nullptr); }

sharp_result sharp_randomized(const small_tilt_elem& x, rng_t& rng) { return sharp_impl(x, &rng); }

small_tilt_elem random_tilt_elem(const tower_ptr& h, int j, int m, rng_t& rng) {
  const auto& deep = h->layer(j + m);
  std::size_t terms = deep->quot_dim() <= 200 ? 0 : 12;
  return small_tilt_elem(h, j, m, random_quot_elem(deep, rng, terms));
}

check_result check_sharp_phi(const tower_ptr& h, int j, int m, int samples, std::uint64_t seed) {
  check_result r;
  rng_t rng = make_rng(seed, 0x5A00 + static_cast<std::uint64_t>(j) * 64 + static_cast<std::uint64_t>(m));
  std::vector<small_tilt_elem> xs{p_flat(h, j, m), p_flat(h, j, m) + small_tilt_elem::one(h, j, m),
                                  f_flat_generator(h, j, m)};
  for (int s = 0; s < samples; ++s) xs.push_back(random_tilt_elem(h, j, m, rng));
  for (const auto& x : xs) {
    quot_elem lhs = reduce_mod_ideal(sharp(x).value);
    quot_elem rhs = h->quot_transport(j, j + m, x.component(0));
    ++r.samples;
    if (lhs != rhs) {
      r.v = verdict::fail;
      r.witness = tilt_text(x);
      r.detail = level_tag(*h, j, m) + ": reduction of sharp(x) is " + to_text(lhs) + ", expected " + to_text(rhs);
      return r;
    }
  }
  return r;
}

check_result check_sharp1_iso(const tower_ptr& h, int j, int m, int samples, std::uint64_t seed) {
  check_result r;
  tilt_presentation pr = small_tilt(h, j, m);
  const auto& base = h->layer(j);
  const auto& pres = pr.ring;
  std::vector<long> idx = transport_indices(*h, j, m);

  // domain basis: T^k x^a with k < c_j and variable degree within the level-j cap
  std::vector<std::pair<std::size_t, monomial>> domain;
  for (std::size_t i = 0; i < pres->module_dim(); ++i) {
    auto [f, mono] = pres->module_basis(i);
    if (mono.t >= pres->factor(f).ideal_t_exp) continue;
    if (mono.var_degree() > base->var_cap(f)) continue;
    domain.emplace_back(f, mono);
  }
  auto phi = [&](const small_tilt_elem& x, quot_elem& out) {
    return transport_preimage(base, idx, reduce_mod_ideal(sharp(x).value), out);
  };
  auto fail = [&](const std::string& w, const std::string& d) {
    r.v = verdict::fail;
    r.witness = w;
    r.detail = level_tag(*h, j, m) + ": " + d;
    return r;
  };

  if (domain.size() != base->quot_dim())
    return fail("", "domain dimension " + std::to_string(domain.size()) + " differs from quotient dimension " +
                        std::to_string(base->quot_dim()));
  howell_basis images(modulus(h->p(), 1));
  for (auto& [f, mono] : domain) {
    small_tilt_elem b = small_tilt_elem::from_presentation(pr, layer_elem::mono(pres, f, mono));
    quot_elem y;
    if (!phi(b, y)) return fail(tilt_text(b), "image of sharp is not in the image of R_j/I_0");
    sparse_vec v;
    for (std::size_t k = 0; k < y.dim(); ++k)
      if (y[k]) v.emplace_back(static_cast<std::uint32_t>(k), y[k]);
    images.insert(v);
  }
  if (images.unit_pivots() != base->quot_dim()) return fail("", "basis images are linearly dependent");

  rng_t rng = make_rng(seed, 0x5B00 + static_cast<std::uint64_t>(j) * 64 + static_cast<std::uint64_t>(m));
  auto random_domain = [&] {
    layer_elem x(pres);
    std::uniform_int_distribution<std::size_t> pick(0, domain.size() - 1);
    std::uniform_int_distribution<u64> coeff(1, h->p() - 1);
    std::size_t terms = std::min<std::size_t>(domain.size(), 8);
    for (std::size_t t = 0; t < terms; ++t) {
      auto& [f, mono] = domain[pick(rng)];
      x = x + layer_elem::mono(pres, f, mono, coeff(rng));
    }
    return small_tilt_elem::from_presentation(pr, x);
  };
  for (int s = 0; s < samples; ++s) {
    small_tilt_elem a = random_domain(), b = random_domain();
    quot_elem fa, fb, fab, fsum;
    ++r.samples;
    if (!phi(a, fa) || !phi(b, fb) || !phi(a * b, fab) || !phi(a + b, fsum))
      return fail(tilt_text(a), "image of sharp is not in the image of R_j/I_0");
    if (fab != fa * fb) return fail(tilt_text(a) + " ; " + tilt_text(b), "induced map is not multiplicative");
    if (fsum != fa + fb) return fail(tilt_text(a) + " ; " + tilt_text(b), "induced map is not additive");
  }
  return r;
}

check_result check_sharpf(const tower_ptr& h, int j, int m) {
  check_result r;
  small_tilt_elem ff = f_flat_generator(h, j, m);
  layer_elem value = sharp(ff).value;
  const auto& deep = h->layer(j + m);
  const auto& bottom = h->layer(0);
  const std::int64_t scale = static_cast<std::int64_t>(checked_power(h->p(), m));
  std::vector<int> k;
  for (std::size_t f = 0; f < deep->num_factors(); ++f) {
    // f_j = t^{c_0} in layer j has valuation eps / p^j
    int kf = static_cast<int>(bottom->factor(f).ideal_t_exp * scale);
    k.push_back(kf);
    rational expected(kf, deep->factor(f).eisen_exp);
    rat_valuation got = valuation_in_factor(value, f);
    if (got.above_precision || got.value != expected) {
      r.v = verdict::fail;
      r.witness = tilt_text(ff);
      r.detail = level_tag(*h, j, m) + ": valuation " + got.text() + " in factor " + std::to_string(f) +
                 ", expected " + to_string(expected);
      return r;
    }
  }
  layer_elem unit = divide_by_t_power(value, k);
  if (!is_unit(unit)) {
    r.v = verdict::fail;
    r.witness = tilt_text(ff);
    r.detail = level_tag(*h, j, m) + ": sharp(f^flat) / f_j is not a unit";
    return r;
  }
  r.detail = "unit " + to_text(unit);
  return r;
}

check_result check_multiplicativity(const tower_ptr& h, int j, int m, int pairs, std::uint64_t seed) {
  check_result r;
  rng_t rng = make_rng(seed, 0x5C00 + static_cast<std::uint64_t>(j) * 64 + static_cast<std::uint64_t>(m));
  for (int s = 0; s < pairs; ++s) {
    small_tilt_elem a = random_tilt_elem(h, j, m, rng), b = random_tilt_elem(h, j, m, rng);
    sharp_result sa = sharp(a), sb = sharp(b), sab = sharp(a * b);
    rational need = std::min({sa.effective_precision, sb.effective_precision, sab.effective_precision});
    rat_valuation v = valuation(sab.value - sa.value * sb.value);
    ++r.samples;
    if (!v.above_precision && v.value < need) {
      r.v = verdict::fail;
      r.witness = tilt_text(a) + " ; " + tilt_text(b);
      r.detail = level_tag(*h, j, m) + ": sharp(xy) - sharp(x)sharp(y) has valuation " + v.text() +
                 " below the effective precision " + to_string(need);
      return r;
    }
  }
  return r;
}

check_result check_lift_independence(const tower_ptr& h, int j, int m, int count, std::uint64_t seed) {
  check_result r;
  rng_t rng = make_rng(seed, 0x5D00 + static_cast<std::uint64_t>(j) * 64 + static_cast<std::uint64_t>(m));
  for (int s = 0; s < count; ++s) {
    small_tilt_elem a = random_tilt_elem(h, j, m, rng);
    sharp_result c = sharp(a), d = sharp_randomized(a, rng);
    rational need = std::min(c.effective_precision, d.effective_precision);
    rat_valuation v = valuation(c.value - d.value);
    ++r.samples;
    if (!v.above_precision && v.value < need) {
      r.v = verdict::fail;
      r.witness = tilt_text(a);
      r.detail = level_tag(*h, j, m) + ": randomized lifts moved sharp(x) at valuation " + v.text();
      return r;
    }
  }
  return r;
}

// ---------------------------------------------------------------- idempotents

std::vector<layer_elem> fp_idempotents(const layer_ring_ptr& r) {
  if (r->n_digits() != 1) throw error("fp_idempotents needs an F_p-algebra");
  const u64 p = r->p();
  const std::size_t dim = r->module_dim();
  constexpr double limit = 1 << 20;
  std::vector<layer_elem> out;
  auto consider = [&](const std::vector<u64>& coords) {
    layer_elem e = layer_elem::from_coordinates(r, coords);
    if (e * e == e) out.push_back(e);
  };
  auto enumerate = [&](const std::vector<std::vector<u64>>& gens) {
    double count = std::pow(static_cast<double>(p), static_cast<double>(gens.size()));
    if (count > limit)
      throw dimension_too_large("idempotent search space has " + std::to_string(p) + "^" + std::to_string(gens.size()) +
                                " elements");
    std::vector<u64> digits(gens.size(), 0);
    for (;;) {
      std::vector<u64> coords(dim, 0);
      for (std::size_t g = 0; g < gens.size(); ++g)
        if (digits[g])
          for (std::size_t i = 0; i < dim; ++i) coords[i] = (coords[i] + digits[g] * gens[g][i]) % p;
      consider(coords);
      std::size_t g = 0;
      while (g < digits.size() && ++digits[g] == p) digits[g++] = 0;
      if (g == digits.size()) break;
    }
  };
  if (std::pow(static_cast<double>(p), static_cast<double>(dim)) <= limit) {
    std::vector<std::vector<u64>> unit_vectors;
    for (std::size_t i = 0; i < dim; ++i) {
      std::vector<u64> v(dim, 0);
      v[i] = 1;
      unit_vectors.push_back(v);
    }
    enumerate(unit_vectors);
    return out;
  }
  // every idempotent is Frobenius-fixed; search ker(Frob - id) exhaustively
  linear_map fm;
  fm.rows = fm.cols = static_cast<std::uint32_t>(dim);
  fm.columns.resize(dim);
  for (std::size_t i = 0; i < dim; ++i) {
    auto [f, mono] = r->module_basis(i);
    layer_elem b = layer_elem::mono(r, f, mono);
    sparse_vec col = sv_from_dense((b.pow(p) - b).coordinates());
    fm.columns[i] = col;
  }
  std::vector<std::vector<u64>> gens;
  for (auto& v : kernel(modulus(p, 1), fm)) gens.push_back(sv_to_dense(v, dim));
  enumerate(gens);
  return out;
}

std::vector<layer_elem> layer_idempotents(const layer_ring_ptr& r) {
  precision_budget prec = r->precision();
  prec.n_digits = 1;
  auto residue = std::make_shared<layer_ring>(r->p(), prec, r->factors(), true);
  std::vector<layer_elem> out;
  layer_elem two = layer_elem::constant(r, 2), three = layer_elem::constant(r, 3);
  for (const auto& e0 : fp_idempotents(residue)) {
    layer_elem e(r);
    for (std::size_t f = 0; f < e0.parts().size(); ++f) {
      std::vector<term> ts = e0.part(f);
      e = e + layer_elem::from_terms(r, f, ts);
    }
    for (int it = 0; it < 128; ++it) {
      layer_elem e2 = e * e;
      if (e2 == e) break;
      e = three * e2 - two * e2 * e;
    }
    if (e * e != e) throw error("idempotent lifting did not converge");
    out.push_back(e);
  }
  return out;
}

idempotent_report idempotent_transfer(const tower_ptr& h, int j, int m) {
  idempotent_report rep;
  rep.layer = h->level(j);
  rep.depth = m;
  tilt_presentation pr = small_tilt(h, j, m);
  const auto& deep = h->layer(j + m);
  std::vector<layer_elem> tilt_side = fp_idempotents(pr.ring);
  std::vector<layer_elem> layer_side = layer_idempotents(deep);
  for (auto& e : tilt_side) rep.tilt_side.push_back(presentation_text(e));
  for (auto& e : layer_side) rep.layer_side.push_back(to_text(e));
  auto& r = rep.result;
  r.samples = static_cast<int>(tilt_side.size());
  std::vector<int> hit(layer_side.size(), 0);
  for (auto& e : tilt_side) {
    small_tilt_elem x = small_tilt_elem::from_presentation(pr, e);
    layer_elem s = sharp(x).value;
    auto it = std::find(layer_side.begin(), layer_side.end(), s);
    if (it == layer_side.end()) {
      r.v = verdict::fail;
      r.witness = presentation_text(e);
      r.detail = "sharp of this idempotent is " + to_text(s) + ", not an idempotent of the layer";
      return rep;
    }
    std::size_t k = static_cast<std::size_t>(it - layer_side.begin());
    ++hit[k];
    // inverse direction: e -> (e mod I_0, e mod I_0, ...)
    small_tilt_elem back(h, j, m, reduce_mod_ideal(s));
    if (back != x) {
      r.v = verdict::fail;
      r.witness = to_text(s);
      r.detail = "reducing the layer idempotent does not return the tilt idempotent";
      return rep;
    }
  }
  for (std::size_t k = 0; k < hit.size(); ++k)
    if (hit[k] != 1) {
      r.v = verdict::fail;
      r.witness = rep.layer_side[k];
      r.detail = hit[k] ? "layer idempotent hit more than once" : "layer idempotent not reached by sharp";
      return rep;
    }
  r.detail = std::to_string(tilt_side.size()) + " idempotents matched";
  return rep;
}

// ---------------------------------------------------------------- torsion

namespace {

std::size_t torsion_order_log(const layer_ring_ptr& r, const torsion_result& t) {
  howell_basis hb(r->mod());
  for (auto& x : t.basis) hb.insert(sv_from_dense(x.coordinates()));
  std::size_t total = 0;
  for (auto& [lead, row] : hb.rows()) total += static_cast<std::size_t>(r->n_digits() - r->mod().val(row.front().second));
  return total;
}

}  // namespace

torsion_transfer_report torsion_transfer_check(const tower_ptr& h, int m) {
  torsion_transfer_report rep;
  auto& r = rep.result;
  bool all_zero = true;
  for (int j = 0; j + m <= h->depth(); ++j) {
    tilt_presentation pr = small_tilt(h, j, m);
    layer_elem fflat(pr.ring);
    for (std::size_t f = 0; f < pr.ring->num_factors(); ++f) {
      monomial mono;
      mono.t = pr.ring->factor(f).ideal_t_exp;
      fflat = fflat + layer_elem::mono(pr.ring, f, mono);
    }
    torsion_result tt = torsion_submodule(pr.ring, fflat);
    torsion_result lt = torsion_submodule(h->layer(j), h->ideal_generator(j));
    torsion_transfer_row row{h->level(j), torsion_order_log(pr.ring, tt), torsion_order_log(h->layer(j), lt)};
    rep.rows.push_back(row);
    if (row.tilt_order_log || row.layer_order_log) all_zero = false;
    if (row.tilt_order_log != row.layer_order_log && r.v != verdict::fail) {
      r.v = verdict::fail;
      r.witness = !lt.empty() ? "level " + std::to_string(row.level) + ": " + to_text(lt.basis.front())
                              : "level " + std::to_string(row.level) + ": " + presentation_text(tt.basis.front());
      r.detail = "torsion orders differ: p^" + std::to_string(row.tilt_order_log) + " on the tilt, p^" +
                 std::to_string(row.layer_order_log) + " on the layer";
    }
  }
  if (r.v != verdict::fail) {
    r.v = all_zero ? verdict::trivial_case : verdict::pass;
    r.detail = all_zero ? "(0) = (0) at every level" : "torsion orders agree at every level";
  }
  return rep;
}

}  // namespace tiltlab
