#include "tiltlab/ramified.hpp"

#include <cmath>
#include <numeric>

#include "tiltlab/element_text.hpp"
#include "tiltlab/errors.hpp"
#include "tiltlab/sampling.hpp"
#include "tiltlab/tilt.hpp"

namespace tiltlab {

namespace {

std::int64_t ipow(std::int64_t b, int e) {
  return static_cast<std::int64_t>(checked_power(static_cast<u64>(b), e));
}

layer_ring_ptr cover_layer_ring(const kummer_cover_spec& s, int n) {
  return layer_make(s.prime, s.precision, static_cast<int>(s.m * ipow(s.prime, n)), 0, rational(1));
}

layer_elem pi_power(const layer_ring_ptr& r, std::int64_t k, u64 c = 1) {
  monomial mono;
  mono.t = static_cast<std::int32_t>(k);
  return layer_elem::mono(r, 0, mono, c);
}

// pi_n^k -> pi_{n+1}^{pk}
layer_elem lift_to_next(const layer_elem& a, const layer_ring_ptr& next, u64 p) {
  std::vector<term> ts;
  for (const auto& t : a.part(0)) {
    term u = t;
    u.mono.t = static_cast<std::int32_t>(t.mono.t * static_cast<std::int64_t>(p));
    ts.push_back(u);
  }
  return layer_elem::from_terms(next, 0, ts);
}

// Largest k below `limit` whose generator is missing from the span, plus one.
template <class Member>
std::int64_t first_full_run(std::int64_t limit, Member in_span) {
  for (std::int64_t k = limit - 1; k >= 0; --k)
    if (!in_span(k)) return k + 1;
  return 0;
}

// Exponents am + bp (a < a_max, b < b_max) below `bound`.
std::vector<char> product_exponents(std::int64_t m, std::int64_t a_max, std::int64_t p, std::int64_t b_max,
                                    std::int64_t bound) {
  std::vector<char> seen(static_cast<std::size_t>(bound), 0);
  for (std::int64_t a = 0; a < a_max && a * m < bound; ++a)
    for (std::int64_t b = 0; b < b_max && a * m + b * p < bound; ++b) seen[a * m + b * p] = 1;
  return seen;
}

// Image of R_{n+1} (x) S_n in S_{n+1} = Z/p^N[pi]/(pi^e - p), by reduction
// of the product vectors; returns the annihilator exponent in units of pi.
std::int64_t elimination_exponent(const kummer_cover_spec& s, int n) {
  const std::int64_t p = static_cast<std::int64_t>(s.prime);
  const std::int64_t e = s.m * ipow(p, n + 1);
  const modulus md(s.prime, s.precision.n_digits);
  // R_{n+1} basis pi^{am}, a < p^{n+1}; S_n basis pi^{bp}, b < m p^n
  std::vector<char> gens = product_exponents(s.m, ipow(p, n + 1), p, s.m * ipow(p, n), 2 * e);
  howell_basis img(md);
  for (std::int64_t k = 0; k < 2 * e; ++k) {
    if (!gens[k]) continue;
    u64 c = k >= e ? s.prime : 1;
    img.insert({{static_cast<std::uint32_t>(k % e), md.mul(c, 1)}});
  }
  const std::int64_t limit = e * s.precision.n_digits;
  return first_full_run(limit, [&](std::int64_t k) {
    u64 c = md.p_power(static_cast<int>(k / e));
    if (c == 0) return true;
    return img.contains({{static_cast<std::uint32_t>(k % e), c}});
  });
}

// The same cokernel for F_p[T^m] (x) F_p[T^p] -> F_p[T]/(T^{2e}).
std::int64_t flat_exponent(const kummer_cover_spec& s, int n) {
  const std::int64_t p = static_cast<std::int64_t>(s.prime);
  const std::int64_t e = s.m * ipow(p, n + 1);
  const modulus fp(s.prime, 1);
  std::vector<char> gens = product_exponents(s.m, 2 * e, p, 2 * e, 2 * e);
  howell_basis img(fp);
  for (std::int64_t k = 0; k < 2 * e; ++k)
    if (gens[k]) img.insert({{static_cast<std::uint32_t>(k), 1}});
  return first_full_run(2 * e, [&](std::int64_t k) { return img.contains({{static_cast<std::uint32_t>(k), 1}}); });
}

rational delta_closed_form(const kummer_cover_spec& s, int n) {
  const std::int64_t p = static_cast<std::int64_t>(s.prime);
  return rational(semigroup_conductor(s.m, p), s.m * ipow(p, n + 1));
}

struct decomposition {
  layer_elem a, b;
  bool ok = false;
};

decomposition decompose(const layer_elem& x, const layer_ring_ptr& lower, const rational& eps, u64 p) {
  decomposition d;
  const layer_ring_ptr& upper = x.ring();
  std::vector<term> low;
  for (const auto& t : x.part(0))
    if (t.mono.t % static_cast<std::int64_t>(p) == 0) {
      term u = t;
      u.mono.t /= static_cast<std::int32_t>(p);
      low.push_back(u);
    }
  d.a = layer_elem::from_terms(lower, 0, low);
  layer_elem rest = x - lift_to_next(d.a, upper, p);
  rat_valuation v = valuation(rest);
  if (!v.above_precision && v.value < eps) return d;
  const int k = static_cast<int>((eps * upper->factor(0).eisen_exp).numerator());
  d.b = divide_by_t_power(rest, {k});
  d.ok = true;
  return d;
}

}  // namespace

void kummer_cover_spec::validate() const {
  if (!is_prime(prime)) throw non_prime(std::to_string(prime) + " is not prime");
  if (m < 2) throw spec_error("cover exponent m must be at least 2");
  if (std::gcd(static_cast<u64>(m), prime) != 1) throw spec_error("cover exponent must be prime to p");
  if (levels < 1) throw spec_error("levels must be at least 1");
  if (precision.n_digits < 1) throw spec_error("precision must be at least one digit");
}

std::vector<cover_layer> build_cover_layers(const kummer_cover_spec& spec, int samples, std::uint64_t seed) {
  spec.validate();
  std::vector<cover_layer> out;
  const std::int64_t p = static_cast<std::int64_t>(spec.prime);
  for (int n = 0; n <= spec.levels; ++n) {
    cover_layer L;
    L.level = n;
    L.ring = cover_layer_ring(spec, n);
    const std::int64_t e = L.ring->factor(0).eisen_exp;
    layer_elem pe = layer_elem::constant(L.ring, p);
    L.generators_ok = pi_power(L.ring, spec.m).pow(static_cast<u64>(ipow(p, n))) == pe &&
                      pi_power(L.ring, ipow(p, n)).pow(static_cast<u64>(spec.m)) == pe;
    if (e > closure_rank_limit) {
      L.closure.property = "P_ROOT_CLOSED";
      L.closure.v = closure_verdict::undecided;
      L.closure.detail = "not checked: rank " + std::to_string(e) + " above " + std::to_string(closure_rank_limit);
    } else {
      ring_pair lp = localization_of_layer("S_" + std::to_string(n), L.ring, pe);
      const double bits =
          std::log2(static_cast<double>(spec.prime)) * static_cast<double>(e) * spec.precision.n_digits;
      closure_mode mode = bits <= 20 ? closure_mode::exact : closure_mode::sampled;
      L.closure = check_root_closed(lp, spec.prime, mode, samples, seed + static_cast<std::uint64_t>(n));
    }
    out.push_back(std::move(L));
  }
  return out;
}

std::int64_t semigroup_conductor(std::int64_t a, std::int64_t b) {
  if (a < 1 || b < 1 || std::gcd(a, b) != 1) throw spec_error("semigroup generators must be coprime positives");
  const std::int64_t run = std::min(a, b);
  std::vector<char> reach;
  std::int64_t streak = 0;
  for (std::int64_t k = 0;; ++k) {
    bool r = k == 0 || (k >= a && reach[k - a]) || (k >= b && reach[k - b]);
    reach.push_back(r);
    streak = r ? streak + 1 : 0;
    if (streak == run) return k - run + 1;
  }
}

delta_table compute_delta_table(const kummer_cover_spec& spec) {
  spec.validate();
  delta_table t;
  t.p = spec.prime;
  t.m = spec.m;
  t.n_digits = spec.precision.n_digits;
  const std::int64_t p = static_cast<std::int64_t>(spec.prime);
  const std::int64_t cond = semigroup_conductor(spec.m, p);
  if (cond >= spec.m * p * spec.precision.n_digits)
    throw spec_error("precision too small to see the cokernel");
  for (int n = 0; n < spec.levels; ++n) {
    delta_row r;
    r.n = n;
    const std::int64_t unit = spec.m * ipow(p, n + 1);
    r.annihilator_exponent = cond;
    r.delta = rational(cond, unit);
    r.delta_elim = rational(elimination_exponent(spec, n), unit);
    r.delta_flat = rational(flat_exponent(spec, n), unit);
    if (r.delta_elim != r.delta || r.delta_flat != r.delta)
      throw method_disagreement("delta_" + std::to_string(n) + ": semigroup " + to_string(r.delta) +
                                ", elimination " + to_string(r.delta_elim) + ", flat " + to_string(r.delta_flat));
    r.scaled = r.delta * ipow(p, n);
    r.refined_lattice = is_integral(r.delta * ipow(p, n + 1) * static_cast<std::int64_t>(spec.m));
    r.integral_scaled = is_integral(r.scaled) && r.scaled >= rational(1);
    t.rows.push_back(r);
  }
  t.c = rational(0);
  for (const auto& r : t.rows) t.c = std::max(t.c, r.scaled);
  for (auto& r : t.rows) r.bound_ok = r.delta <= t.c / ipow(p, r.n);
  t.colimit_bound = t.c * p / (p - 1);
  for (int n = 0; n < spec.levels; ++n)
    for (int k = 1; k <= std::max(1, spec.precision.depth); ++k) {
      tail_row tr;
      tr.n = n;
      tr.k = k;
      const std::int64_t pk = ipow(p, k);
      tr.conductor_bound = rational(semigroup_conductor(spec.m, pk), spec.m * ipow(p, n + k));
      tr.delta_sum = rational(0);
      for (int i = 0; i < k; ++i) tr.delta_sum += delta_closed_form(spec, n + i);
      tr.scaled = tr.conductor_bound * ipow(p, n);
      tr.ok = tr.conductor_bound == tr.delta_sum && tr.scaled <= t.colimit_bound;
      t.tails.push_back(tr);
    }
  return t;
}

epsilon_witness find_epsilon(const kummer_cover_spec& spec, const delta_table& table, std::uint64_t seed) {
  spec.validate();
  epsilon_witness w;
  w.c = table.c;
  const std::int64_t p = static_cast<std::int64_t>(spec.prime);
  bool found = false;
  for (const auto& r : table.rows) {
    rational eps = (rational(1) - r.delta * (p * p)) / p;
    if (eps <= rational(0) || eps >= rational(1)) continue;
    if (!is_integral(eps * ipow(p, r.n) * static_cast<std::int64_t>(spec.m))) continue;
    w.epsilon = eps;
    w.start_level = r.n;
    found = true;
    break;
  }
  if (!found)
    throw no_witness_in_range("no level below " + std::to_string(spec.levels) + " has delta_N p^2 < 1");

  rng_t rng = make_rng(seed, 0xE5);
  for (int n = w.start_level; n < spec.levels; ++n) {
    layer_ring_ptr lo = cover_layer_ring(spec, n), hi = cover_layer_ring(spec, n + 1);
    const std::int64_t e = hi->factor(0).eisen_exp;
    auto add = [&](std::string kind, const layer_elem& s) {
      decomposition d = decompose(s.pow(spec.prime), lo, w.epsilon, spec.prime);
      if (!d.ok) throw error("certificate: no decomposition for " + to_text(s));
      w.certificate.push_back({n, std::move(kind), s, d.a, d.b});
    };
    for (std::int64_t k = 0; k < e; ++k) add("generator", pi_power(hi, k));
    for (int i = 0; i < 8; ++i) add("random", random_layer_elem(hi, rng, 6));
    // p itself sits in p^eps S_{n+1}
    const std::int64_t ke = (w.epsilon * e).numerator();
    w.certificate.push_back({n, "p_witness", pi_power(hi, e / p), layer_elem(lo), pi_power(hi, e - ke)});
  }
  w.verified = verify_certificate(spec, w).empty();
  return w;
}

std::string verify_certificate(const kummer_cover_spec& spec, const epsilon_witness& w) {
  const std::int64_t p = static_cast<std::int64_t>(spec.prime);
  const int N = w.start_level;
  rational delta = delta_closed_form(spec, N);
  if (w.epsilon != (rational(1) - delta * (p * p)) / p) return "epsilon does not match delta_N";
  if (w.epsilon <= rational(0) || w.epsilon >= rational(1)) return "epsilon outside (0,1)";
  if (!is_integral(w.epsilon * ipow(p, N) * static_cast<std::int64_t>(spec.m))) return "p^eps not in the level-N lattice";
  std::vector<int> seen(static_cast<std::size_t>(spec.levels + 1), 0);
  for (const auto& c : w.certificate) {
    if (c.level < N || c.level >= spec.levels) return "entry at unrealized level " + std::to_string(c.level);
    layer_ring_ptr lo = cover_layer_ring(spec, c.level), hi = cover_layer_ring(spec, c.level + 1);
    if (!same_ring(c.s.ring(), hi) || !same_ring(c.b.ring(), hi) || !same_ring(c.a.ring(), lo))
      return "entry with elements in the wrong layer";
    const std::int64_t ke = (w.epsilon * hi->factor(0).eisen_exp).numerator();
    layer_elem lhs = c.s.pow(spec.prime);
    layer_elem rhs = lift_to_next(c.a, hi, spec.prime) + pi_power(hi, ke) * c.b;
    if (lhs != rhs) return "decomposition fails for s = " + to_text(c.s) + " at level " + std::to_string(c.level);
    if (c.kind == "generator") ++seen[c.level];
  }
  for (int n = N; n < spec.levels; ++n)
    if (seen[n] != spec.m * ipow(p, n + 1)) return "missing generator entries at level " + std::to_string(n);
  return {};
}

int adjusted_start(const epsilon_witness& w) {
  int n = w.start_level;
  while (w.epsilon * (n + 1) < w.c) ++n;
  return n;
}

namespace {

perfectoid_assembly assemble(const kummer_cover_spec& spec, const epsilon_witness& w, const rational& ideal_exp,
                             const tower_defects& defects, int samples, std::uint64_t seed) {
  perfectoid_assembly a;
  a.n_prime = adjusted_start(w);
  a.epsilon = w.epsilon;
  a.ideal_exp = ideal_exp;
  const int depth = std::max(2, spec.precision.depth);
  a.tower = build_tower(kummer_spec(spec.prime, spec.m, ideal_exp, a.n_prime, spec.precision.n_digits, depth),
                        defects);
  a.report = check_axioms(*a.tower, samples, seed);
  return a;
}

}  // namespace

perfectoid_assembly assemble_checked(const kummer_cover_spec& spec, const epsilon_witness& w, int samples,
                                     std::uint64_t seed) {
  spec.validate();
  return assemble(spec, w, w.epsilon, {}, samples, seed);
}

perfectoid_assembly assemble_perfectoid(const kummer_cover_spec& spec, const epsilon_witness& w, int samples,
                                        std::uint64_t seed) {
  perfectoid_assembly a = assemble_checked(spec, w, samples, seed);
  if (!a.report.passed())
    for (const auto& v : a.report.verdicts)
      if (is_failure(v.result.v))
        throw axiom_failure("axiom (" + v.axiom + ") fails from N' = " + std::to_string(a.n_prime) + ": " +
                            v.result.detail + (v.result.witness.empty() ? "" : " [" + v.result.witness + "]"));
  return a;
}

perfectoid_assembly assemble_with_forced_epsilon(const kummer_cover_spec& spec, const epsilon_witness& w,
                                                 const rational& forced, int samples, std::uint64_t seed) {
  spec.validate();
  tower_defects d;
  d.pillar_valuation = w.epsilon / static_cast<std::int64_t>(spec.prime);
  return assemble(spec, w, forced, d, samples, seed);
}

bool normality_report::passed() const {
  for (const auto& r : rows) {
    if (r.monogenic.v != closure_verdict::pass_exact) return false;
    if (r.root_closed.v != closure_verdict::pass_exact && r.root_closed.v != closure_verdict::pass_sampled)
      return false;
  }
  return !rows.empty();
}

normality_report smalltilt_normality_report(const tower_ptr& h, int samples, std::uint64_t seed) {
  normality_report rep;
  const int depth = h->depth();
  for (int j = 0; j < depth; ++j) {
    normality_row row;
    row.level = h->level(j);
    row.depth = depth - j;
    tilt_presentation pr = small_tilt(h, j, row.depth);
    row.presentation = pr.describe();
    auto A = finite_algebra::from_layer(pr.ring);
    row.monogenic = monogenic_presentation_check(*A);
    layer_elem f(pr.ring);
    for (std::size_t k = 0; k < pr.ring->num_factors(); ++k) {
      monomial mono;
      mono.t = pr.ring->factor(k).ideal_t_exp;
      f = f + layer_elem::mono(pr.ring, k, mono);
    }
    ring_pair lp = localization_of_layer("tilt of level " + std::to_string(row.level), pr.ring, f);
    row.root_closed = check_root_closed(lp, h->p(), closure_mode::sampled, samples, seed + static_cast<std::uint64_t>(j));
    rep.rows.push_back(std::move(row));
  }
  return rep;
}

}  // namespace tiltlab
