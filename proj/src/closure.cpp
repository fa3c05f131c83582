#include "tiltlab/closure.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "tiltlab/element_text.hpp"
#include "tiltlab/errors.hpp"
#include "tiltlab/sampling.hpp"
#include "tiltlab/tilt.hpp"
#include "tiltlab/torsion.hpp"

namespace tiltlab {

namespace {

coords table_mul(const modulus& md, const std::vector<std::vector<std::vector<std::int64_t>>>& table, const coords& a,
                 const coords& b) {
  const std::size_t d = table.size();
  coords out(d, 0);
  for (std::size_t i = 0; i < d; ++i) {
    if (!a[i]) continue;
    for (std::size_t j = 0; j < d; ++j) {
      if (!b[j]) continue;
      u64 ab = md.mul(a[i], b[j]);
      const auto& row = table[i][j];
      for (std::size_t k = 0; k < d; ++k)
        if (row[k]) out[k] = md.add(out[k], md.mul(ab, md.from_signed(row[k])));
    }
  }
  return out;
}

coords reduce_coords(const modulus& md, const coords& a) {
  coords out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] % md.m;
  return out;
}

sparse_vec to_sparse(const coords& a) { return sv_from_dense(a); }

coords apply(const modulus& md, const linear_map& f, const coords& x) {
  coords out(f.rows, 0);
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!x[i]) continue;
    for (auto& [r, v] : f.columns[i]) out[r] = md.add(out[r], md.mul(v, x[i]));
  }
  return out;
}

howell_basis span_of(const modulus& md, const std::vector<sparse_vec>& gens) {
  howell_basis h(md);
  for (const auto& g : gens) h.insert(g);
  return h;
}

layer_elem basis_elem(const finite_algebra& A, std::size_t i) {
  auto [f, mono] = A.layer()->module_basis(i);
  return layer_elem::mono(A.layer(), f, mono);
}

sparse_vec sparse_of(const layer_elem& x) {
  const auto& r = x.ring();
  sparse_vec v;
  for (std::size_t k = 0; k < r->num_factors(); ++k)
    for (const auto& t : x.part(k))
      if (t.coeff) v.emplace_back(static_cast<std::uint32_t>(r->module_index(k, t.mono)), t.coeff);
  std::sort(v.begin(), v.end());
  return v;
}

// f^c * A as a Howell basis
howell_basis ideal_power(const finite_algebra& A, const coords& f, u64 c) {
  return span_of(A.mod(), A.multiplication_map(A.pow(f, c)).columns);
}

coords random_coords(const finite_algebra& A, rng_t& rng) {
  std::uniform_int_distribution<u64> d(0, A.mod().m - 1);
  coords c(A.dim());
  for (auto& x : c) x = d(rng);
  return c;
}

// Odometer over (Z/p^N)^dim.
bool next_coords(const modulus& md, coords& c) {
  for (auto& x : c) {
    if (++x < md.m) return true;
    x = 0;
  }
  return false;
}

double module_size(const finite_algebra& A) {
  return std::pow(static_cast<double>(A.mod().m), static_cast<double>(A.dim()));
}

std::string fraction_text(const finite_algebra& A, const coords& a, const coords& f, u64 c) {
  std::string s = "(" + A.text(a) + ")";
  if (c == 0) return s;
  s += "/(" + A.text(f) + ")";
  if (c > 1) s += "^" + std::to_string(c);
  return s;
}

}  // namespace

// ---------------------------------------------------------------- algebras

finite_algebra_ptr finite_algebra::from_layer(layer_ring_ptr r) {
  std::shared_ptr<finite_algebra> a(new finite_algebra());
  a->name_ = r->describe();
  a->md_ = r->mod();
  a->dim_ = r->module_dim();
  a->layer_ = std::move(r);
  a->init_frobenius();
  return a;
}

finite_algebra_ptr finite_algebra::from_table(std::string name, u64 p, int n_digits, std::vector<std::string> basis_names,
                                              std::vector<std::vector<std::vector<std::int64_t>>> table) {
  if (!is_prime(p)) throw non_prime(std::to_string(p) + " is not prime");
  const std::size_t d = table.size();
  if (d == 0 || basis_names.size() != d) throw spec_error("algebra table and basis names disagree");
  for (std::size_t i = 0; i < d; ++i) {
    if (table[i].size() != d) throw spec_error("algebra table is not square");
    for (std::size_t j = 0; j < d; ++j) {
      if (table[i][j].size() != d) throw spec_error("structure constant vector has the wrong length");
      if (i == 0)
        for (std::size_t k = 0; k < d; ++k)
          if (table[0][j][k] != (k == j ? 1 : 0)) throw spec_error("basis element 0 must be the identity");
    }
  }
  std::shared_ptr<finite_algebra> a(new finite_algebra());
  a->name_ = std::move(name);
  a->md_ = modulus(p, n_digits);
  a->dim_ = d;
  a->names_ = std::move(basis_names);
  a->table_ = std::move(table);
  a->init_frobenius();
  return a;
}

finite_algebra_ptr finite_algebra::monogenic(std::string name, u64 p, int n_digits, std::string var,
                                             const std::vector<std::int64_t>& relation) {
  const std::size_t d = relation.size();
  if (d == 0) throw spec_error("empty relation");
  // reduce y^k for k < 2d into the basis 1..y^{d-1}
  std::vector<std::vector<std::int64_t>> powers(2 * d - 1, std::vector<std::int64_t>(d, 0));
  for (std::size_t k = 0; k < d; ++k) powers[k][k] = 1;
  const std::int64_t m = static_cast<std::int64_t>(checked_power(p, n_digits));
  for (std::size_t k = d; k < 2 * d - 1; ++k) {
    // y^k = y * y^{k-1}
    const auto& prev = powers[k - 1];
    auto& cur = powers[k];
    for (std::size_t i = 0; i + 1 < d; ++i) cur[i + 1] = prev[i];
    for (std::size_t i = 0; i < d; ++i) cur[i] = (cur[i] + prev[d - 1] * relation[i]) % m;
  }
  std::vector<std::vector<std::vector<std::int64_t>>> table(d, std::vector<std::vector<std::int64_t>>(d));
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = 0; j < d; ++j) table[i][j] = powers[i + j];
  std::vector<std::string> names;
  for (std::size_t k = 0; k < d; ++k) names.push_back(k == 0 ? "1" : k == 1 ? var : var + "^" + std::to_string(k));
  return from_table(std::move(name), p, n_digits, std::move(names), std::move(table));
}

void finite_algebra::init_frobenius() {
  if (md_.n != 1) return;
  std::vector<sparse_vec> cols;
  if (layer_) {
    for (std::size_t i = 0; i < dim_; ++i) cols.push_back(sparse_of(basis_elem(*this, i).pow(md_.p)));
    frob_ = std::move(cols);
    return;
  }
  for (std::size_t i = 0; i < dim_; ++i) {
    coords e = unit_vector(i), r = one();
    for (u64 k = 0; k < md_.p; ++k) r = mul(r, e);
    cols.push_back(to_sparse(r));
  }
  frob_ = std::move(cols);
}

coords finite_algebra::one() const {
  if (layer_) return layer_elem::constant(layer_, 1).coordinates();
  return unit_vector(0);
}

coords finite_algebra::unit_vector(std::size_t i) const {
  coords c(dim_, 0);
  c[i] = 1;
  return c;
}

coords finite_algebra::mul(const coords& a, const coords& b) const {
  if (layer_)
    return (layer_elem::from_coordinates(layer_, a) * layer_elem::from_coordinates(layer_, b)).coordinates();
  return table_mul(md_, table_, a, b);
}

coords finite_algebra::add(const coords& a, const coords& b) const {
  coords out(dim_);
  for (std::size_t i = 0; i < dim_; ++i) out[i] = md_.add(a[i], b[i]);
  return out;
}

coords finite_algebra::pow(const coords& a, u64 e) const {
  if (!frob_.empty() && e && e % md_.p == 0) {
    coords b = pow(a, e / md_.p), out(dim_, 0);
    for (std::size_t i = 0; i < dim_; ++i)
      if (b[i])
        for (auto& [k, v] : frob_[i]) out[k] = md_.add(out[k], md_.mul(v, b[i]));
    return out;
  }
  coords result = one(), base = a;
  while (e) {
    if (e & 1) result = mul(result, base);
    e >>= 1;
    if (e) base = mul(base, base);
  }
  return result;
}

std::string finite_algebra::text(const coords& a) const {
  if (layer_) return to_text(layer_elem::from_coordinates(layer_, a));
  std::ostringstream os;
  bool first = true;
  for (std::size_t i = 0; i < dim_; ++i) {
    if (!a[i]) continue;
    if (!first) os << " + ";
    first = false;
    if (i == 0)
      os << a[i];
    else if (a[i] == 1)
      os << names_[i];
    else
      os << a[i] << "*" << names_[i];
  }
  return first ? "0" : os.str();
}

linear_map finite_algebra::multiplication_map(const coords& g) const {
  linear_map m;
  m.rows = m.cols = static_cast<std::uint32_t>(dim_);
  m.columns.resize(dim_);
  if (layer_) {
    // stays sparse: one monomial product per column
    layer_elem ge = layer_elem::from_coordinates(layer_, g);
    for (std::size_t i = 0; i < dim_; ++i) m.columns[i] = sparse_of(ge * basis_elem(*this, i));
    return m;
  }
  for (std::size_t i = 0; i < dim_; ++i) m.columns[i] = to_sparse(mul(g, unit_vector(i)));
  return m;
}

std::vector<sparse_vec> finite_algebra::torsion(const coords& f) const {
  std::vector<sparse_vec> out;
  if (layer_) {
    for (auto& x : torsion_submodule(layer_, layer_elem::from_coordinates(layer_, f)).basis)
      out.push_back(sv_from_dense(x.coordinates()));
    return out;
  }
  modulus fine(md_.p, 2 * md_.n);
  torsion_problem prob;
  prob.base = md_;
  prob.refined = fine;
  prob.base_dim = prob.refined_dim = static_cast<std::uint32_t>(dim_);
  prob.max_power = md_.n;
  prob.base_map = [&] { return multiplication_map(f); };
  prob.refined_power_map = [&](int c) {
    coords g = f, acc(dim_, 0);
    acc[0] = 1;
    for (int k = 0; k < c; ++k) acc = table_mul(fine, table_, acc, g);
    linear_map m;
    m.rows = m.cols = static_cast<std::uint32_t>(dim_);
    m.columns.resize(dim_);
    for (std::size_t i = 0; i < dim_; ++i) m.columns[i] = to_sparse(table_mul(fine, table_, acc, unit_vector(i)));
    return m;
  };
  prob.project = [&](const sparse_vec& v) {
    sparse_vec o;
    for (auto& [i, x] : v)
      if (x % md_.m) o.emplace_back(i, x % md_.m);
    return o;
  };
  return genuine_torsion(prob).generators;
}

// ---------------------------------------------------------------- pairs

ring_pair make_extension(std::string name, finite_algebra_ptr A, finite_algebra_ptr B, linear_map map, coords f_in_A) {
  if (!(A->mod() == B->mod())) throw ring_mismatch("ring pair over different coefficient rings");
  if (map.cols != A->dim() || map.rows != B->dim()) throw ring_mismatch("ring pair map has the wrong shape");
  const modulus& md = B->mod();
  if (apply(md, map, A->one()) != B->one()) throw spec_error("ring pair map is not unital");
  const std::size_t d = A->dim();
  auto check = [&](std::size_t i, std::size_t j) {
    coords ei = A->unit_vector(i), ej = A->unit_vector(j);
    if (apply(md, map, A->mul(ei, ej)) != B->mul(apply(md, map, ei), apply(md, map, ej)))
      throw spec_error("ring pair map is not multiplicative on basis elements " + std::to_string(i) + ", " +
                       std::to_string(j));
  };
  if (static_cast<double>(d) * static_cast<double>(d) <= 40000) {
    for (std::size_t i = 0; i < d; ++i)
      for (std::size_t j = i; j < d; ++j) check(i, j);
  } else {
    rng_t rng = make_rng(0, 0xC1);
    std::uniform_int_distribution<std::size_t> pick(0, d - 1);
    for (int s = 0; s < 2000; ++s) check(pick(rng), pick(rng));
  }
  ring_pair pr;
  pr.name = std::move(name);
  pr.kind = pair_kind::extension;
  pr.image_gens = map.columns;
  pr.map = std::move(map);
  pr.A = std::move(A);
  pr.B = std::move(B);
  pr.f = reduce_coords(md, f_in_A);
  return pr;
}

ring_pair make_subring(std::string name, finite_algebra_ptr B, const std::vector<coords>& gens) {
  const modulus& md = B->mod();
  std::vector<sparse_vec> sg;
  for (const auto& g : gens) sg.push_back(to_sparse(reduce_coords(md, g)));
  howell_basis h = span_of(md, sg);
  if (!h.contains(to_sparse(B->one()))) throw spec_error("subring generators must span 1");
  for (const auto& a : gens)
    for (const auto& b : gens)
      if (!h.contains(to_sparse(B->mul(a, b)))) throw spec_error("subring generators are not closed under products");
  ring_pair pr;
  pr.name = std::move(name);
  pr.kind = pair_kind::extension;
  pr.B = std::move(B);
  pr.image_gens = std::move(sg);
  return pr;
}

ring_pair make_localization(std::string name, finite_algebra_ptr A, coords f, rational f_valuation,
                            rational precision_valuation) {
  if (f_valuation <= 0) throw spec_error("localization element must have positive valuation");
  f = reduce_coords(A->mod(), f);
  if (!A->torsion(f).empty()) throw torsion_present("f is a zero-divisor in " + A->name());
  ring_pair pr;
  pr.name = std::move(name);
  pr.kind = pair_kind::localization;
  pr.A = A;
  pr.B = A;
  pr.f = std::move(f);
  pr.f_valuation = f_valuation;
  pr.precision_valuation = precision_valuation;
  linear_map id;
  id.rows = id.cols = static_cast<std::uint32_t>(A->dim());
  id.columns.resize(A->dim());
  for (std::uint32_t i = 0; i < id.cols; ++i) id.columns[i] = {{i, 1}};
  pr.map = id;
  pr.image_gens = id.columns;
  return pr;
}

ring_pair identity_pair(std::string name, finite_algebra_ptr A) {
  linear_map id;
  id.rows = id.cols = static_cast<std::uint32_t>(A->dim());
  id.columns.resize(A->dim());
  for (std::uint32_t i = 0; i < id.cols; ++i) id.columns[i] = {{i, 1}};
  coords f(A->dim(), 0);
  f[0] = A->p() % A->mod().m;
  return make_extension(std::move(name), A, A, std::move(id), f);
}

ring_pair tower_step_pair(const tower_handle& h, int j) {
  auto A = finite_algebra::from_layer(h.layer(j));
  auto B = finite_algebra::from_layer(h.layer(j + 1));
  linear_map map;
  map.cols = static_cast<std::uint32_t>(A->dim());
  map.rows = static_cast<std::uint32_t>(B->dim());
  for (std::size_t i = 0; i < A->dim(); ++i) {
    auto [f, mono] = h.layer(j)->module_basis(i);
    map.columns.push_back(sv_from_dense(h.transition(j, layer_elem::mono(h.layer(j), f, mono)).coordinates()));
  }
  return make_extension("level " + std::to_string(h.level(j)) + " -> " + std::to_string(h.level(j + 1)), A, B,
                        std::move(map), h.ideal_generator(j).coordinates());
}

ring_pair localization_of_layer(std::string name, const layer_ring_ptr& r, const layer_elem& f) {
  rat_valuation v = valuation(f);
  if (v.above_precision) throw spec_error("localization element vanishes at precision");
  return make_localization(std::move(name), finite_algebra::from_layer(r), f.coordinates(), v.value,
                           rational(r->n_digits()));
}

ring_pair layer_localization(const tower_handle& h, int j) {
  return localization_of_layer("level " + std::to_string(h.level(j)), h.layer(j), h.ideal_generator(j));
}

// ---------------------------------------------------------------- checks

std::string to_string(closure_verdict v) {
  switch (v) {
    case closure_verdict::pass_exact: return "PASS_EXACT";
    case closure_verdict::pass_sampled: return "PASS_SAMPLED";
    case closure_verdict::fail: return "FAIL";
    case closure_verdict::undecided: return "UNDECIDED_AT_PRECISION";
  }
  return "?";
}

closure_result is_cartesian_mod_f(const ring_pair& pair) {
  if (!pair.A) throw error("is_cartesian_mod_f needs an explicit source algebra");
  closure_result r;
  r.property = "CARTESIAN_MOD_F";
  const finite_algebra& A = *pair.A;
  const finite_algebra& B = *pair.B;
  const modulus& md = A.mod();
  coords fB = apply(md, pair.map, pair.f);
  if (!A.torsion(pair.f).empty()) throw torsion_present("source has f-torsion: " + A.name());
  if (!B.torsion(fB).empty()) throw torsion_present("target has f-torsion: " + B.name());
  // {a : map(a) in fB} from the kernel of (a, b) -> map(a) - f b
  linear_map m;
  m.rows = static_cast<std::uint32_t>(B.dim());
  m.cols = static_cast<std::uint32_t>(A.dim() + B.dim());
  m.columns = pair.map.columns;
  for (auto& col : B.multiplication_map(fB).columns) m.columns.push_back(sv_scale(md, col, md.m - 1));
  howell_basis fA = span_of(md, A.multiplication_map(pair.f).columns);
  for (auto& v : kernel(md, m)) {
    sparse_vec a;
    for (auto& [i, x] : v)
      if (i < A.dim()) a.emplace_back(i, x);
    ++r.checked;
    if (!fA.contains(a)) {
      r.v = closure_verdict::fail;
      r.witness = A.text(sv_to_dense(a, A.dim()));
      r.detail = "kernel element of A/fA -> B/fB; the square with A[1/f] -> B[1/f] is not cartesian";
      return r;
    }
  }
  r.detail = "A/fA -> B/fB injective, hence cartesian";
  return r;
}

closure_result check_root_closed(const ring_pair& pair, u64 n, closure_mode mode, int samples, std::uint64_t seed) {
  closure_result r;
  const finite_algebra& B = *pair.B;
  const modulus& md = B.mod();
  r.property = n == B.p() ? "P_ROOT_CLOSED" : "N_ROOT_CLOSED(" + std::to_string(n) + ")";
  rng_t rng = make_rng(seed, 0xC0 + n);
  const bool exact = mode == closure_mode::exact;

  if (pair.kind == pair_kind::extension) {
    howell_basis inA = span_of(md, pair.image_gens);
    auto test = [&](const coords& b) {
      ++r.checked;
      if (inA.contains(to_sparse(B.pow(b, n))) && !inA.contains(to_sparse(b))) {
        r.v = closure_verdict::fail;
        r.witness = B.text(b);
        r.detail = "b^" + std::to_string(n) + " lies in A but b does not";
        return false;
      }
      return true;
    };
    if (exact) {
      if (module_size(B) > enumeration_limit)
        throw enumeration_too_large(B.name() + " has more than 2^20 elements");
      coords b(B.dim(), 0);
      do {
        if (!test(b)) return r;
      } while (next_coords(md, b));
      r.v = closure_verdict::pass_exact;
    } else {
      for (int s = 0; s < samples; ++s)
        if (!test(random_coords(B, rng))) return r;
      r.v = closure_verdict::pass_sampled;
    }
    return r;
  }

  // localization: b = a / f^c, c <= c_max keeps f^{cn} above the truncation
  const finite_algebra& A = *pair.A;
  rational cm = pair.precision_valuation / (pair.f_valuation * static_cast<std::int64_t>(n));
  const std::int64_t c_max = floor_of(cm);
  if (c_max < 1) {
    r.v = closure_verdict::undecided;
    r.detail = "n * v(f) exceeds the precision; no denominator is testable";
    return r;
  }
  std::vector<howell_basis> fc, fcn;
  for (std::int64_t c = 1; c <= c_max; ++c) {
    fc.push_back(ideal_power(A, pair.f, static_cast<u64>(c)));
    fcn.push_back(ideal_power(A, pair.f, static_cast<u64>(c) * n));
  }
  auto test = [&](const coords& a, std::int64_t c, const sparse_vec& an) {
    ++r.checked;
    if (fcn[c - 1].contains(an) && !fc[c - 1].contains(to_sparse(a))) {
      r.v = closure_verdict::fail;
      r.witness = fraction_text(A, a, pair.f, static_cast<u64>(c));
      r.detail = "b^" + std::to_string(n) + " lies in A but b does not";
      return false;
    }
    return true;
  };
  if (exact) {
    if (module_size(A) * static_cast<double>(c_max) > enumeration_limit)
      throw enumeration_too_large(A.name() + " has too many fractions to enumerate");
    coords a(A.dim(), 0);
    do {
      sparse_vec an = to_sparse(A.pow(a, n));
      for (std::int64_t c = 1; c <= c_max; ++c)
        if (!test(a, c, an)) return r;
    } while (next_coords(md, a));
    r.v = closure_verdict::pass_exact;
  } else {
    std::uniform_int_distribution<std::int64_t> pick_c(1, c_max);
    for (int s = 0; s < samples; ++s) {
      coords a = random_coords(A, rng);
      std::int64_t c = pick_c(rng);
      if (!test(a, c, to_sparse(A.pow(a, n)))) return r;
    }
    r.v = closure_verdict::pass_sampled;
  }
  r.detail = "denominators f^c with c <= " + std::to_string(c_max);
  return r;
}

closure_result almost_integral_witness(const ring_pair& pair, const coords& a, int c0, int c_cap, int n_cap) {
  if (c_cap < 0 || n_cap < 1 || c0 < 0) throw spec_error("almost-integrality caps must be positive");
  if (pair.kind != pair_kind::localization) throw error("almost-integrality needs a localization pair");
  closure_result r;
  r.property = "ALMOST_INTEGRAL_WITNESS";
  const finite_algebra& A = *pair.A;
  const modulus& md = A.mod();
  coords an = reduce_coords(md, a);
  int k_max = n_cap;
  if (c0 > 0) {
    std::int64_t lim = floor_of(pair.precision_valuation / (pair.f_valuation * static_cast<std::int64_t>(c0)));
    k_max = static_cast<int>(std::min<std::int64_t>(n_cap, lim));
  }
  if (k_max < 1) {
    r.v = closure_verdict::undecided;
    r.detail = "the denominator already exceeds the precision";
    return r;
  }
  std::vector<howell_basis> denom;  // f^{c0 k} A
  std::vector<coords> powers;       // a^k
  coords ak = A.one();
  for (int k = 1; k <= k_max; ++k) {
    ak = A.mul(ak, an);
    powers.push_back(ak);
    denom.push_back(ideal_power(A, pair.f, static_cast<u64>(c0) * k));
  }
  std::ostringstream frontier;
  for (int c = 0; c <= c_cap; ++c) {
    coords fc = A.pow(pair.f, static_cast<u64>(c));
    int bad = 0;
    for (int k = 1; k <= k_max && !bad; ++k) {
      ++r.checked;
      if (!denom[k - 1].contains(to_sparse(A.mul(fc, powers[k - 1])))) bad = k;
    }
    if (!bad) {
      r.v = closure_verdict::pass_exact;
      r.witness = "c = " + std::to_string(c);
      r.detail = "f^c b^k in A for all k <= " + std::to_string(k_max);
      return r;
    }
    frontier << (c ? "; " : "") << "c=" << c << ": k=" << bad;
  }
  r.v = closure_verdict::undecided;
  r.detail = "no witness up to the caps (k <= " + std::to_string(k_max) + "); failing frontier " + frontier.str();
  return r;
}

closure_result monogenic_presentation_check(const finite_algebra& A) {
  if (A.n_digits() != 1) throw error("presentation check needs an F_p-algebra");
  closure_result r;
  r.property = "MONOGENIC_PRESENTATION";
  const u64 p = A.p();
  const modulus fp(p, 1);
  u64 q = p;
  while (q < A.dim()) q *= p;
  linear_map frob;
  frob.rows = frob.cols = static_cast<std::uint32_t>(A.dim());
  for (std::size_t i = 0; i < A.dim(); ++i) frob.columns.push_back(to_sparse(A.pow(A.unit_vector(i), q)));
  std::vector<sparse_vec> m = kernel(fp, frob);
  howell_basis mb = span_of(fp, m);
  const std::size_t dim_m = mb.unit_pivots();
  if (A.dim() - dim_m != 1) {
    r.v = closure_verdict::fail;
    r.detail = "not local with residue field F_p (residue dimension " + std::to_string(A.dim() - dim_m) + ")";
    return r;
  }
  std::vector<coords> mv;
  for (auto& [lead, row] : mb.rows()) mv.push_back(sv_to_dense(row, A.dim()));
  r.checked = A.dim();
  if (mv.empty()) {
    r.detail = "field F_" + std::to_string(p);
    return r;
  }
  // A = F_p[x] for some x in m settles it without forming m^2.
  for (std::size_t c = 0; c < std::min<std::size_t>(mv.size(), 3); ++c) {
    howell_basis powers(fp);
    coords x = A.one();
    for (std::size_t k = 0; k < A.dim(); ++k) {
      sparse_vec v = to_sparse(x);
      if (v.empty()) break;
      powers.insert(std::move(v));
      x = A.mul(x, mv[c]);
    }
    if (powers.unit_pivots() == A.dim()) {
      r.detail = "local, A = F_" + std::to_string(p) + "[x] with x = " + A.text(mv[c]);
      return r;
    }
  }
  if (A.dim() > 600) {
    r.v = closure_verdict::undecided;
    r.detail = "no single generator among the first candidates; m^2 too large to form";
    return r;
  }
  howell_basis m2(fp);
  for (std::size_t i = 0; i < mv.size(); ++i)
    for (std::size_t j = i; j < mv.size(); ++j) m2.insert(to_sparse(A.mul(mv[i], mv[j])));
  const std::size_t emb = dim_m - m2.unit_pivots();
  if (emb > 1) {
    r.v = closure_verdict::fail;
    for (auto& v : mv)
      if (!m2.contains(to_sparse(v))) {
        r.witness = A.text(v);
        break;
      }
    r.detail = "maximal ideal needs " + std::to_string(emb) + " generators";
    return r;
  }
  r.detail = "local, maximal ideal generated by " + std::to_string(emb) + " element(s)";
  return r;
}

bool transfer_report::passed() const {
  return std::none_of(rows.begin(), rows.end(), [](const transfer_row& t) { return t.result.failed(); });
}

transfer_report transfer_suite(const tower_ptr& h, closure_mode mode, int samples, std::uint64_t seed) {
  transfer_report rep;
  const u64 p = h->p();
  for (int j = 0; j < h->depth(); ++j) rep.rows.push_back({"cartesian", h->level(j), is_cartesian_mod_f(tower_step_pair(*h, j))});
  for (int j = 0; j <= h->depth(); ++j)
    rep.rows.push_back({"root_closed", h->level(j), check_root_closed(layer_localization(*h, j), p, mode, samples, seed)});
  for (int j = 0; j < h->depth(); ++j) {
    tilt_presentation pr = small_tilt(h, j, 1);
    layer_elem f(pr.ring);
    for (std::size_t k = 0; k < pr.ring->num_factors(); ++k) {
      monomial mono;
      mono.t = pr.ring->factor(k).ideal_t_exp;
      f = f + layer_elem::mono(pr.ring, k, mono);
    }
    ring_pair lp = localization_of_layer("tilt of level " + std::to_string(h->level(j)), pr.ring, f);
    rep.rows.push_back({"root_closed_tilt", h->level(j), check_root_closed(lp, p, mode, samples, seed)});
  }
  return rep;
}

}  // namespace tiltlab
