#include "tiltlab/layer.hpp"

#include <algorithm>
#include <functional>
#include <sstream>

#include "tiltlab/errors.hpp"

namespace tiltlab {

namespace {

void enumerate_var_monomials(int v, std::int32_t cap, std::vector<monomial>& out) {
  monomial m;
  std::function<void(int, std::int32_t)> rec = [&](int i, std::int32_t left) {
    if (i == v) {
      out.push_back(m);
      return;
    }
    for (std::int32_t a = 0; a <= left; ++a) {
      m.x[i] = a;
      rec(i + 1, left - a);
    }
    m.x[i] = 0;
  };
  rec(0, cap);
  std::sort(out.begin(), out.end());
}

}  // namespace

layer_ring::layer_ring(u64 p, precision_budget prec, std::vector<layer_factor> factors, bool char_p)
    : prec_(prec), factors_(std::move(factors)), char_p_(char_p) {
  if (!is_prime(p)) throw non_prime(std::to_string(p) + " is not prime");
  if (prec_.n_digits < 1) throw spec_error("n_digits must be >= 1");
  if (char_p_ && prec_.n_digits != 1) throw spec_error("characteristic-p layers carry one digit");
  if (factors_.empty()) throw spec_error("layer ring needs at least one factor");
  if (prec_.var_degree_cap < 0) throw spec_error("negative variable degree cap");
  md_ = modulus(p, prec_.n_digits);
  quot_off_.push_back(0);
  mod_off_.push_back(0);
  for (auto& f : factors_) {
    if (f.eisen_exp < 1) throw spec_error("Eisenstein exponent must be positive");
    if (f.ideal_t_exp < 0) throw spec_error("negative ideal exponent");
    if (f.var_den < 1) throw spec_error("variable denominator must be positive");
    if (f.num_vars < 0 || f.num_vars > max_vars)
      throw spec_error("at most " + std::to_string(max_vars) + " perfectoid variables are supported");
    std::int32_t cap = f.num_vars == 0 ? 0 : static_cast<std::int32_t>(floor_of(prec_.var_degree_cap * f.var_den));
    var_cap_.push_back(cap);
    std::vector<monomial> ms;
    enumerate_var_monomials(f.num_vars, cap, ms);
    std::map<monomial, int> lookup;
    for (std::size_t i = 0; i < ms.size(); ++i) lookup[ms[i]] = static_cast<int>(i);
    quot_off_.push_back(quot_off_.back() + static_cast<std::size_t>(f.ideal_t_exp) * ms.size());
    mod_off_.push_back(mod_off_.back() + static_cast<std::size_t>(f.eisen_exp) * ms.size());
    var_monos_.push_back(std::move(ms));
    var_lookup_.push_back(std::move(lookup));
  }
}

int layer_ring::var_index(std::size_t f, const monomial& m) const {
  const auto& fac = factors_[f];
  if (fac.num_vars == 0) return m.var_degree() == 0 ? 0 : -1;
  if (fac.num_vars == 1) return m.x[0] <= var_cap_[f] && m.x[1] == 0 && m.x[2] == 0 ? m.x[0] : -1;
  monomial key = m;
  key.t = 0;
  auto it = var_lookup_[f].find(key);
  return it == var_lookup_[f].end() ? -1 : it->second;
}

int layer_ring::var_add(std::size_t f, int a, int b) const {
  const auto& fac = factors_[f];
  if (fac.num_vars == 0) return 0;
  if (fac.num_vars == 1) return a + b <= var_cap_[f] ? a + b : -1;
  monomial s = var_monos_[f][a];
  const monomial& o = var_monos_[f][b];
  for (int i = 0; i < max_vars; ++i) s.x[i] += o.x[i];
  if (s.var_degree() > var_cap_[f]) return -1;
  return var_index(f, s);
}

std::pair<std::size_t, monomial> layer_ring::quot_basis(std::size_t idx) const {
  std::size_t f = std::upper_bound(quot_off_.begin(), quot_off_.end(), idx) - quot_off_.begin() - 1;
  std::size_t r = idx - quot_off_[f];
  std::size_t nv = var_monos_[f].size();
  monomial m = var_monos_[f][r % nv];
  m.t = static_cast<std::int32_t>(r / nv);
  return {f, m};
}

std::size_t layer_ring::module_index(std::size_t f, const monomial& m) const {
  return mod_off_[f] + static_cast<std::size_t>(m.t) * var_monos_[f].size() + var_index(f, m);
}

std::pair<std::size_t, monomial> layer_ring::module_basis(std::size_t idx) const {
  std::size_t f = std::upper_bound(mod_off_.begin(), mod_off_.end(), idx) - mod_off_.begin() - 1;
  std::size_t r = idx - mod_off_[f];
  std::size_t nv = var_monos_[f].size();
  monomial m = var_monos_[f][r % nv];
  m.t = static_cast<std::int32_t>(r / nv);
  return {f, m};
}

std::shared_ptr<const layer_ring> layer_ring::refined() const {
  precision_budget prec = prec_;
  std::vector<layer_factor> fs = factors_;
  if (char_p_) {
    for (auto& f : fs) f.eisen_exp *= 2;
  } else {
    prec.n_digits *= 2;
  }
  return std::make_shared<layer_ring>(md_.p, prec, fs, char_p_);
}

bool layer_ring::operator==(const layer_ring& o) const {
  return md_ == o.md_ && prec_.var_degree_cap == o.prec_.var_degree_cap && factors_ == o.factors_ &&
         char_p_ == o.char_p_;
}

std::string layer_ring::describe() const {
  std::ostringstream os;
  for (std::size_t i = 0; i < factors_.size(); ++i) {
    const auto& f = factors_[i];
    if (i) os << " x ";
    if (char_p_)
      os << "F_" << md_.p << "[t]/(t^" << f.eisen_exp << ")";
    else
      os << "(Z/" << md_.p << "^" << md_.n << ")[t]/(t^" << f.eisen_exp << " - " << md_.p << ")";
    if (f.num_vars) os << "[x^(1/" << f.var_den << ") x" << f.num_vars << ", deg<=" << to_string(prec_.var_degree_cap) << "]";
    os << " I=(t^" << f.ideal_t_exp << ")";
  }
  return os.str();
}

layer_ring_ptr layer_make(u64 p, const precision_budget& prec, int e, int v, const rational& ideal_exp, int var_den) {
  if (!is_prime(p)) throw non_prime(std::to_string(p) + " is not prime");
  if (ideal_exp > 1) throw bad_ideal_exponent("ideal exponent " + to_string(ideal_exp) + " exceeds 1, so p is not in I_0");
  if (ideal_exp <= 0) throw bad_ideal_exponent("ideal exponent must be positive");
  if (e < 1) throw spec_error("Eisenstein exponent must be positive");
  rational c = ideal_exp * e;
  if (!is_integral(c))
    throw bad_ideal_exponent("f_0 = t^(" + to_string(ideal_exp) + " * " + std::to_string(e) + ") has a non-integral exponent");
  if (prec.n_digits < 1) throw spec_error("n_digits must be >= 1");
  u64 pn = checked_power(p, prec.n_digits);
  if (pn >= (u64{1} << 31)) throw spec_error("p^N must stay below 2^31 (torsion checks double the precision)");
  if (v > 0) {
    std::int64_t d = prec.var_degree_cap.denominator();
    while (d % static_cast<std::int64_t>(p) == 0) d /= static_cast<std::int64_t>(p);
    if (d != 1) throw spec_error("variable degree cap must have a p-power denominator");
  }
  if (var_den == 0) {
    var_den = 1;
    int r = e;
    while (r % static_cast<int>(p) == 0) {
      r /= static_cast<int>(p);
      var_den *= static_cast<int>(p);
    }
  }
  layer_factor f{e, static_cast<int>(c.numerator()), var_den, v};
  return std::make_shared<layer_ring>(p, prec, std::vector<layer_factor>{f});
}

layer_ring_ptr layer_product(const std::vector<layer_ring_ptr>& parts) {
  if (parts.empty()) throw spec_error("empty product");
  std::vector<layer_factor> fs;
  for (auto& r : parts) {
    if (r->p() != parts[0]->p() || r->n_digits() != parts[0]->n_digits() ||
        r->precision().var_degree_cap != parts[0]->precision().var_degree_cap || r->char_p() != parts[0]->char_p())
      throw ring_mismatch("product factors must share p, precision and variable cap");
    fs.insert(fs.end(), r->factors().begin(), r->factors().end());
  }
  return std::make_shared<layer_ring>(parts[0]->p(), parts[0]->precision(), fs, parts[0]->char_p());
}

bool same_ring(const layer_ring_ptr& a, const layer_ring_ptr& b) {
  if (a == b) return true;
  if (!a || !b) return false;
  return *a == *b;
}

// ---------------------------------------------------------------- elements

namespace {

// Folds t^e = p and drops truncated terms; false when the term vanishes.
bool normalize_term(const layer_ring& r, std::size_t f, monomial& m, u64& c) {
  const auto& fac = r.factor(f);
  if (m.t >= fac.eisen_exp) {
    int q = m.t / fac.eisen_exp;
    m.t %= fac.eisen_exp;
    c = r.mod().mul(c, r.mod().p_power(q));
  }
  if (c == 0) return false;
  if (m.var_degree() > r.var_cap(f)) return false;
  return true;
}

std::vector<term> merge_sorted(const modulus& md, const std::vector<term>& a, const std::vector<term>& b, bool negate_b) {
  std::vector<term> out;
  out.reserve(a.size() + b.size());
  std::size_t i = 0, j = 0;
  while (i < a.size() || j < b.size()) {
    if (j == b.size() || (i < a.size() && a[i].mono < b[j].mono)) {
      out.push_back(a[i++]);
    } else if (i == a.size() || b[j].mono < a[i].mono) {
      out.push_back({b[j].mono, negate_b ? md.neg(b[j].coeff) : b[j].coeff});
      ++j;
    } else {
      u64 c = negate_b ? md.sub(a[i].coeff, b[j].coeff) : md.add(a[i].coeff, b[j].coeff);
      if (c) out.push_back({a[i].mono, c});
      ++i;
      ++j;
    }
  }
  return out;
}

std::vector<term> collapse(const modulus& md, std::vector<term> ts) {
  std::sort(ts.begin(), ts.end(), [](const term& a, const term& b) { return a.mono < b.mono; });
  std::vector<term> out;
  for (auto& t : ts) {
    if (!out.empty() && out.back().mono == t.mono)
      out.back().coeff = md.add(out.back().coeff, t.coeff);
    else
      out.push_back(t);
  }
  std::erase_if(out, [](const term& t) { return t.coeff == 0; });
  return out;
}

std::vector<term> mul_dense_t(const layer_ring& r, std::size_t f, const std::vector<term>& a, const std::vector<term>& b) {
  const modulus& md = r.mod();
  const int e = r.factor(f).eisen_exp;
  std::vector<u128> acc(2 * static_cast<std::size_t>(e), 0);
  if (md.m < (u64{1} << 32)) {
    for (const auto& x : a)
      for (const auto& y : b) acc[x.mono.t + y.mono.t] += x.coeff * y.coeff;
  } else {
    for (const auto& x : a)
      for (const auto& y : b) acc[x.mono.t + y.mono.t] += md.mul(x.coeff, y.coeff);
  }
  std::vector<term> out;
  const u64 p = md.p;
  for (int k = 0; k < e; ++k) {
    u64 lo = static_cast<u64>(acc[k] % md.m);
    u64 hi = static_cast<u64>(acc[k + e] % md.m);
    u64 c = md.add(lo, md.mul(p % md.m, hi));
    if (c) {
      term t;
      t.mono.t = k;
      t.coeff = c;
      out.push_back(t);
    }
  }
  return out;
}

std::vector<term> mul_sparse(const layer_ring& r, std::size_t f, const std::vector<term>& a, const std::vector<term>& b) {
  const modulus& md = r.mod();
  const std::int32_t cap = r.var_cap(f);
  std::vector<term> prods;
  prods.reserve(a.size() * b.size());
  for (const auto& x : a) {
    for (const auto& y : b) {
      monomial m;
      m.t = x.mono.t + y.mono.t;
      for (int i = 0; i < max_vars; ++i) m.x[i] = x.mono.x[i] + y.mono.x[i];
      if (m.var_degree() > cap) continue;
      u64 c = md.mul(x.coeff, y.coeff);
      if (normalize_term(r, f, m, c)) prods.push_back({m, c});
    }
  }
  return collapse(md, std::move(prods));
}

}  // namespace

layer_elem::layer_elem(layer_ring_ptr r) : ring_(std::move(r)), parts_(ring_->num_factors()) {}

layer_elem layer_elem::constant(const layer_ring_ptr& r, std::int64_t c) {
  layer_elem x(r);
  u64 v = r->mod().from_signed(c);
  if (v)
    for (auto& part : x.parts_) part.push_back({monomial{}, v});
  return x;
}

layer_elem layer_elem::mono(const layer_ring_ptr& r, std::size_t f, const monomial& m0, u64 c) {
  layer_elem x(r);
  monomial m = m0;
  c %= r->mod().m;
  if (normalize_term(*r, f, m, c)) x.parts_[f].push_back({m, c});
  return x;
}

layer_elem layer_elem::from_terms(const layer_ring_ptr& r, std::size_t f, const std::vector<term>& ts) {
  layer_elem x(r);
  std::vector<term> keep;
  for (auto t : ts) {
    t.coeff %= r->mod().m;
    if (normalize_term(*r, f, t.mono, t.coeff)) keep.push_back(t);
  }
  x.parts_[f] = collapse(r->mod(), std::move(keep));
  return x;
}

bool layer_elem::is_zero() const {
  for (auto& p : parts_)
    if (!p.empty()) return false;
  return true;
}

std::size_t layer_elem::num_terms() const {
  std::size_t n = 0;
  for (auto& p : parts_) n += p.size();
  return n;
}

void layer_elem::check_same(const layer_elem& o) const {
  if (!ring_ || !o.ring_ || !same_ring(ring_, o.ring_)) throw ring_mismatch("elements live in different layer rings");
}

layer_elem layer_elem::operator+(const layer_elem& o) const {
  check_same(o);
  layer_elem r(ring_);
  for (std::size_t f = 0; f < parts_.size(); ++f) r.parts_[f] = merge_sorted(ring_->mod(), parts_[f], o.parts_[f], false);
  r.lossy_ = lossy_ || o.lossy_;
  return r;
}

layer_elem layer_elem::operator-(const layer_elem& o) const {
  check_same(o);
  layer_elem r(ring_);
  for (std::size_t f = 0; f < parts_.size(); ++f) r.parts_[f] = merge_sorted(ring_->mod(), parts_[f], o.parts_[f], true);
  r.lossy_ = lossy_ || o.lossy_;
  return r;
}

layer_elem layer_elem::operator-() const {
  layer_elem r = *this;
  for (auto& p : r.parts_)
    for (auto& t : p) t.coeff = ring_->mod().neg(t.coeff);
  return r;
}

layer_elem layer_elem::operator*(const layer_elem& o) const {
  check_same(o);
  layer_elem r(ring_);
  for (std::size_t f = 0; f < parts_.size(); ++f) {
    const auto& a = parts_[f];
    const auto& b = o.parts_[f];
    if (a.empty() || b.empty()) continue;
    const auto& fac = ring_->factor(f);
    if (fac.num_vars == 0 && a.size() * b.size() >= static_cast<std::size_t>(fac.eisen_exp) / 4)
      r.parts_[f] = mul_dense_t(*ring_, f, a, b);
    else
      r.parts_[f] = mul_sparse(*ring_, f, a, b);
  }
  r.lossy_ = lossy_ || o.lossy_;
  return r;
}

layer_elem layer_elem::scaled(u64 c) const {
  layer_elem r(ring_);
  c %= ring_->mod().m;
  for (std::size_t f = 0; f < parts_.size(); ++f)
    for (auto& t : parts_[f]) {
      u64 v = ring_->mod().mul(t.coeff, c);
      if (v) r.parts_[f].push_back({t.mono, v});
    }
  r.lossy_ = lossy_;
  return r;
}

layer_elem layer_elem::pow(u64 e) const {
  layer_elem result = constant(ring_, 1);
  layer_elem base = *this;
  while (e) {
    if (e & 1) result = result * base;
    e >>= 1;
    if (e) base = base * base;
  }
  return result;
}

layer_elem layer_elem::restricted(std::size_t f) const {
  layer_elem r(ring_);
  r.parts_[f] = parts_[f];
  r.lossy_ = lossy_;
  return r;
}

bool layer_elem::operator==(const layer_elem& o) const {
  if (!same_ring(ring_, o.ring_)) return false;
  return parts_ == o.parts_;
}

std::vector<u64> layer_elem::coordinates() const {
  std::vector<u64> c(ring_->module_dim(), 0);
  for (std::size_t f = 0; f < parts_.size(); ++f)
    for (auto& t : parts_[f]) c[ring_->module_index(f, t.mono)] = t.coeff;
  return c;
}

layer_elem layer_elem::from_coordinates(const layer_ring_ptr& r, const std::vector<u64>& c) {
  layer_elem x(r);
  for (std::size_t i = 0; i < c.size(); ++i) {
    u64 v = c[i] % r->mod().m;
    if (!v) continue;
    auto [f, m] = r->module_basis(i);
    x.parts_[f].push_back({m, v});
  }
  for (auto& p : x.parts_)
    std::sort(p.begin(), p.end(), [](const term& a, const term& b) { return a.mono < b.mono; });
  return x;
}

layer_elem elem_mul(const layer_elem& x, const layer_elem& y) { return x * y; }

bool rat_valuation::operator<(const rat_valuation& o) const {
  if (above_precision) return false;
  if (o.above_precision) return true;
  return value < o.value;
}

std::string rat_valuation::text() const { return above_precision ? "ABOVE_PRECISION" : to_string(value); }

rat_valuation valuation_in_factor(const layer_elem& x, std::size_t f) {
  rat_valuation best = rat_valuation::above();
  const auto& r = *x.ring();
  for (auto& t : x.part(f)) {
    rational v = rational(t.mono.t, r.factor(f).eisen_exp) + r.mod().val(t.coeff);
    if (best.above_precision || v < best.value) best = rat_valuation::of(v);
  }
  return best;
}

rat_valuation valuation(const layer_elem& x) {
  rat_valuation best = rat_valuation::above();
  for (std::size_t f = 0; f < x.parts().size(); ++f) {
    rat_valuation v = valuation_in_factor(x, f);
    if (v < best) best = v;
  }
  return best;
}

layer_elem divide_by_t_power(const layer_elem& x, const std::vector<int>& k) {
  const auto& r = x.ring();
  const modulus& md = r->mod();
  layer_elem out(r);
  bool lost = false;
  for (std::size_t f = 0; f < x.parts().size(); ++f) {
    std::vector<term> ts;
    const int e = r->factor(f).eisen_exp;
    for (auto t : x.part(f)) {
      int s = 0;
      while (t.mono.t + s * e < k[f]) ++s;
      if (s > 0) {
        if (md.val(t.coeff) < s) throw error("element is not divisible by the requested t-power");
        t.coeff /= md.p_power(s);
        lost = true;
      }
      t.mono.t = t.mono.t + s * e - k[f];
      ts.push_back(t);
    }
    layer_elem part = layer_elem::from_terms(r, f, ts);
    out = out + part;
  }
  if (lost || x.lossy()) out.mark_lossy();
  return out;
}

bool is_unit(const layer_elem& x) {
  const u64 p = x.ring()->p();
  for (auto& part : x.parts()) {
    if (part.empty()) return false;
    const term& lead = part.front();
    if (lead.mono != monomial{} || lead.coeff % p == 0) return false;
  }
  return true;
}

// ---------------------------------------------------------------- quotient

quot_elem::quot_elem(layer_ring_ptr r) : ring_(std::move(r)), c_(ring_->quot_dim(), 0) {}

quot_elem quot_elem::basis(const layer_ring_ptr& r, std::size_t idx, std::uint32_t c) {
  quot_elem x(r);
  x.set(idx, c);
  return x;
}

quot_elem quot_elem::one(const layer_ring_ptr& r) {
  quot_elem x(r);
  for (std::size_t f = 0; f < r->num_factors(); ++f)
    if (r->factor(f).ideal_t_exp > 0) x.c_[r->quot_index(f, 0, 0)] = 1 % r->p();
  return x;
}

bool quot_elem::is_zero() const {
  return std::all_of(c_.begin(), c_.end(), [](std::uint32_t v) { return v == 0; });
}

void quot_elem::check_same(const quot_elem& o) const {
  if (!ring_ || !o.ring_ || !same_ring(ring_, o.ring_)) throw ring_mismatch("quotient elements live in different rings");
}

quot_elem quot_elem::operator+(const quot_elem& o) const {
  check_same(o);
  quot_elem r(ring_);
  const u64 p = ring_->p();
  for (std::size_t i = 0; i < c_.size(); ++i) r.c_[i] = static_cast<std::uint32_t>((c_[i] + o.c_[i]) % p);
  return r;
}

quot_elem quot_elem::operator-(const quot_elem& o) const {
  check_same(o);
  quot_elem r(ring_);
  const u64 p = ring_->p();
  for (std::size_t i = 0; i < c_.size(); ++i) r.c_[i] = static_cast<std::uint32_t>((c_[i] + p - o.c_[i]) % p);
  return r;
}

quot_elem quot_elem::scaled(std::uint32_t a) const {
  quot_elem r(ring_);
  const u64 p = ring_->p();
  for (std::size_t i = 0; i < c_.size(); ++i) r.c_[i] = static_cast<std::uint32_t>((u64)c_[i] * a % p);
  return r;
}

quot_elem quot_elem::operator*(const quot_elem& o) const {
  check_same(o);
  struct nz {
    std::size_t f;
    int k;
    int vi;
    u64 c;
  };
  auto collect = [&](const quot_elem& q) {
    std::vector<nz> out;
    for (std::size_t i = 0; i < q.c_.size(); ++i) {
      if (!q.c_[i]) continue;
      auto [f, m] = ring_->quot_basis(i);
      out.push_back({f, m.t, ring_->var_index(f, m), q.c_[i]});
    }
    return out;
  };
  auto a = collect(*this);
  auto b = collect(o);
  std::vector<u64> acc(c_.size(), 0);
  const u64 p = ring_->p();
  for (auto& x : a) {
    const int cf = ring_->factor(x.f).ideal_t_exp;
    for (auto& y : b) {
      if (y.f != x.f || x.k + y.k >= cf) continue;
      int vi = ring_->var_add(x.f, x.vi, y.vi);
      if (vi < 0) continue;
      std::size_t idx = ring_->quot_index(x.f, x.k + y.k, vi);
      acc[idx] = (acc[idx] + x.c * y.c) % p;
    }
  }
  quot_elem r(ring_);
  for (std::size_t i = 0; i < acc.size(); ++i) r.c_[i] = static_cast<std::uint32_t>(acc[i]);
  return r;
}

quot_elem quot_elem::pow(u64 e) const {
  quot_elem result = one(ring_);
  quot_elem base = *this;
  while (e) {
    if (e & 1) result = result * base;
    e >>= 1;
    if (e) base = base * base;
  }
  return result;
}

bool quot_elem::operator==(const quot_elem& o) const { return same_ring(ring_, o.ring_) && c_ == o.c_; }

quot_elem reduce_mod_ideal(const layer_elem& x) {
  const auto& r = x.ring();
  quot_elem q(r);
  const u64 p = r->p();
  for (std::size_t f = 0; f < x.parts().size(); ++f) {
    const int c = r->factor(f).ideal_t_exp;
    for (auto& t : x.part(f)) {
      if (t.mono.t >= c || t.coeff % p == 0) continue;
      q.set(r->quot_index(f, t.mono.t, r->var_index(f, t.mono)), static_cast<std::uint32_t>(t.coeff % p));
    }
  }
  return q;
}

layer_elem canonical_lift(const quot_elem& x) {
  const auto& r = x.ring();
  std::vector<std::vector<term>> parts(r->num_factors());
  for (std::size_t i = 0; i < x.dim(); ++i) {
    if (!x[i]) continue;
    auto [f, m] = r->quot_basis(i);
    parts[f].push_back({m, x[i]});
  }
  layer_elem out(r);
  for (std::size_t f = 0; f < parts.size(); ++f) out = out + layer_elem::from_terms(r, f, parts[f]);
  return out;
}

}  // namespace tiltlab
