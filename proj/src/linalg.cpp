#include "tiltlab/linalg.hpp"

#include <deque>

namespace tiltlab {

sparse_vec sv_axpy(const modulus& md, const sparse_vec& x, u64 a, const sparse_vec& y) {
  sparse_vec out;
  out.reserve(x.size() + y.size());
  std::size_t i = 0, j = 0;
  while (i < x.size() || j < y.size()) {
    if (j == y.size() || (i < x.size() && x[i].first < y[j].first)) {
      out.push_back(x[i++]);
    } else if (i == x.size() || y[j].first < x[i].first) {
      u64 v = md.mul(a, y[j].second);
      if (v) out.emplace_back(y[j].first, v);
      ++j;
    } else {
      u64 v = md.add(x[i].second, md.mul(a, y[j].second));
      if (v) out.emplace_back(x[i].first, v);
      ++i;
      ++j;
    }
  }
  return out;
}

sparse_vec sv_scale(const modulus& md, const sparse_vec& x, u64 a) {
  sparse_vec out;
  out.reserve(x.size());
  for (auto& [i, v] : x) {
    u64 w = md.mul(v, a);
    if (w) out.emplace_back(i, w);
  }
  return out;
}

sparse_vec sv_from_dense(const std::vector<u64>& d) {
  sparse_vec out;
  for (std::size_t i = 0; i < d.size(); ++i)
    if (d[i]) out.emplace_back(static_cast<std::uint32_t>(i), d[i]);
  return out;
}

std::vector<u64> sv_to_dense(const sparse_vec& v, std::size_t n) {
  std::vector<u64> d(n, 0);
  for (auto& [i, x] : v) d[i] = x;
  return d;
}

namespace {

// Scales v so its leading coefficient is exactly p^a.
void normalize_lead(const modulus& md, sparse_vec& v) {
  u64 c = v.front().second;
  int a = md.val(c);
  u64 pa = md.p_power(a);
  u64 u = c / pa;
  if (u != 1) v = sv_scale(md, v, md.inv(u));
}

}  // namespace

void howell_basis::insert(sparse_vec v0) {
  std::deque<sparse_vec> pending;
  pending.push_back(std::move(v0));
  while (!pending.empty()) {
    sparse_vec v = std::move(pending.front());
    pending.pop_front();
    while (!v.empty()) {
      std::uint32_t lead = v.front().first;
      u64 c = v.front().second;
      int a = md_.val(c);
      auto it = rows_.find(lead);
      if (it == rows_.end()) {
        normalize_lead(md_, v);
        if (a > 0) pending.push_back(sv_scale(md_, v, md_.p_power(md_.n - a)));
        rows_.emplace(lead, std::move(v));
        break;
      }
      sparse_vec& r = it->second;
      int b = md_.val(r.front().second);
      if (a >= b) {
        u64 k = c / md_.p_power(b);
        v = sv_axpy(md_, v, md_.neg(k), r);
      } else {
        normalize_lead(md_, v);
        if (a > 0) pending.push_back(sv_scale(md_, v, md_.p_power(md_.n - a)));
        std::swap(v, r);
      }
    }
  }
}

sparse_vec howell_basis::reduce(sparse_vec v, std::uint32_t stop) const {
  while (!v.empty() && v.front().first < stop) {
    auto it = rows_.find(v.front().first);
    if (it == rows_.end()) break;
    u64 c = v.front().second;
    int b = md_.val(it->second.front().second);
    if (md_.val(c) < b) break;
    v = sv_axpy(md_, v, md_.neg(c / md_.p_power(b)), it->second);
  }
  return v;
}

std::size_t howell_basis::unit_pivots() const {
  std::size_t n = 0;
  for (auto& [k, r] : rows_)
    if (md_.val(r.front().second) == 0) ++n;
  return n;
}

std::size_t fp_rank(u64 p, const linear_map& f) {
  modulus md(p, 1);
  howell_basis h(md);
  for (auto& c : f.columns) {
    sparse_vec v;
    for (auto& [i, x] : c)
      if (x % p) v.emplace_back(i, x % p);
    h.insert(std::move(v));
  }
  return h.size();
}

namespace {

howell_basis augmented(const modulus& md, const linear_map& f) {
  howell_basis h(md);
  for (std::uint32_t i = 0; i < f.cols; ++i) {
    sparse_vec v;
    for (auto& [r, x] : f.columns[i]) {
      u64 y = x % md.m;
      if (y) v.emplace_back(r, y);
    }
    v.emplace_back(f.rows + i, 1);
    h.insert(std::move(v));
  }
  return h;
}

}  // namespace

std::vector<sparse_vec> kernel(const modulus& md, const linear_map& f) {
  howell_basis h = augmented(md, f);
  std::vector<sparse_vec> out;
  for (auto it = h.rows().lower_bound(f.rows); it != h.rows().end(); ++it) {
    sparse_vec v;
    for (auto& [i, x] : it->second) v.emplace_back(i - f.rows, x);
    out.push_back(std::move(v));
  }
  return out;
}

howell_basis image(const modulus& md, const linear_map& f) {
  howell_basis h(md);
  for (auto& c : f.columns) {
    sparse_vec v;
    for (auto& [i, x] : c)
      if (x % md.m) v.emplace_back(i, x % md.m);
    h.insert(std::move(v));
  }
  return h;
}

linear_solver::linear_solver(const modulus& md, const linear_map& f)
    : md_(md), rows_(f.rows), aug_(augmented(md, f)) {}

bool linear_solver::solve(const sparse_vec& y, sparse_vec& x) const {
  sparse_vec r = aug_.reduce(y, rows_);
  if (!r.empty() && r.front().first < rows_) return false;
  x.clear();
  for (auto& [i, v] : r) x.emplace_back(i - rows_, md_.neg(v));
  return true;
}

bool solve(const modulus& md, const linear_map& f, const sparse_vec& y, sparse_vec& x) {
  return linear_solver(md, f).solve(y, x);
}

bool same_span(const modulus& md, const std::vector<sparse_vec>& a, const std::vector<sparse_vec>& b) {
  howell_basis ha(md), hb(md);
  for (auto& v : a) ha.insert(v);
  for (auto& v : b) hb.insert(v);
  for (auto& v : a)
    if (!hb.contains(v)) return false;
  for (auto& v : b)
    if (!ha.contains(v)) return false;
  return true;
}

}  // namespace tiltlab
