#include "tiltlab/torsion.hpp"

#include <algorithm>

#include "tiltlab/errors.hpp"

namespace tiltlab {

torsion_span genuine_torsion(const torsion_problem& prob) {
  torsion_span out;
  {
    linear_map f = prob.base_map();
    out.naive_kernel_rank = kernel(prob.base, f).size();
  }
  howell_basis prev(prob.base);
  bool have_prev = false;
  for (int c = 1; c <= std::max(2, prob.max_power); ++c) {
    howell_basis cur(prob.base);
    for (auto& g : kernel(prob.refined, prob.refined_power_map(c))) cur.insert(prob.project(g));
    out.power = c;
    if (have_prev) {
      bool stable = cur.size() == prev.size();
      if (stable)
        for (auto& [k, row] : cur.rows())
          if (!prev.contains(row)) {
            stable = false;
            break;
          }
      if (stable) break;
    }
    prev = std::move(cur);
    have_prev = true;
  }
  for (auto& [k, row] : prev.rows()) out.generators.push_back(row);
  out.precision_artifact = out.naive_kernel_rank > 0 && out.generators.empty();
  return out;
}

linear_map multiplication_map(const layer_elem& g) {
  const auto& r = g.ring();
  linear_map m;
  m.rows = m.cols = static_cast<std::uint32_t>(r->module_dim());
  m.columns.resize(m.cols);
  for (std::uint32_t i = 0; i < m.cols; ++i) {
    auto [f, mono] = r->module_basis(i);
    layer_elem col = layer_elem::mono(r, f, mono) * g;
    sparse_vec v;
    for (std::size_t ff = 0; ff < col.parts().size(); ++ff)
      for (auto& t : col.part(ff)) v.emplace_back(static_cast<std::uint32_t>(r->module_index(ff, t.mono)), t.coeff);
    std::sort(v.begin(), v.end());
    m.columns[i] = std::move(v);
  }
  return m;
}

namespace {

layer_elem lift_to(const layer_ring_ptr& target, const layer_elem& x) {
  layer_elem out(target);
  for (std::size_t f = 0; f < x.parts().size(); ++f) out = out + layer_elem::from_terms(target, f, x.part(f));
  return out;
}

}  // namespace

torsion_result torsion_submodule(const layer_ring_ptr& ring, const layer_elem& f) {
  if (!same_ring(ring, f.ring())) throw ring_mismatch("torsion generator lives in another ring");
  if (f.is_zero()) throw error("torsion_submodule needs a nonzero element");
  layer_ring_ptr fine = ring->refined();
  layer_elem f2 = lift_to(fine, f);
  int max_e = 1;
  for (auto& fac : ring->factors()) max_e = std::max(max_e, fac.eisen_exp);

  torsion_problem prob;
  prob.base = ring->mod();
  prob.refined = fine->mod();
  prob.base_dim = static_cast<std::uint32_t>(ring->module_dim());
  prob.refined_dim = static_cast<std::uint32_t>(fine->module_dim());
  prob.max_power = ring->n_digits() * max_e;
  prob.base_map = [&] { return multiplication_map(f); };
  prob.refined_power_map = [&](int c) { return multiplication_map(f2.pow(static_cast<u64>(c))); };
  prob.project = [&](const sparse_vec& v) {
    sparse_vec out;
    for (auto& [i, x] : v) {
      auto [fac, mono] = fine->module_basis(i);
      if (mono.t >= ring->factor(fac).eisen_exp) continue;
      u64 y = x % ring->mod().m;
      if (y) out.emplace_back(static_cast<std::uint32_t>(ring->module_index(fac, mono)), y);
    }
    std::sort(out.begin(), out.end());
    return out;
  };
  torsion_span span = genuine_torsion(prob);

  torsion_result res;
  res.precision_artifact = span.precision_artifact;
  res.naive_kernel_rank = span.naive_kernel_rank;
  res.power = span.power;
  for (auto& g : span.generators) res.basis.push_back(layer_elem::from_coordinates(ring, sv_to_dense(g, ring->module_dim())));
  return res;
}

}  // namespace tiltlab
