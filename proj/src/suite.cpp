#include "tiltlab/suite.hpp"

#include <chrono>
#include <functional>
#include <sstream>

#include "tiltlab/element_text.hpp"
#include "tiltlab/errors.hpp"
#include "tiltlab/monoidal.hpp"
#include "tiltlab/ramified.hpp"
#include "tiltlab/tilt.hpp"

namespace tiltlab {

namespace {

using ojson = nlohmann::ordered_json;

// Failure notes accumulate; the criterion passes when none were recorded.
struct notes {
  std::vector<std::string> items;
  void require(bool ok, const std::string& what) {
    if (!ok) items.push_back(what);
  }
  std::string text() const {
    std::string s;
    for (const auto& i : items) s += (s.empty() ? "" : "; ") + i;
    return s;
  }
};

ojson verdict_map(const axiom_report& rep) {
  ojson j;
  for (const auto& v : rep.verdicts) j[v.axiom] = to_string(v.result.v);
  return j;
}

void require_axioms(notes& n, const axiom_report& rep, const std::string& label, int samples) {
  for (const auto& v : rep.verdicts) {
    const verdict want = v.axiom == "e" ? verdict::sampled_pass : verdict::pass;
    n.require(v.result.v == want, label + " (" + v.axiom + ") is " + to_string(v.result.v));
    if (v.axiom == "e") n.require(v.result.samples >= samples, label + " (e) used too few samples");
  }
  n.require(rep.verdicts.size() == 8, label + ": incomplete axiom report");
}

const rational kummer_eps(3, 25);

tower_ptr kummer_tower() { return build_tower(kummer_spec(5, 2, kummer_eps, 3, 6, 3)); }

kummer_cover_spec cover(u64 p, int m, int levels) {
  kummer_cover_spec s;
  s.prime = p;
  s.m = m;
  s.levels = levels;
  s.precision = {6, 3, rational(0)};
  return s;
}

void criterion_pure_axioms(criterion& c, notes& n, const suite_options& opt) {
  const int samples = std::max(200, opt.samples);
  for (int v : {0, 1}) {
    auto h = build_tower(pure_spec(5, 6, 3, v, rational(v ? 2 : 0)));
    axiom_report rep = check_axioms(*h, samples, opt.seed);
    const std::string label = "v=" + std::to_string(v);
    require_axioms(n, rep, label, samples);
    c.data[label] = ojson{{"verdicts", verdict_map(rep)}, {"truncation_dim", rep.truncation_dim}};
  }
}

void criterion_tilt_shape(criterion& c, notes& n, const suite_options&) {
  auto h = build_tower(pure_spec(5, 6, 3));
  tilt_presentation pr = small_tilt(h, 0, 3);
  const std::string pf = to_text(pr, p_flat(h, 0, 3));
  n.require(pr.describe() == "F_5[T]/(T^{125})", "presentation is " + pr.describe());
  n.require(pr.quotient_exponents() == std::vector<int>{125}, "quotient exponent is not 125");
  n.require(pf == "T", "p_flat is " + pf);
  c.data["presentation"] = pr.describe();
  c.data["p_flat"] = pf;
}

void criterion_monoidal(criterion& c, notes& n, const suite_options& opt) {
  auto h = build_tower(pure_spec(5, 6, 4));
  sharp_result sp = sharp(p_flat(h, 0, 4));
  sharp_result s1 = sharp(small_tilt_elem::one(h, 0, 4));
  n.require(sp.value == layer_elem::constant(h->layer(sp.target), 5), "sharp(p_flat) = " + to_text(sp.value));
  n.require(sp.effective_precision == rational(6), "effective precision " + to_string(sp.effective_precision));
  n.require(s1.value == layer_elem::constant(h->layer(s1.target), 1), "sharp(1) = " + to_text(s1.value));
  check_result mult = check_multiplicativity(h, 0, 3, 500, opt.seed);
  check_result lift = check_lift_independence(h, 0, 3, 100, opt.seed);
  n.require(!is_failure(mult.v) && mult.samples >= 500, "multiplicativity: " + mult.detail);
  n.require(!is_failure(lift.v) && lift.samples >= 100, "lift independence: " + lift.detail);
  c.data["sharp_p_flat"] = to_text(sp.value);
  c.data["effective_precision"] = to_string(sp.effective_precision);
  c.data["sharp_one"] = to_text(s1.value);
  c.data["multiplicativity"] = to_json(mult);
  c.data["lift_independence"] = to_json(lift);
}

// towers checked by criteria 4 and 5
std::vector<std::pair<tower_ptr, std::string>> sharp_towers() {
  return {{build_tower(pure_spec(5, 6, 4)), "pure"}, {kummer_tower(), "kummer"}};
}

void criterion_sharp_phi_iso(criterion& c, notes& n, const suite_options& opt) {
  for (auto& [h, label] : sharp_towers()) {
    ojson rows = ojson::array();
    for (int j = 0; j < h->depth(); ++j) {
      check_result phi = check_sharp_phi(h, j, 1, opt.samples, opt.seed);
      check_result iso = check_sharp1_iso(h, j, 1, opt.samples, opt.seed);
      n.require(phi.v == verdict::pass || phi.v == verdict::sampled_pass,
                label + " j=" + std::to_string(j) + " phi " + to_string(phi.v));
      n.require(iso.v == verdict::pass, label + " j=" + std::to_string(j) + " iso " + to_string(iso.v));
      rows.push_back(ojson{{"level", h->level(j)}, {"sharp_phi", to_string(phi.v)}, {"sharp1_iso", to_string(iso.v)}});
    }
    c.data[label] = rows;
  }
}

void criterion_sharpf(criterion& c, notes& n, const suite_options&) {
  for (auto& [h, label] : sharp_towers()) {
    ojson rows = ojson::array();
    for (int j = 0; j < h->depth(); ++j) {
      check_result r = check_sharpf(h, j, 1);
      n.require(r.v == verdict::pass, label + " j=" + std::to_string(j) + ": " + r.detail);
      rows.push_back(ojson{{"level", h->level(j)}, {"verdict", to_string(r.v)}, {"detail", r.detail}});
    }
    c.data[label] = rows;
  }
}

void criterion_idempotents(criterion& c, notes& n, const suite_options&) {
  for (int k : {2, 3}) {
    std::vector<tower_spec> parts(static_cast<std::size_t>(k), pure_spec(5, 6, 3));
    auto h = build_tower(product_spec(parts));
    idempotent_report r = idempotent_transfer(h, 0, 3);
    const std::size_t want = std::size_t{1} << k;
    n.require(r.result.v == verdict::pass, std::to_string(k) + " factors: " + r.result.detail);
    n.require(r.tilt_side.size() == want && r.layer_side.size() == want,
              std::to_string(k) + " factors: " + std::to_string(r.tilt_side.size()) + " tilt / " +
                  std::to_string(r.layer_side.size()) + " layer idempotents");
    c.data[std::to_string(k) + "_factors"] = ojson{{"tilt_side", r.tilt_side.size()}, {"layer_side", r.layer_side.size()}};
  }
}

void criterion_kummer_constants(criterion& c, notes& n, const suite_options& opt) {
  kummer_cover_spec s = cover(5, 2, 5);
  delta_table t = compute_delta_table(s);
  n.require(semigroup_conductor(2, 5) == 4, "conductor of <2,5> is not 4");
  std::int64_t pn = 1;
  for (const auto& r : t.rows) {
    const rational expect(1 * 4, 2 * 5 * pn);  // (m-1)(p-1) / (m p^{n+1})
    n.require(r.delta == expect, "delta_" + std::to_string(r.n) + " = " + to_string(r.delta));
    n.require(r.delta_elim == r.delta && r.delta_flat == r.delta, "methods disagree at n=" + std::to_string(r.n));
    n.require(r.scaled == rational(2, 5), "p^n delta_n = " + to_string(r.scaled));
    n.require(r.annihilator_exponent == 4, "annihilator exponent at n=" + std::to_string(r.n));
    pn *= 5;
  }
  n.require(t.rows.size() == 5, "table has " + std::to_string(t.rows.size()) + " rows");
  epsilon_witness w = find_epsilon(s, t, opt.seed);
  n.require(w.epsilon == kummer_eps && w.start_level == 2,
            "eps = " + to_string(w.epsilon) + ", N = " + std::to_string(w.start_level));
  const std::string v = verify_certificate(s, w);
  n.require(v.empty(), "certificate: " + v);
  c.data["delta_table"] = to_json(t);
  c.data["epsilon"] = to_string(w.epsilon);
  c.data["N"] = w.start_level;
  c.data["certificate_entries"] = w.certificate.size();
}

void criterion_assembly(criterion& c, notes& n, const suite_options& opt) {
  for (auto [p, m, levels] : {std::tuple<u64, int, int>{5, 2, 5}, {2, 3, 4}}) {
    kummer_cover_spec s = cover(p, m, levels);
    epsilon_witness w = find_epsilon(s, compute_delta_table(s), opt.seed);
    perfectoid_assembly a = assemble_checked(s, w, opt.samples, opt.seed);
    const std::string label = "p=" + std::to_string(p) + ",m=" + std::to_string(m);
    require_axioms(n, a.report, label, opt.samples);
    c.data[label] = ojson{{"epsilon", to_string(w.epsilon)},
                          {"N", w.start_level},
                          {"N_prime", a.n_prime},
                          {"layers", a.tower->depth() + 1},
                          {"verdicts", verdict_map(a.report)}};
    if (p == 5) {
      n.require(a.n_prime == 3, "N' = " + std::to_string(a.n_prime));
      perfectoid_assembly f = assemble_with_forced_epsilon(s, w, rational(1, 2), opt.samples, opt.seed);
      const axiom_verdict* f1 = f.report.find("f-1");
      n.require(f1 && f1->result.v == verdict::fail, "forced eps = 1/2 does not fail (f-1)");
      c.data["forced_eps_1/2"] = verdict_map(f.report);
    }
  }
}

void criterion_normality(criterion& c, notes& n, const suite_options& opt) {
  normality_report r = smalltilt_normality_report(kummer_tower(), opt.normality_samples, opt.seed);
  ojson rows = ojson::array();
  for (const auto& row : r.rows) {
    const std::string at = "level " + std::to_string(row.level);
    n.require(row.monogenic.v == closure_verdict::pass_exact, at + " presentation " + to_string(row.monogenic.v));
    n.require(row.root_closed.v == closure_verdict::pass_sampled && row.root_closed.checked >= 1000,
              at + " root closure " + to_string(row.root_closed.v));
    rows.push_back(ojson{{"level", row.level},
                         {"presentation", row.presentation},
                         {"monogenic", to_string(row.monogenic.v)},
                         {"root_closed", to_string(row.root_closed.v)},
                         {"samples", row.root_closed.checked}});
  }
  n.require(r.rows.size() == 3, "expected three realized levels");
  c.data["rows"] = rows;
}

struct battery_pair {
  ring_pair pair;
  bool negative = false;
};

ring_pair tilt_localization(const tower_ptr& h, int j, int m) {
  tilt_presentation pr = small_tilt(h, j, m);
  monomial mono;
  mono.t = pr.ring->factor(0).ideal_t_exp;
  layer_elem f(pr.ring);
  for (std::size_t k = 0; k < pr.ring->num_factors(); ++k) f = f + layer_elem::mono(pr.ring, k, mono);
  return localization_of_layer("tilt(" + std::to_string(j) + "," + std::to_string(m) + ") " + pr.describe(), pr.ring, f);
}

std::vector<battery_pair> closure_battery() {
  std::vector<battery_pair> out;
  auto add = [&](ring_pair p, bool neg = false) { out.push_back({std::move(p), neg}); };
  auto pure = build_tower(pure_spec(2, 2, 3));
  auto kum = build_tower(kummer_spec(2, 3, rational(1), 0, 2, 1));
  auto prod = build_tower(product_spec({pure_spec(2, 2, 1), pure_spec(2, 2, 1)}));
  auto named = [](std::string prefix, ring_pair p) {
    p.name = prefix + " " + p.name;
    return p;
  };
  for (int j = 0; j <= 3; ++j) add(named("pure", layer_localization(*pure, j)));
  for (int j = 0; j <= 1; ++j) add(named("kummer m=3", layer_localization(*kum, j)));
  for (int j = 0; j <= 1; ++j) add(named("pure x pure", layer_localization(*prod, j)));
  for (auto [j, m] : {std::pair{0, 1}, {0, 2}, {0, 3}, {1, 1}, {1, 2}, {2, 1}})
    add(named("pure", tilt_localization(pure, j, m)));
  add(named("kummer m=3", tilt_localization(kum, 0, 1)));
  add(identity_pair("identity on level 1", finite_algebra::from_layer(pure->layer(1))));
  add(identity_pair("identity on Z/4[t]/(t^3-2)", finite_algebra::from_layer(kum->layer(0))));

  auto y4 = finite_algebra::monogenic("Z/4[y]/(y^2-4)", 2, 2, "y", {4, 0});
  add(make_subring("{1,2y} in Z/4[y]/(y^2-4)", y4, {{1, 0}, {0, 2}}), true);
  auto y2 = finite_algebra::monogenic("Z/4[y]/(y^2-2)", 2, 2, "y", {2, 0});
  add(make_subring("{1,2y} in Z/4[y]/(y^2-2)", y2, {{1, 0}, {0, 2}}), true);
  auto t4 = finite_algebra::monogenic("Z/4[t]/(t^4-2)", 2, 2, "t", {2, 0, 0, 0});
  add(make_subring("{1,2t,t^2,t^3} in Z/4[t]/(t^4-2)", t4, {{1, 0, 0, 0}, {0, 2, 0, 0}, {0, 0, 1, 0}, {0, 0, 0, 1}}),
      true);
  auto w = finite_algebra::monogenic("Z/4[w]/(w^2)", 2, 2, "w", {0, 0});
  add(make_localization("Z/4[w]/(w^2), f = 2", w, {2, 0}, rational(1), rational(2)), true);
  linear_map m;
  m.rows = m.cols = 2;
  m.columns = {{{0, 1}}, {{1, 2}}};
  add(make_extension("Z/4[w]/(w^2), w -> 2w", w, w, m, {2, 0}), true);
  return out;
}

int verdict_class(closure_verdict v) {
  switch (v) {
    case closure_verdict::pass_exact:
    case closure_verdict::pass_sampled: return 0;
    case closure_verdict::fail: return 1;
    case closure_verdict::undecided: return 2;
  }
  return 3;
}

void criterion_closure(criterion& c, notes& n, const suite_options& opt) {
  auto battery = closure_battery();
  ojson rows = ojson::array();
  int negatives = 0;
  for (std::size_t i = 0; i < battery.size(); ++i) {
    const auto& [pair, negative] = battery[i];
    closure_result ex = check_root_closed(pair, 2, closure_mode::exact);
    closure_result sa = check_root_closed(pair, 2, closure_mode::sampled, opt.closure_samples, opt.seed + i);
    n.require(verdict_class(ex.v) == verdict_class(sa.v),
              pair.name + ": exact " + to_string(ex.v) + " vs sampled " + to_string(sa.v));
    if (negative) {
      ++negatives;
      n.require(ex.failed() && sa.failed(), pair.name + ": negative control not detected");
    } else {
      n.require(!ex.failed(), pair.name + ": unexpected failure, witness " + ex.witness);
    }
    ojson row{{"pair", pair.name},
              {"negative", negative},
              {"exact", to_string(ex.v)},
              {"exact_checked", ex.checked},
              {"exact_witness", ex.witness},
              {"sampled", to_string(sa.v)},
              {"sampled_witness", sa.witness}};
    rows.push_back(row);
  }
  // cartesian squares: tower steps hold, the doubling map does not
  ojson cart = ojson::array();
  auto pure = build_tower(pure_spec(2, 2, 3));
  for (int j = 0; j < pure->depth(); ++j) {
    closure_result r = is_cartesian_mod_f(tower_step_pair(*pure, j));
    n.require(r.v == closure_verdict::pass_exact, "tower step " + std::to_string(j) + " not cartesian");
    cart.push_back(ojson{{"pair", "level " + std::to_string(j) + " -> " + std::to_string(j + 1)}, {"verdict", to_string(r.v)}});
  }
  for (const auto& [pair, negative] : battery)
    if (pair.kind == pair_kind::extension && negative && pair.A) {
      closure_result r = is_cartesian_mod_f(pair);
      n.require(r.failed(), pair.name + ": cartesian negative control not detected");
      cart.push_back(ojson{{"pair", pair.name}, {"verdict", to_string(r.v)}, {"witness", r.witness}});
    }
  c.data["cartesian"] = cart;
  n.require(battery.size() >= 20, "fewer than 20 pairs");
  n.require(negatives >= 3, "fewer than 3 negative controls");
  c.data["pairs"] = rows;
}

struct criterion_def {
  int id;
  const char* title;
  std::function<void(criterion&, notes&, const suite_options&)> run;
};

const std::vector<criterion_def>& definitions() {
  static const std::vector<criterion_def> defs = {
      {1, "pure tower axioms", criterion_pure_axioms},
      {2, "tilt shape", criterion_tilt_shape},
      {3, "monoidal exactness", criterion_monoidal},
      {4, "sharp diagram and quotient isomorphism", criterion_sharp_phi_iso},
      {5, "sharp of the pillar generator", criterion_sharpf},
      {6, "idempotent bijection", criterion_idempotents},
      {7, "Kummer constants", criterion_kummer_constants},
      {8, "Kummer perfectoid assembly", criterion_assembly},
      {9, "small-tilt normality", criterion_normality},
      {10, "closure oracles", criterion_closure},
  };
  return defs;
}

}  // namespace

bool suite_report::passed() const {
  for (const auto& c : criteria)
    if (!c.passed) return false;
  return !criteria.empty();
}

const criterion* suite_report::find(int id) const {
  for (const auto& c : criteria)
    if (c.id == id) return &c;
  return nullptr;
}

criterion run_criterion(int id, const suite_options& opt) {
  for (const auto& d : definitions()) {
    if (d.id != id) continue;
    criterion c;
    c.id = id;
    c.title = d.title;
    c.data = ojson::object();
    notes n;
    auto t0 = std::chrono::steady_clock::now();
    try {
      d.run(c, n, opt);
    } catch (const std::exception& e) {
      n.require(false, std::string("exception: ") + e.what());
    }
    c.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    c.passed = n.items.empty();
    c.detail = c.passed ? "ok" : n.text();
    return c;
  }
  throw spec_error("no criterion " + std::to_string(id));
}

suite_report run_suite(const suite_options& opt) {
  suite_report r;
  for (const auto& d : definitions()) r.criteria.push_back(run_criterion(d.id, opt));
  return r;
}

command_report suite_command(const suite_options& opt) {
  suite_report rep = run_suite(opt);
  command_report out;
  out.json["schema"] = report_schema;
  out.json["command"] = "suite";
  out.json["seed"] = opt.seed;
  out.json["samples"] = opt.samples;
  ojson cs = ojson::array();
  std::ostringstream md;
  md << "## Acceptance battery (seed " << opt.seed << ")\n\n";
  for (const auto& c : rep.criteria) {
    cs.push_back(ojson{{"id", c.id}, {"title", c.title}, {"passed", c.passed}, {"detail", c.detail}, {"data", c.data}});
    md << "- [" << (c.passed ? "x" : " ") << "] " << c.id << ". " << c.title << (c.passed ? "" : ": " + c.detail) << "\n";
  }
  out.json["criteria"] = cs;
  out.json["passed"] = rep.passed();
  out.ok = rep.passed();
  out.markdown = md.str();
  return out;
}

}  // namespace tiltlab
