#include "tiltlab/report.hpp"

#include <fstream>
#include <sstream>

#include "tiltlab/element_text.hpp"
#include "tiltlab/errors.hpp"
#include "tiltlab/monoidal.hpp"
#include "tiltlab/tilt.hpp"

namespace tiltlab {

namespace {

using ojson = nlohmann::ordered_json;

ojson header(const std::string& command) {
  ojson j;
  j["schema"] = report_schema;
  j["command"] = command;
  return j;
}

std::string cell(std::string s) {
  for (auto& c : s)
    if (c == '|') c = '/';
  return s;
}

class md_table {
 public:
  explicit md_table(std::vector<std::string> head) : head_(std::move(head)) {}
  void row(std::vector<std::string> r) { rows_.push_back(std::move(r)); }
  std::string str() const {
    std::ostringstream os;
    os << "|";
    for (const auto& h : head_) os << " " << h << " |";
    os << "\n|";
    for (std::size_t i = 0; i < head_.size(); ++i) os << "---|";
    os << "\n";
    for (const auto& r : rows_) {
      os << "|";
      for (const auto& c : r) os << " " << cell(c) << " |";
      os << "\n";
    }
    return os.str();
  }

 private:
  std::vector<std::string> head_;
  std::vector<std::vector<std::string>> rows_;
};

bool closure_ok(const closure_result& r) { return !r.failed(); }

std::string axiom_markdown(const axiom_report& rep) {
  md_table t({"axiom", "verdict", "detail", "witness"});
  for (const auto& v : rep.verdicts) t.row({v.axiom, to_string(v.result.v), v.result.detail, v.result.witness});
  return t.str() + "\npillar: `" + rep.pillar + "`\n";
}

tower_spec with_depth(tower_spec s, int depth) {
  if (s.precision.depth < depth) s.precision.depth = depth;
  for (auto& c : s.components) c = with_depth(c, depth);
  return s;
}

std::string closure_line(const closure_result& r) {
  std::string s = r.property + ": " + to_string(r.v) + " (" + std::to_string(r.checked) + " checked)";
  if (!r.witness.empty()) s += ", witness `" + r.witness + "`";
  if (!r.detail.empty()) s += ", " + r.detail;
  return s;
}

}  // namespace

ojson to_json(const check_result& r) {
  ojson j;
  j["verdict"] = to_string(r.v);
  j["witness"] = r.witness;
  j["detail"] = r.detail;
  j["samples"] = r.samples;
  return j;
}

ojson to_json(const closure_result& r) {
  ojson j;
  j["property"] = r.property;
  j["verdict"] = to_string(r.v);
  j["witness"] = r.witness;
  j["detail"] = r.detail;
  j["checked"] = r.checked;
  return j;
}

ojson to_json(const axiom_report& rep) {
  ojson j;
  auto vs = ojson::array();
  for (const auto& v : rep.verdicts) {
    ojson e;
    e["axiom"] = v.axiom;
    e.update(to_json(v.result));
    vs.push_back(e);
  }
  j["verdicts"] = vs;
  j["pillar"] = rep.pillar;
  auto ts = ojson::array();
  for (const auto& t : rep.torsion)
    ts.push_back(ojson{{"level", t.level}, {"basis", t.basis}, {"precision_artifact", t.precision_artifact}});
  j["torsion"] = ts;
  j["truncation_dim"] = rep.truncation_dim;
  j["passed"] = rep.passed();
  return j;
}

ojson to_json(const delta_table& t) {
  ojson j;
  j["p"] = t.p;
  j["m"] = t.m;
  j["n_digits"] = t.n_digits;
  auto rows = ojson::array();
  for (const auto& r : t.rows)
    rows.push_back(ojson{{"n", r.n},
                         {"delta", to_string(r.delta)},
                         {"delta_elimination", to_string(r.delta_elim)},
                         {"delta_flat", to_string(r.delta_flat)},
                         {"scaled", to_string(r.scaled)},
                         {"annihilator_exponent", r.annihilator_exponent},
                         {"refined_lattice", r.refined_lattice},
                         {"integral_scaled", r.integral_scaled},
                         {"bound_ok", r.bound_ok}});
  j["rows"] = rows;
  j["c"] = to_string(t.c);
  j["colimit_bound"] = to_string(t.colimit_bound);
  auto tails = ojson::array();
  for (const auto& r : t.tails)
    tails.push_back(ojson{{"n", r.n},
                          {"k", r.k},
                          {"conductor_bound", to_string(r.conductor_bound)},
                          {"delta_sum", to_string(r.delta_sum)},
                          {"scaled", to_string(r.scaled)},
                          {"ok", r.ok}});
  j["tails"] = tails;
  return j;
}

tower_spec load_tower_spec(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw spec_error("cannot open spec file '" + path + "'");
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw spec_error("spec file '" + path + "' is not valid JSON: " + e.what());
  }
  return tower_spec_from_json(j);
}

command_report axioms_command(const tower_spec& spec, int samples, std::uint64_t seed) {
  command_report out;
  auto h = build_tower(spec);
  axiom_report rep = check_axioms(*h, samples, seed);
  out.json = header("axioms");
  out.json["spec"] = tower_spec_to_json(spec);
  out.json["samples"] = samples;
  out.json["seed"] = seed;
  out.json.update(to_json(rep));
  out.ok = rep.passed();
  out.markdown = "## Axioms\n\nlayers: " + std::to_string(h->depth() + 1) + ", start level " +
                 std::to_string(h->start_level()) + ", seed " + std::to_string(seed) + "\n\n" + axiom_markdown(rep);
  return out;
}

command_report tilt_command(const tower_spec& spec, const tilt_request& req) {
  command_report out;
  auto h = build_tower(with_depth(spec, req.layer + req.depth));
  tilt_presentation pr = small_tilt(h, req.layer, req.depth);
  out.json = header("tilt");
  out.json["spec"] = tower_spec_to_json(h->spec());
  out.json.update(tilt_to_json(pr));
  std::ostringstream md;
  md << "## Small tilt\n\nlevel " << h->level(req.layer) << ", depth " << req.depth << ": `" << pr.describe()
     << "`\n\n- p_flat = `" << out.json["p_flat"].get<std::string>() << "`\n- f_flat = `"
     << out.json["f_flat"].get<std::string>() << "`\n";
  if (!req.element.empty()) {
    small_tilt_elem x = parse_tilt_elem(pr, req.element);
    ojson e;
    e["input"] = req.element;
    e["presentation"] = to_text(pr, x);
    auto comps = ojson::array();
    for (int i = 0; i <= req.depth; ++i)
      comps.push_back(ojson{{"level", h->level(req.layer + i)}, {"component", to_text(x.component(i))}});
    e["components"] = comps;
    out.json["element"] = e;
    md << "- element `" << req.element << "` = `" << to_text(pr, x) << "`\n";
  }
  if (req.idempotents) {
    idempotent_report ir = idempotent_transfer(h, req.layer, req.depth);
    out.json["idempotents"] = ojson{{"result", to_json(ir.result)}, {"tilt_side", ir.tilt_side}, {"layer_side", ir.layer_side}};
    out.ok = out.ok && !is_failure(ir.result.v);
    md << "\nidempotents: " << to_string(ir.result.v) << " (" << ir.tilt_side.size() << " on each side)\n";
  }
  if (req.torsion) {
    torsion_transfer_report tr = torsion_transfer_check(h, req.depth);
    auto rows = ojson::array();
    for (const auto& r : tr.rows)
      rows.push_back(ojson{{"level", r.level}, {"tilt_order_log", r.tilt_order_log}, {"layer_order_log", r.layer_order_log}});
    out.json["torsion"] = ojson{{"result", to_json(tr.result)}, {"rows", rows}};
    out.ok = out.ok && !is_failure(tr.result.v);
    md << "\ntorsion transfer: " << to_string(tr.result.v) << " (" << tr.result.detail << ")\n";
  }
  out.markdown = md.str();
  return out;
}

command_report sharp_command(const tower_spec& spec, const sharp_request& req) {
  command_report out;
  auto h = build_tower(with_depth(spec, req.layer + req.depth));
  tilt_presentation pr = small_tilt(h, req.layer, req.depth);
  small_tilt_elem x = parse_tilt_elem(pr, req.element);
  sharp_result s;
  if (req.randomized) {
    rng_t rng = make_rng(req.seed, 0x5A);
    s = sharp_randomized(x, rng);
  } else {
    s = sharp(x);
  }
  out.json = header("sharp");
  out.json["spec"] = tower_spec_to_json(h->spec());
  out.json["layer"] = h->level(req.layer);
  out.json["depth"] = req.depth;
  out.json["element"] = req.element;
  out.json["presentation"] = to_text(pr, x);
  out.json["randomized"] = req.randomized;
  out.json["value"] = to_text(s.value);
  out.json["value_level"] = h->level(s.target);
  out.json["effective_precision"] = to_string(s.effective_precision);
  std::ostringstream md;
  md << "## Sharp\n\n`" << req.element << "` in `" << pr.describe() << "` maps to `" << to_text(s.value)
     << "` at level " << h->level(s.target) << ", effective precision " << to_string(s.effective_precision) << "\n";
  if (req.verify) {
    ojson checks;
    auto put = [&](const char* name, const check_result& r) {
      checks[name] = to_json(r);
      out.ok = out.ok && !is_failure(r.v);
      md << "- " << name << ": " << to_string(r.v) << (r.witness.empty() ? "" : " witness `" + r.witness + "`") << "\n";
    };
    md << "\n";
    put("sharp_phi", check_sharp_phi(h, req.layer, req.depth, req.samples, req.seed));
    put("sharp1_iso", check_sharp1_iso(h, req.layer, req.depth, req.samples, req.seed));
    put("sharpf", check_sharpf(h, req.layer, req.depth));
    put("multiplicativity", check_multiplicativity(h, req.layer, req.depth, req.samples, req.seed));
    put("lift_independence", check_lift_independence(h, req.layer, req.depth, std::max(1, req.samples / 5), req.seed));
    out.json["checks"] = checks;
  }
  out.markdown = md.str();
  return out;
}

command_report closure_command(const tower_spec& spec, const closure_request& req) {
  command_report out;
  out.json = header("closure");
  auto h = build_tower(with_depth(spec, req.check == "cartesian" ? req.layer + 1 : req.layer));
  out.json["spec"] = tower_spec_to_json(h->spec());
  out.json["check"] = req.check;
  out.json["mode"] = req.mode == closure_mode::exact ? "exact" : "sampled";
  std::ostringstream md;
  md << "## Closure: " << req.check << "\n\n";
  const u64 n = req.n ? req.n : h->p();
  auto single = [&](const closure_result& r) {
    out.json["layer"] = h->level(req.layer);
    out.json["result"] = to_json(r);
    out.ok = closure_ok(r);
    md << "level " << h->level(req.layer) << ": " << closure_line(r) << "\n";
  };
  if (req.check == "root_closed") {
    single(check_root_closed(layer_localization(*h, req.layer), n, req.mode, req.samples, req.seed));
  } else if (req.check == "cartesian") {
    single(is_cartesian_mod_f(tower_step_pair(*h, req.layer)));
  } else if (req.check == "almost") {
    if (req.element.empty()) throw spec_error("almost needs --element");
    ring_pair pair = layer_localization(*h, req.layer);
    coords a = parse_layer_elem(h->layer(req.layer), req.element).coordinates();
    out.json["element"] = req.element;
    out.json["c0"] = req.c0;
    single(almost_integral_witness(pair, a, req.c0, req.c_cap, req.n_cap));
  } else if (req.check == "monogenic") {
    tilt_presentation pr = small_tilt(h, req.layer, h->depth() - req.layer);
    out.json["presentation"] = pr.describe();
    single(monogenic_presentation_check(*finite_algebra::from_layer(pr.ring)));
  } else if (req.check == "transfer") {
    transfer_report rep = transfer_suite(h, req.mode, req.samples, req.seed);
    auto rows = ojson::array();
    md_table t({"check", "level", "verdict", "detail"});
    for (const auto& r : rep.rows) {
      rows.push_back(ojson{{"check", r.check}, {"level", r.level}, {"result", to_json(r.result)}});
      t.row({r.check, std::to_string(r.level), to_string(r.result.v), r.result.detail});
    }
    out.json["rows"] = rows;
    out.ok = rep.passed();
    md << t.str();
  } else {
    throw spec_error("unknown closure check '" + req.check + "'");
  }
  out.json["passed"] = out.ok;
  out.markdown = md.str();
  return out;
}

command_report ramify_command(const ramify_request& req) {
  command_report out;
  const auto& cs = req.cover;
  out.json = header("ramify");
  out.json["cover"] = ojson{{"prime", cs.prime},
                            {"m", cs.m},
                            {"levels", cs.levels},
                            {"n_digits", cs.precision.n_digits},
                            {"depth", cs.precision.depth}};
  out.json["seed"] = req.seed;
  std::ostringstream md;

  auto layers = build_cover_layers(cs, req.samples, req.seed);
  auto lj = ojson::array();
  for (const auto& L : layers) {
    lj.push_back(ojson{{"level", L.level},
                       {"ring", L.ring->describe()},
                       {"generators_ok", L.generators_ok},
                       {"closure", to_json(L.closure)}});
    out.ok = out.ok && L.generators_ok && !L.closure.failed();
  }
  out.json["cover_layers"] = lj;

  delta_table table = compute_delta_table(cs);
  out.json["delta_table"] = to_json(table);
  md << "## Kummer cover p = " << cs.prime << ", m = " << cs.m << "\n\n";
  md_table dt({"n", "delta_n", "p^n delta_n", "annihilator exponent"});
  for (const auto& r : table.rows)
    dt.row({std::to_string(r.n), to_string(r.delta), to_string(r.scaled), std::to_string(r.annihilator_exponent)});
  md << dt.str() << "\nc = " << to_string(table.c) << ", colimit bound c p/(p-1) = " << to_string(table.colimit_bound)
     << "\n";
  for (const auto& r : table.rows) out.ok = out.ok && r.bound_ok && r.refined_lattice;
  for (const auto& r : table.tails) out.ok = out.ok && r.ok;

  epsilon_witness w = find_epsilon(cs, table, req.seed);
  const std::string verify = verify_certificate(cs, w);
  std::size_t generators = 0;
  for (const auto& c : w.certificate) generators += c.kind == "generator";
  auto samples = ojson::array();
  for (const auto& c : w.certificate)
    if (c.kind != "generator" || samples.size() < 3)
      samples.push_back(ojson{{"level", c.level}, {"kind", c.kind}, {"s", to_text(c.s)}, {"a", to_text(c.a)}, {"b", to_text(c.b)}});
  out.json["epsilon"] = ojson{{"epsilon", to_string(w.epsilon)},
                              {"N", w.start_level},
                              {"certificate_entries", w.certificate.size()},
                              {"generator_entries", generators},
                              {"certificate_verified", verify.empty()},
                              {"verification_error", verify},
                              {"sample_entries", samples}};
  out.ok = out.ok && verify.empty();

  perfectoid_assembly a = assemble_checked(cs, w, req.samples, req.seed);
  out.json["assembly"] = ojson{{"N_prime", a.n_prime}, {"ideal_exp", to_string(a.ideal_exp)}, {"axioms", to_json(a.report)}};
  out.ok = out.ok && a.report.passed();
  md << "\neps = " << to_string(w.epsilon) << ", N = " << w.start_level << ", N' = " << a.n_prime
     << ", certificate " << (verify.empty() ? "verified" : "FAILED: " + verify) << " (" << w.certificate.size()
     << " entries)\n\n### Axioms from N'\n\n"
     << axiom_markdown(a.report);

  normality_report nr = smalltilt_normality_report(a.tower, req.normality_samples, req.seed);
  auto rows = ojson::array();
  md_table nt({"level", "tilt depth", "presentation", "monogenic", "p-root closed"});
  for (const auto& r : nr.rows) {
    rows.push_back(ojson{{"level", r.level},
                         {"depth", r.depth},
                         {"presentation", r.presentation},
                         {"monogenic", to_json(r.monogenic)},
                         {"root_closed", to_json(r.root_closed)}});
    nt.row({std::to_string(r.level), std::to_string(r.depth), r.presentation, to_string(r.monogenic.v),
            to_string(r.root_closed.v)});
  }
  out.json["normality"] = ojson{{"passed", nr.passed()}, {"rows", rows}};
  out.ok = out.ok && nr.passed();
  md << "\n### Small-tilt normality\n\n" << nt.str();

  if (req.forced_epsilon) {
    perfectoid_assembly f = assemble_with_forced_epsilon(cs, w, *req.forced_epsilon, req.samples, req.seed);
    out.json["forced"] = ojson{{"ideal_exp", to_string(*req.forced_epsilon)}, {"axioms", to_json(f.report)}};
    out.ok = out.ok && f.report.passed();
    md << "\n### Forced eps = " << to_string(*req.forced_epsilon) << "\n\n" << axiom_markdown(f.report);
  }
  out.json["passed"] = out.ok;
  out.markdown = md.str();
  return out;
}

}  // namespace tiltlab
