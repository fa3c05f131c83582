// tiltlab: verifier front end. Exit 0 when every verdict passes, 1 on a
// failing verdict (the report is still written), 2 on usage or spec errors.

#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "tiltlab/errors.hpp"
#include "tiltlab/rational.hpp"
#include "tiltlab/report.hpp"
#include "tiltlab/suite.hpp"

using namespace tiltlab;

namespace {

struct common_opts {
  std::optional<int> prec;
  std::optional<int> depth;
  int samples = 200;
  std::uint64_t seed = 7;
  std::string format = "json";
  std::string out;
};

struct tower_opts {
  std::string spec;
  u64 p = 5;
  std::string kind = "pure";
  int m = 2;
  int vars = 0;
  std::string var_cap = "0";
  std::string eps = "1";
  int start = 0;
};

void add_common(CLI::App* cmd, common_opts& c) {
  cmd->add_option("--prec", c.prec, "p-adic digits N");
  cmd->add_option("--depth", c.depth, "tower depth");
  cmd->add_option("--samples", c.samples, "samples for randomized checks")->capture_default_str();
  cmd->add_option("--seed", c.seed, "seed for every sampled check")->capture_default_str();
  cmd->add_option("--format", c.format, "json or md")->check(CLI::IsMember({"json", "md"}))->capture_default_str();
  cmd->add_option("--out", c.out, "write the report here instead of stdout");
}

void add_tower(CLI::App* cmd, tower_opts& t) {
  cmd->add_option("--spec", t.spec, "tower spec JSON file");
  cmd->add_option("--p", t.p, "prime (inline spec)")->capture_default_str();
  cmd->add_option("--kind", t.kind, "pure or kummer (inline spec)")
      ->check(CLI::IsMember({"pure", "kummer"}))
      ->capture_default_str();
  cmd->add_option("--m", t.m, "Kummer exponent (inline spec)")->capture_default_str();
  cmd->add_option("--vars", t.vars, "number of perfectoid variables (inline spec)")->capture_default_str();
  cmd->add_option("--var-cap", t.var_cap, "variable degree cap (inline spec)")->capture_default_str();
  cmd->add_option("--eps", t.eps, "ideal exponent (inline spec)")->capture_default_str();
  cmd->add_option("--start", t.start, "start level (inline spec)")->capture_default_str();
}

tower_spec resolve(const tower_opts& t, const common_opts& c) {
  tower_spec s;
  if (!t.spec.empty()) {
    s = load_tower_spec(t.spec);
  } else {
    nlohmann::json j{{"prime", t.p},   {"kind", t.kind},    {"num_vars", t.vars},
                     {"var_degree_cap", t.var_cap}, {"ideal_exp", t.eps}, {"start_level", t.start}};
    if (t.kind == "kummer") j["m"] = t.m;
    s = tower_spec_from_json(j);
  }
  auto apply = [&](tower_spec& x, auto&& self) -> void {
    if (c.prec) x.precision.n_digits = *c.prec;
    if (c.depth) x.precision.depth = *c.depth;
    for (auto& comp : x.components) self(comp, self);
  };
  apply(s, apply);
  return s;
}

int emit(const command_report& r, const common_opts& c) {
  std::string text = c.format == "md" ? r.markdown : r.json.dump(2) + "\n";
  if (c.out.empty()) {
    std::cout << text;
  } else {
    std::ofstream f(c.out);
    if (!f) throw spec_error("cannot write '" + c.out + "'");
    f << text;
  }
  return r.ok ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Finite-level verifier for perfectoid towers and their tilts"};
  app.require_subcommand(1);

  common_opts c;
  tower_opts t;

  auto* axioms = app.add_subcommand("axioms", "run the tower axiom suite");
  add_common(axioms, c);
  add_tower(axioms, t);

  int layer = 0;
  std::optional<int> tilt_depth;
  std::string element;
  bool idempotents = false, torsion = false, randomized = false, verify = false;

  auto* tilt = app.add_subcommand("tilt", "present a small tilt");
  add_common(tilt, c);
  add_tower(tilt, t);
  tilt->add_option("--layer", layer, "tower-relative layer index")->capture_default_str();
  tilt->add_option("--tilt-depth", tilt_depth, "tilt depth (default: tower depth - layer)");
  tilt->add_option("--element", element, "tilt element, e.g. \"pflat + T^{3}\"");
  tilt->add_flag("--idempotents", idempotents, "match idempotents of the tilt and the layer");
  tilt->add_flag("--torsion", torsion, "compare f-torsion orders");

  auto* sharp = app.add_subcommand("sharp", "evaluate the sharp map");
  add_common(sharp, c);
  add_tower(sharp, t);
  sharp->add_option("--layer", layer, "tower-relative layer index")->capture_default_str();
  sharp->add_option("--tilt-depth", tilt_depth, "tilt depth (default: tower depth - layer)");
  sharp->add_option("--element", element, "tilt element (default pflat)");
  sharp->add_flag("--randomized", randomized, "perturb lifts by random elements of the ideal");
  sharp->add_flag("--verify", verify, "also run the sharp-side checks at this layer");

  closure_request creq;
  std::string mode = "sampled";
  auto* closure = app.add_subcommand("closure", "closure checks on a layer");
  add_common(closure, c);
  add_tower(closure, t);
  closure->add_option("--layer", layer, "tower-relative layer index")->capture_default_str();
  closure->add_option("--check", creq.check, "root_closed, cartesian, almost, monogenic or transfer")
      ->check(CLI::IsMember({"root_closed", "cartesian", "almost", "monogenic", "transfer"}))
      ->capture_default_str();
  closure->add_option("--mode", mode, "exact or sampled")->check(CLI::IsMember({"exact", "sampled"}))->capture_default_str();
  closure->add_option("--n", creq.n, "root degree (default p)");
  closure->add_option("--element", element, "numerator a for --check almost");
  closure->add_option("--c0", creq.c0, "denominator exponent for --check almost")->capture_default_str();
  closure->add_option("--ccap", creq.c_cap, "largest c searched")->capture_default_str();
  closure->add_option("--ncap", creq.n_cap, "largest power checked")->capture_default_str();

  ramify_request rreq;
  int levels = 5;
  std::optional<std::string> force_eps;
  int normality_samples = 1000;
  auto* ramify = app.add_subcommand("ramify", "Kummer cover constants and perfectoid assembly");
  add_common(ramify, c);
  ramify->add_option("--p", rreq.cover.prime, "prime")->capture_default_str();
  ramify->add_option("--m", rreq.cover.m, "cover exponent, prime to p")->capture_default_str();
  ramify->add_option("--levels", levels, "table rows")->capture_default_str();
  ramify->add_option("--normality-samples", normality_samples, "samples for the tilt closure check")->capture_default_str();
  ramify->add_option("--force-eps", force_eps, "negative control: build I_0 from this exponent");

  suite_options sopt;
  auto* suite = app.add_subcommand("suite", "run the acceptance battery");
  add_common(suite, c);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (axioms->parsed()) return emit(axioms_command(resolve(t, c), c.samples, c.seed), c);
    if (tilt->parsed() || sharp->parsed()) {
      tower_spec s = resolve(t, c);
      const int m = tilt_depth ? *tilt_depth : s.precision.depth - layer;
      if (m < 1) throw zero_depth("tilt depth must be at least 1");
      if (tilt->parsed()) return emit(tilt_command(s, {layer, m, element, idempotents, torsion}), c);
      sharp_request req{layer, m, element.empty() ? "pflat" : element, randomized, verify, c.samples, c.seed};
      return emit(sharp_command(s, req), c);
    }
    if (closure->parsed()) {
      creq.layer = layer;
      creq.mode = mode == "exact" ? closure_mode::exact : closure_mode::sampled;
      creq.element = element;
      creq.samples = c.samples;
      creq.seed = c.seed;
      return emit(closure_command(resolve(t, c), creq), c);
    }
    if (ramify->parsed()) {
      rreq.cover.levels = levels;
      rreq.cover.precision.n_digits = c.prec.value_or(6);
      rreq.cover.precision.depth = c.depth.value_or(3);
      rreq.samples = c.samples;
      rreq.normality_samples = normality_samples;
      rreq.seed = c.seed;
      if (force_eps) rreq.forced_epsilon = parse_rational(*force_eps);
      return emit(ramify_command(rreq), c);
    }
    if (suite->parsed()) {
      sopt.seed = c.seed;
      sopt.samples = c.samples;
      return emit(suite_command(sopt), c);
    }
  } catch (const tiltlab::error& e) {
    std::cerr << "tiltlab: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "tiltlab: " << e.what() << "\n";
    return 2;
  }
  return 2;
}
