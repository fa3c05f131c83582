// Python bindings. Every command returns its JSON report as a string; the
// package wrapper decodes it.

#include <optional>
#include <string>

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "tiltlab/errors.hpp"
#include "tiltlab/ramified.hpp"
#include "tiltlab/report.hpp"
#include "tiltlab/suite.hpp"

namespace py = pybind11;
using namespace tiltlab;

namespace {

tower_spec spec_of(const std::string& text) { return tower_spec_from_json(nlohmann::json::parse(text)); }

std::string dump(const command_report& r) { return r.json.dump(); }

kummer_cover_spec cover_of(u64 p, int m, int levels, int prec, int depth) {
  kummer_cover_spec c;
  c.prime = p;
  c.m = m;
  c.levels = levels;
  c.precision = {prec, depth, rational(0)};
  return c;
}

}  // namespace

PYBIND11_MODULE(_tiltlab, m) {
  m.doc() = "finite-level verifier for perfectoid towers";
  m.attr("schema") = report_schema;

  static PyObject* exc = py::register_exception<error>(m, "TiltlabError", PyExc_ValueError).ptr();
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const nlohmann::json::exception& e) {
      py::set_error(exc, e.what());
    }
  });

  m.def("axioms", [](const std::string& spec, int samples, std::uint64_t seed) {
    return dump(axioms_command(spec_of(spec), samples, seed));
  }, py::arg("spec"), py::arg("samples") = 200, py::arg("seed") = 7);

  m.def("tilt", [](const std::string& spec, int layer, int depth, const std::string& element, bool idempotents,
                   bool torsion) {
    return dump(tilt_command(spec_of(spec), {layer, depth, element, idempotents, torsion}));
  }, py::arg("spec"), py::arg("layer"), py::arg("depth"), py::arg("element") = "", py::arg("idempotents") = false,
        py::arg("torsion") = false);

  m.def("sharp", [](const std::string& spec, int layer, int depth, const std::string& element, bool randomized,
                    std::uint64_t seed) {
    sharp_request r{layer, depth, element, randomized, false, 200, seed};
    return dump(sharp_command(spec_of(spec), r));
  }, py::arg("spec"), py::arg("layer"), py::arg("depth"), py::arg("element") = "pflat", py::arg("randomized") = false,
        py::arg("seed") = 7);

  m.def("closure", [](const std::string& spec, const std::string& check, int layer, bool exact, int samples,
                      std::uint64_t seed) {
    closure_request r;
    r.check = check;
    r.layer = layer;
    r.mode = exact ? closure_mode::exact : closure_mode::sampled;
    r.samples = samples;
    r.seed = seed;
    return dump(closure_command(spec_of(spec), r));
  }, py::arg("spec"), py::arg("check") = "root_closed", py::arg("layer") = 0, py::arg("exact") = false,
        py::arg("samples") = 1000, py::arg("seed") = 7);

  m.def("ramify", [](u64 p, int mm, int levels, int prec, int depth, int samples, int normality_samples,
                     std::uint64_t seed, std::optional<std::string> force_eps) {
    ramify_request r;
    r.cover = cover_of(p, mm, levels, prec, depth);
    r.samples = samples;
    r.normality_samples = normality_samples;
    r.seed = seed;
    if (force_eps) r.forced_epsilon = parse_rational(*force_eps);
    return dump(ramify_command(r));
  }, py::arg("p") = 5, py::arg("m") = 2, py::arg("levels") = 5, py::arg("prec") = 6, py::arg("depth") = 3,
        py::arg("samples") = 200, py::arg("normality_samples") = 1000, py::arg("seed") = 7,
        py::arg("force_eps") = py::none());

  m.def("delta_table", [](u64 p, int mm, int levels) {
    return to_json(compute_delta_table(cover_of(p, mm, levels, 6, 3))).dump();
  }, py::arg("p"), py::arg("m"), py::arg("levels") = 5);

  m.def("semigroup_conductor", &semigroup_conductor, py::arg("a"), py::arg("b"));

  m.def("criterion", [](int id, std::uint64_t seed) {
    suite_options o;
    o.seed = seed;
    criterion c = run_criterion(id, o);
    nlohmann::ordered_json j{{"id", c.id}, {"title", c.title}, {"passed", c.passed}, {"detail", c.detail}, {"data", c.data}};
    return j.dump();
  }, py::arg("id"), py::arg("seed") = 7);
}
