#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include <json.hpp>

#include "tiltlab/closure.hpp"
#include "tiltlab/ramified.hpp"
#include "tiltlab/tower.hpp"
#include "tiltlab/verdict.hpp"

namespace tiltlab {

constexpr int report_schema = 1;

// One command's output. `ok` is false iff some verdict is a failure.
struct command_report {
  nlohmann::ordered_json json;
  std::string markdown;
  bool ok = true;
};

nlohmann::ordered_json to_json(const check_result& r);
nlohmann::ordered_json to_json(const closure_result& r);
nlohmann::ordered_json to_json(const axiom_report& r);
nlohmann::ordered_json to_json(const delta_table& t);

command_report axioms_command(const tower_spec& spec, int samples, std::uint64_t seed);

struct tilt_request {
  int layer = 0;
  int depth = 1;
  std::string element;  // optional tilt expression
  bool idempotents = false;
  bool torsion = false;
};
command_report tilt_command(const tower_spec& spec, const tilt_request& req);

struct sharp_request {
  int layer = 0;
  int depth = 1;
  std::string element = "pflat";
  bool randomized = false;
  bool verify = false;  // also run the sharp-side checks at (layer, depth)
  int samples = 200;
  std::uint64_t seed = 7;
};
command_report sharp_command(const tower_spec& spec, const sharp_request& req);

struct closure_request {
  std::string check = "root_closed";  // root_closed | cartesian | almost | transfer | monogenic
  int layer = 0;
  closure_mode mode = closure_mode::sampled;
  u64 n = 0;  // root degree, 0 = p
  std::string element;  // numerator for `almost`
  int c0 = 1;
  int c_cap = 4;
  int n_cap = 6;
  int samples = 1000;
  std::uint64_t seed = 7;
};
command_report closure_command(const tower_spec& spec, const closure_request& req);

struct ramify_request {
  kummer_cover_spec cover;
  int samples = 200;
  int normality_samples = 1000;
  std::uint64_t seed = 7;
  std::optional<rational> forced_epsilon;
};
command_report ramify_command(const ramify_request& req);

// Parses a spec file; SpecError on I/O or format problems.
tower_spec load_tower_spec(const std::string& path);

}  // namespace tiltlab
