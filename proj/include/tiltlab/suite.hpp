#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "tiltlab/report.hpp"

namespace tiltlab {

struct suite_options {
  std::uint64_t seed = 7;
  int samples = 200;            // axiom (e) and sharp-side checks
  int closure_samples = 2000;   // SAMPLED closure mode
  int normality_samples = 1000;
};

struct criterion {
  int id = 0;
  std::string title;
  bool passed = false;
  std::string detail;
  nlohmann::ordered_json data;
  double seconds = 0;  // wall time, kept out of the JSON
};

struct suite_report {
  std::vector<criterion> criteria;
  bool passed() const;
  const criterion* find(int id) const;
};

// Criteria 1..10; determinism of the CLI is checked by the acceptance runner.
suite_report run_suite(const suite_options& opt);
criterion run_criterion(int id, const suite_options& opt);
constexpr int suite_criteria = 10;

command_report suite_command(const suite_options& opt);

}  // namespace tiltlab
