#pragma once

#include <string>

namespace tiltlab {

enum class verdict { pass, fail, not_applicable, sampled_pass, trivial_case };

std::string to_string(verdict v);
// PASS, SAMPLED_PASS and TRIVIAL_CASE count as success; NOT_APPLICABLE is neutral.
bool is_failure(verdict v);

struct check_result {
  verdict v = verdict::pass;
  std::string witness;  // canonical element text, empty unless FAIL
  std::string detail;
  int samples = 0;
};

}  // namespace tiltlab
