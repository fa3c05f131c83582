#include "tiltlab/verdict.hpp"

namespace tiltlab {

std::string to_string(verdict v) {
  switch (v) {
    case verdict::pass: return "PASS";
    case verdict::fail: return "FAIL";
    case verdict::not_applicable: return "NOT_APPLICABLE";
    case verdict::sampled_pass: return "SAMPLED_PASS";
    case verdict::trivial_case: return "TRIVIAL_CASE";
  }
  return "?";
}

bool is_failure(verdict v) { return v == verdict::fail; }

}  // namespace tiltlab
