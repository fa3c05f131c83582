// Acceptance runner: one PASS/FAIL line per criterion, non-zero exit on any FAIL.

#include <array>
#include <cstdio>
#include <iostream>
#include <map>
#include <string>

#include <CLI11.hpp>

#include "tiltlab/suite.hpp"

using namespace tiltlab;

namespace {

// Wall-clock limits in seconds; criteria without an entry are unbounded.
const std::map<int, double> time_limit = {{1, 10.0}, {6, 5.0}, {7, 30.0}};

// Every quantitative comparison inside the criteria is exact (rational
// equality, exact verdicts); these are the sample floors.
constexpr int min_samples = 200;
constexpr int min_closure_samples = 1000;

std::string run_capture(const std::string& cmd, int& status) {
  std::string out;
  FILE* f = popen(cmd.c_str(), "r");
  if (!f) {
    status = -1;
    return out;
  }
  std::array<char, 4096> buf;
  std::size_t n;
  while ((n = fread(buf.data(), 1, buf.size(), f)) > 0) out.append(buf.data(), n);
  status = pclose(f);
  return out;
}

void line(int id, bool ok, const std::string& title, const std::string& detail) {
  std::cout << (ok ? "PASS" : "FAIL") << " " << id << " " << title << ": " << detail << std::endl;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"acceptance battery"};
  std::string cli;
  std::uint64_t seed = 7;
  app.add_option("--cli", cli, "tiltlab executable for the determinism check")->required();
  app.add_option("--seed", seed)->capture_default_str();
  CLI11_PARSE(app, argc, argv);

  suite_options opt;
  opt.seed = seed;
  opt.samples = min_samples;
  opt.closure_samples = 2 * min_closure_samples;
  opt.normality_samples = min_closure_samples;

  bool all = true;
  for (int id = 1; id <= suite_criteria; ++id) {
    criterion c = run_criterion(id, opt);
    bool ok = c.passed;
    std::string detail = c.detail;
    char secs[32];
    std::snprintf(secs, sizeof secs, "%.2f s", c.seconds);
    if (auto it = time_limit.find(id); it != time_limit.end() && c.seconds >= it->second) {
      ok = false;
      detail += "; took " + std::string(secs) + ", limit " + std::to_string(static_cast<int>(it->second)) + " s";
    }
    line(id, ok, c.title, detail + " (" + secs + ")");
    all = all && ok;
  }

  const std::string cmd = "\"" + cli + "\" suite --seed " + std::to_string(seed) + " 2>/dev/null";
  int s1 = 0, s2 = 0;
  const std::string a = run_capture(cmd, s1);
  const std::string b = run_capture(cmd, s2);
  const bool same = !a.empty() && a == b;
  const bool exits_ok = s1 == 0 && s2 == 0;
  line(11, same && exits_ok, "determinism",
       std::string(same ? "byte-identical" : "reports differ") + ", " + std::to_string(a.size()) + " bytes" +
           (exits_ok ? "" : ", suite exit status nonzero"));
  all = all && same && exits_ok;

  std::cout << (all ? "ALL PASS" : "SOME FAILED") << std::endl;
  return all ? 0 : 1;
}
