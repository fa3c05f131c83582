#pragma once

#include <string>
#include <vector>

#include "tiltlab/closure.hpp"
#include "tiltlab/layer.hpp"
#include "tiltlab/tower.hpp"
#include "tiltlab/verdict.hpp"

namespace tiltlab {

// S = R[p^(1/m)] over the pure tower, gcd(m, p) = 1, m >= 2.
struct kummer_cover_spec {
  u64 prime = 5;
  int m = 2;
  precision_budget precision{6, 4, rational(0)};
  int levels = 5;  // delta_0 .. delta_{levels-1}

  void validate() const;
};

struct cover_layer {
  int level = 0;
  layer_ring_ptr ring;  // e = m p^n
  bool generators_ok = false;  // p^(1/p^n) and p^(1/m) are present
  closure_result closure;      // p-root closed, localization at p
};

// Exhaustive closure check when the layer is small enough, sampled up to
// closure_rank_limit, skipped (UNDECIDED) above it.
constexpr int closure_rank_limit = 256;
std::vector<cover_layer> build_cover_layers(const kummer_cover_spec& spec, int samples, std::uint64_t seed);

// Least d >= 0 such that every integer >= d lies in <a, b> (brute force).
std::int64_t semigroup_conductor(std::int64_t a, std::int64_t b);

struct delta_row {
  int n = 0;
  rational delta;          // semigroup method
  rational delta_elim;     // column reduction over Z/p^N
  rational delta_flat;     // same cokernel over F_p[T]/(T^{2e})
  rational scaled;         // p^n delta_n
  std::int64_t annihilator_exponent = 0;  // in units of 1/(m p^(n+1))
  bool refined_lattice = false;  // p^(n+1) delta_n in (1/m)Z
  bool integral_scaled = false;  // p^n delta_n in Z>=1
  bool bound_ok = false;         // delta_n <= c / p^n
};

// Cokernel of R_{n+k} (x) S_n -> S_{n+k}; its sum over steps is a geometric series.
struct tail_row {
  int n = 0;
  int k = 0;
  rational conductor_bound;  // from <m, p^k>
  rational delta_sum;        // delta_n + ... + delta_{n+k-1}
  rational scaled;           // p^n times the bound
  bool ok = false;           // equal, and scaled <= c p / (p - 1)
};

struct delta_table {
  u64 p = 0;
  int m = 0;
  int n_digits = 0;
  std::vector<delta_row> rows;
  rational c;              // max p^n delta_n
  rational colimit_bound;  // c p / (p - 1)
  std::vector<tail_row> tails;
};

delta_table compute_delta_table(const kummer_cover_spec& spec);

// s^p = a + p^eps b with a in S_n (written in S_n) and b in S_{n+1}.
struct certificate_entry {
  int level = 0;  // n
  std::string kind;  // "generator", "p_witness", "random"
  layer_elem s;
  layer_elem a;
  layer_elem b;
};

struct epsilon_witness {
  rational epsilon;
  int start_level = 0;  // N
  rational c;
  std::vector<certificate_entry> certificate;
  bool verified = false;
};

epsilon_witness find_epsilon(const kummer_cover_spec& spec, const delta_table& table, std::uint64_t seed = 0);
// Recomputes every s^p and checks the stored decomposition; empty string on success.
std::string verify_certificate(const kummer_cover_spec& spec, const epsilon_witness& w);

struct perfectoid_assembly {
  int n_prime = 0;
  rational epsilon;
  rational ideal_exp;  // epsilon actually used for I_0
  tower_ptr tower;
  axiom_report report;
};

// Least N' >= N with (N'+1) eps >= c.
int adjusted_start(const epsilon_witness& w);
// Builds the tower from N' and runs the axiom suite; never throws on failure.
perfectoid_assembly assemble_checked(const kummer_cover_spec& spec, const epsilon_witness& w, int samples,
                                     std::uint64_t seed);
// Throws axiom_failure if the suite does not pass.
perfectoid_assembly assemble_perfectoid(const kummer_cover_spec& spec, const epsilon_witness& w, int samples,
                                        std::uint64_t seed);
// Negative control: I_0 = (p^forced) with the pillar kept at the certified eps / p.
perfectoid_assembly assemble_with_forced_epsilon(const kummer_cover_spec& spec, const epsilon_witness& w,
                                                 const rational& forced, int samples, std::uint64_t seed);

struct normality_row {
  int level = 0;  // absolute level
  int depth = 0;  // tilt depth
  std::string presentation;
  closure_result monogenic;
  closure_result root_closed;
};

struct normality_report {
  std::vector<normality_row> rows;
  bool passed() const;
};

normality_report smalltilt_normality_report(const tower_ptr& h, int samples, std::uint64_t seed);

}  // namespace tiltlab
