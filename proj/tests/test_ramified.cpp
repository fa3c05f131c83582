#include <gtest/gtest.h>

#include <numeric>

#include "tiltlab/element_text.hpp"
#include "tiltlab/errors.hpp"
#include "tiltlab/ramified.hpp"

using namespace tiltlab;

namespace {

// Marks every a*i + b*j up to a bound and returns the start of the first run
// of min(a, b) consecutive reachable values.
std::int64_t conductor_oracle(std::int64_t a, std::int64_t b) {
  const std::int64_t bound = a * b + a + b;
  std::vector<bool> hit(bound + 1, false);
  for (std::int64_t i = 0; i * a <= bound; ++i)
    for (std::int64_t j = 0; i * a + j * b <= bound; ++j) hit[i * a + j * b] = true;
  const std::int64_t run = std::min(a, b);
  std::int64_t len = 0;
  for (std::int64_t k = 0; k <= bound; ++k) {
    len = hit[k] ? len + 1 : 0;
    if (len == run) return k - run + 1;
  }
  return -1;
}

std::int64_t ipow(std::int64_t p, int k) {
  std::int64_t r = 1;
  while (k-- > 0) r *= p;
  return r;
}

rational delta_oracle(std::int64_t p, std::int64_t m, int n) {
  return rational(conductor_oracle(m, p), m * ipow(p, n + 1));
}

kummer_cover_spec cover(u64 p, int m, int levels, int depth = 3) {
  kummer_cover_spec s;
  s.prime = p;
  s.m = m;
  s.levels = levels;
  s.precision = {6, depth, rational(0)};
  return s;
}

// Image of an S_n element in S_{n+1} (t -> t^p), rebuilt term by term.
layer_elem lift_up(const layer_elem& a, const layer_ring_ptr& up, u64 p) {
  std::vector<term> ts;
  for (const auto& t : a.part(0)) {
    term u = t;
    u.mono.t = static_cast<std::int32_t>(t.mono.t * static_cast<std::int64_t>(p));
    ts.push_back(u);
  }
  return layer_elem::from_terms(up, 0, ts);
}

}  // namespace

TEST(Semigroup, ConductorMatchesOracleAndClosedForm) {
  for (std::int64_t a = 2; a <= 9; ++a)
    for (std::int64_t b = 2; b <= 11; ++b) {
      if (std::gcd(a, b) != 1) continue;
      EXPECT_EQ(semigroup_conductor(a, b), conductor_oracle(a, b)) << a << "," << b;
      EXPECT_EQ(semigroup_conductor(a, b), (a - 1) * (b - 1));
    }
  EXPECT_EQ(semigroup_conductor(2, 5), 4);
}

TEST(CoverSpec, Validation) {
  EXPECT_THROW(cover(5, 5, 3).validate(), spec_error);
  EXPECT_THROW(cover(5, 1, 3).validate(), spec_error);
  EXPECT_THROW(cover(6, 5, 3).validate(), non_prime);
  EXPECT_NO_THROW(cover(5, 2, 3).validate());
}

TEST(CoverLayers, RamificationAndGenerators) {
  // levels L needs S_0 .. S_L
  auto ls = build_cover_layers(cover(5, 2, 3), 100, 7);
  ASSERT_EQ(ls.size(), 4u);
  for (int n = 0; n < 4; ++n) {
    EXPECT_EQ(ls[n].ring->factor(0).eisen_exp, 2 * ipow(5, n));
    EXPECT_TRUE(ls[n].generators_ok);
    EXPECT_FALSE(ls[n].closure.failed()) << ls[n].closure.detail;
  }
  auto ls3 = build_cover_layers(cover(2, 3, 2), 100, 7);
  EXPECT_EQ(ls3[0].ring->factor(0).eisen_exp, 3);
  EXPECT_EQ(ls3[0].closure.v, closure_verdict::pass_exact);
}

TEST(DeltaTable, FiveTwo) {
  auto t = compute_delta_table(cover(5, 2, 5));
  ASSERT_EQ(t.rows.size(), 5u);
  EXPECT_EQ(t.rows[0].delta, rational(2, 5));
  EXPECT_EQ(t.rows[2].delta, rational(2, 125));
  EXPECT_EQ(t.rows[2].scaled, rational(2, 5));
  EXPECT_EQ(t.c, rational(2, 5));
  EXPECT_EQ(t.colimit_bound, rational(1, 2));
}

TEST(DeltaTable, PropertiesAcrossCovers) {
  for (auto [p, m] : {std::pair<u64, int>{5, 2}, {2, 3}, {3, 2}, {5, 3}, {7, 2}, {3, 4}}) {
    auto t = compute_delta_table(cover(p, m, 4));
    const rational constant(static_cast<std::int64_t>((m - 1) * (p - 1)), static_cast<std::int64_t>(m * p));
    for (std::size_t i = 0; i < t.rows.size(); ++i) {
      const auto& r = t.rows[i];
      SCOPED_TRACE("p=" + std::to_string(p) + " m=" + std::to_string(m) + " n=" + std::to_string(r.n));
      EXPECT_EQ(r.delta, delta_oracle(p, m, r.n));
      EXPECT_EQ(r.delta_elim, r.delta);
      EXPECT_EQ(r.delta_flat, r.delta);
      EXPECT_EQ(r.scaled, constant);
      EXPECT_EQ(r.annihilator_exponent, (m - 1) * static_cast<std::int64_t>(p - 1));
      EXPECT_TRUE(r.refined_lattice);
      EXPECT_TRUE(r.bound_ok);
      if (i > 0) EXPECT_LT(r.delta, t.rows[i - 1].delta);
    }
    EXPECT_EQ(t.c, constant);
    for (const auto& tail : t.tails) {
      EXPECT_TRUE(tail.ok) << tail.n << "," << tail.k;
      EXPECT_EQ(tail.conductor_bound, tail.delta_sum);
      EXPECT_LE(tail.scaled, t.colimit_bound);
    }
  }
}

TEST(DeltaTable, ScaledIntegralityIsOnlyAFlag) {
  // the least annihilator does not satisfy p^n delta_n in Z
  for (const auto& r : compute_delta_table(cover(5, 2, 3)).rows) EXPECT_FALSE(r.integral_scaled);
}

TEST(Epsilon, FiveTwo) {
  auto s = cover(5, 2, 5);
  auto t = compute_delta_table(s);
  auto w = find_epsilon(s, t, 7);
  EXPECT_EQ(w.epsilon, rational(3, 25));
  EXPECT_EQ(w.start_level, 2);
  EXPECT_TRUE(w.verified);
  // oracle: least N with (1 - delta_N p^2)/p in (0, 1)
  int n = 0;
  while (!(delta_oracle(5, 2, n) * 25 < rational(1))) ++n;
  EXPECT_EQ(n, 2);
  EXPECT_EQ((rational(1) - delta_oracle(5, 2, n) * 25) / 5, w.epsilon);
  EXPECT_EQ(w.epsilon * 25, rational(3));  // representable at level 2
}

TEST(Epsilon, TwoThree) {
  auto s = cover(2, 3, 4);
  auto w = find_epsilon(s, compute_delta_table(s), 7);
  EXPECT_EQ(w.epsilon, rational(1, 6));
  EXPECT_EQ(w.start_level, 1);
  EXPECT_EQ(adjusted_start(w), 1);
}

TEST(Epsilon, TooFewLevels) {
  auto s = cover(5, 2, 2);
  EXPECT_THROW(find_epsilon(s, compute_delta_table(s), 7), no_witness_in_range);
}

TEST(Epsilon, CertificateReverifiesIndependently) {
  auto s = cover(5, 2, 4);
  auto w = find_epsilon(s, compute_delta_table(s), 3);
  EXPECT_EQ(verify_certificate(s, w), "");
  ASSERT_FALSE(w.certificate.empty());
  int kinds[3] = {0, 0, 0};
  for (const auto& c : w.certificate) {
    const auto& up = c.s.ring();
    const int e_up = up->factor(0).eisen_exp;
    EXPECT_EQ(e_up, 2 * ipow(5, c.level + 1));
    EXPECT_EQ(c.a.ring()->factor(0).eisen_exp, 2 * ipow(5, c.level));
    const rational pe = w.epsilon * e_up;
    ASSERT_TRUE(is_integral(pe));
    monomial m;
    m.t = static_cast<std::int32_t>(pe.numerator());
    auto rhs = lift_up(c.a, up, 5) + layer_elem::mono(up, 0, m) * c.b;
    ASSERT_EQ(c.s.pow(5), rhs) << c.kind << " at level " << c.level << ": " << to_text(c.s);
    kinds[c.kind == "generator" ? 0 : c.kind == "random" ? 1 : 2]++;
  }
  EXPECT_GT(kinds[0], 0);
  EXPECT_GT(kinds[1], 0);
  EXPECT_GT(kinds[2], 0);
}

TEST(Epsilon, TamperedCertificateIsRejected) {
  auto s = cover(5, 2, 4);
  auto w = find_epsilon(s, compute_delta_table(s), 3);
  for (auto& c : w.certificate)
    if (c.kind == "random") {
      c.b = c.b + layer_elem::constant(c.b.ring(), 1);
      break;
    }
  EXPECT_NE(verify_certificate(s, w), "");
}

TEST(Assembly, FiveTwoFromAdjustedStart) {
  auto s = cover(5, 2, 5);
  auto w = find_epsilon(s, compute_delta_table(s), 7);
  // oracle for N': least n >= N with (n + 1) eps >= c
  int n = w.start_level;
  while (rational(n + 1) * w.epsilon < w.c) ++n;
  EXPECT_EQ(adjusted_start(w), n);
  EXPECT_EQ(n, 3);
  auto a = assemble_perfectoid(s, w, 200, 7);
  EXPECT_EQ(a.n_prime, 3);
  EXPECT_TRUE(a.report.passed());
  EXPECT_EQ(a.report.find("d")->result.v, verdict::pass);
  EXPECT_EQ(a.tower->start_level(), 3);
}

TEST(Assembly, TwoThree) {
  auto s = cover(2, 3, 4);
  auto w = find_epsilon(s, compute_delta_table(s), 7);
  auto a = assemble_checked(s, w, 200, 7);
  EXPECT_TRUE(a.report.passed());
  EXPECT_EQ(a.n_prime, 1);
}

TEST(Assembly, ForcedEpsilonFailsPillarAxiom) {
  auto s = cover(5, 2, 5);
  auto w = find_epsilon(s, compute_delta_table(s), 7);
  auto f = assemble_with_forced_epsilon(s, w, rational(1, 2), 100, 7);
  EXPECT_EQ(f.report.find("f-1")->result.v, verdict::fail);
  EXPECT_FALSE(f.report.find("f-1")->result.witness.empty());
  EXPECT_EQ(f.ideal_exp, rational(1, 2));
}

TEST(Normality, KummerTowerLevels) {
  auto s = cover(5, 2, 5);
  auto w = find_epsilon(s, compute_delta_table(s), 7);
  auto a = assemble_checked(s, w, 50, 7);
  auto rep = smalltilt_normality_report(a.tower, 1000, 7);
  ASSERT_EQ(rep.rows.size(), 3u);
  EXPECT_EQ(rep.rows[0].level, 3);
  for (const auto& r : rep.rows) {
    EXPECT_EQ(r.monogenic.v, closure_verdict::pass_exact) << r.level;
    EXPECT_EQ(r.root_closed.v, closure_verdict::pass_sampled) << r.level;
    EXPECT_GE(r.root_closed.checked, 1000u);
  }
  EXPECT_TRUE(rep.passed());
}
