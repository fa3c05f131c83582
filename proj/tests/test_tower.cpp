#include <gtest/gtest.h>

#include "tiltlab/element_text.hpp"
#include "tiltlab/errors.hpp"
#include "tiltlab/sampling.hpp"
#include "tiltlab/tower.hpp"

using namespace tiltlab;

namespace {

verdict verdict_of(const axiom_report& r, const std::string& id) {
  const axiom_verdict* v = r.find(id);
  EXPECT_NE(v, nullptr) << id;
  return v ? v->result.v : verdict::fail;
}

void expect_all_pass(const axiom_report& r) {
  ASSERT_EQ(r.verdicts.size(), 8u);
  for (const auto& v : r.verdicts) {
    const verdict want = v.axiom == "e" ? verdict::sampled_pass : verdict::pass;
    EXPECT_EQ(v.result.v, want) << v.axiom << ": " << v.result.detail << " " << v.result.witness;
  }
  EXPECT_TRUE(r.passed());
}

}  // namespace

TEST(Tower, PureLayersHaveExpectedShape) {
  auto h = build_tower(pure_spec(5, 6, 3));
  ASSERT_EQ(h->depth(), 3);
  int e = 1;
  for (int j = 0; j <= 3; ++j, e *= 5) {
    EXPECT_EQ(h->layer(j)->factor(0).eisen_exp, e);
    EXPECT_EQ(h->layer(j)->quot_dim(), static_cast<std::size_t>(e));
  }
  EXPECT_EQ(to_text(h->ideal_generator(0)), "5");
  EXPECT_EQ(to_text(h->ideal_generator(1)), "5");
  EXPECT_EQ(valuation(h->pillar()), rat_valuation::of(rational(1, 5)));
  EXPECT_THROW(h->layer(4), level_out_of_range);
}

TEST(Tower, KummerIdealGenerator) {
  // S_2 has e = 50 and f_0 = t^6, valuation 3/25
  auto h = build_tower(kummer_spec(5, 2, rational(3, 25), 2, 6, 2));
  EXPECT_EQ(h->layer(0)->factor(0).eisen_exp, 50);
  EXPECT_EQ(valuation(h->ideal_generator(0)), rat_valuation::of(rational(3, 25)));
  EXPECT_EQ(h->layer(0)->quot_dim(), 6u);
}

TEST(Tower, FrobeniusProjectionExamples) {
  auto h = build_tower(pure_spec(5, 6, 3));
  auto r1 = h->layer(1);
  quot_elem x = quot_elem::one(r1) + quot_elem::basis(r1, 1, 2);  // 1 + 2s
  EXPECT_EQ(h->frob_projection(0, x), quot_elem::one(h->layer(0)));
  EXPECT_EQ(h->frob_projection(1, quot_elem::basis(h->layer(2), 1)), quot_elem::basis(r1, 1));
  EXPECT_TRUE(h->frob_projection(1, quot_elem(h->layer(2))).is_zero());
}

TEST(Tower, FrobeniusFactorizationOnBasis) {
  for (auto spec : {pure_spec(5, 6, 3), pure_spec(3, 4, 3, 1, rational(2)), kummer_spec(2, 3, rational(1, 6), 1, 4, 3)}) {
    auto h = build_tower(spec);
    const u64 p = h->p();
    for (int j = 0; j < h->depth(); ++j) {
      auto up = h->layer(j + 1);
      for (std::size_t i = 0; i < up->quot_dim(); ++i) {
        quot_elem b = quot_elem::basis(up, i);
        ASSERT_EQ(h->quot_transition(j, h->frob_projection(j, b)), b.pow(p)) << "j=" << j << " i=" << i;
      }
      auto lo = h->layer(j);
      for (std::size_t i = 0; i < lo->quot_dim(); ++i) {
        quot_elem b = quot_elem::basis(lo, i);
        ASSERT_EQ(h->frob_projection(j, h->quot_transition(j, b)), b.pow(p));
      }
      // surjective iff the rank is the dimension of the target
      EXPECT_EQ(fp_rank(p, h->frob_map(j)), lo->quot_dim());
    }
  }
}

TEST(Tower, TransitionIsInjectiveRingMap) {
  auto h = build_tower(pure_spec(5, 6, 2));
  rng_t g = make_rng(4, 0);
  for (int i = 0; i < 100; ++i) {
    auto x = random_layer_elem(h->layer(0), g, 0), y = random_layer_elem(h->layer(0), g, 0);
    ASSERT_EQ(h->transition(0, x * y), h->transition(0, x) * h->transition(0, y));
  }
  for (int j = 0; j < h->depth(); ++j) EXPECT_EQ(fp_rank(5, h->quot_transition_map(j)), h->layer(j)->quot_dim());
}

TEST(Axioms, PureTowerPasses) {
  expect_all_pass(check_axioms(*build_tower(pure_spec(5, 6, 3)), 200, 7));
  expect_all_pass(check_axioms(*build_tower(pure_spec(2, 2, 2)), 200, 7));
}

TEST(Axioms, PureTowerWithVariablePasses) {
  auto r = check_axioms(*build_tower(pure_spec(5, 6, 3, 1, rational(2))), 200, 7);
  expect_all_pass(r);
  EXPECT_GT(r.truncation_dim, 0u);
}

TEST(Axioms, KummerFromAdjustedStartPasses) {
  expect_all_pass(check_axioms(*build_tower(kummer_spec(5, 2, rational(3, 25), 3, 6, 3)), 200, 7));
}

TEST(Axioms, ProductTowerPasses) {
  expect_all_pass(check_axioms(*build_tower(product_spec({pure_spec(5, 6, 2), pure_spec(5, 6, 2)})), 100, 7));
}

TEST(Axioms, SampleCountIsHonoured) {
  auto r = check_axioms(*build_tower(pure_spec(5, 6, 2)), 250, 1);
  EXPECT_GE(r.find("e")->result.samples, 250);
}

// One crafted broken tower per axiom.
TEST(AxiomControls, WrongTransitionExponent) {
  tower_defects d;
  d.transition_exponent = 6;
  auto r = check_axioms(*build_tower(pure_spec(5, 6, 3), d), 50, 7);
  EXPECT_EQ(verdict_of(r, "b"), verdict::fail);
  EXPECT_EQ(verdict_of(r, "c"), verdict::fail);
  EXPECT_FALSE(r.find("c")->result.witness.empty());
}

TEST(AxiomControls, DegenerateFrobenius) {
  tower_defects d;
  d.frob_scale = 5;
  auto r = check_axioms(*build_tower(pure_spec(5, 6, 3), d), 50, 7);
  EXPECT_EQ(verdict_of(r, "c"), verdict::fail);
  EXPECT_EQ(verdict_of(r, "d"), verdict::fail);
  EXPECT_EQ(r.find("d")->result.witness, "level 0: 1");
}

TEST(AxiomControls, ScaledFrobeniusBreaksFactorization) {
  tower_defects d;
  d.frob_scale = 2;
  auto r = check_axioms(*build_tower(pure_spec(5, 6, 3), d), 50, 7);
  EXPECT_EQ(verdict_of(r, "c"), verdict::fail);
  EXPECT_EQ(verdict_of(r, "d"), verdict::pass);
}

TEST(AxiomControls, WholeRingIdealIsNotZariskian) {
  tower_defects d;
  d.raw_ideal_exp = rational(0);
  auto r = check_axioms(*build_tower(pure_spec(5, 6, 3), d), 50, 7);
  EXPECT_EQ(verdict_of(r, "e"), verdict::fail);
}

TEST(AxiomControls, IdealTooSmall) {
  tower_defects d;
  d.raw_ideal_exp = rational(2);
  auto r = check_axioms(*build_tower(pure_spec(5, 6, 3), d), 50, 7);
  EXPECT_EQ(verdict_of(r, "a"), verdict::fail);
  EXPECT_EQ(verdict_of(r, "b"), verdict::not_applicable);
}

TEST(AxiomControls, WrongPillar) {
  tower_defects d;
  d.pillar_valuation = rational(2, 5);
  auto r = check_axioms(*build_tower(pure_spec(5, 6, 3), d), 50, 7);
  EXPECT_EQ(verdict_of(r, "f-1"), verdict::fail);
  EXPECT_EQ(verdict_of(r, "f-2"), verdict::fail);
}

TEST(AxiomControls, KilledFactorHasTorsion) {
  tower_defects d;
  d.killed_factor = 1;
  auto r = check_axioms(*build_tower(product_spec({pure_spec(5, 6, 2), pure_spec(5, 6, 2)}), d), 50, 7);
  EXPECT_EQ(verdict_of(r, "g"), verdict::fail);
  EXPECT_EQ(r.find("g")->result.witness, "level 0: (0, 1)");
}

TEST(Axioms, DeterministicUnderSeed) {
  auto h = build_tower(pure_spec(5, 6, 3));
  auto a = check_axioms(*h, 100, 42), b = check_axioms(*h, 100, 42);
  ASSERT_EQ(a.verdicts.size(), b.verdicts.size());
  for (std::size_t i = 0; i < a.verdicts.size(); ++i) {
    EXPECT_EQ(a.verdicts[i].result.v, b.verdicts[i].result.v);
    EXPECT_EQ(a.verdicts[i].result.detail, b.verdicts[i].result.detail);
  }
}

TEST(Spec, JsonRoundTrip) {
  auto s = kummer_spec(5, 2, rational(3, 25), 3, 6, 3);
  auto back = tower_spec_from_json(nlohmann::json::parse(tower_spec_to_json(s).dump()));
  EXPECT_EQ(back.prime, 5u);
  EXPECT_EQ(back.kummer_m, 2);
  EXPECT_EQ(back.ideal_exp, rational(3, 25));
  EXPECT_EQ(back.start_level, 3);
  EXPECT_EQ(back.precision, s.precision);
}

TEST(Spec, Errors) {
  EXPECT_THROW(tower_spec_from_json(nlohmann::json{{"prime", 5}, {"kind", "bogus"}}), spec_error);
  EXPECT_THROW(build_tower(pure_spec(4, 6, 3)), non_prime);
  EXPECT_THROW(build_tower(kummer_spec(5, 5, rational(1), 0, 6, 2)), spec_error);
  tower_spec bad = pure_spec(5, 6, 3);
  bad.ideal_exp = rational(1, 5);
  EXPECT_THROW(build_tower(bad), spec_error);
  EXPECT_THROW(build_tower(kummer_spec(5, 2, rational(3, 2), 3, 6, 2)), bad_ideal_exponent);
}

TEST(Membership, IdealContains) {
  auto h = build_tower(pure_spec(5, 6, 2));
  auto r = h->layer(1);
  EXPECT_TRUE(ideal_contains(parse_layer_elem(r, "t^{1/5}"), layer_elem::constant(r, 5)));
  EXPECT_FALSE(ideal_contains(layer_elem::constant(r, 5), parse_layer_elem(r, "t^{1/5}")));
}
