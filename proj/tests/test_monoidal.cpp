#include <gtest/gtest.h>

#include <set>

#include "tiltlab/element_text.hpp"
#include "tiltlab/monoidal.hpp"

using namespace tiltlab;

namespace {

tower_ptr pure(int depth) { return build_tower(pure_spec(5, 6, depth)); }
tower_ptr kummer() { return build_tower(kummer_spec(5, 2, rational(3, 25), 3, 6, 3)); }

bool ok(const check_result& r) { return !is_failure(r.v); }

// Componentwise 0/1 tuples, built directly in the product ring.
std::set<std::vector<u64>> product_idempotents(const layer_ring_ptr& r) {
  std::set<std::vector<u64>> out;
  const std::size_t k = r->num_factors();
  for (std::size_t mask = 0; mask < (std::size_t{1} << k); ++mask) {
    layer_elem e(r);
    for (std::size_t f = 0; f < k; ++f)
      if (mask >> f & 1) e = e + layer_elem::constant(r, 1).restricted(f);
    out.insert(e.coordinates());
  }
  return out;
}

}  // namespace

TEST(Sharp, PFlatIsP) {
  auto h = pure(4);
  sharp_result r = sharp(p_flat(h, 0, 4));
  EXPECT_EQ(r.value, layer_elem::constant(h->layer(4), 5));
  EXPECT_EQ(r.effective_precision, rational(6));
  EXPECT_EQ(r.target, 4);
}

TEST(Sharp, OneIsOne) {
  auto h = pure(4);
  sharp_result r = sharp(small_tilt_elem::one(h, 0, 4));
  EXPECT_EQ(r.value, layer_elem::constant(h->layer(4), 1));
  EXPECT_EQ(r.effective_precision, rational(6));
}

TEST(Sharp, MonomialValuations) {
  auto h = pure(3);
  for (int j = 0; j < 2; ++j) {
    auto pr = small_tilt(h, j, 3 - j);
    const int e_j = h->layer(j)->factor(0).eisen_exp;
    for (int k = 1; k < pr.quotient_exponents()[0]; k += 7) {
      const rational v(k, e_j);
      if (v >= rational(6)) break;
      auto x = parse_tilt_elem(pr, "T^{" + std::to_string(k) + "}");
      EXPECT_EQ(valuation(sharp(x).value), rat_valuation::of(v)) << "j=" << j << " k=" << k;
    }
  }
}

TEST(Sharp, StabilizesAcrossDepths) {
  // recompute at depth m+1 and compare in the deeper layer
  auto h = build_tower(pure_spec(3, 6, 5));
  rational prev(-1);
  layer_elem prev_value;
  for (int m = 2; m <= 5; ++m) {
    auto pr = small_tilt(h, 0, m);
    sharp_result r = sharp(parse_tilt_elem(pr, "1 + pflat + T^{2}"));
    EXPECT_GE(r.effective_precision, prev) << "m=" << m;
    if (m > 2) {
      auto diff = h->transport(m - 1, m, prev_value) - r.value;
      auto v = valuation(diff);
      EXPECT_TRUE(v.above_precision || !(v.value < prev)) << "m=" << m << " diff " << to_text(diff);
    }
    prev = r.effective_precision;
    prev_value = r.value;
  }
}

TEST(Sharp, OnePlusPFlatAgreesWithDeeperRecomputation) {
  auto h = pure(5);
  auto v4 = sharp(parse_tilt_elem(small_tilt(h, 0, 4), "1 + pflat"));
  auto v5 = sharp(parse_tilt_elem(small_tilt(h, 0, 5), "1 + pflat"));
  auto diff = valuation(h->transport(4, 5, v4.value) - v5.value);
  EXPECT_TRUE(diff.above_precision || !(diff.value < v4.effective_precision));
}

TEST(Sharp, Multiplicativity) {
  auto r = check_multiplicativity(pure(4), 0, 3, 500, 7);
  EXPECT_TRUE(ok(r)) << r.detail << " " << r.witness;
  EXPECT_GE(r.samples, 500);
}

TEST(Sharp, LiftIndependence) {
  auto r = check_lift_independence(pure(4), 0, 3, 100, 7);
  EXPECT_TRUE(ok(r)) << r.detail;
  EXPECT_GE(r.samples, 100);
}

TEST(Sharp, RandomizedLiftsAgreeToPrecision) {
  auto h = pure(4);
  rng_t g = make_rng(3, 3);
  for (int i = 0; i < 20; ++i) {
    auto x = random_tilt_elem(h, 0, 3, g);
    auto a = sharp(x), b = sharp_randomized(x, g);
    auto d = valuation(a.value - b.value);
    const rational prec = std::min(a.effective_precision, b.effective_precision);
    EXPECT_TRUE(d.above_precision || !(d.value < prec));
  }
}

TEST(SharpChecks, PureTower) {
  auto h = pure(4);
  for (int j = 0; j < 4; ++j) {
    EXPECT_TRUE(ok(check_sharp_phi(h, j, 1, 200, 7))) << j;
    EXPECT_EQ(check_sharp1_iso(h, j, 1, 200, 7).v, verdict::pass) << j;
    EXPECT_EQ(check_sharpf(h, j, 1).v, verdict::pass) << j;
  }
  EXPECT_TRUE(ok(check_sharp_phi(h, 0, 4, 500, 7)));
}

TEST(SharpChecks, KummerTower) {
  auto h = kummer();
  for (int j = 0; j < h->depth(); ++j) {
    EXPECT_TRUE(ok(check_sharp_phi(h, j, 1, 200, 7))) << j;
    EXPECT_EQ(check_sharp1_iso(h, j, 1, 200, 7).v, verdict::pass) << j;
    auto f = check_sharpf(h, j, 1);
    EXPECT_EQ(f.v, verdict::pass) << f.detail;
  }
}

TEST(SharpChecks, KummerLevelTwoValuation) {
  auto h = build_tower(kummer_spec(5, 2, rational(3, 25), 2, 6, 2));
  auto v = valuation(sharp(f_flat_generator(h, 0, 1)).value);
  EXPECT_EQ(v, rat_valuation::of(rational(3, 25)));
  EXPECT_EQ(v, valuation(h->ideal_generator(0)));
  EXPECT_EQ(check_sharp1_iso(h, 0, 1, 100, 7).v, verdict::pass);
}

TEST(SharpChecks, BrokenFrobeniusIsDetected) {
  tower_defects d;
  d.frob_scale = 2;
  auto h = build_tower(pure_spec(5, 6, 3), d);
  EXPECT_TRUE(is_failure(check_sharp_phi(h, 1, 1, 100, 7).v));
}

TEST(Idempotents, ConnectedTower) {
  auto r = idempotent_transfer(pure(3), 0, 3);
  EXPECT_EQ(r.result.v, verdict::pass);
  EXPECT_EQ(r.tilt_side.size(), 2u);
  EXPECT_EQ(r.layer_side.size(), 2u);
}

TEST(Idempotents, ProductsMatchComponentwiseOracle) {
  for (int k : {2, 3}) {
    auto h = build_tower(product_spec(std::vector<tower_spec>(k, pure_spec(5, 6, 3))));
    auto r = idempotent_transfer(h, 0, 3);
    EXPECT_EQ(r.result.v, verdict::pass) << r.result.detail;
    EXPECT_EQ(r.tilt_side.size(), std::size_t{1} << k);
    EXPECT_EQ(r.layer_side.size(), std::size_t{1} << k);
    std::set<std::vector<u64>> got;
    for (const auto& e : layer_idempotents(h->layer(3))) got.insert(e.coordinates());
    EXPECT_EQ(got, product_idempotents(h->layer(3)));
  }
}

TEST(Idempotents, CharPEnumeration) {
  auto r = layer_product({layer_make(5, {1, 0, rational(0)}, 5, 0, rational(1)),
                          layer_make(5, {1, 0, rational(0)}, 1, 0, rational(1))});
  auto es = fp_idempotents(r);
  EXPECT_EQ(es.size(), 4u);
  for (const auto& e : es) EXPECT_EQ(e * e, e);
}

TEST(TorsionTransfer, TrivialCases) {
  EXPECT_EQ(torsion_transfer_check(pure(3), 1).result.v, verdict::trivial_case);
  EXPECT_EQ(torsion_transfer_check(kummer(), 1).result.v, verdict::trivial_case);
}

TEST(TorsionTransfer, KilledFactorMismatch) {
  tower_defects d;
  d.killed_factor = 1;
  auto h = build_tower(product_spec({pure_spec(5, 6, 2), pure_spec(5, 6, 2)}), d);
  auto r = torsion_transfer_check(h, 1);
  EXPECT_EQ(r.result.v, verdict::fail);
  ASSERT_FALSE(r.rows.empty());
  EXPECT_NE(r.rows[0].tilt_order_log, r.rows[0].layer_order_log);
}
