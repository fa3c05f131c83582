#include <gtest/gtest.h>

#include "tiltlab/element_text.hpp"
#include "tiltlab/errors.hpp"
#include "tiltlab/monoidal.hpp"
#include "tiltlab/sampling.hpp"
#include "tiltlab/tilt.hpp"

using namespace tiltlab;

namespace {

layer_elem t_power(const layer_ring_ptr& r, int k) {
  monomial m;
  m.t = k;
  return layer_elem::mono(r, 0, m);
}

}  // namespace

TEST(SmallTilt, PurePresentation) {
  auto h = build_tower(pure_spec(5, 6, 3));
  auto pr = small_tilt(h, 0, 3);
  EXPECT_EQ(pr.describe(), "F_5[T]/(T^{125})");
  EXPECT_EQ(pr.quotient_exponents(), std::vector<int>{125});
  EXPECT_EQ(to_text(pr, p_flat(h, 0, 3)), "T");
  EXPECT_EQ(to_text(pr, f_flat_generator(h, 0, 3)), "T");
  EXPECT_TRUE(pr.ring->char_p());
}

TEST(SmallTilt, PFlatAtHigherLayers) {
  auto h = build_tower(pure_spec(5, 6, 3));
  EXPECT_EQ(to_text(small_tilt(h, 1, 2), p_flat(h, 1, 2)), "T^{5}");
  // Kummer start level 2: e_0 = 50, so p_flat = T^{50} and the ideal generator is T^{6}
  auto k = build_tower(kummer_spec(5, 2, rational(3, 25), 2, 6, 2));
  auto pr = small_tilt(k, 0, 2);
  EXPECT_EQ(pr.quotient_exponents(), std::vector<int>{150});
  EXPECT_EQ(to_text(pr, p_flat(k, 0, 2)), "T^{50}");
  EXPECT_EQ(to_text(pr, f_flat_generator(k, 0, 2)), "T^{6}");
  // at depth 1 the quotient is T^{30}, below p_flat
  EXPECT_EQ(to_text(small_tilt(k, 0, 1), p_flat(k, 0, 1)), "0");
}

TEST(SmallTilt, DepthErrors) {
  auto h = build_tower(pure_spec(5, 6, 3));
  EXPECT_THROW(small_tilt(h, 0, 4), level_out_of_range);
  EXPECT_THROW(small_tilt(h, 1, 3), level_out_of_range);
  EXPECT_THROW(tilt_tower(h, 3), insufficient_depth);
}

TEST(SmallTilt, ZeroDepthIsTheBareQuotient) {
  auto h = build_tower(pure_spec(5, 6, 3));
  auto pr = small_tilt(h, 1, 0);
  EXPECT_EQ(pr.quotient_exponents(), std::vector<int>{5});
  EXPECT_EQ(pr.ring->quot_dim(), h->layer(1)->quot_dim());
  EXPECT_THROW(sharp(small_tilt_elem::one(h, 1, 0)), zero_depth);
}

TEST(SmallTilt, FrobeniusCompatibleComponents) {
  auto h = build_tower(pure_spec(5, 6, 4));
  rng_t g = make_rng(2, 0);
  for (int s = 0; s < 100; ++s) {
    auto x = random_tilt_elem(h, 1, 3, g);
    for (int i = 0; i < 3; ++i) ASSERT_EQ(h->frob_projection(1 + i, x.component(i + 1)), x.component(i));
  }
}

TEST(SmallTilt, PresentationIsRingIsomorphism) {
  for (auto h : {build_tower(pure_spec(5, 6, 3)), build_tower(pure_spec(3, 4, 3, 1, rational(1)))}) {
    auto pr = small_tilt(h, 0, 2);
    // bijective on the monomial basis
    for (std::size_t i = 0; i < pr.ring->module_dim(); ++i) {
      auto [f, m] = pr.ring->module_basis(i);
      auto b = layer_elem::mono(pr.ring, f, m);
      ASSERT_EQ(small_tilt_elem::from_presentation(pr, b).to_presentation(pr), b);
    }
    rng_t g = make_rng(8, 1);
    for (int s = 0; s < 200; ++s) {
      auto x = random_layer_elem(pr.ring, g, 6), y = random_layer_elem(pr.ring, g, 6);
      auto fx = small_tilt_elem::from_presentation(pr, x), fy = small_tilt_elem::from_presentation(pr, y);
      ASSERT_EQ(small_tilt_elem::from_presentation(pr, x * y), fx * fy);
      ASSERT_EQ(small_tilt_elem::from_presentation(pr, x + y), fx + fy);
    }
  }
}

TEST(SmallTilt, FlatIdealIsKernelOfZerothProjection) {
  for (auto h : {build_tower(pure_spec(5, 6, 3)), build_tower(kummer_spec(2, 3, rational(1, 6), 1, 4, 3))}) {
    for (int j = 0; j < h->depth(); ++j) {
      const int m = h->depth() - j;
      auto pr = small_tilt(h, j, m);
      const int c = pr.ring->factor(0).ideal_t_exp;
      for (int k = 0; k < pr.quotient_exponents()[0]; ++k) {
        auto x = small_tilt_elem::from_presentation(pr, t_power(pr.ring, k));
        EXPECT_EQ(x.component(0).is_zero(), k >= c) << "j=" << j << " k=" << k;
      }
    }
  }
}

TEST(TiltTower, PassesAxiomsLikeSource) {
  for (auto h : {build_tower(pure_spec(5, 6, 3)), build_tower(kummer_spec(5, 2, rational(3, 25), 3, 6, 3))}) {
    auto src = check_axioms(*h, 100, 7);
    auto tl = check_axioms(*tilt_tower(h, 1), 100, 7);
    ASSERT_EQ(src.verdicts.size(), tl.verdicts.size());
    for (std::size_t i = 0; i < src.verdicts.size(); ++i)
      EXPECT_EQ(src.verdicts[i].result.v, tl.verdicts[i].result.v) << src.verdicts[i].axiom;
  }
}

TEST(TiltTower, TiltOfTiltHasSamePresentations) {
  auto h = build_tower(pure_spec(5, 6, 4));
  auto t1 = tilt_tower(h, 1);
  auto t2 = tilt_tower(t1, 1);
  for (int j = 0; j <= t2->depth(); ++j) {
    // the doubly tilted layers keep the T-adic length of the first tilt at the same level
    EXPECT_EQ(t2->layer(j)->factor(0).eisen_exp, t1->layer(j)->factor(0).eisen_exp);
    EXPECT_EQ(t2->layer(j)->factor(0).ideal_t_exp, t1->layer(j)->factor(0).ideal_t_exp);
  }
}

TEST(TiltTower, ProductTiltsComponentwise) {
  auto h = build_tower(product_spec({pure_spec(5, 6, 2), pure_spec(5, 6, 2)}));
  auto pr = small_tilt(h, 0, 2);
  ASSERT_EQ(pr.ring->num_factors(), 2u);
  EXPECT_EQ(pr.quotient_exponents(), (std::vector<int>{25, 25}));
  auto single = small_tilt(build_tower(pure_spec(5, 6, 2)), 0, 2);
  EXPECT_EQ(pr.ring->factor(0), single.ring->factor(0));
}

TEST(TiltText, ParseTiltExpressions) {
  auto h = build_tower(pure_spec(5, 6, 3));
  auto pr = small_tilt(h, 0, 3);
  auto x = parse_tilt_elem(pr, "pflat + T^{3}");
  EXPECT_EQ(to_text(pr, x), "T + T^{3}");
  EXPECT_EQ(parse_tilt_elem(pr, "fflat"), f_flat_generator(h, 0, 3));
  EXPECT_THROW(parse_tilt_elem(pr, "T^{"), parse_error);
}
