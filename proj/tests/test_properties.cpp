#include <gtest/gtest.h>

#include <random>

#include "oracles.hpp"
#include "support.hpp"

using namespace topodyn;
using namespace topodyn::testing;

namespace {

shift_system example3() { return shift_system(sft_system::build({{0, 1, 0, 0}, {1, 0, 1, 0}, {0, 1, 0, 1}, {0, 0, 1, 0}}, 1), "example3"); }
shift_system golden() { return shift_system(sft_system::build({{1, 1}, {1, 0}}), "golden"); }
shift_system full2() { return shift_system(sft_system::build({{1, 1}, {1, 1}}), "full2"); }

struct bare_map {
  using point_type = double;
  double apply(double x) const { return x; }
  double apply_inverse(double x) const { return x; }
  double distance(double a, double b) const { return std::abs(a - b); }
};

}  // namespace

// ---------- barycenter ----------

TEST(Barycenter, EqualPointsAreTrivial) {
  auto s = golden();
  auto p = parse_point(s.sft(), "(01)^inf");
  auto r = check_barycenter(s, p, p, 0.125, 10, 10, 20);
  ASSERT_TRUE(r.witness);
  EXPECT_EQ(r.witness->m, 0);
  EXPECT_TRUE(r.uniform);
  EXPECT_TRUE(verify_barycenter_witness(s, *r.witness));
}

// The map moves points right, so a point tracking 0 backward can be sent
// near 1; the reverse order is impossible.
TEST(Barycenter, LadderOrderMatters) {
  ladder_system sys;
  auto zero = ladder_point::at_zero(), one = ladder_point::at_one();
  auto forward = check_barycenter(sys, zero, one, 0.2, 5, 5, 64);
  ASSERT_TRUE(forward.witness);
  EXPECT_TRUE(verify_barycenter_witness(sys, *forward.witness));
  EXPECT_LT(bary_error_oracle(sys, *forward.witness), 0.2);
  auto back = check_barycenter(sys, one, zero, 0.2, 5, 5, 64);
  EXPECT_FALSE(back.witness);
  EXPECT_TRUE(back.exhaustive);
}

TEST(Barycenter, VerifierRejectsBadWitnesses) {
  ladder_system sys;
  auto w = *check_barycenter(sys, ladder_point::at_zero(), ladder_point::at_one(), 0.2, 5, 5, 64).witness;
  const double dev = barycenter_deviation(sys, w);
  auto tight = w;
  tight.epsilon = dev;
  EXPECT_FALSE(verify_barycenter_witness(sys, tight));
  auto late = w;
  late.N = late.m - 1;
  if (late.m > 0) {
    EXPECT_FALSE(verify_barycenter_witness(sys, late));
  }
  auto neg = w;
  neg.n1 = -1;
  EXPECT_FALSE(verify_barycenter_witness(sys, neg));
}

// Bipartite shift: every pair of periodic points of period <= 4 has a witness
// at eps = 1/8 within 32 steps, and the parity-split pair has no su point.
TEST(Barycenter, Example3PeriodicPairs) {
  auto s = example3();
  auto per = enumerate_periodic(s.sft(), 4);
  ASSERT_FALSE(per.empty());
  for (auto& p : per)
    for (auto& q : per) {
      auto r = check_barycenter(s, p, q, 0.125, 20, 20, 32);
      ASSERT_TRUE(r.witness) << to_string(p, 1) << " " << to_string(q, 1);
      EXPECT_LE(r.witness->m, 32);
      EXPECT_LT(bary_error_oracle(s, *r.witness), 0.125);
    }
  auto a = parse_point(s.sft(), "(12)^inf"), b = parse_point(s.sft(), "(21)^inf");
  EXPECT_TRUE(su_intersect(s.sft(), a, parse_point(s.sft(), "(34)^inf")));
  EXPECT_FALSE(su_intersect(s.sft(), a, b));
  EXPECT_FALSE(check_accessible(s, a, b, per, 4));
}

TEST(Barycenter, CatMapRandomPairs) {
  auto sys = cat_map();
  toral_gluer<precise_real> gluer(sys, 0.05);
  std::mt19937_64 rng(11);
  for (int i = 0; i < 5; ++i) {
    auto p = random_torus(rng), q = random_torus(rng);
    auto r = check_barycenter(gluer, p, q, 30, 30);
    ASSERT_TRUE(r.witness);
    EXPECT_LE(r.witness->m, gluer.bound());
    EXPECT_LT(bary_error_oracle(sys, *r.witness), 0.05);
  }
}

TEST(Barycenter, CantorNeedsEquality) {
  cantor_identity_system sys(5);
  auto& pts = sys.points();
  auto r = check_barycenter(sys, pts.front(), pts.back(), 0.5 * sys.gap(), 3, 3, 10);
  EXPECT_FALSE(r.witness);
  EXPECT_TRUE(r.exhaustive);
}

// ---------- gluing ----------

TEST(Gluing, SingleSegmentIsItsOwnShadow) {
  auto s = full2();
  auto x = parse_point(s.sft(), "(0)^inf.1.(01)^inf@0");
  auto g = gluing_orbit(s, {{x, 8}}, 0.125);
  EXPECT_TRUE(g.gaps.empty());
  EXPECT_LT(glue_error_oracle(s, g), 0.125);
}

TEST(Gluing, MixingShiftUsesConstantGap) {
  auto s = golden();
  const double eps = 0.125;
  sft_gluer gl(s, eps);
  ASSERT_TRUE(gl.mixing());
  EXPECT_EQ(gl.bound(), static_cast<std::int64_t>(*mixing_time(s.sft())) + 2 * shift_system::agreement_radius(eps));
  std::vector<segment<ep_point>> segs{{parse_point(s.sft(), "(0)^inf"), 6},
                                      {parse_point(s.sft(), "(01)^inf"), 5},
                                      {parse_point(s.sft(), "(001)^inf"), 7}};
  auto g = gl.glue(segs);
  for (auto p : g.gaps) EXPECT_EQ(p, gl.bound());
  EXPECT_TRUE(verify_gluing_witness(s, g));
  EXPECT_LT(glue_error_oracle(s, g), eps);
}

TEST(Gluing, PeriodicShiftStillGlues) {
  auto s = example3();
  sft_gluer gl(s, 0.125);
  EXPECT_FALSE(gl.mixing());
  auto g = gl.glue({{parse_point(s.sft(), "(12)^inf"), 6}, {parse_point(s.sft(), "(34)^inf"), 6}, {parse_point(s.sft(), "(23)^inf"), 4}});
  EXPECT_TRUE(verify_gluing_witness(s, g));
  EXPECT_LT(glue_error_oracle(s, g), 0.125);
}

TEST(Gluing, CatMapTwoSegments) {
  auto sys = cat_map();
  std::mt19937_64 rng(5);
  auto g = gluing_orbit(sys, {{random_torus(rng), 50}, {random_torus(rng), 50}}, 0.05);
  ASSERT_EQ(g.gaps.size(), 1u);
  EXPECT_GE(g.gaps[0], 1);
  EXPECT_LE(g.gaps[0], g.N);
  EXPECT_LT(glue_error_oracle(sys, g), 0.05);
}

TEST(Gluing, RandomShiftRequests) {
  auto s = full2();
  std::mt19937_64 rng(21);
  sft_gluer gl(s, 0.25);
  for (int trial = 0; trial < 30; ++trial) {
    std::vector<segment<ep_point>> segs;
    const int k = std::uniform_int_distribution<int>(1, 4)(rng);
    for (int i = 0; i < k; ++i) segs.push_back({random_shift_point(rng, s, 6), std::uniform_int_distribution<int>(1, 10)(rng)});
    auto g = gl.glue(segs);
    EXPECT_TRUE(verify_gluing_witness(s, g));
    EXPECT_LT(glue_error_oracle(s, g), 0.25);
  }
}

TEST(Gluing, NotShadowingCapable) {
  ladder_system sys;
  EXPECT_THROW(
      {
        try {
          gluing_orbit(sys, std::vector<segment<ladder_point>>{{ladder_point::at_zero(), 3}}, 0.1);
        } catch (const error& e) {
          EXPECT_EQ(e.code(), errc::not_shadowing_capable);
          throw;
        }
      },
      error);
}

TEST(Gluing, BarycenterRoundTrip) {
  auto s = full2();
  sft_gluer gl(s, 0.125);
  std::mt19937_64 rng(8);
  for (int i = 0; i < 20; ++i) {
    auto p = random_shift_point(rng, s, 5), q = random_shift_point(rng, s, 5);
    auto w = barycenter_from_gluing(s, gl, p, q, 1 + i % 3);
    EXPECT_LE(w.m, w.N);
    EXPECT_TRUE(verify_barycenter_witness(s, w));
    EXPECT_LT(bary_error_oracle(s, w), 0.125);
  }
  auto sys = cat_map();
  toral_gluer<precise_real> tg(sys, 0.05);
  for (int i = 0; i < 3; ++i) {
    auto w = barycenter_from_gluing(sys, tg, random_torus(rng), random_torus(rng), 1);
    EXPECT_TRUE(verify_barycenter_witness(sys, w));
  }
  EXPECT_THROW(barycenter_from_gluing(s, gl, random_shift_point(rng, s, 2), random_shift_point(rng, s, 2), 0), error);
}

// ---------- accessibility ----------

TEST(Accessible, SamePointIsEmptyPath) {
  auto sys = cat_map();
  std::mt19937_64 rng(1);
  auto x = random_torus(rng);
  auto p = check_accessible(sys, x, x, {}, 2);
  ASSERT_TRUE(p);
  EXPECT_EQ(p->length(), 0u);
}

TEST(Accessible, CatMapInTwoSteps) {
  auto sys = cat_map();
  std::mt19937_64 rng(2);
  for (int i = 0; i < 10; ++i) {
    auto x = random_torus(rng), y = random_torus(rng);
    auto p = check_accessible(sys, x, y, {}, 2);
    ASSERT_TRUE(p);
    EXPECT_LE(p->length(), 2u);
    EXPECT_TRUE(verify_su_path(sys, *p));
    EXPECT_EQ(sys.distance(p->nodes.front(), x), 0);
    EXPECT_EQ(sys.distance(p->nodes.back(), y), 0);
  }
}

TEST(Accessible, CantorAndOracleless) {
  cantor_identity_system c(4);
  EXPECT_FALSE(check_accessible(c, c.points()[0], c.points()[1], c.points(), 5));
  bare_map b;
  try {
    check_accessible(b, 0.0, 1.0, {}, 2);
    FAIL();
  } catch (const error& e) {
    EXPECT_EQ(e.code(), errc::relation_oracle_unavailable);
  }
}

TEST(Accessible, BrokenPathRejected) {
  auto s = full2();
  su_path<ep_point> p{{parse_point(s.sft(), "(0)^inf"), parse_point(s.sft(), "(1)^inf")}, {su_relation::stable}};
  EXPECT_FALSE(verify_su_path(s, p));
  p.relations.clear();
  EXPECT_FALSE(verify_su_path(s, p));
}

// ---------- average shadowing ----------

TEST(AverageShadowing, TrueOrbit) {
  auto sys = circle_map_system::make_rotation(1, 7);
  auto seq = orbit(sys, 0.1, 200);
  auto r = average_shadowing_check(sys, seq, 0.01, 0.1, 0.05);
  EXPECT_TRUE(r.is_avg_pseudo_orbit);
  EXPECT_EQ(r.min_n0, 1u);
  EXPECT_NEAR(r.full_average, 0, 1e-12);
  EXPECT_TRUE(*r.avg_shadowed_by_y);
}

// One jump of 0.3 halfway: windows of length n average 0.3/n at worst.
TEST(AverageShadowing, SingleJump) {
  auto sys = circle_map_system::make_rotation(1, 7);
  auto seq = orbit(sys, 0.1, 100);
  auto tail = orbit(sys, sys.apply(seq.back()) + 0.3 - std::floor(sys.apply(seq.back()) + 0.3), 100);
  seq.insert(seq.end(), tail.begin(), tail.end());
  auto r = average_shadowing_check(sys, seq, 0.007, 0.1, 0.2);
  ASSERT_TRUE(r.min_n0);
  EXPECT_EQ(*r.min_n0, 43u);
  EXPECT_NEAR(*r.limsup_proxy, 0.15, 1e-9);
  EXPECT_TRUE(*r.avg_shadowed_by_y);
  EXPECT_FALSE(*average_shadowing_check(sys, seq, 0.007, 0.1, 0.1).avg_shadowed_by_y);
}

TEST(AverageShadowing, StuckSequence) {
  auto sys = circle_map_system::make_rotation(1, 7);
  std::vector<double> seq(50, 0.1);
  auto r = average_shadowing_check(sys, seq, 0.1, std::nullopt, 0.1);
  EXPECT_FALSE(r.is_avg_pseudo_orbit);
  EXPECT_FALSE(r.min_n0);
  EXPECT_FALSE(r.avg_shadowed_by_y);
  EXPECT_THROW(average_shadowing_check(sys, std::vector<double>{0.1}, 0.1, std::nullopt, 0.1), error);
}

// ---------- empirical transitivity ----------

TEST(Transitivity, IdentityIsNot) {
  cantor_identity_system c(4);
  auto r = empirical_transitivity(c, 0.01, 50);
  EXPECT_FALSE(r.transitive_at_mesh);
  EXPECT_FALSE(r.mixing_at_mesh);
}

TEST(Transitivity, Example3TransitiveNotMixing) {
  auto r = empirical_transitivity(example3(), 0.125, 20);
  EXPECT_TRUE(r.transitive_at_mesh);
  EXPECT_TRUE(r.one_sided_at_mesh);
  EXPECT_FALSE(r.mixing_at_mesh);
  auto g = empirical_transitivity(golden(), 0.125, 20);
  EXPECT_TRUE(g.mixing_at_mesh);
}

TEST(Transitivity, CatMapMixes) {
  auto r = empirical_transitivity(cat_map(), 0.05, 200);
  EXPECT_TRUE(r.transitive_at_mesh);
  EXPECT_TRUE(r.mixing_at_mesh);
}

TEST(Transitivity, MorseSmaleIsNot) {
  auto r = empirical_transitivity(circle_map_system::make_morse_smale(2), 0.02, 200);
  EXPECT_FALSE(r.transitive_at_mesh);
}

// ---------- rotation shadow search ----------

TEST(RotationShadow, DriftHasNoShadow) {
  auto sys = circle_map_system::make_rotation(1, 1000003);
  std::vector<double> seq{0.0};
  for (int i = 1; i < 2000; ++i) {
    double v = sys.apply(seq.back()) + 0.0009;
    seq.push_back(v - std::floor(v));
  }
  auto r = search_rotation_shadow(sys, seq, 1e-4);
  EXPECT_TRUE(r.certified_none(0.05));
  auto exact = search_rotation_shadow(sys, orbit(sys, 0.25, 500), 1e-4);
  EXPECT_LT(exact.best_error, 1e-4);
  EXPECT_FALSE(exact.certified_none(0.05));
  EXPECT_THROW(search_rotation_shadow(circle_map_system::make_morse_smale(1), seq, 1e-3), error);
}

// ---------- coherence between properties ----------

// Barycenter witnesses for every sampled pair and su-accessibility on a
// mixing shift; the mixing proxy agrees.
TEST(Coherence, GoldenMeanAllPositive) {
  auto s = golden();
  auto per = enumerate_periodic(s.sft(), 4);
  for (auto& p : per)
    for (auto& q : per) {
      EXPECT_TRUE(check_barycenter(s, p, q, 0.125, 10, 10, 32).witness);
      EXPECT_TRUE(check_accessible(s, p, q, per, 2));
    }
  EXPECT_TRUE(empirical_transitivity(s, 0.125, 20).mixing_at_mesh);
}

// A barycenter witness at eps yields a chain from near p to near q, so
// chain-transitivity of the grid follows on the cat map.
TEST(Coherence, CatMapGridTransitive) {
  auto sys = cat_map();
  auto g = sys.grid(0.05);
  auto cg = build_chain_graph(g, 0.1);
  auto a = chain_analysis(cg);
  EXPECT_TRUE(a.chain_transitive);
  EXPECT_TRUE(a.chain_mixing);
}
