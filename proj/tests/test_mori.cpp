#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <random>

#include "test_util.hpp"
#include "torfol/linalg.hpp"
#include "torfol/mori.hpp"
#include "torfol/polycone.hpp"

using namespace torfol;
using namespace torfol::testutil;

namespace {

// the projective plane blown up at a torus-fixed point (ray 3 exceptional)
FanData bl_p2_fan() {
  return FanData{2, ivrows({{1, 0}, {0, 1}, {-1, -1}, {1, 1}}),
                 {{0, 2}, {0, 3}, {1, 2}, {1, 3}}};
}

// weighted plane with one multiplicity-two chart
FanData wp112_fan() {
  return FanData{2, ivrows({{1, 0}, {0, 1}, {-1, -2}}),
                 {{0, 1}, {0, 2}, {1, 2}}};
}

// the flip example completed by coning its square over the opposite ray
FanData flip_complete_fan() {
  return FanData{
      3, ivrows({{1, 0, 0}, {0, 1, 1}, {0, 1, 0}, {1, 0, 1}, {-1, -1, -1}}),
      {{0, 1, 2}, {0, 1, 3}, {0, 2, 4}, {0, 3, 4}, {1, 2, 4}, {1, 3, 4}}};
}

Wall wall_by_rays(const FanData& f, std::vector<size_t> ray_idx) {
  std::sort(ray_idx.begin(), ray_idx.end());
  for (const auto& w : walls(f))
    if (w.ray_indices == ray_idx) return w;
  throw Error("Internal", "test wall not found");
}

// one-wall extremal data for driving the surgery ops directly
ExtremalRay class_of(const FanData& f, std::vector<size_t> ray_idx) {
  const Wall w = wall_by_rays(f, std::move(ray_idx));
  return ExtremalRay{primitive_part(curve_class(f, w).dot), {w}};
}

const std::vector<FanData>& complete_fans() {
  static const std::vector<FanData> fans = {
      p1_fan(),    p2_fan(),     p1xp1_fan(),
      p3_fan(),    bl_p2_fan(),  wp112_fan(),
      flip_complete_fan()};
  return fans;
}

}  // namespace

TEST_CASE("wall relation of the flip example square") {
  FanData f = flip_left_fan();
  auto rel = wall_relation(f, wall_by_rays(f, {0, 1}));
  CHECK(rel.rays == std::vector<size_t>{0, 1, 2, 3});
  CHECK(rel.a == rv({-1, -1, 1, 1}));
  CHECK(rel.alpha == std::vector<size_t>{0, 1});
  CHECK(rel.zero.empty());
  CHECK(rel.beta == std::vector<size_t>{2, 3});
}

TEST_CASE("wall relations on the plane and the product of lines") {
  FanData p2 = p2_fan();
  auto r2 = wall_relation(p2, wall_by_rays(p2, {0}));
  CHECK(r2.rays == std::vector<size_t>{0, 1, 2});
  CHECK(r2.a == rv({1, 1, 1}));
  CHECK(r2.alpha.empty());
  CHECK(r2.zero.empty());

  FanData pp = p1xp1_fan();
  auto rp = wall_relation(pp, wall_by_rays(pp, {1}));
  CHECK(rp.rays == std::vector<size_t>{1, 0, 2});
  CHECK(rp.a == rv({0, 1, 1}));
  CHECK(rp.zero == std::vector<size_t>{0});
  CHECK(rp.beta == std::vector<size_t>{1, 2});

  FanData a3 = affine3_fan();
  CHECK_THROWS_WITH_AS(wall_relation(a3, walls(a3).front()),
                       doctest::Contains("BoundaryWall"), Error);
}

TEST_CASE("wall relation multiplicity normalization on a weighted plane") {
  FanData f = wp112_fan();
  auto r0 = wall_relation(f, wall_by_rays(f, {0}));
  CHECK(r0.rays == std::vector<size_t>{0, 1, 2});
  CHECK(r0.a == RatVector{Rat(1, 2), Rat(1), Rat(1, 2)});
  auto r1 = wall_relation(f, wall_by_rays(f, {1}));
  CHECK(r1.a == rv({2, 1, 1}));
  auto r2 = wall_relation(f, wall_by_rays(f, {2}));
  CHECK(r2.a == RatVector{Rat(1, 2), Rat(1, 2), Rat(1)});
}

TEST_CASE("relations sum to zero and sign sets partition the positions") {
  std::mt19937_64 rng(5);
  for (const auto& f : complete_fans()) {
    for (const auto& w : walls(f)) {
      auto rel = wall_relation(f, w);
      RatVector sum(f.rank, Rat(0));
      for (size_t i = 0; i < rel.rays.size(); ++i)
        for (int j = 0; j < f.rank; ++j)
          sum[j] += rel.a[i] * Rat(f.rays[rel.rays[i]][j]);
      CHECK(is_zero(sum));
      CHECK(rel.alpha.size() + rel.zero.size() + rel.beta.size() ==
            rel.a.size());
      CHECK(rel.a.back() > 0);
      CHECK(rel.a[rel.a.size() - 2] > 0);

      // the sign data is invariant under positive rescaling
      Rat lambda(1 + static_cast<long>(rng() % 7),
                 1 + static_cast<long>(rng() % 5));
      lambda.canonicalize();
      std::vector<size_t> alpha, zero, beta;
      for (size_t i = 0; i < rel.a.size(); ++i) {
        const Rat x = lambda * rel.a[i];
        (x < 0 ? alpha : x == 0 ? zero : beta).push_back(i);
      }
      CHECK(alpha == rel.alpha);
      CHECK(zero == rel.zero);
      CHECK(beta == rel.beta);
    }
  }
}

TEST_CASE("curve classes of the worked walls") {
  FanData left = flip_left_fan();
  CHECK(curve_class(left, wall_by_rays(left, {0, 1})).dot ==
        rv({-1, -1, 1, 1}));

  FanData p2 = p2_fan();
  for (const auto& w : walls(p2)) CHECK(curve_class(p2, w).dot == rv({1, 1, 1}));

  FanData pp = p1xp1_fan();
  CHECK(curve_class(pp, wall_by_rays(pp, {1})).dot == rv({1, 0, 1, 0}));

  // entries vanish away from the rays adjacent to the wall
  for (const auto& f : complete_fans())
    for (const auto& w : walls(f)) {
      auto rel = wall_relation(f, w);
      auto cc = curve_class(f, w);
      for (size_t i = 0; i < cc.dot.size(); ++i)
        if (std::find(rel.rays.begin(), rel.rays.end(), i) == rel.rays.end())
          CHECK(cc.dot[i] == 0);
    }
}

TEST_CASE("K_F degrees on the flip example and the product of lines") {
  auto v = make_foliation(rows({{0, 1, 0}, {1, 0, 1}}), 3);
  FanData left = flip_left_fan();
  CHECK(kf_dot(left, v, wall_by_rays(left, {0, 1})) == Rat(-2));
  FanData right = flip_right_fan();
  CHECK(kf_dot(right, v, wall_by_rays(right, {2, 3})) == Rat(2));

  FanData pp = p1xp1_fan();
  auto ve1 = make_foliation(rows({{1, 0}}), 2);
  CHECK(kf_dot(pp, ve1, wall_by_rays(pp, {1})) == Rat(-2));

  FanData wp = wp112_fan();
  auto ve2 = make_foliation(rows({{0, 1}}), 2);
  CHECK(kf_dot(wp, ve2, wall_by_rays(wp, {0})) == Rat(-1));
}

TEST_CASE("principal divisors pair to zero with every wall class") {
  std::mt19937_64 rng(12);
  for (const auto& f : complete_fans()) {
    for (const auto& w : walls(f)) {
      const auto cc = curve_class(f, w);
      for (int rep = 0; rep < 10; ++rep) {
        RatVector m(f.rank);
        for (auto& x : m) x = static_cast<long>(rng() % 9) - 4;
        Rat pairing(0);
        for (size_t i = 0; i < f.rays.size(); ++i)
          pairing += dot(m, to_rat(f.rays[i])) * cc.dot[i];
        CHECK(pairing == 0);
      }
    }
  }
}

TEST_CASE("extremal rays of the standard complete fans") {
  auto ext2 = extremal_rays(p2_fan());
  REQUIRE(ext2.size() == 1);
  CHECK(ext2[0].cls == iv({1, 1, 1}));
  CHECK(ext2[0].walls.size() == 3);

  auto extpp = extremal_rays(p1xp1_fan());
  REQUIRE(extpp.size() == 2);
  CHECK(extpp[0].cls == iv({0, 1, 0, 1}));
  REQUIRE(extpp[0].walls.size() == 2);
  CHECK(extpp[0].walls[0].ray_indices == std::vector<size_t>{0});
  CHECK(extpp[0].walls[1].ray_indices == std::vector<size_t>{2});
  CHECK(extpp[1].cls == iv({1, 0, 1, 0}));

  auto ext3 = extremal_rays(p3_fan());
  REQUIRE(ext3.size() == 1);
  CHECK(ext3[0].cls == iv({1, 1, 1, 1}));
  CHECK(ext3[0].walls.size() == 6);

  auto extb = extremal_rays(bl_p2_fan());
  REQUIRE(extb.size() == 2);
  CHECK(extb[0].cls == iv({0, 0, 1, 1}));
  CHECK(extb[0].walls.size() == 2);
  CHECK(extb[1].cls == iv({1, 1, 0, -1}));
  REQUIRE(extb[1].walls.size() == 1);
  CHECK(extb[1].walls[0].ray_indices == std::vector<size_t>{3});

  auto extw = extremal_rays(wp112_fan());
  REQUIRE(extw.size() == 1);
  CHECK(extw[0].cls == iv({1, 2, 1}));
  CHECK(extw[0].walls.size() == 3);

  CHECK_THROWS_WITH_AS(extremal_rays(affine3_fan()),
                       doctest::Contains("RequiresComplete"), Error);
  CHECK_THROWS_WITH_AS(extremal_rays(flip_left_fan()),
                       doctest::Contains("RequiresComplete"), Error);
}

TEST_CASE("every wall class lies in the cone of the extremal classes") {
  for (const auto& f : complete_fans()) {
    const auto ext = extremal_rays(f);
    RatMatrix gens;
    for (const auto& r : ext) {
      // extremal classes are relations among the rays
      RatVector sum(f.rank, Rat(0));
      for (size_t i = 0; i < f.rays.size(); ++i)
        for (int j = 0; j < f.rank; ++j)
          sum[j] += Rat(r.cls[i]) * Rat(f.rays[i][j]);
      CHECK(is_zero(sum));
      gens.push_back(to_rat(r.cls));
      CHECK(!r.walls.empty());
      for (size_t k = 1; k < r.walls.size(); ++k)
        CHECK(r.walls[k - 1].ray_indices < r.walls[k].ray_indices);
    }
    const ConeHRep h = cone_hrep(gens, static_cast<int>(f.rays.size()));
    for (const auto& w : walls(f))
      CHECK(hrep_contains(h, curve_class(f, w).dot));
  }
}

TEST_CASE("contraction types read off the wall relation signs") {
  // the flip example: two negative coefficients
  FanData left = flip_left_fan();
  auto vf = make_foliation(rows({{0, 1, 0}, {1, 0, 1}}), 3);
  auto small_ray = class_of(left, {0, 1});
  auto cs = classify_contraction(left, vf, small_ray);
  CHECK(cs.type == ContractionType::small);
  CHECK(!cs.contracted_ray.has_value());

  // a ruling of the product of lines: fibre type
  FanData pp = p1xp1_fan();
  auto ve1 = make_foliation(rows({{1, 0}}), 2);
  auto extpp = extremal_rays(pp);
  auto cf = classify_contraction(pp, ve1, extpp[1]);
  CHECK(cf.type == ContractionType::fibre);
  CHECK_THROWS_WITH_AS(classify_contraction(pp, ve1, extpp[0]),
                       doctest::Contains("NotNegative"), Error);

  // the exceptional class of the blown-up plane: divisorial
  FanData bl = bl_p2_fan();
  auto extb = extremal_rays(bl);
  auto cd = classify_contraction(bl, make_foliation(rows({{1, 0}}), 2),
                                 extb[1]);
  CHECK(cd.type == ContractionType::divisorial);
  CHECK(cd.contracted_ray == 3);
  // with the foliation along the exceptional ray the class is not negative
  CHECK_THROWS_WITH_AS(
      classify_contraction(bl, make_foliation(rows({{1, 1}}), 2), extb[1]),
      doctest::Contains("NotNegative"), Error);
}

TEST_CASE("divisorial contraction merges the star and drops the ray") {
  // blow-up of the affine plane: contracting the middle ray restores it
  FanData bl{2, ivrows({{1, 0}, {1, 1}, {0, 1}}), {{0, 1}, {1, 2}}};
  REQUIRE(validate(bl).empty());
  FanData out = contract_divisorial(bl, class_of(bl, {1}));
  CHECK(out == FanData{2, ivrows({{1, 0}, {0, 1}}), {{0, 1}}});

  FanData blp = bl_p2_fan();
  FanData p2 = contract_divisorial(blp, extremal_rays(blp)[1]);
  CHECK(p2 == p2_fan());
  CHECK(is_complete(p2));

  CHECK_THROWS_WITH_AS(
      contract_divisorial(p1xp1_fan(), extremal_rays(p1xp1_fan())[0]),
      doctest::Contains("NotDivisorial"), Error);
}

TEST_CASE("flip exchanges the two triangulations of the square") {
  FanData left = flip_left_fan();
  auto r = class_of(left, {0, 1});
  FanData right = flip(left, r);
  CHECK(right == flip_right_fan());

  // flipping back restores the original triangulation
  auto rplus = class_of(right, {2, 3});
  CHECK(flip(right, rplus) == left);

  // the K_F degree changes sign across the flip
  auto v = make_foliation(rows({{0, 1, 0}, {1, 0, 1}}), 3);
  CHECK(kf_dot(left, v, wall_by_rays(left, {0, 1})) == Rat(-2));
  CHECK(kf_dot(right, v, wall_by_rays(right, {2, 3})) == Rat(2));

  CHECK_THROWS_WITH_AS(flip(p1xp1_fan(), class_of(p1xp1_fan(), {1})),
                       doctest::Contains("NotSmall"), Error);
}

TEST_CASE("pull-back detection along the rays inside V") {
  FanData pp = p1xp1_fan();
  auto pb = detect_pullback(pp, make_foliation(rows({{1, 0}}), 2));
  REQUIRE(pb.has_value());
  CHECK(pb->v_prime.basis == rows({{1, 0}}));
  CHECK(pb->quotient.is_fan);
  CHECK(is_complete(pb->quotient.fan));
  CHECK(pb->quotient.fan.rank == 1);
  CHECK(pb->quotient.fan.rays[0][0] * pb->quotient.fan.rays[1][0] == Int(-1));
  CHECK(!pb->induced.has_value());  // pure fibration

  FanData a3 = affine3_fan();
  auto v1 = make_foliation(rows({{1, 1, 0}, {0, 0, 1}}), 3);
  auto pa = detect_pullback(a3, v1);
  REQUIRE(pa.has_value());
  CHECK(pa->v_prime.basis == rows({{0, 0, 1}}));
  CHECK(pa->quotient.is_fan);
  REQUIRE(pa->induced.has_value());
  CHECK(pa->induced->rank() == 1);
  // the induced subspace is the image of v1 + v2
  RatVector img(2, Rat(0));
  for (int j = 0; j < 2; ++j)
    img[j] = dot(to_rat(pa->quotient.projection[j]), rv({1, 1, 0}));
  CHECK(in_span(pa->induced->basis, img));

  CHECK(!detect_pullback(a3, make_foliation(rows({{1, 2, 3}}), 3)).has_value());
}

TEST_CASE("the MMP ends in a fibration on the product of lines") {
  FanData pp = p1xp1_fan();
  auto v = make_foliation(rows({{1, 0}}), 2);
  MmpTrace t = run_mmp(pp, v);
  CHECK(t.input_verdict == Verdict::terminal);
  CHECK(!t.noncanonical_override);
  CHECK(t.outcome == MmpOutcome::fibration);
  REQUIRE(t.steps.size() == 1);
  CHECK(t.steps[0].type == ContractionType::fibre);
  CHECK(t.steps[0].kf == Rat(-2));
  CHECK(t.steps[0].chosen.cls == iv({1, 0, 1, 0}));
  CHECK(t.final_fan == pp);
  REQUIRE(t.pullback.has_value());
  CHECK(t.pullback->quotient.is_fan);
  CHECK(t.pullback->quotient.fan.rank == 1);
  CHECK(is_complete(t.pullback->quotient.fan));
  CHECK(!t.pullback->induced.has_value());
}

TEST_CASE("the MMP on projective space needs the override and reports a "
          "degenerate quotient") {
  FanData p3 = p3_fan();
  auto v = make_foliation(rows({{1, 0, 0}}), 3);
  CHECK_THROWS_WITH_AS(run_mmp(p3, v), doctest::Contains("RequiresCanonical"),
                       Error);
  MmpOptions opt;
  opt.allow_noncanonical = true;
  MmpTrace t = run_mmp(p3, v, opt);
  CHECK(t.input_verdict == Verdict::not_canonical);
  CHECK(t.noncanonical_override);
  CHECK(t.outcome == MmpOutcome::fibration);
  REQUIRE(t.steps.size() == 1);
  CHECK(t.steps[0].type == ContractionType::fibre);
  CHECK(t.steps[0].kf == Rat(-1));
  REQUIRE(t.pullback.has_value());
  CHECK(!t.pullback->quotient.is_fan);
  CHECK(!t.pullback->quotient.violations.empty());
}

TEST_CASE("the MMP contracts a divisor and then fibres on the blown-up "
          "plane") {
  FanData bl = bl_p2_fan();
  auto v = make_foliation(rows({{1, 0}}), 2);
  CHECK_THROWS_WITH_AS(run_mmp(bl, v), doctest::Contains("RequiresCanonical"),
                       Error);
  MmpOptions opt;
  opt.allow_noncanonical = true;
  MmpTrace t = run_mmp(bl, v, opt);
  CHECK(t.outcome == MmpOutcome::fibration);
  REQUIRE(t.steps.size() == 2);
  CHECK(t.steps[0].type == ContractionType::divisorial);
  CHECK(t.steps[0].kf == Rat(-1));
  CHECK(t.steps[0].after == p2_fan());
  CHECK(t.steps[1].type == ContractionType::fibre);
  CHECK(t.final_fan == p2_fan());
  for (const auto& s : t.steps) {
    CHECK(validate(s.after).empty());
    const long before = static_cast<long>(s.before.rays.size());
    const long after = static_cast<long>(s.after.rays.size());
    if (s.type == ContractionType::divisorial) CHECK(after == before - 1);
    if (s.type == ContractionType::small) CHECK(after == before);
  }
}

TEST_CASE("the MMP flips inside a complete fan and then fibres") {
  FanData f = flip_complete_fan();
  REQUIRE(validate(f).empty());
  REQUIRE(is_complete(f));
  auto v = make_foliation(rows({{0, 1, 0}, {1, 0, 1}}), 3);

  CHECK_THROWS_WITH_AS(run_mmp(f, v), doctest::Contains("RequiresCanonical"),
                       Error);
  MmpOptions opt;
  opt.allow_noncanonical = true;
  MmpTrace t = run_mmp(f, v, opt);
  CHECK(t.input_verdict == Verdict::not_canonical);
  CHECK(t.outcome == MmpOutcome::fibration);
  REQUIRE(t.steps.size() == 2);
  CHECK(t.steps[0].type == ContractionType::small);
  CHECK(t.steps[0].kf == Rat(-2));
  CHECK(t.steps[0].chosen.cls == iv({-1, -1, 1, 1, 0}));
  CHECK(t.steps[0].dicritical_before);
  CHECK(!t.steps[0].dicritical_after);
  CHECK(t.steps[0].after.rays == f.rays);
  CHECK(t.steps[1].type == ContractionType::fibre);
  // after the flip the fibre class picks up all three rays inside V
  CHECK(t.steps[1].kf == Rat(-3));
  CHECK(t.steps[1].chosen.cls == iv({0, 0, 1, 1, 1}));
  CHECK(!t.steps[1].dicritical_before);
  REQUIRE(t.pullback.has_value());
  CHECK(t.pullback->quotient.is_fan);
  CHECK(t.pullback->quotient.fan.rank == 1);
  CHECK(is_complete(t.pullback->quotient.fan));
  CHECK(!t.pullback->induced.has_value());

  // the flip cap aborts the run before the first flip
  MmpOptions capped = opt;
  capped.max_flips = 0;
  CHECK_THROWS_WITH_AS(run_mmp(f, v, capped),
                       doctest::Contains("FlipCapExceeded"), Error);

  // forcing a wall of the fibre class skips the flip entirely
  MmpOptions forced = opt;
  forced.pick_walls = {{0, 2}};
  MmpTrace tf = run_mmp(f, v, forced);
  CHECK(tf.steps.size() == 1);
  CHECK(tf.steps[0].type == ContractionType::fibre);

  // a wall off the negative extremal rays is rejected
  MmpOptions bad = opt;
  bad.pick_walls = {{0, 4}};
  CHECK_THROWS_WITH_AS(run_mmp(f, v, bad), doctest::Contains("UnknownWall"),
                       Error);
}

TEST_CASE("the MMP reports nef when no class is negative") {
  FanData pp = p1xp1_fan();
  auto v = make_foliation(rows({{1, 1}}), 2);  // no rays inside V, K_F = 0
  MmpOptions opt;
  opt.allow_noncanonical = true;
  MmpTrace t = run_mmp(pp, v, opt);
  CHECK(t.outcome == MmpOutcome::nef);
  CHECK(t.steps.empty());
  CHECK(t.final_fan == pp);
  CHECK(!t.pullback.has_value());

  CHECK_THROWS_WITH_AS(run_mmp(flip_left_fan(), v),
                       doctest::Contains("RequiresComplete"), Error);
}
