#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>
#include <set>
#include <string>

#include "test_util.hpp"
#include "torfol/linalg.hpp"
#include "torfol/singclass.hpp"

using namespace torfol;
using namespace torfol::testutil;

namespace {

// a random rational subspace with 1 <= dim < n
FoliationDatum random_foliation(std::mt19937_64& rng, int n) {
  for (;;) {
    const int r = 1 + static_cast<int>(rng() % (n - 1));
    RatMatrix rows;
    for (int i = 0; i < r; ++i) {
      RatVector w(n);
      for (auto& x : w) x = static_cast<long>(rng() % 7) - 3;
      rows.push_back(std::move(w));
    }
    RatMatrix eb = echelon_basis(rows);
    if (!eb.empty() && static_cast<int>(eb.size()) < n)
      return make_foliation(eb, n);
  }
}

const std::vector<FanData>& fixture_fans() {
  static const std::vector<FanData> fans = {
      affine3_fan(), p2_fan(),        p1xp1_fan(),
      p3_fan(),      flip_left_fan(), flip_right_fan()};
  return fans;
}

bool is_fan_ray(const FanData& f, const IntVector& p) {
  for (const auto& r : f.rays)
    if (r == p) return true;
  return false;
}

int badness(Verdict v) { return static_cast<int>(v); }

}  // namespace

TEST_CASE("cone functionals on the affine chart") {
  FanData f = affine3_fan();
  std::vector<size_t> sigma{0, 1, 2};

  auto m = m_sigma(f, sigma);
  CHECK(m.values == rv({1, 1, 1}));
  CHECK(m(rv({2, 3, 5})) == Rat(10));

  auto v1 = make_foliation(rows({{1, 1, 0}, {0, 0, 1}}), 3);
  CHECK(m_sigma_V(f, sigma, v1).values == rv({0, 0, 1}));

  auto v2 = make_foliation(rows({{1, 0, 0}, {0, 0, 1}}), 3);
  auto mv2 = m_sigma_V(f, sigma, v2);
  CHECK(mv2.values == rv({1, 0, 1}));
  CHECK(mv2(rv({1, 0, 1})) == Rat(2));
  CHECK(m_sigma_prime(f, sigma, v2).values == rv({0, 1, 0}));
}

TEST_CASE("m_sigma splits through V and its complement on the span") {
  std::mt19937_64 rng(77);
  for (const auto& f : fixture_fans()) {
    for (int rep = 0; rep < 10; ++rep) {
      auto v = random_foliation(rng, f.rank);
      for (const auto& cone : f.max_cones) {
        auto m = m_sigma(f, cone);
        auto mv = m_sigma_V(f, cone, v);
        auto mp = m_sigma_prime(f, cone, v);
        RatVector x(f.rank, Rat(0));
        for (size_t i : cone) {
          const Rat c(static_cast<long>(rng() % 9) - 4);
          for (int j = 0; j < f.rank; ++j) x[j] += c * Rat(f.rays[i][j]);
        }
        CHECK(m(x) == mv(x) + mp(x));
      }
    }
  }
}

TEST_CASE("cone functionals require simplicial generators") {
  FanData bad{2, ivrows({{1, 0}, {0, 1}, {1, 1}}), {{0, 1, 2}}};
  CHECK_THROWS_WITH_AS(m_sigma(bad, {0, 1, 2}),
                       doctest::Contains("NotSimplicial"), Error);
}

TEST_CASE("discrepancies in the affine chart") {
  FanData f = affine3_fan();
  std::vector<size_t> sigma{0, 1, 2};
  auto v1 = make_foliation(rows({{1, 1, 0}, {0, 0, 1}}), 3);
  auto v2 = make_foliation(rows({{1, 0, 0}, {0, 0, 1}}), 3);

  CHECK(discrepancy(f, sigma, v1, iv({1, 1, 0})) == Rat(-1));
  CHECK(discrepancy(f, sigma, v2, iv({1, 1, 0})) == Rat(1));
  CHECK(discrepancy(f, sigma, v2, iv({1, 0, 1})) == Rat(1));

  CHECK_THROWS_WITH_AS(discrepancy(f, sigma, v1, iv({2, 2, 0})),
                       doctest::Contains("NotPrimitive"), Error);
  CHECK_THROWS_WITH_AS(discrepancy(f, sigma, v1, iv({1, 0, 0})),
                       doctest::Contains("NotExceptional"), Error);
  CHECK_THROWS_WITH_AS(discrepancy(f, sigma, v1, iv({-1, 0, 0})),
                       doctest::Contains("OutsideCone"), Error);
}

TEST_CASE("verdict names") {
  CHECK(std::string(verdict_name(Verdict::terminal)) == "terminal");
  CHECK(std::string(verdict_name(Verdict::canonical_not_terminal)) ==
        "canonical_not_terminal");
  CHECK(std::string(verdict_name(Verdict::not_canonical)) == "not_canonical");
}

TEST_CASE("classification of the three affine chart foliations") {
  FanData f = affine3_fan();

  auto r1 = classify(f, make_foliation(rows({{1, 1, 0}, {0, 0, 1}}), 3));
  CHECK(r1.verdict == Verdict::not_canonical);
  REQUIRE(r1.witness.has_value());
  CHECK(r1.witness->cone == std::vector<size_t>{0, 1, 2});
  CHECK(r1.witness->point == iv({1, 1, 0}));
  CHECK(r1.witness->disc == Rat(-1));
  REQUIRE(r1.per_cone.size() == 1);
  CHECK(r1.per_cone[0].verdict == Verdict::not_canonical);

  auto r2 = classify(f, make_foliation(rows({{1, 0, 0}, {0, 0, 1}}), 3));
  CHECK(r2.verdict == Verdict::terminal);
  CHECK(!r2.witness.has_value());
  REQUIRE(r2.per_cone.size() == 1);
  CHECK(r2.per_cone[0].verdict == Verdict::terminal);
  CHECK(!r2.per_cone[0].witness.has_value());

  auto r3 = classify(f, make_foliation(rows({{0, 0, 1}}), 3));
  CHECK(r3.verdict == Verdict::canonical_not_terminal);
  REQUIRE(r3.witness.has_value());
  CHECK(r3.witness->point == iv({1, 1, 0}));
  CHECK(r3.witness->disc == Rat(0));
}

TEST_CASE("classification on the two sides of the flip example") {
  auto v = make_foliation(rows({{0, 1, 0}, {1, 0, 1}}), 3);

  auto rl = classify(flip_left_fan(), v);
  CHECK(rl.verdict == Verdict::not_canonical);
  REQUIRE(rl.witness.has_value());
  CHECK(rl.witness->cone == std::vector<size_t>{0, 1, 2});
  CHECK(rl.witness->point == iv({1, 1, 1}));
  CHECK(rl.witness->disc == Rat(-1));
  REQUIRE(rl.per_cone.size() == 2);
  REQUIRE(rl.per_cone[1].witness.has_value());
  CHECK(rl.per_cone[1].witness->point == iv({1, 1, 1}));

  auto rr = classify(flip_right_fan(), v);
  CHECK(rr.verdict == Verdict::terminal);
  CHECK(!rr.witness.has_value());
}

TEST_CASE("classification on a non-smooth surface chart") {
  FanData f{2, ivrows({{1, 0}, {1, 2}}), {{0, 1}}};
  REQUIRE(validate(f).empty());

  CHECK(classify(f, make_foliation(rows({{1, 0}}), 2)).verdict ==
        Verdict::terminal);
  CHECK(classify(f, make_foliation(rows({{1, 2}}), 2)).verdict ==
        Verdict::terminal);

  auto r = classify(f, make_foliation(rows({{0, 1}}), 2));
  CHECK(r.verdict == Verdict::canonical_not_terminal);
  REQUIRE(r.witness.has_value());
  CHECK(r.witness->point == iv({1, 1}));
  CHECK(r.witness->disc == Rat(0));

  auto r2 = classify(f, make_foliation(rows({{1, 1}}), 2));
  CHECK(r2.verdict == Verdict::not_canonical);
  REQUIRE(r2.witness.has_value());
  CHECK(r2.witness->point == iv({1, 1}));
  CHECK(r2.witness->disc == Rat(-1));
}

TEST_CASE("an interior lattice point of sigma ∩ V breaks terminality") {
  FanData f{3, ivrows({{1, 0, 0}, {1, 2, 0}, {0, 0, 1}}), {{0, 1, 2}}};
  REQUIRE(validate(f).empty());
  auto v = make_foliation(rows({{1, 0, 0}, {0, 1, 0}}), 3);
  auto r = classify(f, v);
  CHECK(r.verdict == Verdict::canonical_not_terminal);
  REQUIRE(r.witness.has_value());
  CHECK(r.witness->point == iv({1, 1, 0}));
  CHECK(r.witness->disc == Rat(0));
}

TEST_CASE("fractional negative discrepancy inside sigma ∩ V") {
  FanData f{3, ivrows({{1, 0, 0}, {2, 3, 0}, {0, 0, 1}}), {{0, 1, 2}}};
  REQUIRE(validate(f).empty());
  auto v = make_foliation(rows({{1, 0, 0}, {0, 1, 0}}), 3);
  auto r = classify(f, v);
  CHECK(r.verdict == Verdict::not_canonical);
  REQUIRE(r.witness.has_value());
  CHECK(r.witness->point == iv({1, 1, 0}));
  CHECK(r.witness->disc == Rat(-1, 3));
}

TEST_CASE("witnesses recompute their discrepancy and reports are consistent") {
  std::mt19937_64 rng(2026);
  for (const auto& f : fixture_fans()) {
    for (int rep = 0; rep < 10; ++rep) {
      auto v = random_foliation(rng, f.rank);
      auto r = classify(f, v);
      REQUIRE(r.per_cone.size() == f.max_cones.size());

      int worst = 0;
      for (size_t i = 0; i < r.per_cone.size(); ++i) {
        const auto& cr = r.per_cone[i];
        CHECK(cr.cone == f.max_cones[i]);
        CHECK((cr.verdict == Verdict::terminal) == !cr.witness.has_value());
        if (cr.witness) {
          CHECK(discrepancy(f, cr.witness->cone, v, cr.witness->point) ==
                cr.witness->disc);
          if (cr.verdict == Verdict::not_canonical)
            CHECK(cr.witness->disc < Rat(0));
          if (cr.verdict == Verdict::canonical_not_terminal)
            CHECK(cr.witness->disc == Rat(0));
        }
        worst = std::max(worst, badness(cr.verdict));
      }
      CHECK(badness(r.verdict) == worst);

      if (r.witness) {
        for (const auto& cr : r.per_cone)
          if (badness(cr.verdict) == worst) {
            REQUIRE(cr.witness.has_value());
            CHECK(r.witness->cone == cr.witness->cone);
            CHECK(r.witness->point == cr.witness->point);
            CHECK(r.witness->disc == cr.witness->disc);
            break;
          }
      } else {
        CHECK(worst == badness(Verdict::terminal));
      }
    }
  }
}

TEST_CASE("a box scan finds no violation the classifier missed") {
  std::mt19937_64 rng(31);
  for (const auto& f : fixture_fans()) {
    for (int rep = 0; rep < 8; ++rep) {
      auto v = random_foliation(rng, f.rank);
      auto r = classify(f, v);
      for (size_t ci = 0; ci < f.max_cones.size(); ++ci) {
        const auto& cone = f.max_cones[ci];
        const size_t k = cone.size();
        std::set<IntVector> seen;
        std::vector<long> c(k, 0);
        for (;;) {
          IntVector x(f.rank, Int(0));
          bool zero = true;
          for (size_t i = 0; i < k; ++i) {
            if (c[i] != 0) zero = false;
            for (int j = 0; j < f.rank; ++j)
              x[j] += Int(c[i]) * f.rays[cone[i]][j];
          }
          if (!zero) {
            IntVector p = primitive_part(x);
            if (!is_fan_ray(f, p) && seen.insert(p).second) {
              const Rat d = discrepancy(f, cone, v, p);
              if (r.per_cone[ci].verdict == Verdict::terminal)
                CHECK(d > Rat(0));
              if (r.per_cone[ci].verdict == Verdict::canonical_not_terminal)
                CHECK(d >= Rat(0));
            }
          }
          size_t pos = 0;
          while (pos < k && ++c[pos] > 3) {
            c[pos] = 0;
            ++pos;
          }
          if (pos == k) break;
        }
      }
    }
  }
}
