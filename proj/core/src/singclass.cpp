#include "torfol/singclass.hpp"

#include <algorithm>
#include <set>

#include "torfol/error.hpp"
#include "torfol/linalg.hpp"
#include "torfol/polycone.hpp"

namespace torfol {

Rat ConeFunctional::operator()(const RatVector& x) const {
  return dot(extension, x);
}

namespace {

ConeFunctional from_values(const FanData& f, const std::vector<size_t>& cone,
                           RatVector values) {
  RatMatrix gens = cone_ray_rows(f, cone);
  auto u = solve(gens, values);
  if (!u) throw Error("NotSimplicial", "cone functional needs independent rays");
  return ConeFunctional{cone, std::move(values), std::move(*u)};
}

}  // namespace

ConeFunctional m_sigma(const FanData& f, const std::vector<size_t>& cone) {
  return from_values(f, cone, RatVector(cone.size(), Rat(1)));
}

ConeFunctional m_sigma_V(const FanData& f, const std::vector<size_t>& cone,
                         const FoliationDatum& v) {
  RatVector values(cone.size(), Rat(0));
  for (size_t i = 0; i < cone.size(); ++i)
    if (in_span(v.basis, to_rat(f.rays[cone[i]]))) values[i] = 1;
  return from_values(f, cone, std::move(values));
}

ConeFunctional m_sigma_prime(const FanData& f, const std::vector<size_t>& cone,
                             const FoliationDatum& v) {
  RatVector values(cone.size(), Rat(1));
  for (size_t i = 0; i < cone.size(); ++i)
    if (in_span(v.basis, to_rat(f.rays[cone[i]]))) values[i] = 0;
  return from_values(f, cone, std::move(values));
}

Rat discrepancy(const FanData& f, const std::vector<size_t>& cone,
                const FoliationDatum& v, const IntVector& vj) {
  if (primitive_part(vj) != vj)
    throw Error("NotPrimitive", "discrepancy: point is not primitive");
  for (const auto& r : f.rays)
    if (r == vj)
      throw Error("NotExceptional", "discrepancy: point generates a fan ray");
  if (!hrep_contains(cone_hrep_of(f, cone), to_rat(vj)))
    throw Error("OutsideCone", "discrepancy: point is outside the cone");
  ConeFunctional m = m_sigma_V(f, cone, v);
  Rat a = m(to_rat(vj));
  if (in_span(v.basis, to_rat(vj))) a -= 1;
  return a;
}

const char* verdict_name(Verdict v) {
  switch (v) {
    case Verdict::terminal:
      return "terminal";
    case Verdict::canonical_not_terminal:
      return "canonical_not_terminal";
    case Verdict::not_canonical:
      return "not_canonical";
  }
  return "unknown";
}

namespace {

bool is_fan_ray(const FanData& f, const IntVector& p) {
  for (const auto& r : f.rays)
    if (r == p) return true;
  return false;
}

void keep_lex_min(std::optional<IntVector>& best, const IntVector& p) {
  if (!best || p < *best) best = p;
}

ConeReport classify_cone(const FanData& f, const std::vector<size_t>& cone,
                         const FoliationDatum& v) {
  const int n = f.rank;
  ConeFunctional m = m_sigma_V(f, cone, v);
  for (const auto& val : m.values)
    if (val < 0)
      throw Error("Internal", "m_{sigma,V} must be nonnegative on the cone");

  std::optional<IntVector> canonical_breaker;  // discrepancy < 0
  std::optional<IntVector> terminal_breaker;   // discrepancy = 0
  Rat canonical_disc;                          // of the lex-min breaker

  // (a) two generators outside V span a 2-face whose interior points have
  //     m = 0; any primitive one not inside V has discrepancy 0
  std::vector<size_t> outside;
  for (size_t i = 0; i < cone.size(); ++i)
    if (m.values[i] == 0) outside.push_back(cone[i]);
  if (outside.size() >= 2) {
    for (size_t a = 0; a < outside.size(); ++a)
      for (size_t b = a + 1; b < outside.size(); ++b) {
        const IntVector& vi = f.rays[outside[a]];
        const IntVector& vj = f.rays[outside[b]];
        for (int pattern = 0; pattern < 3; ++pattern) {
          const long ci = pattern == 2 ? 2 : 1;
          const long cj = pattern == 1 ? 2 : 1;
          IntVector w(n);
          for (int t = 0; t < n; ++t) w[t] = ci * vi[t] + cj * vj[t];
          w = primitive_part(w);
          if (in_span(v.basis, to_rat(w)) || is_fan_ray(f, w)) continue;
          keep_lex_min(terminal_breaker, w);
        }
      }
  }

  // (b), (c): candidates inside V live in the slice C = sigma ∩ V
  RatCone c = intersect_subspace(RatCone{cone_ray_rows(f, cone)}, v.basis);
  if (!c.generators.empty()) {
    std::vector<IntVector> ext = extreme_rays(c);  // sigma pointed, so is C
    bool positive = true;
    for (const auto& g : ext) {
      if (m(to_rat(g)) == 0) {
        positive = false;
        if (!is_fan_ray(f, g)) keep_lex_min(canonical_breaker, g);
      }
    }
    if (!positive && !canonical_breaker)
      throw Error("Internal",
                  "vanishing extreme ray of sigma ∩ V is a fan ray");
    if (canonical_breaker) canonical_disc = -1;

    if (positive) {
      // m > 0 on C minus the origin: {m <= 1} slice of C is a lattice simplex
      ConeHRep h = cone_hrep(c.generators, n);
      RatPolytope p;
      for (const auto& a : h.ineqs) {
        RatVector row(a.size());
        for (size_t t = 0; t < a.size(); ++t) row[t] = -a[t];
        p.add_ineq(row, Rat(0));
      }
      for (const auto& e : h.eqs) p.add_eq(e, Rat(0));
      p.add_ineq(m.extension, Rat(1));
      std::set<IntVector> seen;
      for (const auto& pt : lattice_points(p)) {
        if (is_zero(to_rat(pt))) continue;
        IntVector prim = primitive_part(pt);
        if (!seen.insert(prim).second) continue;
        if (is_fan_ray(f, prim)) continue;
        const Rat mv = m(to_rat(prim));
        const Rat disc = mv - 1;  // every point of C lies in V
        if (disc < 0)
          keep_lex_min(canonical_breaker, prim);
        else if (disc == 0)
          keep_lex_min(terminal_breaker, prim);
      }
      if (canonical_breaker)
        canonical_disc = m(to_rat(*canonical_breaker)) - 1;
    }
  }

  ConeReport report;
  report.cone = cone;
  if (canonical_breaker) {
    report.verdict = Verdict::not_canonical;
    report.witness = SingWitness{cone, *canonical_breaker, canonical_disc};
  } else if (terminal_breaker) {
    report.verdict = Verdict::canonical_not_terminal;
    report.witness = SingWitness{cone, *terminal_breaker, Rat(0)};
  }
  return report;
}

}  // namespace

SingularityReport classify(const FanData& f, const FoliationDatum& v) {
  SingularityReport report;
  for (const auto& cone : f.max_cones) {
    report.per_cone.push_back(classify_cone(f, cone, v));
    const ConeReport& cr = report.per_cone.back();
    if (static_cast<int>(cr.verdict) > static_cast<int>(report.verdict)) {
      report.verdict = cr.verdict;
      report.witness = cr.witness;
    }
  }
  return report;
}

}  // namespace torfol
