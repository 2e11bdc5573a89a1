#include "torfol/verify.hpp"

#include <algorithm>
#include <random>

#include "torfol/linalg.hpp"

namespace torfol {

Rat SupportFunction::operator()(size_t cone_index, const RatVector& x) const {
  if (cone_index >= functionals.size())
    throw Error("ShapeMismatch", "SupportFunction: cone index out of range");
  return dot(functionals[cone_index], x);
}

SupportFunction support_function(const FanData& f, const TorusDivisor& d) {
  if (d.coeffs.size() != f.rays.size())
    throw Error("ShapeMismatch",
                "support_function: need one coefficient per ray");
  SupportFunction out;
  out.divisor = d;
  for (const auto& cone : f.max_cones) {
    RatVector rhs;
    for (size_t idx : cone) rhs.push_back(-d.coeffs[idx]);
    auto psi = solve(cone_ray_rows(f, cone), rhs);
    if (!psi)
      throw Error("Internal", "support_function: inconsistent cone system");
    out.functionals.push_back(*psi);
  }
  // agreement across every shared wall certifies the divisor Q-Cartier
  for (const auto& w : walls(f)) {
    if (!w.interior()) continue;
    for (size_t idx : w.ray_indices) {
      const RatVector x = to_rat(f.rays[idx]);
      if (out(w.sides[0], x) != out(w.sides[1], x))
        throw Error("Internal", "support_function: wall disagreement");
    }
  }
  return out;
}

Rat discrepancy_oracle(const FanData& f, const FoliationDatum& v,
                       const IntVector& vj) {
  const FanData g = star_subdivide(f, vj);  // validates the candidate
  const size_t new_ray = f.rays.size();
  const SupportFunction psi = support_function(f, canonical_divisor(f, v));
  const RatVector x = to_rat(vj);
  size_t sigma = f.max_cones.size();
  for (size_t c = 0; c < f.max_cones.size(); ++c)
    if (hrep_contains(cone_hrep_of(f, f.max_cones[c]), x)) {
      sigma = c;
      break;
    }
  if (sigma == f.max_cones.size())
    throw Error("Internal", "discrepancy_oracle: candidate in no cone");
  return canonical_divisor(g, v).coeffs[new_ray] + psi(sigma, x);
}

namespace {

// rank of the evaluated generator matrix: one constant unit row per chart
// ray inside V, the remaining basis rows scaled by the point's coordinates
int evaluated_rank(const std::vector<size_t>& s_pos, const RatMatrix& rest,
                   const RatVector& point, int n) {
  RatMatrix m;
  for (size_t i : s_pos) {
    RatVector row(n, Rat(0));
    row[i] = 1;
    m.push_back(std::move(row));
  }
  for (const auto& w : rest) {
    RatVector row(n);
    for (int j = 0; j < n; ++j) row[j] = w[j] * point[j];
    m.push_back(std::move(row));
  }
  return rank(m);
}

}  // namespace

bool minor_rank_oracle(const FanData& f, const FoliationDatum& v,
                       const std::vector<size_t>& sigma,
                       const std::vector<size_t>& tau) {
  const int n = f.rank;
  if (static_cast<int>(sigma.size()) != n)
    throw Error("SmoothChartOnly",
                "minor_rank_oracle: chart must be full-dimensional");
  std::vector<IntVector> rows;
  for (size_t idx : sigma) {
    if (idx >= f.rays.size())
      throw Error("ShapeMismatch", "minor_rank_oracle: ray index out of range");
    rows.push_back(f.rays[idx]);
  }
  if (cone_multiplicity(rows) != 1)
    throw Error("SmoothChartOnly", "minor_rank_oracle: chart is not unimodular");
  for (size_t idx : tau)
    if (std::find(sigma.begin(), sigma.end(), idx) == sigma.end())
      throw Error("ShapeMismatch", "minor_rank_oracle: tau is not a face");

  // chart positions whose ray lies inside V: their vector fields saturate
  // to constant coordinate fields
  std::vector<size_t> s_pos;
  for (size_t i = 0; i < sigma.size(); ++i)
    if (in_span(v.basis, to_rat(f.rays[sigma[i]]))) s_pos.push_back(i);

  // the rest of a basis of V, written in chart (ray) coordinates with the
  // saturated positions eliminated
  const RatMatrix bt = transpose(cone_ray_rows(f, sigma));
  RatMatrix coords;
  for (const auto& b : v.basis) {
    auto c = solve(bt, b);
    if (!c) throw Error("Internal", "minor_rank_oracle: coordinate solve");
    coords.push_back(*c);
  }
  RatMatrix rest = echelon_basis(coords);
  for (auto& row : rest)
    for (size_t i : s_pos) row[i] = 0;
  rest = echelon_basis(rest);
  if (rest.size() + s_pos.size() != v.basis.size())
    throw Error("Internal", "minor_rank_oracle: adapted basis miscount");

  // generic orbit point: zero on tau's rays, distinct primes elsewhere;
  // a second assignment guards against accidental rank drop
  static const long primes1[] = {2,  3,  5,  7,  11, 13, 17, 19,
                                 23, 29, 31, 37, 41, 43, 47, 53};
  static const long primes2[] = {59, 61, 67, 71, 73, 79, 83, 89,
                                 97, 101, 103, 107, 109, 113, 127, 131};
  if (static_cast<size_t>(n) > std::size(primes1))
    throw Error("ShapeMismatch", "minor_rank_oracle: rank too large");
  const int r = v.rank();
  int got[2] = {0, 0};
  for (int pass = 0; pass < 2; ++pass) {
    RatVector point(n);
    for (int i = 0; i < n; ++i) {
      const bool on_tau = std::find(tau.begin(), tau.end(), sigma[i]) != tau.end();
      point[i] = on_tau ? Rat(0) : Rat(pass == 0 ? primes1[i] : primes2[i]);
    }
    got[pass] = evaluated_rank(s_pos, rest, point, n);
  }
  if (got[0] != got[1])
    throw Error("Internal", "minor_rank_oracle: prime assignments disagree");
  return got[0] < r;
}

FanData base_fan(BaseFan base, int rank) {
  if (rank < 2)
    throw Error("ShapeMismatch", "base_fan: rank must be at least 2");
  FanData f;
  f.rank = rank;
  if (base == BaseFan::projective_space) {
    for (int i = 0; i < rank; ++i) {
      IntVector e(rank, Int(0));
      e[i] = 1;
      f.rays.push_back(std::move(e));
    }
    f.rays.push_back(IntVector(rank, Int(-1)));
    for (int skip = 0; skip <= rank; ++skip) {
      std::vector<size_t> cone;
      for (int i = 0; i <= rank; ++i)
        if (i != skip) cone.push_back(static_cast<size_t>(i));
      f.max_cones.push_back(std::move(cone));
    }
  } else {
    for (int s = 0; s < 2; ++s)
      for (int i = 0; i < rank; ++i) {
        IntVector e(rank, Int(0));
        e[i] = s == 0 ? 1 : -1;
        f.rays.push_back(std::move(e));
      }
    for (unsigned long mask = 0; mask < (1ul << rank); ++mask) {
      std::vector<size_t> cone;
      for (int i = 0; i < rank; ++i)
        cone.push_back(static_cast<size_t>(i) +
                       (((mask >> i) & 1ul) ? static_cast<size_t>(rank) : 0));
      std::sort(cone.begin(), cone.end());
      f.max_cones.push_back(std::move(cone));
    }
  }
  std::sort(f.max_cones.begin(), f.max_cones.end());
  return f;
}

RandomSample random_complete_fan(const RandomFanSpec& spec) {
  std::mt19937_64 rng(spec.seed);
  FanData f = base_fan(spec.base, spec.rank);
  for (int s = 0; s < spec.subdivisions; ++s) {
    const auto cone = f.max_cones[rng() % f.max_cones.size()];
    IntVector w(spec.rank, Int(0));
    for (size_t idx : cone) {
      const long c = 1 + static_cast<long>(rng() % 3);
      for (int j = 0; j < spec.rank; ++j) w[j] += c * f.rays[idx][j];
    }
    // interior point of a full-dimensional cone: never an existing ray
    f = star_subdivide(f, primitive_part(w));
  }
  const int r = 1 + static_cast<int>(rng() % (spec.rank - 1));
  RatMatrix rows;
  for (;;) {
    rows.clear();
    for (int i = 0; i < r; ++i) {
      RatVector row(spec.rank);
      for (auto& x : row) x = static_cast<long>(rng() % 7) - 3;
      rows.push_back(std::move(row));
    }
    if (rank(rows) == r) break;
  }
  return {std::move(f), make_foliation(rows, spec.rank)};
}

}  // namespace torfol
