#include "torfol/foliation.hpp"

#include <algorithm>
#include <set>

#include "torfol/error.hpp"
#include "torfol/linalg.hpp"

namespace torfol {

FoliationDatum make_foliation(const RatMatrix& span_rows, int ambient_rank) {
  FoliationDatum v{echelon_basis(span_rows)};
  for (const auto& row : v.basis)
    if (static_cast<int>(row.size()) != ambient_rank)
      throw Error("ShapeMismatch", "foliation basis has wrong vector length");
  if (v.rank() < 1 || v.rank() >= ambient_rank)
    throw Error("FoliationRank",
                "a foliation needs 1 <= dim V < rank of the lattice");
  return v;
}

std::vector<size_t> rays_in_V(const FanData& f, const FoliationDatum& v) {
  std::vector<size_t> out;
  for (size_t i = 0; i < f.rays.size(); ++i)
    if (in_span(v.basis, to_rat(f.rays[i]))) out.push_back(i);
  return out;
}

TorusDivisor canonical_divisor(const FanData& f, const FoliationDatum& v) {
  TorusDivisor d{RatVector(f.rays.size(), Rat(0))};
  for (size_t i : rays_in_V(f, v)) d.coeffs[i] = -1;
  return d;
}

TorusDivisor canonical_divisor_ambient(const FanData& f) {
  return TorusDivisor{RatVector(f.rays.size(), Rat(-1))};
}

namespace {

RatMatrix full_space(int n) {
  RatMatrix m;
  for (int i = 0; i < n; ++i) {
    RatVector e(n, Rat(0));
    e[i] = 1;
    m.push_back(std::move(e));
  }
  return m;
}

RatMatrix ray_line(const FanData& f, size_t i) {
  return echelon_basis({to_rat(f.rays[i])});
}

}  // namespace

Filtration foliation_filtration(const FanData& f, const FoliationDatum& v) {
  Filtration phi;
  for (size_t i = 0; i < f.rays.size(); ++i) {
    std::vector<FiltrationJump> jumps;
    if (in_span(v.basis, to_rat(f.rays[i])))
      jumps.push_back({-1, ray_line(f, i)});
    jumps.push_back({0, v.basis});
    phi.per_ray.push_back(std::move(jumps));
  }
  return phi;
}

Filtration tangent_filtration(const FanData& f) {
  Filtration phi;
  for (size_t i = 0; i < f.rays.size(); ++i)
    phi.per_ray.push_back({{-1, ray_line(f, i)}, {0, full_space(f.rank)}});
  return phi;
}

Filtration cotangent_filtration(const FanData& f) {
  Filtration phi;
  for (size_t i = 0; i < f.rays.size(); ++i)
    phi.per_ray.push_back(
        {{0, annihilator({to_rat(f.rays[i])})}, {1, full_space(f.rank)}});
  return phi;
}

Filtration conormal_filtration(const FanData& f, const FoliationDatum& v) {
  const RatMatrix w = annihilator(v.basis);  // basis of V^perp in M_R
  Filtration phi;
  for (size_t i = 0; i < f.rays.size(); ++i) {
    const RatVector ray = to_rat(f.rays[i]);
    RatVector pairing(w.size());
    bool orthogonal = true;
    for (size_t j = 0; j < w.size(); ++j) {
      pairing[j] = dot(w[j], ray);
      if (pairing[j] != 0) orthogonal = false;
    }
    if (orthogonal) {
      phi.per_ray.push_back({{0, w}});
      continue;
    }
    // W ∩ ray^perp: combinations of the w_j annihilating the ray (may be 0-dim)
    RatMatrix combos = kernel_basis({pairing});
    RatMatrix cut;
    for (const auto& c : combos) {
      RatVector row(f.rank, Rat(0));
      for (size_t j = 0; j < w.size(); ++j)
        for (int t = 0; t < f.rank; ++t) row[t] += c[j] * w[j][t];
      cut.push_back(std::move(row));
    }
    phi.per_ray.push_back({{0, echelon_basis(cut)}, {1, w}});
  }
  return phi;
}

TorusDivisor c1_from_filtration(const FanData& f, const Filtration& phi) {
  if (phi.per_ray.size() != f.rays.size())
    throw Error("ShapeMismatch", "filtration does not match the ray list");
  TorusDivisor d{RatVector(f.rays.size(), Rat(0))};
  for (size_t i = 0; i < phi.per_ray.size(); ++i) {
    size_t prev = 0;
    Rat coef = 0;
    for (const auto& jump : phi.per_ray[i]) {
      const size_t dim = jump.space.size();
      if (dim < prev)
        throw Error("BadFiltration", "subspace dimensions must not decrease");
      coef -= Rat(jump.level) * Rat(static_cast<long>(dim - prev));
      prev = dim;
    }
    d.coeffs[i] = coef;
  }
  return d;
}

TorusDivisor canonical_divisor_via_conormal(const FanData& f,
                                            const FoliationDatum& v) {
  const RatMatrix w = annihilator(v.basis);
  TorusDivisor d{RatVector(f.rays.size(), Rat(0))};
  for (size_t i = 0; i < f.rays.size(); ++i) {
    bool orthogonal = true;
    for (const auto& functional : w)
      if (dot(functional, to_rat(f.rays[i])) != 0) orthogonal = false;
    if (orthogonal) d.coeffs[i] = -1;
  }
  return d;
}

bool SingularLocus::contains(const std::vector<size_t>& tau) const {
  return std::binary_search(cones.begin(), cones.end(), tau);
}

SingularLocus singular_locus(const FanData& f, const FoliationDatum& v) {
  const int n = f.rank;
  const int r = v.rank();

  std::set<std::vector<size_t>> faces;
  for (const auto& cone : f.max_cones)
    for (size_t mask = 0; mask < (size_t(1) << cone.size()); ++mask) {
      std::vector<size_t> tau;
      for (size_t j = 0; j < cone.size(); ++j)
        if (mask & (size_t(1) << j)) tau.push_back(cone[j]);
      faces.insert(std::move(tau));
    }

  SingularLocus out;
  for (const auto& tau : faces) {
    const std::vector<size_t>* sigma = nullptr;
    for (const auto& cone : f.max_cones)
      if (std::includes(cone.begin(), cone.end(), tau.begin(), tau.end())) {
        sigma = &cone;
        break;
      }
    if (!sigma) throw Error("Internal", "face without a maximal cone");

    // fractional coordinates: sigma's rays first, then a lattice complement
    const size_t k = sigma->size();
    RatMatrix basis = cone_ray_rows(f, *sigma);
    for (int j = 0; j < n && static_cast<int>(basis.size()) < n; ++j) {
      RatVector e(n, Rat(0));
      e[j] = 1;
      basis.push_back(e);
      if (rank(basis) != static_cast<int>(basis.size())) basis.pop_back();
    }
    const RatMatrix bt = transpose(basis);

    std::vector<bool> in_tau(k, false);
    for (size_t p = 0; p < k; ++p)
      in_tau[p] = std::binary_search(tau.begin(), tau.end(), (*sigma)[p]);

    RatMatrix rows;
    for (size_t p = 0; p < k; ++p)
      if (in_span(v.basis, to_rat(f.rays[(*sigma)[p]]))) {
        RatVector e(n, Rat(0));
        e[p] = 1;
        rows.push_back(std::move(e));
      }
    for (const auto& w : v.basis) {
      auto c = solve(bt, w);
      if (!c) throw Error("Internal", "coordinate basis is not a basis");
      for (size_t p = 0; p < k; ++p)
        if (in_tau[p]) (*c)[p] = 0;  // project away tau's coordinates
      rows.push_back(std::move(*c));
    }
    const int rk = rank(rows);
    if (rk > r) throw Error("Internal", "chart rank exceeds foliation rank");
    if (rk < r) out.cones.push_back(tau);
  }

  for (const auto& tau : out.cones) {
    bool minimal = true;
    for (const auto& other : out.cones)
      if (other != tau &&
          std::includes(tau.begin(), tau.end(), other.begin(), other.end()))
        minimal = false;
    if (minimal) out.minimal.push_back(tau);
  }
  return out;
}

bool curve_tangent(const FanData& f, const FoliationDatum& v, const Wall& w) {
  if (!w.interior())
    throw Error("BoundaryWall", "tangency is defined for interior walls");
  const RatMatrix span = cone_ray_rows(f, w.ray_indices);
  for (const auto& row : v.basis)
    if (!in_span(span, row)) return true;
  return false;
}

DicriticalResult is_dicritical(const FanData& f, const FoliationDatum& v) {
  const SingularLocus sing = singular_locus(f, v);
  for (const auto& tau : sing.cones) {
    if (tau.empty()) continue;
    auto p = relint_rational_point(RatCone{cone_ray_rows(f, tau)}, v.basis);
    if (p) return {true, DicriticalWitness{tau, int_of_rat(*p)}};
  }
  return {false, std::nullopt};
}

}  // namespace torfol
