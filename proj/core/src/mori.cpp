#include "torfol/mori.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <string>
#include <utility>

#include "torfol/error.hpp"
#include "torfol/linalg.hpp"
#include "torfol/polycone.hpp"

namespace torfol {

namespace {

Int mult_of(const FanData& f, const std::vector<size_t>& idx) {
  if (idx.empty()) return Int(1);
  std::vector<IntVector> rr;
  for (size_t i : idx) rr.push_back(f.rays.at(i));
  return cone_multiplicity(rr);
}

// n x k matrix whose columns are the listed rays
RatMatrix ray_columns(const FanData& f, const std::vector<size_t>& idx) {
  RatMatrix cols(f.rank, RatVector(idx.size(), Rat(0)));
  for (size_t j = 0; j < idx.size(); ++j)
    for (int i = 0; i < f.rank; ++i) cols[i][j] = Rat(f.rays.at(idx[j])[i]);
  return cols;
}

Rat cls_pairing(const TorusDivisor& d, const IntVector& cls) {
  if (d.coeffs.size() != cls.size())
    throw Error("ShapeMismatch", "divisor and curve class sizes differ");
  Rat out(0);
  for (size_t i = 0; i < cls.size(); ++i) out += d.coeffs[i] * Rat(cls[i]);
  return out;
}

}  // namespace

WallRelationData wall_relation(const FanData& f, const Wall& w) {
  if (!w.interior())
    throw Error("BoundaryWall", "wall has a single adjacent maximal cone");
  WallRelationData out;
  out.wall = w;
  out.rays = w.ray_indices;
  const auto& side0 = f.max_cones.at(w.sides.at(0));
  const auto& side1 = f.max_cones.at(w.sides.at(1));
  auto opposite = [&](const std::vector<size_t>& side) -> size_t {
    for (size_t i : side)
      if (!std::binary_search(w.ray_indices.begin(), w.ray_indices.end(), i))
        return i;
    throw Error("Internal", "wall side has no opposite ray");
  };
  out.rays.push_back(opposite(side0));
  out.rays.push_back(opposite(side1));

  RatMatrix ker = kernel_basis(ray_columns(f, out.rays));
  if (ker.size() != 1)
    throw Error("Internal", "wall relation space is not one-dimensional");
  RatVector a = std::move(ker[0]);
  if (a.back() == 0)
    throw Error("Internal", "opposite ray has zero relation coefficient");

  const Rat mw = Rat(mult_of(f, w.ray_indices));
  const Rat scale = mw / Rat(mult_of(f, side1)) / a.back();
  for (auto& x : a) x *= scale;
  if (a[a.size() - 2] != mw / Rat(mult_of(f, side0)))
    throw Error("Internal", "wall relation multiplicity check failed");

  out.a = std::move(a);
  for (size_t i = 0; i < out.a.size(); ++i) {
    if (out.a[i] < 0)
      out.alpha.push_back(i);
    else if (out.a[i] == 0)
      out.zero.push_back(i);
    else
      out.beta.push_back(i);
  }
  return out;
}

CurveClass curve_class(const FanData& f, const Wall& w) {
  const WallRelationData rel = wall_relation(f, w);
  CurveClass out;
  out.wall = w;
  out.dot.assign(f.rays.size(), Rat(0));
  for (size_t i = 0; i < rel.rays.size(); ++i) out.dot[rel.rays[i]] = rel.a[i];
  return out;
}

Rat kf_dot(const FanData& f, const FoliationDatum& v, const Wall& w) {
  return dot(canonical_divisor(f, v).coeffs, curve_class(f, w).dot);
}

std::vector<ExtremalRay> extremal_rays(const FanData& f) {
  if (!is_valid(f) || !is_complete(f))
    throw Error("RequiresComplete", "extremal rays need a valid complete fan");
  const std::vector<Wall> ws = walls(f);
  const size_t m = f.rays.size();

  std::vector<size_t> all(m);
  for (size_t i = 0; i < m; ++i) all[i] = i;
  const RatMatrix ker = kernel_basis(ray_columns(f, all));
  if (ker.empty())
    throw Error("Internal", "complete fan with no curve classes");
  const RatMatrix kt = transpose(ker);

  std::vector<IntVector> coords;
  RatMatrix raw;
  for (const auto& w : ws) {
    const RatVector c = curve_class(f, w).dot;
    const auto y = solve(kt, c);
    if (!y) throw Error("Internal", "curve class outside the relation space");
    raw.push_back(*y);
    coords.push_back(primitive_part(*y));
  }

  std::vector<ExtremalRay> out;
  for (const auto& d : extreme_rays(RatCone{raw})) {
    ExtremalRay r;
    RatVector c(m, Rat(0));
    for (size_t b = 0; b < ker.size(); ++b)
      for (size_t i = 0; i < m; ++i) c[i] += Rat(d[b]) * ker[b][i];
    r.cls = primitive_part(c);
    for (size_t wi = 0; wi < ws.size(); ++wi)
      if (coords[wi] == d) r.walls.push_back(ws[wi]);
    if (r.walls.empty())
      throw Error("Internal", "extreme curve direction not hit by any wall");
    out.push_back(std::move(r));
  }
  std::sort(out.begin(), out.end(),
            [](const ExtremalRay& x, const ExtremalRay& y) {
              return x.cls < y.cls;
            });
  return out;
}

Contraction classify_contraction(const FanData& f, const FoliationDatum& v,
                                 const ExtremalRay& r) {
  const Rat pairing = cls_pairing(canonical_divisor(f, v), r.cls);
  if (pairing >= 0)
    throw Error("NotNegative",
                "extremal class has K_F . C = " + pairing.get_str());
  if (r.walls.empty()) throw Error("Internal", "extremal ray without walls");
  const WallRelationData rel = wall_relation(f, r.walls.front());
  Contraction out;
  if (rel.alpha.empty()) {
    out.type = ContractionType::fibre;
  } else if (rel.alpha.size() == 1) {
    out.type = ContractionType::divisorial;
    out.contracted_ray = rel.rays[rel.alpha[0]];
  } else {
    out.type = ContractionType::small;
  }
  return out;
}

FanData contract_divisorial(const FanData& f, const ExtremalRay& r) {
  if (r.walls.empty()) throw Error("Internal", "extremal ray without walls");
  std::optional<size_t> contracted;
  for (const auto& w : r.walls) {
    const WallRelationData rel = wall_relation(f, w);
    if (rel.alpha.size() != 1)
      throw Error("NotDivisorial",
                  "wall relation has " + std::to_string(rel.alpha.size()) +
                      " negative coefficients");
    const size_t ray = rel.rays[rel.alpha[0]];
    if (contracted && *contracted != ray)
      throw Error("Internal", "divisorial class contracts two distinct rays");
    contracted = ray;
  }

  std::vector<size_t> parent(f.max_cones.size());
  for (size_t i = 0; i < parent.size(); ++i) parent[i] = i;
  auto find = [&parent](size_t x) {
    while (parent[x] != x) {
      parent[x] = parent[parent[x]];
      x = parent[x];
    }
    return x;
  };
  for (const auto& w : r.walls) parent[find(w.sides[0])] = find(w.sides[1]);

  std::map<size_t, std::set<size_t>> groups;
  for (size_t i = 0; i < f.max_cones.size(); ++i)
    groups[find(i)].insert(f.max_cones[i].begin(), f.max_cones[i].end());

  FanData out;
  out.rank = f.rank;
  std::vector<std::optional<size_t>> remap(f.rays.size());
  for (size_t i = 0; i < f.rays.size(); ++i) {
    if (i == *contracted) continue;
    remap[i] = out.rays.size();
    out.rays.push_back(f.rays[i]);
  }
  std::set<std::vector<size_t>> cones;
  for (const auto& [root, members] : groups) {
    std::vector<size_t> cone;
    for (size_t i : members)
      if (i != *contracted) cone.push_back(*remap[i]);
    cones.insert(std::move(cone));
  }
  out.max_cones.assign(cones.begin(), cones.end());

  const auto violations = validate(out);
  if (!violations.empty())
    throw Error("NonQFactorialResult", violations.front());
  return out;
}

FanData flip(const FanData& f, const ExtremalRay& r) {
  if (r.walls.empty()) throw Error("Internal", "extremal ray without walls");
  std::set<size_t> removed;
  std::set<std::vector<size_t>> cones;
  for (const auto& w : r.walls) {
    const WallRelationData rel = wall_relation(f, w);
    if (rel.alpha.size() < 2)
      throw Error("NotSmall",
                  "wall relation has fewer than two negative coefficients");
    removed.insert(w.sides[0]);
    removed.insert(w.sides[1]);
    for (size_t j : rel.alpha) {
      std::vector<size_t> cone;
      for (size_t i = 0; i < rel.rays.size(); ++i)
        if (i != j) cone.push_back(rel.rays[i]);
      std::sort(cone.begin(), cone.end());
      cones.insert(std::move(cone));
    }
  }
  for (size_t i = 0; i < f.max_cones.size(); ++i)
    if (!removed.count(i)) cones.insert(f.max_cones[i]);

  FanData out;
  out.rank = f.rank;
  out.rays = f.rays;
  out.max_cones.assign(cones.begin(), cones.end());
  const auto violations = validate(out);
  if (!violations.empty())
    throw Error("NonQFactorialResult", violations.front());
  return out;
}

std::optional<PullbackData> detect_pullback(const FanData& f,
                                            const FoliationDatum& v) {
  const std::vector<size_t> inside = rays_in_V(f, v);
  if (inside.empty()) return std::nullopt;
  RatMatrix span;
  for (size_t i : inside) span.push_back(to_rat(f.rays[i]));

  PullbackData out;
  out.v_prime = make_foliation(span, f.rank);
  out.quotient = quotient_fan(f, out.v_prime.basis);

  const int q = out.quotient.fan.rank;
  RatMatrix img;
  for (const auto& b : v.basis) {
    RatVector y(q, Rat(0));
    for (int j = 0; j < q; ++j)
      y[j] = dot(to_rat(out.quotient.projection[j]), b);
    img.push_back(std::move(y));
  }
  const RatMatrix eb = echelon_basis(img);
  if (!eb.empty()) out.induced = make_foliation(eb, q);
  return out;
}

MmpTrace run_mmp(const FanData& f0, const FoliationDatum& v,
                 const MmpOptions& options) {
  if (!is_valid(f0) || !is_complete(f0))
    throw Error("RequiresComplete", "the MMP needs a valid complete fan");
  MmpTrace trace;
  trace.input_verdict = classify(f0, v).verdict;
  if (trace.input_verdict == Verdict::not_canonical) {
    if (!options.allow_noncanonical)
      throw Error("RequiresCanonical",
                  "foliated pair is not canonical; set the override to run");
    trace.noncanonical_override = true;
  }

  FanData f = f0;
  int flips = 0;
  for (size_t step_index = 0;; ++step_index) {
    const TorusDivisor kdiv = canonical_divisor(f, v);
    std::vector<std::pair<Rat, ExtremalRay>> negs;
    for (auto& r : extremal_rays(f)) {
      const Rat pairing = cls_pairing(kdiv, r.cls);
      if (pairing < 0) negs.emplace_back(pairing, std::move(r));
    }
    if (negs.empty()) {
      trace.outcome = MmpOutcome::nef;
      trace.final_fan = std::move(f);
      return trace;
    }

    size_t pick = negs.size();
    if (step_index < options.pick_walls.size() &&
        !options.pick_walls[step_index].empty()) {
      std::vector<size_t> want = options.pick_walls[step_index];
      std::sort(want.begin(), want.end());
      for (size_t i = 0; i < negs.size() && pick == negs.size(); ++i)
        for (const auto& w : negs[i].second.walls)
          if (w.ray_indices == want) {
            pick = i;
            break;
          }
      if (pick == negs.size())
        throw Error("UnknownWall",
                    "forced wall is not on a K_F-negative extremal ray");
    } else {
      for (size_t i = 0; i < negs.size(); ++i)
        if (pick == negs.size() ||
            negs[i].second.walls.front().ray_indices <
                negs[pick].second.walls.front().ray_indices)
          pick = i;
    }

    MmpStep step;
    step.chosen = std::move(negs[pick].second);
    step.kf = negs[pick].first;
    step.before = f;
    step.dicritical_before = is_dicritical(f, v).dicritical;

    const Contraction c = classify_contraction(f, v, step.chosen);
    step.type = c.type;
    if (c.type == ContractionType::fibre) {
      step.after = f;
      step.dicritical_after = step.dicritical_before;
      trace.steps.push_back(std::move(step));
      trace.outcome = MmpOutcome::fibration;
      trace.pullback = detect_pullback(f, v);
      trace.final_fan = std::move(f);
      return trace;
    }

    if (c.type == ContractionType::small && ++flips > options.max_flips)
      throw Error("FlipCapExceeded",
                  "more than " + std::to_string(options.max_flips) + " flips");
    FanData next = c.type == ContractionType::divisorial
                       ? contract_divisorial(f, step.chosen)
                       : flip(f, step.chosen);
    if (!is_complete(next))
      throw Error("Internal", "MMP step produced a non-complete fan");
    step.after = next;
    step.dicritical_after = is_dicritical(next, v).dicritical;
    if (!step.dicritical_before && step.dicritical_after)
      throw Error("DicriticalityNotPreserved",
                  "non-dicritical pair became dicritical after a step");
    trace.steps.push_back(std::move(step));
    f = std::move(next);
  }
}

}  // namespace torfol
