#include "torfol/fan.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <sstream>

#include "torfol/error.hpp"
#include "torfol/linalg.hpp"

namespace torfol {

namespace {

std::string cone_pair(size_t a, size_t b) {
  std::ostringstream os;
  os << "cones " << a << "," << b;
  return os.str();
}

std::string one(const char* label, size_t i) {
  std::ostringstream os;
  os << label << " " << i;
  return os.str();
}

// Structural checks that later geometric checks depend on.
bool cone_indices_ok(const FanData& f, const std::vector<size_t>& c) {
  for (size_t i : c)
    if (i >= f.rays.size()) return false;
  return std::is_sorted(c.begin(), c.end()) &&
         std::adjacent_find(c.begin(), c.end()) == c.end();
}

}  // namespace

RatMatrix cone_ray_rows(const FanData& f, const std::vector<size_t>& cone) {
  RatMatrix rows;
  rows.reserve(cone.size());
  for (size_t i : cone) rows.push_back(to_rat(f.rays.at(i)));
  return rows;
}

ConeHRep cone_hrep_of(const FanData& f, const std::vector<size_t>& cone) {
  return cone_hrep(cone_ray_rows(f, cone), f.rank);
}

std::vector<std::string> validate(const FanData& f) {
  std::vector<std::string> bad;
  if (f.rank < 0) bad.push_back("NegativeRank");

  // rays: shape, nonzero, primitive, distinct
  std::map<IntVector, size_t> first_seen;
  for (size_t i = 0; i < f.rays.size(); ++i) {
    const IntVector& r = f.rays[i];
    if (static_cast<int>(r.size()) != f.rank) {
      bad.push_back("RayShape: " + one("ray", i));
      continue;
    }
    if (is_zero(to_rat(r))) {
      bad.push_back("ZeroRay: " + one("ray", i));
      continue;
    }
    if (primitive_part(r) != r) bad.push_back("NonPrimitiveRay: " + one("ray", i));
    auto it = first_seen.find(r);
    if (it != first_seen.end())
      bad.push_back("DuplicateRay: rays " + std::to_string(it->second) + "," +
                    std::to_string(i));
    else
      first_seen.emplace(r, i);
  }
  if (!bad.empty()) return bad;  // cone checks assume sane rays

  // cones: indices, sortedness, simpliciality, duplicates, containment
  std::vector<bool> structurally_ok(f.max_cones.size(), true);
  for (size_t c = 0; c < f.max_cones.size(); ++c) {
    if (!cone_indices_ok(f, f.max_cones[c])) {
      bad.push_back("BadConeIndexSet: " + one("cone", c));
      structurally_ok[c] = false;
      continue;
    }
    std::vector<IntVector> rows;
    for (size_t i : f.max_cones[c]) rows.push_back(f.rays[i]);
    if (rank_int(rows) != static_cast<int>(rows.size())) {
      bad.push_back("NonSimplicialCone: " + one("cone", c));
      structurally_ok[c] = false;
    }
  }
  for (size_t a = 0; a < f.max_cones.size(); ++a)
    for (size_t b = a + 1; b < f.max_cones.size(); ++b) {
      if (!structurally_ok[a] || !structurally_ok[b]) continue;
      const auto& ca = f.max_cones[a];
      const auto& cb = f.max_cones[b];
      if (ca == cb) {
        bad.push_back("DuplicateCone: " + cone_pair(a, b));
        continue;
      }
      if (std::includes(cb.begin(), cb.end(), ca.begin(), ca.end()))
        bad.push_back("ConeContainedInAnother: " + cone_pair(a, b));
      else if (std::includes(ca.begin(), ca.end(), cb.begin(), cb.end()))
        bad.push_back("ConeContainedInAnother: " + cone_pair(b, a));
    }

  // every ray used by some cone
  std::vector<bool> used(f.rays.size(), false);
  for (size_t c = 0; c < f.max_cones.size(); ++c)
    if (structurally_ok[c])
      for (size_t i : f.max_cones[c]) used[i] = true;
  for (size_t i = 0; i < f.rays.size(); ++i)
    if (!used[i]) bad.push_back("UnusedRay: " + one("ray", i));

  // pairwise intersections are common faces: sigma_a ∩ sigma_b must equal the
  // cone on their shared rays (a face of both, since the cones are simplicial)
  for (size_t a = 0; a < f.max_cones.size(); ++a)
    for (size_t b = a + 1; b < f.max_cones.size(); ++b) {
      if (!structurally_ok[a] || !structurally_ok[b]) continue;
      std::vector<size_t> common;
      std::set_intersection(f.max_cones[a].begin(), f.max_cones[a].end(),
                            f.max_cones[b].begin(), f.max_cones[b].end(),
                            std::back_inserter(common));
      ConeHRep ha = cone_hrep_of(f, f.max_cones[a]);
      ConeHRep hb = cone_hrep_of(f, f.max_cones[b]);
      ConeHRep both;
      both.ineqs = ha.ineqs;
      both.eqs = ha.eqs;
      both.ineqs.insert(both.ineqs.end(), hb.ineqs.begin(), hb.ineqs.end());
      both.eqs.insert(both.eqs.end(), hb.eqs.begin(), hb.eqs.end());
      ConeVRep inter = double_description(both, f.rank);
      bool face = true;
      if (common.empty()) {
        face = inter.rays.empty() && inter.lineality.empty();
      } else {
        ConeHRep hc = cone_hrep_of(f, common);
        for (const auto& r : inter.rays)
          if (!hrep_contains(hc, to_rat(r))) face = false;
        for (const auto& l : inter.lineality) {
          RatVector neg(l.size());
          for (size_t j = 0; j < l.size(); ++j) neg[j] = -l[j];
          if (!hrep_contains(hc, l) || !hrep_contains(hc, neg)) face = false;
        }
      }
      if (!face) bad.push_back("IntersectionNotFace: " + cone_pair(a, b));
    }

  return bad;
}

bool is_valid(const FanData& f) { return validate(f).empty(); }

std::vector<Wall> walls(const FanData& f) {
  std::map<std::vector<size_t>, std::vector<size_t>> facet_sides;
  for (size_t c = 0; c < f.max_cones.size(); ++c) {
    const auto& cone = f.max_cones[c];
    if (cone.empty()) continue;
    for (size_t j = 0; j < cone.size(); ++j) {
      std::vector<size_t> facet;
      for (size_t k = 0; k < cone.size(); ++k)
        if (k != j) facet.push_back(cone[k]);
      facet_sides[facet].push_back(c);
    }
  }
  std::vector<Wall> out;
  for (auto& [facet, sides] : facet_sides) {
    if (sides.size() > 2)
      throw Error("Internal", "wall with more than two sides in a valid fan");
    std::sort(sides.begin(), sides.end());
    out.push_back(Wall{facet, sides});
  }
  return out;  // map iteration is already sorted by ray_indices
}

bool in_support(const FanData& f, const RatVector& x) {
  for (const auto& cone : f.max_cones)
    if (hrep_contains(cone_hrep_of(f, cone), x)) return true;
  return false;
}

FanData star_subdivide(const FanData& f, const IntVector& v) {
  if (static_cast<int>(v.size()) != f.rank)
    throw Error("ShapeMismatch", "star_subdivide: vector has wrong length");
  if (primitive_part(v) != v)
    throw Error("NotPrimitive", "star_subdivide: vector is not primitive");
  for (const auto& r : f.rays)
    if (r == v) throw Error("RayExists", "star_subdivide: already a ray");
  const RatVector vr = to_rat(v);
  if (!in_support(f, vr))
    throw Error("OutsideSupport", "star_subdivide: vector not in the support");

  FanData g;
  g.rank = f.rank;
  g.rays = f.rays;
  g.rays.push_back(v);
  const size_t m = f.rays.size();

  std::set<std::vector<size_t>> cones;
  for (const auto& cone : f.max_cones) {
    if (!hrep_contains(cone_hrep_of(f, cone), vr)) {
      cones.insert(cone);
      continue;
    }
    // barycentric coordinates of v in the (simplicial) cone
    auto lambda = solve(transpose(cone_ray_rows(f, cone)), vr);
    if (!lambda)
      throw Error("Internal", "star_subdivide: no barycentric coordinates");
    for (size_t j = 0; j < cone.size(); ++j) {
      if ((*lambda)[j] == 0) continue;
      if ((*lambda)[j] < 0)
        throw Error("Internal", "star_subdivide: negative barycentric coord");
      std::vector<size_t> nc;
      for (size_t k = 0; k < cone.size(); ++k)
        if (k != j) nc.push_back(cone[k]);
      nc.push_back(m);
      std::sort(nc.begin(), nc.end());
      cones.insert(std::move(nc));
    }
  }
  g.max_cones.assign(cones.begin(), cones.end());
  return g;
}

QuotientResult quotient_fan(const FanData& f, const RatMatrix& v_basis) {
  QuotientResult out;
  const int n = f.rank;
  std::vector<IntVector> sub = lattice_intersection_basis(v_basis, n);
  out.projection = quotient_projection(sub, n);
  const int q = static_cast<int>(out.projection.size());

  out.fan.rank = q;
  out.ray_image.assign(f.rays.size(), std::nullopt);
  std::map<IntVector, size_t> image_index;
  for (size_t i = 0; i < f.rays.size(); ++i) {
    IntVector img(q, 0);
    for (int r = 0; r < q; ++r)
      for (int c = 0; c < n; ++c) img[r] += out.projection[r][c] * f.rays[i][c];
    bool zero = true;
    for (const auto& x : img)
      if (x != 0) zero = false;
    if (zero) continue;
    img = primitive_part(img);
    auto it = image_index.find(img);
    if (it == image_index.end()) {
      it = image_index.emplace(img, out.fan.rays.size()).first;
      out.fan.rays.push_back(img);
    }
    out.ray_image[i] = it->second;
  }

  std::set<std::vector<size_t>> img_cones;
  for (const auto& cone : f.max_cones) {
    std::set<size_t> idx;
    for (size_t i : cone)
      if (out.ray_image[i]) idx.insert(*out.ray_image[i]);
    img_cones.insert(std::vector<size_t>(idx.begin(), idx.end()));
  }
  // a projected cone whose ray set sits inside another's is a face of it
  for (const auto& c : img_cones) {
    bool proper_subset = false;
    for (const auto& d : img_cones)
      if (c != d && std::includes(d.begin(), d.end(), c.begin(), c.end()))
        proper_subset = true;
    if (!proper_subset) out.fan.max_cones.push_back(c);
  }

  // drop rays used by no surviving cone (faces swallowed above may strand one)
  std::vector<bool> used(out.fan.rays.size(), false);
  for (const auto& c : out.fan.max_cones)
    for (size_t i : c) used[i] = true;
  std::vector<size_t> remap(out.fan.rays.size(), 0);
  std::vector<IntVector> kept;
  for (size_t i = 0; i < out.fan.rays.size(); ++i)
    if (used[i]) {
      remap[i] = kept.size();
      kept.push_back(out.fan.rays[i]);
    }
  if (kept.size() != out.fan.rays.size()) {
    out.fan.rays = std::move(kept);
    for (auto& c : out.fan.max_cones)
      for (auto& i : c) i = remap[i];
    for (auto& oi : out.ray_image)
      if (oi) oi = used[*oi] ? std::optional<size_t>(remap[*oi]) : std::nullopt;
  }

  // pointedness of each image cone, then full structural validation
  for (size_t c = 0; c < out.fan.max_cones.size(); ++c) {
    RatMatrix gens = cone_ray_rows(out.fan, out.fan.max_cones[c]);
    if (gens.empty()) continue;
    try {
      extreme_rays(RatCone{gens});
    } catch (const Error& e) {
      if (e.code() == "ConeHasLineality")
        out.violations.push_back("ImageNotPointed: " + one("cone", c));
      else
        throw;
    }
  }
  for (auto& v : validate(out.fan)) out.violations.push_back(std::move(v));
  out.is_fan = out.violations.empty();
  return out;
}

bool is_complete(const FanData& f) {
  if (f.max_cones.empty()) return false;
  for (const auto& cone : f.max_cones)
    if (static_cast<int>(cone.size()) != f.rank) return false;
  for (const Wall& w : walls(f)) {
    if (!w.interior()) return false;
    // certificate: the two sides lie in opposite half-spaces of the wall
    RatVector u;
    if (w.ray_indices.empty()) {
      if (f.rank != 1)
        throw Error("Internal", "is_complete: empty wall in rank > 1");
      u = {Rat(1)};
    } else {
      RatMatrix normals = annihilator(cone_ray_rows(f, w.ray_indices));
      if (normals.size() != 1)
        throw Error("Internal", "is_complete: wall normal not unique");
      u = normals[0];
    }
    Rat s0, s1;
    int side = 0;
    for (size_t c : w.sides) {
      for (size_t i : f.max_cones[c]) {
        bool in_wall =
            std::binary_search(w.ray_indices.begin(), w.ray_indices.end(), i);
        if (!in_wall) {
          (side == 0 ? s0 : s1) = dot(u, to_rat(f.rays[i]));
          break;
        }
      }
      ++side;
    }
    if (s0 == 0 || s1 == 0)
      throw Error("Internal", "is_complete: side ray on the wall hyperplane");
    if ((s0 > 0) == (s1 > 0)) return false;
  }
  return true;
}

}  // namespace torfol
