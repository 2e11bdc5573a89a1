#ifndef TORFOL_FAN_HPP
#define TORFOL_FAN_HPP

#include <optional>
#include <string>
#include <vector>

#include "torfol/polycone.hpp"
#include "torfol/rational.hpp"

namespace torfol {

// A simplicial fan in a lattice of rank `rank`. Rays are primitive and kept
// in input order; cones are sorted index sets into `rays`. All derived lists
// (walls, subdivision output, quotients) are sorted lexicographically so that
// runs reproduce bit for bit.
struct FanData {
  int rank = 0;
  std::vector<IntVector> rays;
  std::vector<std::vector<size_t>> max_cones;

  bool operator==(const FanData&) const = default;
};

// A codimension-1 face of a maximal cone, with the one (boundary) or two
// (interior) maximal cones it bounds.
struct Wall {
  std::vector<size_t> ray_indices;  // sorted
  std::vector<size_t> sides;        // indices into max_cones, sorted, size 1 or 2

  bool interior() const { return sides.size() == 2; }
  bool operator==(const Wall&) const = default;
};

// Rational row matrix of the rays of a cone (by index set).
RatMatrix cone_ray_rows(const FanData& f, const std::vector<size_t>& cone);

// Exact H-description of the cone spanned by the indexed rays.
ConeHRep cone_hrep_of(const FanData& f, const std::vector<size_t>& cone);

// Structural soundness: primitive distinct rays, simplicial cones, no unused
// ray, no cone contained in another, and every pairwise intersection of
// maximal cones a common face. Returns the full list of violations (empty
// means the fan is valid); each violation is a short code plus the offending
// indices.
std::vector<std::string> validate(const FanData& f);
bool is_valid(const FanData& f);

// All codimension-1 faces of maximal cones with their sides, sorted by ray
// index set. Requires a valid fan.
std::vector<Wall> walls(const FanData& f);

// Stellar subdivision along the ray through v: every maximal cone containing
// v is replaced by the joins of v with its facets not containing v. Requires
// v primitive, distinct from all rays ("RayExists"), and inside the support
// ("OutsideSupport").
FanData star_subdivide(const FanData& f, const IntVector& v);

// Does x lie in the support |F|?
bool in_support(const FanData& f, const RatVector& x);

// Projection of a fan to the quotient lattice N / (N ∩ V'). The images of
// the maximal cones need not form a fan; when they do not, `violations`
// records the failures, `is_fan` is false, and the induced map of toric
// varieties is defined in codimension one only.
struct QuotientResult {
  FanData fan;    // candidate: projected rays (primitivized, deduped) + cones
  bool is_fan = false;
  std::vector<std::string> violations;
  std::vector<IntVector> projection;  // (rank - dim V') x rank, kernel = N ∩ V'
  // old ray index -> new ray index, or nullopt when the ray collapses to 0
  std::vector<std::optional<size_t>> ray_image;
};

QuotientResult quotient_fan(const FanData& f, const RatMatrix& v_basis);

// True iff the support is all of N_R: every maximal cone full-dimensional,
// every wall interior, and each wall's two sides on opposite half-spaces.
// Requires a valid fan.
bool is_complete(const FanData& f);

}  // namespace torfol

#endif
