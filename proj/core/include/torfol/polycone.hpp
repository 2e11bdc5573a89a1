#ifndef TORFOL_POLYCONE_HPP
#define TORFOL_POLYCONE_HPP

#include <optional>
#include <vector>

#include "torfol/linalg.hpp"

namespace torfol {

// Rational polyhedral cones and polytopes, exact throughout.

// Cone from a V-description; rows of `generators` span it positively.
struct RatCone {
  RatMatrix generators;
};

// { x : ineq·x <= bound (pairwise), eq·x == bound (pairwise) }
struct RatPolytope {
  RatMatrix ineq_normals;
  RatVector ineq_bounds;
  RatMatrix eq_normals;
  RatVector eq_bounds;

  void add_ineq(RatVector a, Rat b) {
    ineq_normals.push_back(std::move(a));
    ineq_bounds.push_back(std::move(b));
  }
  void add_eq(RatVector a, Rat b) {
    eq_normals.push_back(std::move(a));
    eq_bounds.push_back(std::move(b));
  }
};

// H-description of a cone: { x : ineq·x >= 0, eq·x == 0 }.
struct ConeHRep {
  RatMatrix ineqs;
  RatMatrix eqs;
};

// V-description with explicit lineality part.
struct ConeVRep {
  RatMatrix lineality;            // echelon basis, possibly empty
  std::vector<IntVector> rays;    // primitive, lexicographically sorted
};

class UnboundedError : public Error {
 public:
  UnboundedError(const std::string& message, IntVector witness)
      : Error("Unbounded", message), direction(std::move(witness)) {}
  IntVector direction;
};

// Double description: extreme rays (and lineality) of an H-described cone.
// Inequalities are inserted in lexicographic order of their normalized
// normals, so the output is reproducible.
ConeVRep double_description(const ConeHRep& h, int dim);

// H-description of the cone spanned by `generators` (via the dual cone).
ConeHRep cone_hrep(const RatMatrix& generators, int dim);

bool hrep_contains(const ConeHRep& h, const RatVector& x);

// Primitive generators of the extreme rays of cone(generators), deduplicated
// and lexicographically sorted. Throws ConeHasLineality if the cone contains
// a line.
std::vector<IntVector> extreme_rays(const RatCone& c);

// V-description of sigma ∩ span(v_basis rows).
RatCone intersect_subspace(const RatCone& sigma, const RatMatrix& v_basis);

// All lattice points of a bounded polytope, lexicographically sorted.
// Unbounded (and nonempty) input raises UnboundedError carrying a recession
// direction; an empty polytope yields an empty list.
std::vector<IntVector> lattice_points(const RatPolytope& p);

// A rational point in relint(tau) ∩ span(v_basis), or nullopt when the exact
// strict-feasibility system has no solution. tau must be simplicial (its
// generator rows linearly independent). The witness is the first hit of a
// barycentric search over increasing common denominator, returned as the
// primitive lattice vector on its ray.
std::optional<RatVector> relint_rational_point(const RatCone& tau,
                                               const RatMatrix& v_basis);

// Exact maximum of coordinate `var` over the polytope, by Fourier–Motzkin
// projection. Returns nullopt when the polytope is empty; throws "Unbounded"
// when the coordinate has no upper bound on a nonempty polytope.
std::optional<Rat> maximize_coordinate(const RatPolytope& p, size_t var);

}  // namespace torfol

#endif
