#ifndef TORFOL_FOLIATION_HPP
#define TORFOL_FOLIATION_HPP

#include <optional>
#include <vector>

#include "torfol/fan.hpp"
#include "torfol/rational.hpp"

namespace torfol {

// A rational subspace V of N_R defining a foliation on the toric variety.
// The basis is kept in canonical echelon form; 1 <= dim V < rank N.
struct FoliationDatum {
  RatMatrix basis;

  int rank() const { return static_cast<int>(basis.size()); }
  bool operator==(const FoliationDatum&) const = default;
};

// Canonicalizes (echelon) and checks 1 <= dim < ambient_rank
// ("FoliationRank" otherwise).
FoliationDatum make_foliation(const RatMatrix& span_rows, int ambient_rank);

// A torus-invariant divisor as one rational coefficient per ray index.
struct TorusDivisor {
  RatVector coeffs;
  bool operator==(const TorusDivisor&) const = default;
};

// One jump of an increasing ray filtration: at `level` the filtration becomes
// `space` (echelon basis; empty = zero subspace). Levels strictly increase
// and the last space is the full one for the sheaf at hand.
struct FiltrationJump {
  int level = 0;
  RatMatrix space;
  bool operator==(const FiltrationJump&) const = default;
};

struct Filtration {
  std::vector<std::vector<FiltrationJump>> per_ray;
  bool operator==(const Filtration&) const = default;
};

// Indices of rays whose generator lies in V (exact membership).
std::vector<size_t> rays_in_V(const FanData& f, const FoliationDatum& v);

// K_F = - sum of D_rho over rays contained in V.
TorusDivisor canonical_divisor(const FanData& f, const FoliationDatum& v);

// K_X = - sum of D_rho over all rays.
TorusDivisor canonical_divisor_ambient(const FanData& f);

// Ray filtrations of the four sheaves the library works with.
Filtration foliation_filtration(const FanData& f, const FoliationDatum& v);
Filtration tangent_filtration(const FanData& f);
Filtration cotangent_filtration(const FanData& f);
Filtration conormal_filtration(const FanData& f, const FoliationDatum& v);

// First Chern class: coefficient of D_rho is - sum_i i * dim(graded piece i).
TorusDivisor c1_from_filtration(const FanData& f, const Filtration& phi);

// K_F computed through the dual route: - sum of D_rho over rays whose
// functional annihilators contain V^perp. Always equals canonical_divisor.
TorusDivisor canonical_divisor_via_conormal(const FanData& f,
                                            const FoliationDatum& v);

// The cones whose orbit closures lie in the singular locus of the foliation,
// with the inclusion-minimal members listed separately.
struct SingularLocus {
  std::vector<std::vector<size_t>> cones;    // all singular cones, lex sorted
  std::vector<std::vector<size_t>> minimal;  // inclusion-minimal among them

  bool contains(const std::vector<size_t>& tau) const;
};

// Rank rule, evaluated per maximal cone in its fractional ray coordinates:
// the orbit of tau is nonsingular iff the ray directions inside V together
// with the projection of V away from tau's coordinates span dim V directions.
SingularLocus singular_locus(const FanData& f, const FoliationDatum& v);

// Is the invariant curve of an interior wall tangent to the foliation?
// (True unless V lies inside the span of the wall's rays.)
bool curve_tangent(const FanData& f, const FoliationDatum& v, const Wall& w);

// A foliation is dicritical when some singular-locus cone admits a rational
// ray through its relative interior inside V; such a ray is the exceptional
// divisor direction witnessing dicriticality.
struct DicriticalWitness {
  std::vector<size_t> cone;
  IntVector ray;
};

struct DicriticalResult {
  bool dicritical = false;
  std::optional<DicriticalWitness> witness;
};

DicriticalResult is_dicritical(const FanData& f, const FoliationDatum& v);

}  // namespace torfol

#endif
