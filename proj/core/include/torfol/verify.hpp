#ifndef TORFOL_VERIFY_HPP
#define TORFOL_VERIFY_HPP

#include <cstdint>
#include <vector>

#include "torfol/fan.hpp"
#include "torfol/foliation.hpp"
#include "torfol/rational.hpp"

namespace torfol {

// Independent cross-checks for the main formulas: piecewise-linear support
// functions driving a subdivision-pullback recomputation of discrepancies,
// a symbolic minor-rank singularity test on smooth charts, and seeded
// random complete fans for property testing.

// Support data of a Q-Cartier torus divisor: one linear functional per
// maximal cone, agreeing on shared faces, with psi(v_rho) equal to minus
// the coefficient of D_rho for every ray of the cone.
struct SupportFunction {
  TorusDivisor divisor;
  RatMatrix functionals;  // one row per maximal cone

  // Value at x read off the functional of the given maximal cone.
  Rat operator()(size_t cone_index, const RatVector& x) const;
};

// Always succeeds on a valid simplicial fan, where every divisor is
// Q-Cartier; a per-cone system that fails to solve or a wall disagreement
// is an internal error.
SupportFunction support_function(const FanData& f, const TorusDivisor& d);

// Recompute a discrepancy without ever touching cone functionals: star
// subdivide at the candidate ray, take the canonical divisor's coefficient
// there upstairs, and add the support-function value of the canonical
// divisor downstairs. Errors of star_subdivide propagate (ShapeMismatch,
// NotPrimitive, RayExists, OutsideSupport).
Rat discrepancy_oracle(const FanData& f, const FoliationDatum& v,
                       const IntVector& vj);

// Symbolic singularity test on a full-dimensional unimodular chart
// ("SmoothChartOnly" otherwise): evaluate the foliation's generator matrix
// at a generic point of the orbit of the face tau (chart coordinates zero
// on tau's rays, distinct primes elsewhere) and compare its rank with the
// foliation rank. Two independent prime assignments are evaluated and must
// agree. sigma and tau are ray index sets with tau a subset of sigma; true
// means the orbit lies in the singular locus.
bool minor_rank_oracle(const FanData& f, const FoliationDatum& v,
                       const std::vector<size_t>& sigma,
                       const std::vector<size_t>& tau);

enum class BaseFan { projective_space, product_of_lines };

struct RandomFanSpec {
  std::uint64_t seed = 0;
  int rank = 2;
  BaseFan base = BaseFan::projective_space;
  int subdivisions = 0;
};

struct RandomSample {
  FanData fan;
  FoliationDatum v;
};

// The two base fans, before any subdivision.
FanData base_fan(BaseFan base, int rank);

// Deterministic-from-seed complete simplicial fan built by random interior
// star subdivisions of the base, together with a random rational subspace
// of dimension between 1 and rank - 1.
RandomSample random_complete_fan(const RandomFanSpec& spec);

}  // namespace torfol

#endif
