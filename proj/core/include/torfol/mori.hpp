#ifndef TORFOL_MORI_HPP
#define TORFOL_MORI_HPP

#include <optional>
#include <vector>

#include "torfol/fan.hpp"
#include "torfol/foliation.hpp"
#include "torfol/rational.hpp"
#include "torfol/singclass.hpp"

namespace torfol {

// The unique (up to scale) linear relation among the rays around an interior
// wall: the n-1 wall rays v_1..v_{n-1} in ascending index order followed by
// the two opposite rays v_n, v_{n+1} of the adjacent maximal cones. The
// coefficients satisfy sum a_i v_i = 0 exactly and are normalized so that
// a_{n+1} = mult(omega) / mult(<omega, v_{n+1}>) > 0; the index sets split
// the positions by sign of a_i.
struct WallRelationData {
  Wall wall;
  std::vector<size_t> rays;  // fan ray indices, wall rays then v_n, v_{n+1}
  RatVector a;
  std::vector<size_t> alpha;  // positions with a_i < 0
  std::vector<size_t> zero;   // positions with a_i = 0
  std::vector<size_t> beta;   // positions with a_i > 0
};

// Intersection numbers (D_rho . C) of the invariant curve dual to a wall,
// one entry per fan ray; zero outside the rays adjacent to the wall.
struct CurveClass {
  RatVector dot;
  Wall wall;
};

// Errors: "BoundaryWall" when the wall has only one side.
WallRelationData wall_relation(const FanData& f, const Wall& w);
CurveClass curve_class(const FanData& f, const Wall& w);

// K_F . C for the wall curve: minus the sum of (D_rho . C) over rays in V.
Rat kf_dot(const FanData& f, const FoliationDatum& v, const Wall& w);

// One extremal ray of the cone of curves: the primitive intersection vector
// together with every wall whose curve class lies on the ray (ascending by
// wall ray-index set).
struct ExtremalRay {
  IntVector cls;
  std::vector<Wall> walls;
};

// Extreme rays of the cone spanned by all wall curve classes inside
// N_1 = { x : sum_rho x_rho v_rho = 0 }, sorted by cls. Errors:
// "RequiresComplete" unless the fan is valid and complete; a non-pointed
// curve cone surfaces as "ConeHasLineality".
std::vector<ExtremalRay> extremal_rays(const FanData& f);

enum class ContractionType { fibre, divisorial, small };

struct Contraction {
  ContractionType type = ContractionType::fibre;
  std::optional<size_t> contracted_ray;  // set for divisorial contractions
};

// Type of the contraction of a K_F-negative extremal ray, read off the sign
// pattern of a representative wall relation: no negative coefficients means
// fibre type, exactly one names the contracted ray, two or more mean a small
// contraction. Errors: "NotNegative" when K_F . R >= 0.
Contraction classify_contraction(const FanData& f, const FoliationDatum& v,
                                 const ExtremalRay& r);

// Remove the contracted ray and merge the maximal cones across every wall of
// the class. Errors: "NotDivisorial" when some wall relation does not have
// exactly one negative coefficient; "NonQFactorialResult" when the merged
// fan fails validation.
FanData contract_divisorial(const FanData& f, const ExtremalRay& r);

// Replace, for every wall omega of the class, the two adjacent maximal cones
// by the cones <v_1,..,v^_j,..,v_{n+1}> for j in the alpha-set. Rays are
// unchanged. Errors: "NotSmall" when some wall has fewer than two negative
// coefficients; "NonQFactorialResult" when the result fails validation.
FanData flip(const FanData& f, const ExtremalRay& r);

// When some ray lies inside V the foliation is pulled back from the quotient
// along the span of those rays: the quotient fan report plus the induced
// foliation downstairs (absent when V is spanned by the rays, i.e. the
// quotient foliation is zero-dimensional and the map is a pure fibration).
struct PullbackData {
  FoliationDatum v_prime;
  QuotientResult quotient;
  std::optional<FoliationDatum> induced;
};

std::optional<PullbackData> detect_pullback(const FanData& f,
                                            const FoliationDatum& v);

struct MmpOptions {
  int max_flips = 1000;
  bool allow_noncanonical = false;
  // Forced wall choice (by ray-index set, current fan indexing) for step k;
  // steps beyond the list, or with an empty entry, use the lexicographically
  // smallest wall among the K_F-negative extremal rays.
  std::vector<std::vector<size_t>> pick_walls;
};

struct MmpStep {
  ExtremalRay chosen;
  ContractionType type = ContractionType::fibre;
  Rat kf;  // K_F . cls of the chosen class
  FanData before;
  FanData after;
  bool dicritical_before = false;
  bool dicritical_after = false;
};

enum class MmpOutcome { nef, fibration };

struct MmpTrace {
  std::vector<MmpStep> steps;
  MmpOutcome outcome = MmpOutcome::nef;
  FanData final_fan;
  std::optional<PullbackData> pullback;  // present on fibration outcome
  Verdict input_verdict = Verdict::terminal;
  bool noncanonical_override = false;
};

// Run the directed minimal model program: repeatedly pick a K_F-negative
// extremal ray (per options), classify it, and contract/flip until K_F is
// nef or a fibre-type contraction ends the run with the pull-back data.
// Preconditions: the fan is valid and complete ("RequiresComplete"), and the
// pair is at least canonical unless options.allow_noncanonical is set
// ("RequiresCanonical"). Errors: "FlipCapExceeded" past options.max_flips;
// "UnknownWall" when a forced wall does not match a negative extremal ray;
// "DicriticalityNotPreserved" when a non-dicritical pair turns dicritical
// after a step (a consistency failure, never ignored).
MmpTrace run_mmp(const FanData& f, const FoliationDatum& v,
                 const MmpOptions& options = {});

}  // namespace torfol

#endif
