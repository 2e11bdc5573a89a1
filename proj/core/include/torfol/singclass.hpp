#ifndef TORFOL_SINGCLASS_HPP
#define TORFOL_SINGCLASS_HPP

#include <optional>
#include <vector>

#include "torfol/fan.hpp"
#include "torfol/foliation.hpp"
#include "torfol/rational.hpp"

namespace torfol {

// A rational functional on span(sigma), stored as its values on the cone's
// generators (aligned with the index set) plus one explicit extension to the
// whole space. Evaluation uses the extension, so it is only meaningful on
// span(sigma); the restriction there is independent of the extension chosen.
struct ConeFunctional {
  std::vector<size_t> cone;
  RatVector values;
  RatVector extension;

  Rat operator()(const RatVector& x) const;
};

// values 1 on every generator
ConeFunctional m_sigma(const FanData& f, const std::vector<size_t>& cone);
// values 1 on generators inside V, 0 on the others
ConeFunctional m_sigma_V(const FanData& f, const std::vector<size_t>& cone,
                         const FoliationDatum& v);
// the complement: values 0 on generators inside V, 1 on the others
ConeFunctional m_sigma_prime(const FanData& f, const std::vector<size_t>& cone,
                             const FoliationDatum& v);

// Discrepancy of the exceptional divisor over the primitive point v_j in the
// cone: -1 + m_{sigma,V}(v_j) when v_j lies in V, m_{sigma,V}(v_j) otherwise.
// Errors: "NotPrimitive", "OutsideCone", and "NotExceptional" when <v_j> is
// already a ray of the fan.
Rat discrepancy(const FanData& f, const std::vector<size_t>& cone,
                const FoliationDatum& v, const IntVector& vj);

enum class Verdict {
  terminal = 0,
  canonical_not_terminal = 1,
  not_canonical = 2,
};

const char* verdict_name(Verdict v);

struct SingWitness {
  std::vector<size_t> cone;  // the maximal cone the point lives in
  IntVector point;           // primitive exceptional direction
  Rat disc;                  // its discrepancy
};

struct ConeReport {
  std::vector<size_t> cone;
  Verdict verdict = Verdict::terminal;
  std::optional<SingWitness> witness;  // present iff verdict is not terminal
};

struct SingularityReport {
  Verdict verdict = Verdict::terminal;
  std::vector<ConeReport> per_cone;
  std::optional<SingWitness> witness;
};

// Terminal/canonical classification of the foliated pair. Per maximal cone:
//  (a) if at least two generators lie outside V, a primitive point interior
//      to a 2-face they span has discrepancy 0 (not terminal);
//  (b) an extreme ray of sigma ∩ V on which m_{sigma,V} vanishes carries
//      discrepancy -1 (not canonical);
//  (c) otherwise the lattice points of {x in sigma ∩ V : m(x) <= 1} form a
//      finite set; primitive ones that are not rays of the fan break
//      canonicity when m < 1 and terminality when m = 1.
// Witnesses are the lexicographically smallest violating points.
SingularityReport classify(const FanData& f, const FoliationDatum& v);

}  // namespace torfol

#endif
