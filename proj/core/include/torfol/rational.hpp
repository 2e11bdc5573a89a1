#ifndef TORFOL_RATIONAL_HPP
#define TORFOL_RATIONAL_HPP

#include <gmpxx.h>

#include <string>
#include <vector>

#include "torfol/error.hpp"

namespace torfol {

// Exact scalars. All core arithmetic is arbitrary-precision rational; no
// floating point is used anywhere in the library.
using Int = mpz_class;
using Rat = mpq_class;

using IntVector = std::vector<Int>;
using RatVector = std::vector<Rat>;
using RatMatrix = std::vector<RatVector>;  // row-major

// num/den with canonicalization; den must be nonzero (normalized positive).
inline Rat make_rat(const Int& num, const Int& den) {
  if (den == 0) throw Error("ZeroDenominator", "rational with denominator 0");
  Rat q(num, den);
  q.canonicalize();
  return q;
}

inline RatVector to_rat(const IntVector& v) {
  RatVector out(v.size());
  for (size_t i = 0; i < v.size(); ++i) out[i] = Rat(v[i]);
  return out;
}

inline RatMatrix to_rat_rows(const std::vector<IntVector>& rows) {
  RatMatrix out;
  out.reserve(rows.size());
  for (const auto& r : rows) out.push_back(to_rat(r));
  return out;
}

inline bool is_zero(const RatVector& v) {
  for (const auto& x : v)
    if (x != 0) return false;
  return true;
}

inline bool is_zero(const IntVector& v) {
  for (const auto& x : v)
    if (x != 0) return false;
  return true;
}

inline std::string to_string(const Rat& q) {
  return q.get_str();  // "p/q" or "p"
}

inline std::string to_string(const IntVector& v) {
  std::string s = "(";
  for (size_t i = 0; i < v.size(); ++i) {
    if (i) s += ",";
    s += v[i].get_str();
  }
  return s + ")";
}

inline std::string to_string(const RatVector& v) {
  std::string s = "(";
  for (size_t i = 0; i < v.size(); ++i) {
    if (i) s += ",";
    s += v[i].get_str();
  }
  return s + ")";
}

}  // namespace torfol

#endif
