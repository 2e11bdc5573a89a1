#include "torfol/polycone.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <set>

namespace torfol {

namespace {

// Normalize an inequality normal to a primitive integer vector (as rationals),
// preserving direction. Zero rows pass through.
RatVector normalize_row(const RatVector& a) {
  if (is_zero(a)) return a;
  return to_rat(primitive_part(a));
}

// rank of (eqs ∪ tight inequality rows at r) — extremality needs dim-1.
int tight_rank(const RatMatrix& eqs, const RatMatrix& done,
               const RatVector& r) {
  RatMatrix tight = eqs;
  for (const auto& a : done)
    if (dot(a, r) == 0) tight.push_back(a);
  return rank(tight);
}

}  // namespace

ConeVRep double_description(const ConeHRep& h, int dim) {
  // Start from the equality subspace; fold inequalities in one at a time.
  RatMatrix lineality;
  if (h.eqs.empty()) {
    for (int i = 0; i < dim; ++i) {
      RatVector e(dim, Rat(0));
      e[i] = 1;
      lineality.push_back(std::move(e));
    }
  } else {
    lineality = kernel_basis(h.eqs);
  }

  // Lexicographic insertion order over normalized, deduplicated normals.
  std::set<RatVector> seen;
  std::vector<RatVector> ineqs;
  for (const auto& a : h.ineqs) {
    RatVector na = normalize_row(a);
    if (is_zero(na)) continue;
    if (seen.insert(na).second) ineqs.push_back(na);
  }
  std::sort(ineqs.begin(), ineqs.end());

  std::vector<RatVector> rays;
  RatMatrix done;  // inequalities already folded in
  for (const auto& a : ineqs) {
    // Case 1: some lineality direction leaves the hyperplane.
    size_t pivot = lineality.size();
    for (size_t i = 0; i < lineality.size(); ++i)
      if (dot(a, lineality[i]) != 0) {
        pivot = i;
        break;
      }
    if (pivot != lineality.size()) {
      RatVector l0 = lineality[pivot];
      Rat al0 = dot(a, l0);
      if (al0 < 0) {
        for (auto& x : l0) x = -x;
        al0 = -al0;
      }
      RatMatrix new_lin;
      for (size_t i = 0; i < lineality.size(); ++i) {
        if (i == pivot) continue;
        RatVector l = lineality[i];
        const Rat f = dot(a, l) / al0;
        for (int j = 0; j < dim; ++j) l[j] -= f * l0[j];
        new_lin.push_back(std::move(l));
      }
      for (auto& r : rays) {
        const Rat f = dot(a, r) / al0;
        for (int j = 0; j < dim; ++j) r[j] -= f * l0[j];
      }
      lineality = std::move(new_lin);
      rays.push_back(std::move(l0));
      done.push_back(a);
      continue;
    }
    // Case 2: lineality lies in the hyperplane; split rays by sign.
    std::vector<RatVector> pos, zero, neg;
    for (auto& r : rays) {
      const Rat s = dot(a, r);
      if (s > 0)
        pos.push_back(std::move(r));
      else if (s == 0)
        zero.push_back(std::move(r));
      else
        neg.push_back(std::move(r));
    }
    std::vector<RatVector> next = std::move(zero);
    for (const auto& p : pos)
      for (const auto& m : neg) {
        const Rat ap = dot(a, p), am = dot(a, m);
        RatVector c(dim);
        for (int j = 0; j < dim; ++j) c[j] = ap * m[j] - am * p[j];
        if (!is_zero(c)) next.push_back(to_rat(primitive_part(c)));
      }
    for (auto& r : pos) next.push_back(std::move(r));
    done.push_back(a);
    // Prune to extreme rays of the intermediate cone; dedupe by primitive rep.
    // A ray is extreme iff its tight constraints (original equations plus
    // inserted inequalities met with equality) have rank dim - |lineality| - 1.
    std::set<IntVector> kept;
    std::vector<RatVector> pruned;
    const int lin_dim = static_cast<int>(lineality.size());
    for (const auto& r : next) {
      IntVector p = primitive_part(r);
      if (kept.count(p)) continue;
      if (tight_rank(h.eqs, done, r) != dim - lin_dim - 1) continue;
      kept.insert(p);
      pruned.push_back(to_rat(p));
    }
    rays = std::move(pruned);
  }

  ConeVRep out;
  out.lineality = echelon_basis(lineality);
  std::set<IntVector> uniq;
  for (const auto& r : rays) uniq.insert(primitive_part(r));
  out.rays.assign(uniq.begin(), uniq.end());
  return out;
}

ConeHRep cone_hrep(const RatMatrix& generators, int dim) {
  // Dual cone { y : g·y >= 0 } has V-description (rays, lineality) whose
  // parts are exactly the facet normals and span equations of the primal.
  ConeHRep dual;
  dual.ineqs = generators;
  ConeVRep v = double_description(dual, dim);
  ConeHRep out;
  for (const auto& r : v.rays) out.ineqs.push_back(to_rat(r));
  out.eqs = v.lineality;
  return out;
}

bool hrep_contains(const ConeHRep& h, const RatVector& x) {
  for (const auto& a : h.ineqs)
    if (dot(a, x) < 0) return false;
  for (const auto& e : h.eqs)
    if (dot(e, x) != 0) return false;
  return true;
}

std::vector<IntVector> extreme_rays(const RatCone& c) {
  if (c.generators.empty()) return {};
  const int dim = static_cast<int>(c.generators[0].size());
  for (const auto& g : c.generators)
    if (is_zero(g)) throw Error("ZeroVector", "extreme_rays: zero generator");
  ConeHRep h = cone_hrep(c.generators, dim);
  // Pointed iff no nonzero x satisfies every constraint with equality.
  RatMatrix all = h.ineqs;
  for (const auto& e : h.eqs) all.push_back(e);
  if (rank(all) < dim)
    throw Error("ConeHasLineality", "extreme_rays: cone contains a line");
  std::set<IntVector> out;
  for (const auto& g : c.generators) {
    RatMatrix tight = h.eqs;
    for (const auto& a : h.ineqs)
      if (dot(a, g) == 0) tight.push_back(a);
    if (rank(tight) == dim - 1) out.insert(primitive_part(g));
  }
  return {out.begin(), out.end()};
}

RatCone intersect_subspace(const RatCone& sigma, const RatMatrix& v_basis) {
  if (sigma.generators.empty()) return sigma;
  const int dim = static_cast<int>(sigma.generators[0].size());
  ConeHRep h = cone_hrep(sigma.generators, dim);
  const RatMatrix span = echelon_basis(v_basis);
  if (span.empty()) {
    // span(V) = {0}
    return RatCone{};
  }
  for (const auto& w : annihilator(span)) h.eqs.push_back(w);
  ConeVRep v = double_description(h, dim);
  RatCone out;
  for (const auto& r : v.rays) out.generators.push_back(to_rat(r));
  for (const auto& l : v.lineality) {
    out.generators.push_back(l);
    RatVector neg(l.size());
    for (size_t j = 0; j < l.size(); ++j) neg[j] = -l[j];
    out.generators.push_back(std::move(neg));
  }
  return out;
}

// --- Fourier–Motzkin machinery ---------------------------------------------

namespace {

// System of inequalities A x <= b over `vars` variables (equations are
// pre-split into opposing pairs).
struct FmSys {
  RatMatrix a;
  RatVector b;
};

// Normalize rows, keep only the tightest bound per normal; returns false if
// a row reads 0 <= negative.
bool fm_clean(FmSys& s) {
  std::map<RatVector, Rat> tightest;
  std::vector<RatVector> order;
  for (size_t i = 0; i < s.a.size(); ++i) {
    RatVector row = s.a[i];
    Rat bound = s.b[i];
    if (is_zero(row)) {
      if (bound < 0) return false;
      continue;
    }
    // scale so the normal is a primitive integer vector
    IntVector p = primitive_part(row);
    // recover the positive scale factor: row = t * p with t > 0
    size_t j = 0;
    while (row[j] == 0) ++j;
    const Rat t = row[j] / Rat(p[j]);
    bound /= t;
    RatVector prow = to_rat(p);
    auto it = tightest.find(prow);
    if (it == tightest.end()) {
      tightest.emplace(prow, bound);
      order.push_back(std::move(prow));
    } else if (bound < it->second) {
      it->second = bound;
    }
  }
  s.a.clear();
  s.b.clear();
  for (const auto& prow : order) {
    s.a.push_back(prow);
    s.b.push_back(tightest.at(prow));
  }
  return true;
}

// Eliminate the variable in column `col`, dropping that column.
// Returns false when the projected system is infeasible.
bool fm_eliminate(FmSys& s, size_t col) {
  std::vector<size_t> pos, neg, zer;
  for (size_t i = 0; i < s.a.size(); ++i) {
    if (s.a[i][col] > 0)
      pos.push_back(i);
    else if (s.a[i][col] < 0)
      neg.push_back(i);
    else
      zer.push_back(i);
  }
  FmSys out;
  auto drop_col = [col](const RatVector& row) {
    RatVector r;
    r.reserve(row.size() - 1);
    for (size_t j = 0; j < row.size(); ++j)
      if (j != col) r.push_back(row[j]);
    return r;
  };
  for (size_t i : zer) {
    out.a.push_back(drop_col(s.a[i]));
    out.b.push_back(s.b[i]);
  }
  for (size_t i : pos)
    for (size_t k : neg) {
      // a_i x <= b_i (coef p > 0), a_k x <= b_k (coef m < 0):
      // combine with weights (-m) and p to cancel the column.
      const Rat p = s.a[i][col], m = s.a[k][col];
      RatVector row(s.a[i].size());
      for (size_t j = 0; j < row.size(); ++j)
        row[j] = -m * s.a[i][j] + p * s.a[k][j];
      out.a.push_back(drop_col(row));
      out.b.push_back(-m * s.b[i] + p * s.b[k]);
    }
  s = std::move(out);
  return fm_clean(s);
}

struct Interval {
  std::optional<Rat> lo, hi;  // nullopt = unbounded on that side
  bool empty = false;
};

// Bounds of the single remaining variable of a 1-variable system.
Interval fm_interval(const FmSys& s) {
  Interval iv;
  for (size_t i = 0; i < s.a.size(); ++i) {
    const Rat c = s.a[i][0];
    if (c > 0) {
      Rat u = s.b[i] / c;
      if (!iv.hi || u < *iv.hi) iv.hi = u;
    } else if (c < 0) {
      Rat l = s.b[i] / c;
      if (!iv.lo || l > *iv.lo) iv.lo = l;
    }
  }
  if (iv.lo && iv.hi && *iv.lo > *iv.hi) iv.empty = true;
  return iv;
}

FmSys fm_from_polytope(const RatPolytope& p) {
  FmSys s;
  for (size_t i = 0; i < p.ineq_normals.size(); ++i) {
    s.a.push_back(p.ineq_normals[i]);
    s.b.push_back(p.ineq_bounds[i]);
  }
  for (size_t i = 0; i < p.eq_normals.size(); ++i) {
    s.a.push_back(p.eq_normals[i]);
    s.b.push_back(p.eq_bounds[i]);
    RatVector neg(p.eq_normals[i].size());
    for (size_t j = 0; j < neg.size(); ++j) neg[j] = -p.eq_normals[i][j];
    s.a.push_back(std::move(neg));
    s.b.push_back(-p.eq_bounds[i]);
  }
  return s;
}

// Substitute the last variable by an exact value, dropping its column.
FmSys fm_substitute_last(const FmSys& s, const Rat& v) {
  FmSys out;
  const size_t last = s.a.empty() ? 0 : s.a[0].size() - 1;
  for (size_t i = 0; i < s.a.size(); ++i) {
    RatVector row(s.a[i].begin(), s.a[i].end() - 1);
    out.a.push_back(std::move(row));
    out.b.push_back(s.b[i] - s.a[i][last] * v);
  }
  return out;
}

Int floor_rat(const Rat& q) {
  Int r;
  mpz_fdiv_q(r.get_mpz_t(), q.get_num().get_mpz_t(), q.get_den().get_mpz_t());
  return r;
}

Int ceil_rat(const Rat& q) {
  Int r;
  mpz_cdiv_q(r.get_mpz_t(), q.get_num().get_mpz_t(), q.get_den().get_mpz_t());
  return r;
}

void enumerate_points(const FmSys& sys, size_t dim, IntVector& suffix,
                      std::vector<IntVector>& out) {
  if (dim == 0) {
    FmSys s = sys;
    if (!fm_clean(s)) return;
    if (!s.a.empty()) return;  // leftover nonzero rows cannot happen at dim 0
    IntVector point(suffix.rbegin(), suffix.rend());
    out.push_back(std::move(point));
    return;
  }
  // Project onto the last variable to get its exact range.
  FmSys proj = sys;
  if (!fm_clean(proj)) return;
  for (size_t c = 0; c + 1 < dim; ++c)
    if (!fm_eliminate(proj, 0)) return;  // always eliminate the first column
  Interval iv = fm_interval(proj);
  if (iv.empty) return;
  if (!iv.lo || !iv.hi)
    throw Error("Internal", "enumerate_points: unbounded after certificate");
  for (Int v = ceil_rat(*iv.lo); v <= floor_rat(*iv.hi); ++v) {
    suffix.push_back(v);
    FmSys sub = fm_substitute_last(sys, Rat(v));
    enumerate_points(sub, dim - 1, suffix, out);
    suffix.pop_back();
  }
}

}  // namespace

std::vector<IntVector> lattice_points(const RatPolytope& p) {
  size_t dim = 0;
  if (!p.ineq_normals.empty())
    dim = p.ineq_normals[0].size();
  else if (!p.eq_normals.empty())
    dim = p.eq_normals[0].size();
  else
    throw Error("EmptyDescription", "lattice_points: no constraints given");

  // Boundedness certificate: the recession cone must be trivial.
  ConeHRep rec;
  for (const auto& a : p.ineq_normals) {
    RatVector na(a.size());
    for (size_t j = 0; j < a.size(); ++j) na[j] = -a[j];
    rec.ineqs.push_back(std::move(na));
  }
  for (const auto& e : p.eq_normals) rec.eqs.push_back(e);
  ConeVRep rcone = double_description(rec, static_cast<int>(dim));
  if (!rcone.rays.empty() || !rcone.lineality.empty()) {
    // Unbounded direction exists; empty polytopes are still fine.
    FmSys s = fm_from_polytope(p);
    bool feasible = fm_clean(s);
    for (size_t c = 0; feasible && c < dim; ++c) feasible = fm_eliminate(s, 0);
    if (!feasible) return {};
    IntVector witness = rcone.rays.empty() ? primitive_part(rcone.lineality[0])
                                           : rcone.rays[0];
    throw UnboundedError("lattice_points: polytope is unbounded", witness);
  }

  FmSys sys = fm_from_polytope(p);
  IntVector suffix;
  std::vector<IntVector> out;
  enumerate_points(sys, dim, suffix, out);
  std::sort(out.begin(), out.end());
  return out;
}

std::optional<RatVector> relint_rational_point(const RatCone& tau,
                                               const RatMatrix& v_basis) {
  const size_t k = tau.generators.size();
  if (k == 0) return std::nullopt;  // relint of the zero cone has no nonzero point
  const size_t dim = tau.generators[0].size();
  if (rank(tau.generators) != static_cast<int>(k))
    throw Error("NotSimplicial", "relint_rational_point: dependent generators");

  const RatMatrix span = echelon_basis(v_basis);
  RatMatrix ann = span.empty() ? RatMatrix{} : annihilator(span);
  if (span.empty()) {
    // span(V) = {0} contains no relint point of a nonzero cone
    return std::nullopt;
  }

  auto in_v = [&](const RatVector& x) {
    for (const auto& w : ann)
      if (dot(w, x) != 0) return false;
    return true;
  };

  // Exact strict feasibility: variables (λ_1..λ_k, ε), constraints
  // λ_i >= ε, Σλ <= 1, membership equations; feasible iff sup ε > 0.
  FmSys s;
  const size_t nv = k + 1;
  for (size_t i = 0; i < k; ++i) {
    RatVector row(nv, Rat(0));
    row[i] = -1;
    row[k] = 1;  // ε - λ_i <= 0
    s.a.push_back(std::move(row));
    s.b.push_back(Rat(0));
  }
  {
    RatVector row(nv, Rat(0));
    for (size_t i = 0; i < k; ++i) row[i] = 1;
    s.a.push_back(std::move(row));
    s.b.push_back(Rat(1));
  }
  for (const auto& w : ann) {
    RatVector row(nv, Rat(0));
    bool nontrivial = false;
    for (size_t i = 0; i < k; ++i) {
      row[i] = dot(w, tau.generators[i]);
      if (row[i] != 0) nontrivial = true;
    }
    if (!nontrivial) continue;
    RatVector neg(nv, Rat(0));
    for (size_t i = 0; i < k; ++i) neg[i] = -row[i];
    s.a.push_back(std::move(row));
    s.b.push_back(Rat(0));
    s.a.push_back(std::move(neg));
    s.b.push_back(Rat(0));
  }
  std::vector<FmSys> history;  // systems before eliminating each λ
  FmSys cur = s;
  bool feasible = fm_clean(cur);
  for (size_t c = 0; feasible && c < k; ++c) {
    history.push_back(cur);
    feasible = fm_eliminate(cur, 0);
  }
  if (!feasible) return std::nullopt;
  Interval iv = fm_interval(cur);
  if (iv.empty || (iv.hi && *iv.hi <= 0)) return std::nullopt;
  // sup ε is attained (the region is compact thanks to Σλ <= 1)

  // Barycentric search: smallest total weight d, compositions in lex order.
  const long cap = 200000;
  long tried = 0;
  for (long d = static_cast<long>(k);; ++d) {
    // compositions of d into k positive parts, lexicographic order
    std::vector<long> comp(k, 1);
    std::function<bool(size_t, long)> emit = [&](size_t pos, long rem) -> bool {
      if (tried > cap) return false;
      if (pos == k - 1) {
        comp[pos] = rem;
        ++tried;
        RatVector x(dim, Rat(0));
        for (size_t i = 0; i < k; ++i)
          for (size_t j = 0; j < dim; ++j)
            x[j] += Rat(comp[i]) * tau.generators[i][j];
        return in_v(x);
      }
      for (long v = 1; v <= rem - static_cast<long>(k - pos - 1); ++v) {
        comp[pos] = v;
        if (emit(pos + 1, rem - v)) return true;
        if (tried > cap) return false;
      }
      return false;
    };
    if (emit(0, d)) {
      RatVector x(dim, Rat(0));
      for (size_t i = 0; i < k; ++i)
        for (size_t j = 0; j < dim; ++j)
          x[j] += Rat(comp[i]) * tau.generators[i][j];
      return to_rat(primitive_part(x));
    }
    if (tried > cap) break;
  }

  // Deterministic fallback: back-substitute through the elimination history.
  RatVector vals(k + 1, Rat(0));
  vals[k] = iv.hi ? *iv.hi : Rat(1);  // ε
  for (size_t j = k; j-- > 0;) {
    // history[j] has variables λ_j..λ_{k-1}, ε (λ_j in column 0)
    const FmSys& sys = history[j];
    std::optional<Rat> lo, hi;
    for (size_t i = 0; i < sys.a.size(); ++i) {
      const Rat c = sys.a[i][0];
      Rat rest = sys.b[i];
      for (size_t t = 1; t < sys.a[i].size(); ++t) {
        const size_t var = j + t;  // maps column t to λ_{j+t} (or ε at k)
        rest -= sys.a[i][t] * vals[var];
      }
      if (c > 0) {
        Rat u = rest / c;
        if (!hi || u < *hi) hi = u;
      } else if (c < 0) {
        Rat l = rest / c;
        if (!lo || l > *lo) lo = l;
      }
    }
    Rat pick;
    if (lo && hi)
      pick = (*lo + *hi) / 2;
    else if (lo)
      pick = *lo + 1;
    else if (hi)
      pick = *hi - 1;
    vals[j] = pick;
  }
  RatVector x(dim, Rat(0));
  for (size_t i = 0; i < k; ++i)
    for (size_t j2 = 0; j2 < dim; ++j2) x[j2] += vals[i] * tau.generators[i][j2];
  return to_rat(primitive_part(x));
}

std::optional<Rat> maximize_coordinate(const RatPolytope& p, size_t var) {
  FmSys s = fm_from_polytope(p);
  if (s.a.empty()) throw Error("EmptyDescription", "polytope has no constraints");
  const size_t dim = s.a[0].size();
  if (var >= dim) throw Error("BadIndex", "coordinate index out of range");
  // Move `var` to the last column, then project out the others.
  for (auto& row : s.a) std::swap(row[var], row[dim - 1]);
  if (!fm_clean(s)) return std::nullopt;
  for (size_t c = 0; c + 1 < dim; ++c)
    if (!fm_eliminate(s, 0)) return std::nullopt;
  Interval iv = fm_interval(s);
  if (iv.empty) return std::nullopt;
  if (!iv.hi) throw Error("Unbounded", "coordinate has no upper bound");
  return *iv.hi;
}

}  // namespace torfol
