#include "torfol/linalg.hpp"

#include <algorithm>

namespace torfol {

Int gcd_int(const Int& a, const Int& b) {
  Int g;
  mpz_gcd(g.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return g;
}

Int lcm_int(const Int& a, const Int& b) {
  Int l;
  mpz_lcm(l.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return l;
}

IntVector primitive_part(const IntVector& v) {
  Int g = 0;
  for (const auto& x : v) g = gcd_int(g, x);
  if (g == 0) throw Error("ZeroVector", "primitive_part of the zero vector");
  IntVector out(v.size());
  for (size_t i = 0; i < v.size(); ++i) out[i] = v[i] / g;
  return out;
}

IntVector primitive_part(const RatVector& v) {
  Int den = 1;
  for (const auto& q : v) den = lcm_int(den, q.get_den());
  IntVector w(v.size());
  for (size_t i = 0; i < v.size(); ++i) {
    Rat scaled = v[i] * Rat(den);
    w[i] = scaled.get_num();  // exact: den is a common denominator
  }
  return primitive_part(w);
}

std::vector<int> rref(RatMatrix& m) {
  std::vector<int> pivots;
  if (m.empty()) return pivots;
  const size_t rows = m.size(), cols = m[0].size();
  size_t r = 0;
  for (size_t c = 0; c < cols && r < rows; ++c) {
    size_t p = r;
    while (p < rows && m[p][c] == 0) ++p;
    if (p == rows) continue;
    std::swap(m[p], m[r]);
    const Rat inv = m[r][c];
    for (size_t j = c; j < cols; ++j) m[r][j] /= inv;
    for (size_t i = 0; i < rows; ++i) {
      if (i == r || m[i][c] == 0) continue;
      const Rat f = m[i][c];
      for (size_t j = c; j < cols; ++j) m[i][j] -= f * m[r][j];
    }
    pivots.push_back(static_cast<int>(c));
    ++r;
  }
  return pivots;
}

int rank(const RatMatrix& m) {
  RatMatrix copy = m;
  return static_cast<int>(rref(copy).size());
}

int rank_int(const std::vector<IntVector>& rows) {
  return rank(to_rat_rows(rows));
}

RatMatrix echelon_basis(const RatMatrix& rows) {
  RatMatrix copy = rows;
  const auto pivots = rref(copy);
  copy.resize(pivots.size());
  return copy;
}

RatMatrix echelon_basis_int(const std::vector<IntVector>& rows) {
  return echelon_basis(to_rat_rows(rows));
}

std::optional<RatVector> solve(const RatMatrix& a, const RatVector& b) {
  if (a.size() != b.size()) throw Error("ShapeMismatch", "solve: |A| != |b|");
  if (a.empty()) return RatVector{};
  const size_t cols = a[0].size();
  RatMatrix aug = a;
  for (size_t i = 0; i < a.size(); ++i) aug[i].push_back(b[i]);
  const auto pivots = rref(aug);
  // Inconsistent iff a pivot lands in the augmented column.
  if (!pivots.empty() && pivots.back() == static_cast<int>(cols))
    return std::nullopt;
  RatVector x(cols, Rat(0));
  for (size_t i = 0; i < pivots.size(); ++i) x[pivots[i]] = aug[i][cols];
  return x;
}

RatMatrix kernel_basis(const RatMatrix& a) {
  if (a.empty()) return {};
  const size_t cols = a[0].size();
  RatMatrix red = a;
  const auto pivots = rref(red);
  std::vector<bool> is_pivot(cols, false);
  for (int p : pivots) is_pivot[p] = true;
  RatMatrix basis;
  for (size_t c = 0; c < cols; ++c) {
    if (is_pivot[c]) continue;
    RatVector v(cols, Rat(0));
    v[c] = 1;
    for (size_t i = 0; i < pivots.size(); ++i) v[pivots[i]] = -red[i][c];
    basis.push_back(std::move(v));
  }
  return basis;
}

RatMatrix annihilator(const RatMatrix& rows) { return kernel_basis(rows); }

Rat det(const RatMatrix& m) {
  const size_t n = m.size();
  for (const auto& row : m)
    if (row.size() != n) throw Error("ShapeMismatch", "det: not square");
  RatMatrix a = m;
  Rat d(1);
  for (size_t c = 0; c < n; ++c) {
    size_t p = c;
    while (p < n && a[p][c] == 0) ++p;
    if (p == n) return Rat(0);
    if (p != c) {
      std::swap(a[p], a[c]);
      d = -d;
    }
    d *= a[c][c];
    const Rat inv = a[c][c];
    for (size_t i = c + 1; i < n; ++i) {
      if (a[i][c] == 0) continue;
      const Rat f = a[i][c] / inv;
      for (size_t j = c; j < n; ++j) a[i][j] -= f * a[c][j];
    }
  }
  return d;
}

namespace {

// Advance a k-subset of {0..n-1} in lexicographic order; false when done.
bool next_combination(std::vector<size_t>& idx, size_t n) {
  const size_t k = idx.size();
  for (size_t i = k; i-- > 0;) {
    if (idx[i] != i + n - k) {
      ++idx[i];
      for (size_t j = i + 1; j < k; ++j) idx[j] = idx[j - 1] + 1;
      return true;
    }
  }
  return false;
}

}  // namespace

Int cone_multiplicity(const std::vector<IntVector>& rays) {
  const size_t k = rays.size();
  if (k == 0) return 1;  // the zero cone
  const size_t n = rays[0].size();
  if (rank_int(rays) != static_cast<int>(k))
    throw Error("NotSimplicial", "cone_multiplicity: dependent generators");
  // gcd over all k x k minors, column subsets in lexicographic order.
  std::vector<size_t> idx(k);
  for (size_t i = 0; i < k; ++i) idx[i] = i;
  Int g = 0;
  do {
    RatMatrix sub(k, RatVector(k));
    for (size_t i = 0; i < k; ++i)
      for (size_t j = 0; j < k; ++j) sub[i][j] = Rat(rays[i][idx[j]]);
    g = gcd_int(g, det(sub).get_num());  // entries integral => det integral
    if (g == 1) break;
  } while (next_combination(idx, n));
  return abs(g);
}

// --- integer lattice routines ---------------------------------------------

namespace {

using IntMatrix = std::vector<IntVector>;

// Column elimination by unimodular column operations, tracking the transform.
// After the call, columns of `m` with index >= `zero_from` are zero, and
// `v` records the operations (m_new = m_old * v).
void column_eliminate(IntMatrix& m, IntMatrix& v, size_t& zero_from) {
  if (m.empty()) return;
  const size_t rows = m.size(), cols = m[0].size();
  v.assign(cols, IntVector(cols, Int(0)));
  for (size_t i = 0; i < cols; ++i) v[i][i] = 1;
  size_t lead = 0;  // next column to fix
  for (size_t r = 0; r < rows && lead < cols; ++r) {
    // Reduce row r across columns lead..cols-1 to a single nonzero entry.
    while (true) {
      size_t nz = cols;
      for (size_t c = lead; c < cols; ++c)
        if (m[r][c] != 0) {
          nz = c;
          break;
        }
      if (nz == cols) break;  // row r already zero on the free columns
      // Move the first nonzero to `lead`.
      if (nz != lead)
        for (size_t i = 0; i < rows; ++i) std::swap(m[i][nz], m[i][lead]);
      if (nz != lead)
        for (size_t i = 0; i < cols; ++i) std::swap(v[i][nz], v[i][lead]);
      // Cancel the other entries of row r with exact quotient-remainder steps.
      bool clean = true;
      for (size_t c = lead + 1; c < cols; ++c) {
        if (m[r][c] == 0) continue;
        Int q = m[r][c] / m[r][lead];  // truncated division is fine: iterate
        if (q != 0) {
          for (size_t i = 0; i < rows; ++i) m[i][c] -= q * m[i][lead];
          for (size_t i = 0; i < cols; ++i) v[i][c] -= q * v[i][lead];
        }
        if (m[r][c] != 0) {
          // Remainder smaller than pivot: swap to shrink the pivot and redo.
          for (size_t i = 0; i < rows; ++i) std::swap(m[i][c], m[i][lead]);
          for (size_t i = 0; i < cols; ++i) std::swap(v[i][c], v[i][lead]);
          clean = false;
        }
      }
      if (clean) break;
    }
    if (m[r][lead] != 0) ++lead;
  }
  zero_from = lead;
}

}  // namespace

std::vector<IntVector> lattice_intersection_basis(const RatMatrix& span_rows,
                                                  int n) {
  // N ∩ span = integer kernel of the annihilator; clear denominators so the
  // constraint matrix is integral, then eliminate columns.
  const RatMatrix span = echelon_basis(span_rows);
  if (span.empty()) return {};  // the zero subspace
  RatMatrix ann = annihilator(span);
  if (ann.empty()) {
    // span is everything: basis = standard basis
    std::vector<IntVector> basis;
    for (int i = 0; i < n; ++i) {
      IntVector e(n, Int(0));
      e[i] = 1;
      basis.push_back(std::move(e));
    }
    return basis;
  }
  IntMatrix c;
  for (const auto& row : ann) {
    Int den = 1;
    for (const auto& q : row) den = lcm_int(den, q.get_den());
    IntVector r(n);
    for (int j = 0; j < n; ++j) r[j] = Rat(row[j] * Rat(den)).get_num();
    c.push_back(std::move(r));
  }
  IntMatrix v;
  size_t zero_from = 0;
  column_eliminate(c, v, zero_from);
  std::vector<IntVector> basis;
  const size_t cols = c[0].size();
  for (size_t j = zero_from; j < cols; ++j) {
    IntVector b(n);
    for (int i = 0; i < n; ++i) b[i] = v[i][j];
    basis.push_back(std::move(b));
  }
  return basis;
}

std::vector<IntVector> quotient_projection(const std::vector<IntVector>& basis,
                                           int n) {
  const size_t k = basis.size();
  // Smith-style reduction of the n x k matrix K while tracking row ops:
  // maintain U (n x n, unimodular) with U_cur * K_orig = K_cur.
  IntMatrix kmat(n, IntVector(k));
  for (size_t j = 0; j < k; ++j)
    for (int i = 0; i < n; ++i) kmat[i][j] = basis[j][i];
  IntMatrix u(n, IntVector(n, Int(0)));
  for (int i = 0; i < n; ++i) u[i][i] = 1;

  size_t done = 0;  // leading rows/columns fixed so far
  while (done < k) {
    // find pivot: smallest |value| nonzero in the remaining block (first hit)
    size_t pr = n, pc = k;
    Int best = 0;
    for (size_t i = done; i < static_cast<size_t>(n); ++i)
      for (size_t j = done; j < k; ++j) {
        if (kmat[i][j] == 0) continue;
        Int a = abs(kmat[i][j]);
        if (best == 0 || a < best) {
          best = a;
          pr = i;
          pc = j;
        }
      }
    if (pr == static_cast<size_t>(n))
      throw Error("RankDeficient", "quotient_projection: dependent basis");
    std::swap(kmat[pr], kmat[done]);
    std::swap(u[pr], u[done]);
    if (pc != done)
      for (size_t i = 0; i < static_cast<size_t>(n); ++i)
        std::swap(kmat[i][pc], kmat[i][done]);
    bool again = false;
    // clear the pivot column with row ops
    for (size_t i = 0; i < static_cast<size_t>(n); ++i) {
      if (i == done || kmat[i][done] == 0) continue;
      Int q = kmat[i][done] / kmat[done][done];
      if (q != 0)
        for (size_t j = 0; j < k; ++j) kmat[i][j] -= q * kmat[done][j];
      if (q != 0)
        for (size_t j = 0; j < static_cast<size_t>(n); ++j)
          u[i][j] -= q * u[done][j];
      if (kmat[i][done] != 0) again = true;  // remainder: repeat with smaller pivot
    }
    // clear the pivot row with column ops (no tracking needed for columns)
    for (size_t j = done + 1; j < k; ++j) {
      if (kmat[done][j] == 0) continue;
      Int q = kmat[done][j] / kmat[done][done];
      if (q != 0)
        for (size_t i = 0; i < static_cast<size_t>(n); ++i)
          kmat[i][j] -= q * kmat[i][done];
      if (kmat[done][j] != 0) again = true;
    }
    if (again) continue;  // smaller remainders exist; redo this block
    if (abs(kmat[done][done]) != 1)
      throw Error("NotSaturated",
                  "quotient_projection: sublattice is not saturated");
    ++done;
  }
  std::vector<IntVector> proj;
  for (size_t i = k; i < static_cast<size_t>(n); ++i) proj.push_back(u[i]);
  return proj;
}

bool in_span(const RatMatrix& rows, const RatVector& v) {
  if (is_zero(v)) return true;
  RatMatrix m = rows;
  const int r0 = rank(m);
  m.push_back(v);
  return rank(m) == r0;
}

bool in_span_int(const std::vector<IntVector>& rows, const IntVector& v) {
  return in_span(to_rat_rows(rows), to_rat(v));
}

RatVector mat_vec(const RatMatrix& m, const RatVector& v) {
  RatVector out(m.size(), Rat(0));
  for (size_t i = 0; i < m.size(); ++i) {
    if (m[i].size() != v.size()) throw Error("ShapeMismatch", "mat_vec");
    for (size_t j = 0; j < v.size(); ++j) out[i] += m[i][j] * v[j];
  }
  return out;
}

Rat dot(const RatVector& a, const RatVector& b) {
  if (a.size() != b.size()) throw Error("ShapeMismatch", "dot");
  Rat s(0);
  for (size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

RatMatrix transpose(const RatMatrix& m) {
  if (m.empty()) return {};
  RatMatrix t(m[0].size(), RatVector(m.size()));
  for (size_t i = 0; i < m.size(); ++i)
    for (size_t j = 0; j < m[i].size(); ++j) t[j][i] = m[i][j];
  return t;
}

IntVector int_of_rat(const RatVector& v) {
  IntVector out(v.size());
  for (size_t i = 0; i < v.size(); ++i) {
    if (v[i].get_den() != 1)
      throw Error("NotIntegral", "int_of_rat: entry " + to_string(v[i]));
    out[i] = v[i].get_num();
  }
  return out;
}

}  // namespace torfol
