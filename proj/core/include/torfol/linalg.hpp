#ifndef TORFOL_LINALG_HPP
#define TORFOL_LINALG_HPP

#include <optional>
#include <vector>

#include "torfol/rational.hpp"

namespace torfol {

// Exact linear algebra over Q and Z. Every routine is deterministic: pivots
// are always chosen as the first nonzero entry in row-major scan order, so
// canonical outputs (rref, kernels, solutions) are reproducible bit for bit.

Int gcd_int(const Int& a, const Int& b);
Int lcm_int(const Int& a, const Int& b);

// Divide an integer vector by the gcd of its entries; sign is fixed so the
// first nonzero entry is positive only when `fix_sign` asks for it (ray
// generators keep their direction, so the default leaves sign alone).
IntVector primitive_part(const IntVector& v);
// Rational input: clear denominators first, then reduce.
IntVector primitive_part(const RatVector& v);

// Reduced row echelon form in place; returns pivot column indices.
std::vector<int> rref(RatMatrix& m);

int rank(const RatMatrix& m);
int rank_int(const std::vector<IntVector>& rows);

// Canonical basis (rref rows, zero rows dropped) of the row span.
RatMatrix echelon_basis(const RatMatrix& rows);
RatMatrix echelon_basis_int(const std::vector<IntVector>& rows);

// Solve A x = b. Returns the echelon-canonical solution (free variables set
// to zero) or nullopt when the system is inconsistent.
std::optional<RatVector> solve(const RatMatrix& a, const RatVector& b);

// Basis of { x : A x = 0 }, echelon-canonical (one basis vector per free
// column, unit entry at its free column).
RatMatrix kernel_basis(const RatMatrix& a);

// Functionals vanishing on span(rows): kernel of the matrix whose rows are
// the given vectors (same computation, named for readability at call sites).
RatMatrix annihilator(const RatMatrix& rows);

Rat det(const RatMatrix& m);

// Multiplicity of a simplicial cone: gcd of the k x k minors of the k x n
// integer matrix whose rows are the primitive ray generators; equals the
// index of the sublattice the rays generate in the lattice of their span.
// Throws NotSimplicial when the rows are dependent.
Int cone_multiplicity(const std::vector<IntVector>& rays);

// Basis of the saturated lattice { x in Z^n : x in span_Q(rows) }.
// Rows may be rational; the result is a Z-basis (vectors of length n).
std::vector<IntVector> lattice_intersection_basis(const RatMatrix& span_rows,
                                                  int n);

// For a saturated sublattice L of Z^n with basis the columns of K (given as
// a list of k vectors), returns the projection matrix P ((n-k) x n, integer)
// with ker(P : Z^n -> Z^{n-k}) = L and P surjective. Coordinates on the
// quotient are canonical: P consists of the last rows of the (deterministic)
// Smith-decomposition row transform. Throws if L is not saturated.
std::vector<IntVector> quotient_projection(const std::vector<IntVector>& basis,
                                           int n);

// Membership of v in span_Q(rows).
bool in_span(const RatMatrix& rows, const RatVector& v);
bool in_span_int(const std::vector<IntVector>& rows, const IntVector& v);

// Small conveniences used across modules.
RatVector mat_vec(const RatMatrix& m, const RatVector& v);
Rat dot(const RatVector& a, const RatVector& b);
RatMatrix transpose(const RatMatrix& m);
IntVector int_of_rat(const RatVector& v);  // errors unless all entries integral

}  // namespace torfol

#endif
