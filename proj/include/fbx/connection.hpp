#pragma once

#include "fbx/gmc.hpp"

namespace fbx {

/// Rank-r flat connection nabla = d/dt + A(t) dt on O_X^r, X = P^1 \ D.
/// Entries of A are regular on X; flatness is automatic in dimension 1.
struct Connection {
  CurveSpec curve;
  int rank = 0;
  std::vector<std::vector<RegFun>> matrix;  // A[i][j], row-major action (A v)_i = sum_j A[i][j] v_j

  Connection(CurveSpec c, int r, std::vector<std::vector<RegFun>> m);
  static Connection trivial(const CurveSpec& curve, int rank);
};

/// Dual connection -A^T on (O_X^r)^vee.
Connection dual(const Connection& e);

/// Tensor product with Kronecker (row-major) basis ordering:
/// basis vector (i, j) of E (x) F sits at index i * rank_F + j.
Connection tensor(const Connection& e, const Connection& f);

/// End(E) = E^vee (x) E.
Connection end_connection(const Connection& e);

/// Truncated de Rham graded mixed complex of E. The weight-0 piece spans
/// the monomials of the requested window; the weight-1 piece is the
/// contiguous hull of the nabla-images (so the truncated realization is the
/// expected two-term complex).
DeRhamGmc de_rham_gmc(const Connection& e, int poly_deg, int pole_order);

/// Variant with both windows fixed by the caller; throws WindowError
/// ("enlarge window") when a nabla-image escapes the form window.
DeRhamGmc de_rham_gmc(const Connection& e, const MonWindow& fun_window,
                      const MonWindow& form_window);

}  // namespace fbx
