#pragma once

#include <array>

#include "fbx/boundary.hpp"
#include "fbx/window.hpp"

namespace fbx {

/// A computed consistency invariant failed; indicates a defect, not bad input.
struct ConsistencyError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Duality predicted equal dimensions and they differ.
struct DualityError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Global de Rham cohomology of (X, E) with explicit rational representatives.
struct GlobalH {
  std::vector<std::vector<RegFun>> h0_basis;  // horizontal sections
  std::vector<std::vector<RegFun>> h1_basis;  // 1-forms, coefficients of dt
  MonWindow domain;      // relation window of the accepted round
  MonWindow candidates;  // candidate-form window of the accepted round
  int rounds = 0;        // doubling rounds used

  int h0_dim() const { return static_cast<int>(h0_basis.size()); }
  int h1_dim() const { return static_cast<int>(h1_basis.size()); }
};

/// H^0 = exact kernel of nabla on a pole/degree window, H^1 = monomial forms
/// completing the span of the relations nabla(domain monomials); relations
/// come from a doubled window so candidates whose primitives barely escape
/// the candidate window do not fake classes. Windows double until both
/// dimensions repeat; initial_doublings pre-enlarges the starting windows
/// (the result must not depend on it, which makes it a determinism probe).
GlobalH global_h(const Connection& e, int initial_doublings = 0);

/// Representative of a class in the cone model of
/// H_c = fib(H(X,E) -> H(boundary)). Degree 1 cocycles are pairs
/// (global 1-form w, per-point functions h) with nabla h = R(w) at every
/// point to the recorded precision; degree 2 classes are per-point boundary
/// 1-forms (global part empty); degree 0 would be a horizontal section
/// restricting to zero (impossible for nonzero sections, kept for shape).
struct ConeClass {
  int degree = 1;
  std::vector<RegFun> global_part;
  std::vector<std::vector<TruncLaurent>> boundary_part;  // per boundary point
};

struct CompactH {
  std::vector<ConeClass> h0, h1, h2;
  int h0_dim() const { return static_cast<int>(h0.size()); }
  int h1_dim() const { return static_cast<int>(h1.size()); }
  int h2_dim() const { return static_cast<int>(h2.size()); }
};

/// Compactly supported cohomology via the mapping-cone long exact sequence:
/// H^0_c = ker(H^0(X) -> H^0(bd)), H^1_c = coker of that map plus
/// ker(H^1(X) -> H^1(bd)), H^2_c = coker(H^1(X) -> H^1(bd)), with explicit
/// cone representatives.
CompactH compact_h(const Connection& e);

/// Variant reusing already computed global and boundary data (the boundary
/// vector must follow boundary_points(e.curve) order).
CompactH compact_h(const Connection& e, const GlobalH& global,
                   const std::vector<LocalCohomology>& boundary);

/// Sum over boundary points of the residue of a (rank-1) boundary 1-form
/// class; zero on restrictions of global forms.
Rat orientation(const std::vector<TruncLaurent>& per_point_forms);

/// Residue pairings H^i(bd, E) x H^{1-i}(bd, dual E) -> Q on the stabilized
/// bases (block diagonal over points). Throws DualityError when the paired
/// dimensions differ.
struct BoundaryPairing {
  MatQ h0_vs_h1;  // rows: H^0(bd, E) basis, cols: H^1(bd, dual E) basis
  MatQ h1_vs_h0;  // rows: H^1(bd, E) basis, cols: H^0(bd, dual E) basis
};
BoundaryPairing boundary_pairing(const Connection& e);

/// Residue pairings H^i_c(E) x H^{2-i}(X, dual E) -> Q on cone
/// representatives: <(w,h), y> = sum_p res_p(h . R(y)). Throws DualityError
/// when the paired dimensions differ.
struct CompactPairing {
  MatQ h1c_vs_h1;  // rows: H^1_c(E), cols: H^1(X, dual E)
  MatQ h2c_vs_h0;  // rows: H^2_c(E), cols: H^0(X, dual E)
};
CompactPairing duality_pairing_c(const Connection& e);

/// Tangent dimensions T^i = dim H^{i+1}(X, End E) for i = -1, 0, 1.
struct TangentDims {
  int t_minus_1 = 0;
  int t_0 = 0;
  int t_1 = 0;  // always 0 on an affine curve
};
TangentDims tangent_complex(const Connection& e);

/// End-Fredholm check: global cohomology of End E is finite dimensional
/// (always succeeds over Q; a stabilization failure is a defect).
struct FredholmReport {
  bool fredholm = false;
  int end_h0 = 0;
  int end_h1 = 0;
  int rounds = 0;
};
FredholmReport fredholm_check(const Connection& e);

/// H^0(X, End E) -> direct sum of H^0(bd_p, End E) has full column rank.
bool injectivity_check(const Connection& e);

/// Dimensions and map ranks of the cone long exact sequence
/// 0 -> H^0_c -> H^0(X) -> H^0(bd) -> H^1_c -> H^1(X) -> H^1(bd) -> H^2_c -> 0
/// with the restriction-map ranks computed from the actual matrices; exact
/// iff rank(in) + rank(out) equals the dimension at every term.
struct LesRanks {
  std::array<int, 7> dims{};   // H0_c, H0, H0(bd), H1_c, H1, H1(bd), H2_c
  std::array<int, 6> ranks{};  // the six maps, left to right
  bool exact = false;
};
LesRanks les_ranks(const Connection& e);
LesRanks les_ranks(const Connection& e, const GlobalH& global,
                   const std::vector<LocalCohomology>& boundary);

/// Full report: global, per-point boundary, compact support, Euler table and
/// the long-exact-sequence dimension check.
struct CohomologyReport {
  GlobalH global;
  std::vector<LocalCohomology> boundary;  // boundary_points(curve) order
  CompactH compact;
  int chi_x = 0;         // chi(X, E)
  int chi_boundary = 0;  // chi(bd, E), must be 0
  int chi_c = 0;         // chi_c(E)
  std::array<int, 7> les_dims{};  // H0_c, H0, H0(bd), H1_c, H1, H1(bd), H2_c
  bool les_ok = false;            // alternating sum vanishes
};
CohomologyReport cohomology_report(const Connection& e);

}  // namespace fbx
