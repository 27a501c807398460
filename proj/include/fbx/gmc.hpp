#pragma once

#include <map>
#include <vector>

#include "fbx/linalg.hpp"
#include "fbx/window.hpp"

namespace fbx {

struct GmcError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Cochain complex of finite-dimensional Q-spaces with differentials of
/// degree +1; d*d = 0 is checked at construction.
class ChainComplex {
 public:
  ChainComplex() = default;
  ChainComplex(std::map<int, int> dims, std::map<int, MatQ> diffs);

  int dim(int degree) const;
  /// Differential out of `degree` (zero matrix of the right shape when absent).
  MatQ diff(int degree) const;
  const std::map<int, int>& dims() const { return dims_; }

 private:
  std::map<int, int> dims_;
  std::map<int, MatQ> diffs_;
};

struct CohomologyGroup {
  int dim = 0;
  MatQ basis;  // columns are representing cocycles
};

/// Cohomology in every degree with explicit cocycle representatives.
std::map<int, CohomologyGroup> cohomology(const ChainComplex& c);

struct PieceKey {
  int degree;
  int weight;
  auto operator<=>(const PieceKey&) const = default;
};

/// Bigraded complex with d of bidegree (+1, 0) and the mixed structure eps
/// of bidegree (-1, +1). Construction checks d^2 = 0, eps^2 = 0 and
/// d eps + eps d = 0 on every piece; weights must be >= 0.
class GradedMixedComplex {
 public:
  GradedMixedComplex(std::map<PieceKey, int> pieces, std::map<PieceKey, MatQ> d,
                     std::map<PieceKey, MatQ> eps);

  static GradedMixedComplex unit();

  int dim(PieceKey k) const;
  MatQ d(PieceKey k) const;    // (deg+1, w) x (deg, w)
  MatQ eps(PieceKey k) const;  // (deg-1, w+1) x (deg, w)
  const std::map<PieceKey, int>& pieces() const { return pieces_; }

  /// Direct sum, dimension-wise concatenation of bases.
  GradedMixedComplex direct_sum(const GradedMixedComplex& o) const;

 private:
  std::map<PieceKey, int> pieces_;
  std::map<PieceKey, MatQ> d_;
  std::map<PieceKey, MatQ> eps_;
};

/// |E|: total complex of prod_i E(i)[-2i]; degree-n piece is the direct sum
/// of E^(n-2w, w) over weights w, with total differential d + eps.
ChainComplex realization(const GradedMixedComplex& e);

/// A de Rham graded mixed complex: the truncation of DR(E) for a connection,
/// free of weight 0 with the function/form monomial windows recorded. The
/// weight-0 piece sits in degree 0 and the weight-1 piece in degree -1 (so
/// the realization is the usual two-term de Rham complex in degrees 0, 1).
/// Basis index convention: monomial-major, fiber-minor (mon * rank + i).
struct DeRhamGmc {
  GradedMixedComplex gmc;
  CurveSpec curve;
  int rank = 0;
  MonWindow fun_window;
  MonWindow form_window;
  std::vector<std::vector<RegFun>> conn;  // connection matrix A, nabla = d/dt + A
};

/// Mapping complex H(E, F) of two de Rham graded mixed complexes: the
/// totalization of the graded maps E -> F(p) over all weight shifts p, with
/// differential D f = eps_F f - (-1)^|f| f eps_E (the d-components vanish
/// for modules concentrated in degree 0). For connections this is the
/// two-term complex of function-valued matrices mapping to form-valued
/// matrices; its cohomology matches the de Rham cohomology of Hom(E, F).
ChainComplex hom_complex(const DeRhamGmc& e, const DeRhamGmc& f);

/// Reads the connection matrix back off the mixed structure: A[j][i] is the
/// form-component of eps(t^0 e_i) in fiber j. Inverse to the de Rham gmc
/// construction. Throws GmcError when the gmc is not free of weight 0 in
/// the expected shape or t^0 is missing from the window.
std::vector<std::vector<RegFun>> recover_connection(const DeRhamGmc& e);

}  // namespace fbx
