#pragma once

#include <limits>

#include "fbx/connection.hpp"
#include "fbx/laurent.hpp"

namespace fbx {

/// Truncation doubling hit the cap without the dimensions settling.
struct StabilizationError : std::runtime_error {
  StabilizationError(const std::string& msg, int truncation_in = 0,
                     std::pair<int, int> prev = {-1, -1}, std::pair<int, int> last = {-1, -1})
      : std::runtime_error(msg), truncation(truncation_in), prev_dims(prev), last_dims(last) {}
  int truncation;
  std::pair<int, int> prev_dims;  // (h0, h1) of the second-to-last round
  std::pair<int, int> last_dims;
};

/// The connection restricted to the formal disk at a boundary point:
/// nabla = d/ds + B(s) with s = t - c at a finite point and s = 1/t at
/// infinity (where dt = -s^-2 ds turns A into B(s) = -s^-2 A(1/s)).
class LocalConnection {
 public:
  LocalConnection(const Connection& e, const DivisorPoint& p);

  const DivisorPoint& point() const { return point_; }
  int rank() const { return rank_; }
  /// q = max(0, -min valuation of the entries of B).
  int pole_order() const { return q_; }

  const RegFun& entry_fun(int i, int j) const { return b_[i][j]; }
  /// Laurent expansion of B(i, j) through s^order.
  TruncLaurent entry(int i, int j, int order) const;

 private:
  DivisorPoint point_;
  int rank_;
  std::vector<std::vector<RegFun>> b_;  // entries as rational functions of s
  int q_ = 0;
};

LocalConnection restrict(const Connection& e, const DivisorPoint& p);

/// nabla v = dv/ds + B v on truncated Laurent vectors (precision tracked).
std::vector<TruncLaurent> apply_local(const LocalConnection& l, const std::vector<TruncLaurent>& v);

/// A cokernel representative s^exponent ds in one fiber component.
struct FormMonomial {
  int component;
  int exponent;
  bool operator==(const FormMonomial& o) const = default;
};

struct LocalReduction {
  VecQ coords;                          // coordinates on the h1 basis
  std::vector<TruncLaurent> primitive;  // v with nabla v = g - coords.basis up to the guaranteed order
};

/// H^1 of nabla over Q((s)) at truncation N: monomial representatives of the
/// cokernel plus the reduction map expressing any 1-form in terms of them.
class LocalH1 {
 public:
  int dim() const { return static_cast<int>(basis_.size()); }
  const std::vector<FormMonomial>& basis() const { return basis_; }
  std::vector<TruncLaurent> basis_form(int k, int order) const;
  int truncation() const { return n_; }
  const DivisorPoint& point() const;
  /// Order through which reductions are exact.
  int guaranteed_order() const { return ahi_; }

  /// Writes g ds = coords.basis + nabla v. The components of g must be known
  /// through the guaranteed order (PrecisionError otherwise); forms with
  /// arbitrarily deep (finite) poles are handled by extending the relation
  /// window downward.
  LocalReduction reduce(const std::vector<TruncLaurent>& g) const;

 private:
  friend LocalH1 local_h1(const LocalConnection& l, int n, int floor, int margin);
  LocalConnection conn_;
  int n_ = 0;       // requested truncation N
  int v_min_ = 0;   // candidate valuation floor
  int margin_ = 0;  // relations extend this far below the candidate floor
  int qe_ = 1;      // max(1, pole order)
  int alo_ = 0;     // ambient exponent range [alo, ahi]
  int ahi_ = 0;
  std::vector<FormMonomial> basis_;
  explicit LocalH1(LocalConnection c) : conn_(std::move(c)) {}
};

/// Horizontal sections to order N: solutions of (d/ds + B)v = 0 computed on
/// a doubled window and truncated back, so that top-degree junk solutions of
/// the finite system are discarded. A floor below the default valuation bound
/// may be supplied (INT_MIN sentinel keeps the default).
std::vector<std::vector<TruncLaurent>> local_h0(const LocalConnection& l, int n,
                                                int floor = std::numeric_limits<int>::min());

/// Cokernel at truncation N. Relations reach margin exponents below the
/// candidate floor: a reducible candidate near the floor can have a primitive
/// slightly deeper than itself, and relations must cover that depth or the
/// candidate would fake a class (negative margin picks a sound default).
LocalH1 local_h1(const LocalConnection& l, int n,
                 int floor = std::numeric_limits<int>::min(), int margin = -1);

struct LocalCohomology {
  DivisorPoint point;
  int rank = 0;
  int truncation_used = 0;
  bool stabilized = false;
  std::vector<std::vector<TruncLaurent>> h0_basis;
  LocalH1 h1;

  int h0_dim() const { return static_cast<int>(h0_basis.size()); }
  int h1_dim() const { return h1.dim(); }
};

/// Doubles the truncation until two successive rounds agree in dimension and
/// dim h0 = dim h1 (the local index is zero). Dimensions that are stable in
/// the truncation but fail the index check indicate a window floor that is
/// too shallow, so the floors are deepened and the doubling restarted.
/// Throws StabilizationError with the last two dimension pairs when the cap
/// is exceeded.
LocalCohomology stabilized_cohomology(const LocalConnection& l, int max_truncation = 4096);

/// Coefficient of s^-1 (the form is the coefficient of ds).
Rat residue(const TruncLaurent& form);
/// residue(a . b) for a function vector against a form vector.
Rat residue(const std::vector<TruncLaurent>& a, const std::vector<TruncLaurent>& b);

/// Expansion of a global section at a boundary point through s^order.
std::vector<TruncLaurent> restrict_section(const std::vector<RegFun>& v, const DivisorPoint& p,
                                           int order);
/// Expansion of a global 1-form (coefficients of dt) in the local parameter:
/// f dt = f(c+s) ds at a finite point, -s^-2 f(1/s) ds at infinity.
std::vector<TruncLaurent> restrict_form(const std::vector<RegFun>& w, const DivisorPoint& p,
                                        int order);

}  // namespace fbx
