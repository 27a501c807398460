#pragma once

#include <map>
#include <optional>
#include <vector>

#include "fbx/curve.hpp"
#include "fbx/regfun.hpp"

namespace fbx {

/// A Q-basis monomial of O(X) = Q[t, 1/q] in partial-fraction form:
/// either t^a (a >= 0) or (t - c_i)^(-j) (j >= 1).
struct Monomial {
  bool pole = false;
  int a = 0;       // poly degree when !pole
  int point = -1;  // finite point index when pole
  int j = 0;       // pole order when pole

  static Monomial poly(int a) { return {false, a, -1, 0}; }
  static Monomial pole_at(int point, int j) { return {true, 0, point, j}; }

  bool operator==(const Monomial& o) const {
    return pole == o.pole && a == o.a && point == o.point && j == o.j;
  }
};

/// Partial-fraction form of an element of Q[t, 1/q]: a polynomial part plus
/// principal parts at the finite boundary points.
struct PartialFractions {
  Poly poly_part;
  // principal[i][j-1]: coefficient of (t - c_i)^(-j)
  std::vector<std::vector<Rat>> principal;

  bool is_zero() const;
};

/// Decomposes f into partial fractions with respect to the curve's finite
/// points. Throws ValidationError when f has a pole elsewhere.
PartialFractions partial_fractions(const RegFun& f, const CurveSpec& curve);

RegFun to_regfun(const PartialFractions& pf, const CurveSpec& curve);

/// Contiguous monomial window: t^0..t^poly_deg plus, per finite point,
/// (t-c)^(-1)..(t-c)^(-pole_order[i]). Index order: polynomials by ascending
/// degree, then each point's poles by ascending order. This index order is
/// also the preference order when completing quotient bases, so cokernel
/// representatives come out with the smallest poles available.
class MonWindow {
 public:
  MonWindow(const CurveSpec& curve, int poly_deg, std::vector<int> pole_orders);
  MonWindow(const CurveSpec& curve, int poly_deg, int pole_order_all);

  const CurveSpec& curve() const { return curve_; }
  int poly_deg() const { return poly_deg_; }
  const std::vector<int>& pole_orders() const { return pole_orders_; }

  int dim() const { return dim_; }
  Monomial at(int index) const;
  /// Index of a monomial, or nullopt when outside the window.
  std::optional<int> index_of(const Monomial& m) const;

  /// Coefficient vector of pf, or nullopt when pf does not fit.
  std::optional<VecQ> coords(const PartialFractions& pf) const;

  RegFun monomial_regfun(const Monomial& m) const;
  RegFun from_coords(const VecQ& v) const;

  /// Smallest window of this shape containing pf; grows *this in place.
  void grow_to_contain(const PartialFractions& pf);

  bool contains(const MonWindow& other) const;

 private:
  CurveSpec curve_;
  int poly_deg_;
  std::vector<int> pole_orders_;
  int dim_;
  void recompute_dim();
};

/// Window too small to contain a required image; the caller should enlarge
/// the window and retry.
struct WindowError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

PartialFractions pf_add(const PartialFractions& a, const PartialFractions& b);
PartialFractions pf_scale(const PartialFractions& a, const Rat& s);
/// d/dt of a single monomial (stays in partial-fraction form).
PartialFractions pf_derivative(const Monomial& m);
/// f * m for a RegFun multiplier.
PartialFractions pf_multiply(const RegFun& f, const Monomial& m, const CurveSpec& curve);

}  // namespace fbx
