#pragma once

#include <string>
#include <vector>

#include "fbx/curve.hpp"
#include "fbx/regfun.hpp"

namespace fbx {

struct PrecisionError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Truncated Laurent series in a local parameter s: coefficients for the
/// exponents [lo, order], exact there, unknown above `order`. Arithmetic
/// carries the minimum guaranteed precision of the operands.
class TruncLaurent {
 public:
  TruncLaurent() = default;  // zero known to infinite order

  static TruncLaurent zero_to_order(int order);
  /// coeffs[k] is the coefficient of s^(lo+k); order = lo + coeffs.size() - 1.
  static TruncLaurent from_coeffs(int lo, std::vector<Rat> coeffs);
  /// c * s^k known exactly up to `order` (order >= k).
  static TruncLaurent monomial(int k, Rat c, int order);

  bool is_zero() const { return c_.empty(); }
  /// Valuation: exponent of the lowest nonzero coefficient. For the zero
  /// series this is order()+1 by convention.
  int valuation() const;
  int order() const { return order_; }
  bool unbounded_order() const { return unbounded_; }
  Rat coeff(int k) const;

  TruncLaurent operator-() const;
  TruncLaurent operator+(const TruncLaurent& o) const;
  TruncLaurent operator-(const TruncLaurent& o) const;
  TruncLaurent operator*(const TruncLaurent& o) const;
  TruncLaurent operator*(const Rat& s) const;
  bool operator==(const TruncLaurent& o) const;

  TruncLaurent derivative() const;
  TruncLaurent shifted(int k) const;  // multiply by s^k
  TruncLaurent truncated(int new_order) const;
  /// Multiplicative inverse; valuation must be exactly known (nonzero series).
  TruncLaurent inverse() const;

  /// Coefficient of s^(-1); throws PrecisionError when -1 exceeds the
  /// known order.
  Rat residue() const;

  std::string str(const std::string& var = "s") const;

 private:
  void normalize();
  int lo_ = 0;
  std::vector<Rat> c_;
  int order_ = -1;
  bool unbounded_ = true;  // exact zero only
};

/// Formal expansion of f in the local parameter of p (s = t - c at a finite
/// point, s = 1/t at infinity) through exponent `order`.
/// Throws ValidationError when f has a pole at a point not in the expansion
/// point's divisor role (cannot occur for a validated RegFun).
TruncLaurent laurent_expand(const RegFun& f, const DivisorPoint& p, int order);

}  // namespace fbx
