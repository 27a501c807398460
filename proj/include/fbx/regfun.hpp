#pragma once

#include <string>

#include "fbx/curve.hpp"
#include "fbx/poly.hpp"

namespace fbx {

/// Rational function regular on some X = P^1 \ D: stored reduced with a
/// monic denominator. Whether the poles really lie in a given D is checked
/// by validate_on / poles_within.
class RegFun {
 public:
  RegFun() = default;  // zero
  explicit RegFun(Poly num);
  RegFun(Poly num, Poly den);

  static RegFun constant(Rat c) { return RegFun(Poly(std::move(c))); }
  static RegFun t() { return RegFun(Poly::monomial(1)); }

  const Poly& num() const { return num_; }
  const Poly& den() const { return den_; }
  bool is_zero() const { return num_.is_zero(); }

  RegFun operator-() const;
  RegFun operator+(const RegFun& o) const;
  RegFun operator-(const RegFun& o) const;
  RegFun operator*(const RegFun& o) const;
  RegFun operator*(const Rat& s) const;
  RegFun operator/(const RegFun& o) const;
  bool operator==(const RegFun& o) const { return num_ == o.num_ && den_ == o.den_; }

  RegFun derivative() const;

  /// True when every root of the denominator is one of the given points
  /// (with multiplicity).
  bool poles_within(const std::vector<Rat>& points) const;
  /// Throws ValidationError when a pole lies outside D.
  void validate_on(const CurveSpec& curve) const;

  /// Pole order at a finite point (0 when regular there).
  int pole_order_at(const Rat& c) const;
  /// max(0, deg num - deg den): growth order at infinity.
  int degree_at_infinity() const;

  std::string str() const;

 private:
  void reduce();
  Poly num_;
  Poly den_ = Poly(Rat(1));
};

struct ValidationError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace fbx
