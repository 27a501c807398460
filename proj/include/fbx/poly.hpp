#pragma once

#include <string>
#include <vector>

#include "fbx/rat.hpp"

namespace fbx {

/// Dense univariate polynomial over Rat in the global coordinate t.
/// The highest stored coefficient is nonzero unless the polynomial is zero.
class Poly {
 public:
  Poly() = default;
  explicit Poly(Rat constant);
  explicit Poly(std::vector<Rat> coeffs);

  static Poly monomial(int degree, Rat coeff = Rat(1));
  /// t - c
  static Poly linear_root(const Rat& c);

  bool is_zero() const { return c_.empty(); }
  int degree() const { return static_cast<int>(c_.size()) - 1; }  // -1 for zero
  Rat coeff(int k) const;
  const std::vector<Rat>& coeffs() const { return c_; }
  Rat leading() const;

  Poly operator-() const;
  Poly operator+(const Poly& o) const;
  Poly operator-(const Poly& o) const;
  Poly operator*(const Poly& o) const;
  Poly operator*(const Rat& s) const;
  bool operator==(const Poly& o) const { return c_ == o.c_; }

  Poly derivative() const;
  Rat eval(const Rat& x) const;
  /// p(t + c)
  Poly shift(const Rat& c) const;
  /// coefficients reversed: t^deg * p(1/t)
  Poly reversed() const;
  Poly monic() const;

  /// Quotient and remainder, denominator nonzero.
  static std::pair<Poly, Poly> divmod(const Poly& num, const Poly& den);
  static Poly gcd(const Poly& a, const Poly& b);  // monic

  std::string str() const;

 private:
  void trim();
  std::vector<Rat> c_;
};

}  // namespace fbx
