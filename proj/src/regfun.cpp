#include "fbx/regfun.hpp"

#include <stdexcept>

namespace fbx {

CurveSpec::CurveSpec(std::vector<Rat> pts) : finite_points(std::move(pts)) {
  for (size_t i = 0; i < finite_points.size(); ++i)
    for (size_t j = i + 1; j < finite_points.size(); ++j)
      if (finite_points[i] == finite_points[j])
        throw ValidationError("CurveSpec: duplicate boundary point " + finite_points[i].get_str());
}

std::vector<DivisorPoint> boundary_points(const CurveSpec& curve) {
  std::vector<DivisorPoint> pts;
  for (int i = 0; i < curve.num_finite(); ++i)
    pts.push_back(DivisorPoint::finite(i, curve.finite_points[i]));
  pts.push_back(DivisorPoint::infinity());
  return pts;
}

RegFun::RegFun(Poly num) : num_(std::move(num)) {}

RegFun::RegFun(Poly num, Poly den) : num_(std::move(num)), den_(std::move(den)) {
  if (den_.is_zero()) throw std::invalid_argument("RegFun: zero denominator");
  reduce();
}

void RegFun::reduce() {
  if (num_.is_zero()) {
    den_ = Poly(Rat(1));
    return;
  }
  Poly g = Poly::gcd(num_, den_);
  if (g.degree() > 0) {
    num_ = Poly::divmod(num_, g).first;
    den_ = Poly::divmod(den_, g).first;
  }
  Rat lead = den_.leading();
  if (lead != 1) {
    den_ = den_ * (1 / lead);
    num_ = num_ * (1 / lead);
  }
}

RegFun RegFun::operator-() const {
  RegFun r = *this;
  r.num_ = -r.num_;
  return r;
}

RegFun RegFun::operator+(const RegFun& o) const {
  return RegFun(num_ * o.den_ + o.num_ * den_, den_ * o.den_);
}

RegFun RegFun::operator-(const RegFun& o) const { return *this + (-o); }

RegFun RegFun::operator*(const RegFun& o) const {
  return RegFun(num_ * o.num_, den_ * o.den_);
}

RegFun RegFun::operator*(const Rat& s) const { return RegFun(num_ * s, den_); }

RegFun RegFun::operator/(const RegFun& o) const {
  if (o.is_zero()) throw std::invalid_argument("RegFun: division by zero");
  return RegFun(num_ * o.den_, den_ * o.num_);
}

RegFun RegFun::derivative() const {
  return RegFun(num_.derivative() * den_ - num_ * den_.derivative(), den_ * den_);
}

bool RegFun::poles_within(const std::vector<Rat>& points) const {
  Poly d = den_;
  bool progress = true;
  while (d.degree() > 0 && progress) {
    progress = false;
    for (const Rat& c : points) {
      while (d.degree() > 0 && d.eval(c) == 0) {
        d = Poly::divmod(d, Poly::linear_root(c)).first;
        progress = true;
      }
    }
  }
  return d.degree() == 0;
}

void RegFun::validate_on(const CurveSpec& curve) const {
  if (!poles_within(curve.finite_points))
    throw ValidationError("function " + str() + " has a pole outside the boundary divisor");
}

int RegFun::pole_order_at(const Rat& c) const {
  Poly d = den_;
  int order = 0;
  while (d.degree() > 0 && d.eval(c) == 0) {
    d = Poly::divmod(d, Poly::linear_root(c)).first;
    ++order;
  }
  return order;
}

int RegFun::degree_at_infinity() const {
  return std::max(0, num_.degree() - den_.degree());
}

std::string RegFun::str() const {
  if (den_.degree() == 0) return num_.str();
  return "(" + num_.str() + ")/(" + den_.str() + ")";
}

}  // namespace fbx
