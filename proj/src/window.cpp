#include "fbx/window.hpp"

#include "fbx/laurent.hpp"

namespace fbx {

bool PartialFractions::is_zero() const {
  if (!poly_part.is_zero()) return false;
  for (const auto& pp : principal)
    for (const auto& c : pp)
      if (c != 0) return false;
  return true;
}

PartialFractions partial_fractions(const RegFun& f, const CurveSpec& curve) {
  f.validate_on(curve);
  PartialFractions pf;
  pf.principal.resize(curve.num_finite());
  if (f.is_zero()) return pf;
  RegFun remainder = f;
  for (int i = 0; i < curve.num_finite(); ++i) {
    const Rat& c = curve.finite_points[i];
    int e = f.pole_order_at(c);
    if (e == 0) continue;
    // principal part coefficients are the s^(-j) Laurent coefficients at c
    TruncLaurent exp = laurent_expand(f, DivisorPoint::finite(i, c), -1);
    pf.principal[i].assign(e, Rat(0));
    RegFun part;
    for (int j = 1; j <= e; ++j) {
      Rat a = exp.coeff(-j);
      pf.principal[i][j - 1] = a;
      if (a != 0) {
        Poly denj(Rat(1));
        Poly lin = Poly::linear_root(c);
        for (int k = 0; k < j; ++k) denj = denj * lin;
        part = part + RegFun(Poly(a), denj);
      }
    }
    remainder = remainder - part;
  }
  if (remainder.den().degree() != 0)
    throw ValidationError("partial_fractions: residual denominator " + remainder.den().str());
  pf.poly_part = remainder.num() * (1 / remainder.den().leading());
  return pf;
}

RegFun to_regfun(const PartialFractions& pf, const CurveSpec& curve) {
  RegFun r(pf.poly_part);
  for (size_t i = 0; i < pf.principal.size(); ++i) {
    Poly lin = Poly::linear_root(curve.finite_points[i]);
    Poly denj(Rat(1));
    for (size_t j = 0; j < pf.principal[i].size(); ++j) {
      denj = denj * lin;
      if (pf.principal[i][j] != 0) r = r + RegFun(Poly(pf.principal[i][j]), denj);
    }
  }
  return r;
}

MonWindow::MonWindow(const CurveSpec& curve, int poly_deg, std::vector<int> pole_orders)
    : curve_(curve), poly_deg_(poly_deg), pole_orders_(std::move(pole_orders)) {
  if (static_cast<int>(pole_orders_.size()) != curve.num_finite())
    throw std::invalid_argument("MonWindow: pole_orders size mismatch");
  recompute_dim();
}

MonWindow::MonWindow(const CurveSpec& curve, int poly_deg, int pole_order_all)
    : MonWindow(curve, poly_deg, std::vector<int>(curve.num_finite(), pole_order_all)) {}

void MonWindow::recompute_dim() {
  dim_ = poly_deg_ + 1;
  for (int e : pole_orders_) dim_ += e;
}

Monomial MonWindow::at(int index) const {
  if (index <= poly_deg_) return Monomial::poly(index);
  int rest = index - poly_deg_ - 1;
  for (size_t i = 0; i < pole_orders_.size(); ++i) {
    if (rest < pole_orders_[i]) return Monomial::pole_at(static_cast<int>(i), rest + 1);
    rest -= pole_orders_[i];
  }
  throw std::out_of_range("MonWindow::at");
}

std::optional<int> MonWindow::index_of(const Monomial& m) const {
  if (!m.pole) {
    if (m.a < 0 || m.a > poly_deg_) return std::nullopt;
    return m.a;
  }
  if (m.point < 0 || m.point >= static_cast<int>(pole_orders_.size())) return std::nullopt;
  if (m.j < 1 || m.j > pole_orders_[m.point]) return std::nullopt;
  int idx = poly_deg_ + 1;
  for (int i = 0; i < m.point; ++i) idx += pole_orders_[i];
  return idx + m.j - 1;
}

std::optional<VecQ> MonWindow::coords(const PartialFractions& pf) const {
  if (pf.poly_part.degree() > poly_deg_) return std::nullopt;
  for (size_t i = 0; i < pf.principal.size(); ++i) {
    for (size_t j = pf.principal[i].size(); j-- > 0;) {
      if (pf.principal[i][j] != 0 && static_cast<int>(j) + 1 > pole_orders_[i]) return std::nullopt;
    }
  }
  VecQ v(dim_);
  v.setZero();
  for (int a = 0; a <= std::min(poly_deg_, pf.poly_part.degree()); ++a)
    v(*index_of(Monomial::poly(a))) = pf.poly_part.coeff(a);
  for (size_t i = 0; i < pf.principal.size(); ++i)
    for (size_t j = 0; j < pf.principal[i].size(); ++j)
      if (pf.principal[i][j] != 0)
        v(*index_of(Monomial::pole_at(static_cast<int>(i), static_cast<int>(j) + 1))) =
            pf.principal[i][j];
  return v;
}

RegFun MonWindow::monomial_regfun(const Monomial& m) const {
  if (!m.pole) return RegFun(Poly::monomial(m.a));
  Poly den(Rat(1));
  Poly lin = Poly::linear_root(curve_.finite_points[m.point]);
  for (int k = 0; k < m.j; ++k) den = den * lin;
  return RegFun(Poly(Rat(1)), den);
}

RegFun MonWindow::from_coords(const VecQ& v) const {
  RegFun r;
  for (int k = 0; k < dim_; ++k) {
    if (v(k) != 0) r = r + monomial_regfun(at(k)) * v(k);
  }
  return r;
}

void MonWindow::grow_to_contain(const PartialFractions& pf) {
  poly_deg_ = std::max(poly_deg_, pf.poly_part.degree());
  for (size_t i = 0; i < pf.principal.size(); ++i) {
    for (size_t j = pf.principal[i].size(); j-- > 0;) {
      if (pf.principal[i][j] != 0) {
        pole_orders_[i] = std::max(pole_orders_[i], static_cast<int>(j) + 1);
        break;
      }
    }
  }
  recompute_dim();
}

bool MonWindow::contains(const MonWindow& other) const {
  if (other.poly_deg_ > poly_deg_) return false;
  for (size_t i = 0; i < pole_orders_.size(); ++i)
    if (other.pole_orders_[i] > pole_orders_[i]) return false;
  return true;
}

PartialFractions pf_add(const PartialFractions& a, const PartialFractions& b) {
  PartialFractions r;
  r.poly_part = a.poly_part + b.poly_part;
  size_t n = std::max(a.principal.size(), b.principal.size());
  r.principal.resize(n);
  for (size_t i = 0; i < n; ++i) {
    size_t len = std::max(i < a.principal.size() ? a.principal[i].size() : 0,
                          i < b.principal.size() ? b.principal[i].size() : 0);
    r.principal[i].assign(len, Rat(0));
    if (i < a.principal.size())
      for (size_t j = 0; j < a.principal[i].size(); ++j) r.principal[i][j] += a.principal[i][j];
    if (i < b.principal.size())
      for (size_t j = 0; j < b.principal[i].size(); ++j) r.principal[i][j] += b.principal[i][j];
  }
  return r;
}

PartialFractions pf_scale(const PartialFractions& a, const Rat& s) {
  PartialFractions r = a;
  r.poly_part = r.poly_part * s;
  for (auto& pp : r.principal)
    for (auto& c : pp) c *= s;
  return r;
}

PartialFractions pf_derivative(const Monomial& m) {
  PartialFractions r;
  if (!m.pole) {
    r.poly_part = Poly::monomial(m.a).derivative();
  } else {
    // d/dt (t-c)^(-j) = -j (t-c)^(-j-1)
    r.principal.resize(m.point + 1);
    r.principal[m.point].assign(m.j + 1, Rat(0));
    r.principal[m.point][m.j] = Rat(-m.j);
  }
  return r;
}

PartialFractions pf_multiply(const RegFun& f, const Monomial& m, const CurveSpec& curve) {
  Poly den(Rat(1));
  Poly num(Rat(1));
  if (m.pole) {
    Poly lin = Poly::linear_root(curve.finite_points[m.point]);
    for (int k = 0; k < m.j; ++k) den = den * lin;
  } else {
    num = Poly::monomial(m.a);
  }
  return partial_fractions(f * RegFun(num, den), curve);
}

}  // namespace fbx
