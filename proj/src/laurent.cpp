#include "fbx/laurent.hpp"

#include <algorithm>
#include <sstream>

namespace fbx {

void TruncLaurent::normalize() {
  size_t lead = 0;
  while (lead < c_.size() && c_[lead] == 0) ++lead;
  if (lead > 0) {
    c_.erase(c_.begin(), c_.begin() + lead);
    lo_ += static_cast<int>(lead);
  }
  while (!c_.empty() && static_cast<int>(c_.size()) - 1 + lo_ > order_ && !unbounded_) c_.pop_back();
  while (!c_.empty() && c_.back() == 0) c_.pop_back();
  if (c_.empty()) lo_ = 0;
}

TruncLaurent TruncLaurent::zero_to_order(int order) {
  TruncLaurent z;
  z.order_ = order;
  z.unbounded_ = false;
  return z;
}

TruncLaurent TruncLaurent::from_coeffs(int lo, std::vector<Rat> coeffs) {
  TruncLaurent s;
  s.lo_ = lo;
  s.order_ = lo + static_cast<int>(coeffs.size()) - 1;
  s.unbounded_ = false;
  s.c_ = std::move(coeffs);
  s.normalize();
  return s;
}

TruncLaurent TruncLaurent::monomial(int k, Rat c, int order) {
  std::vector<Rat> coeffs(order - k + 1, Rat(0));
  coeffs[0] = std::move(c);
  return from_coeffs(k, std::move(coeffs));
}

int TruncLaurent::valuation() const {
  if (c_.empty()) return order_ + 1;
  return lo_;
}

Rat TruncLaurent::coeff(int k) const {
  if (!unbounded_ && k > order_)
    throw PrecisionError("TruncLaurent: coefficient " + std::to_string(k) +
                         " beyond known order " + std::to_string(order_));
  if (k < lo_ || k >= lo_ + static_cast<int>(c_.size())) return Rat(0);
  return c_[k - lo_];
}

TruncLaurent TruncLaurent::operator-() const {
  TruncLaurent r = *this;
  for (auto& x : r.c_) x = -x;
  return r;
}

TruncLaurent TruncLaurent::operator+(const TruncLaurent& o) const {
  TruncLaurent r;
  r.unbounded_ = unbounded_ && o.unbounded_;
  r.order_ = r.unbounded_ ? -1 : (unbounded_ ? o.order_ : (o.unbounded_ ? order_ : std::min(order_, o.order_)));
  if (c_.empty() && o.c_.empty()) return r;
  int lo = c_.empty() ? o.lo_ : (o.c_.empty() ? lo_ : std::min(lo_, o.lo_));
  int hi = std::max(lo_ + static_cast<int>(c_.size()), o.lo_ + static_cast<int>(o.c_.size())) - 1;
  if (!r.unbounded_) hi = std::min(hi, r.order_);
  r.lo_ = lo;
  r.c_.assign(std::max(0, hi - lo + 1), Rat(0));
  for (int k = lo; k <= hi; ++k) {
    if (k >= lo_ && k < lo_ + static_cast<int>(c_.size())) r.c_[k - lo] += c_[k - lo_];
    if (k >= o.lo_ && k < o.lo_ + static_cast<int>(o.c_.size())) r.c_[k - lo] += o.c_[k - o.lo_];
  }
  r.normalize();
  return r;
}

TruncLaurent TruncLaurent::operator-(const TruncLaurent& o) const { return *this + (-o); }

TruncLaurent TruncLaurent::operator*(const TruncLaurent& o) const {
  TruncLaurent r;
  if (c_.empty() || o.c_.empty()) {
    // for an exact zero factor the result is exactly zero
    if ((c_.empty() && unbounded_) || (o.c_.empty() && o.unbounded_)) return TruncLaurent();
    long prec = unbounded_ ? static_cast<long>(valuation()) + o.order_
              : o.unbounded_ ? static_cast<long>(o.valuation()) + order_
              : std::min(static_cast<long>(valuation()) + o.order_,
                         static_cast<long>(o.valuation()) + order_);
    return zero_to_order(static_cast<int>(prec));
  }
  r.unbounded_ = unbounded_ && o.unbounded_;
  int hi1 = lo_ + static_cast<int>(c_.size()) - 1;
  int hi2 = o.lo_ + static_cast<int>(o.c_.size()) - 1;
  if (r.unbounded_) {
    r.order_ = hi1 + hi2;
  } else {
    // prec = min(v1 + N2, v2 + N1), an unbounded factor imposes no bound
    long prec = unbounded_ ? static_cast<long>(lo_) + o.order_
              : o.unbounded_ ? static_cast<long>(o.lo_) + order_
              : std::min(static_cast<long>(lo_) + o.order_, static_cast<long>(o.lo_) + order_);
    r.order_ = static_cast<int>(prec);
  }
  r.lo_ = lo_ + o.lo_;
  int len = std::min(hi1 + hi2, r.unbounded_ ? hi1 + hi2 : r.order_) - r.lo_ + 1;
  if (len <= 0) return zero_to_order(r.order_);
  r.c_.assign(len, Rat(0));
  for (size_t i = 0; i < c_.size(); ++i) {
    if (c_[i] == 0) continue;
    for (size_t j = 0; j < o.c_.size(); ++j) {
      int k = static_cast<int>(i + j);
      if (k < len) r.c_[k] += c_[i] * o.c_[j];
    }
  }
  r.normalize();
  return r;
}

TruncLaurent TruncLaurent::operator*(const Rat& s) const {
  if (s == 0) return unbounded_ ? TruncLaurent() : zero_to_order(order_);
  TruncLaurent r = *this;
  for (auto& x : r.c_) x *= s;
  return r;
}

bool TruncLaurent::operator==(const TruncLaurent& o) const {
  return lo_ == o.lo_ && c_ == o.c_ && order_ == o.order_ && unbounded_ == o.unbounded_;
}

TruncLaurent TruncLaurent::derivative() const {
  TruncLaurent r;
  r.unbounded_ = unbounded_;
  r.order_ = unbounded_ ? -1 : order_ - 1;
  r.lo_ = lo_ - 1;
  r.c_.resize(c_.size());
  for (size_t i = 0; i < c_.size(); ++i) r.c_[i] = c_[i] * Rat(lo_ + static_cast<long>(i));
  r.normalize();
  return r;
}

TruncLaurent TruncLaurent::shifted(int k) const {
  TruncLaurent r = *this;
  r.lo_ += k;
  if (!r.unbounded_) r.order_ += k;
  return r;
}

TruncLaurent TruncLaurent::truncated(int new_order) const {
  TruncLaurent r = *this;
  if (r.unbounded_ || new_order < r.order_) {
    r.unbounded_ = false;
    r.order_ = new_order;
    r.normalize();
  }
  return r;
}

TruncLaurent TruncLaurent::inverse() const {
  if (c_.empty()) throw std::invalid_argument("TruncLaurent: inverse of zero");
  int rel = unbounded_ ? 16 : order_ - lo_;  // relative precision preserved
  std::vector<Rat> u(c_.begin(), c_.end());
  u.resize(rel + 1, Rat(0));
  std::vector<Rat> inv(rel + 1, Rat(0));
  inv[0] = 1 / u[0];
  for (int k = 1; k <= rel; ++k) {
    Rat acc(0);
    for (int j = 1; j <= k; ++j) acc += u[j] * inv[k - j];
    inv[k] = -acc * inv[0];
  }
  return from_coeffs(-lo_, std::move(inv));
}

Rat TruncLaurent::residue() const { return coeff(-1); }

std::string TruncLaurent::str(const std::string& var) const {
  if (c_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (size_t i = 0; i < c_.size(); ++i) {
    if (c_[i] == 0) continue;
    int k = lo_ + static_cast<int>(i);
    if (!first) os << (c_[i] > 0 ? " + " : " - ");
    else if (c_[i] < 0) os << "-";
    Rat a = abs(c_[i]);
    if (k == 0 || a != 1) os << a.get_str();
    if (k != 0) {
      if (a != 1) os << "*";
      os << var;
      if (k != 1) os << "^" << k;
    }
    first = false;
  }
  if (!unbounded_) os << " + O(" << var << "^" << order_ + 1 << ")";
  return os.str();
}

TruncLaurent laurent_expand(const RegFun& f, const DivisorPoint& p, int order) {
  if (f.is_zero()) return TruncLaurent::zero_to_order(order);
  Poly n = f.num(), d = f.den();
  int val_shift;
  if (p.at_infinity) {
    // t = 1/s: n(1/s)/d(1/s) = s^(deg d - deg n) * rev(n)(s)/rev(d)(s)
    val_shift = d.degree() - n.degree();
    n = n.reversed();
    d = d.reversed();
  } else {
    n = n.shift(p.location);
    d = d.shift(p.location);
    int vn = 0, vd = 0;
    while (n.coeff(vn) == 0) ++vn;
    while (d.coeff(vd) == 0) ++vd;
    val_shift = vn - vd;
    std::vector<Rat> nc, dc;
    for (int k = vn; k <= n.degree(); ++k) nc.push_back(n.coeff(k));
    for (int k = vd; k <= d.degree(); ++k) dc.push_back(d.coeff(k));
    n = Poly(std::move(nc));
    d = Poly(std::move(dc));
  }
  // now d(0) != 0; Taylor-divide n/d through relative order (order - val_shift)
  int rel = order - val_shift;
  if (rel < 0) return TruncLaurent::zero_to_order(order);
  std::vector<Rat> q(rel + 1, Rat(0));
  Rat d0inv = 1 / d.coeff(0);
  for (int k = 0; k <= rel; ++k) {
    Rat acc = n.coeff(k);
    for (int j = 1; j <= k; ++j) acc -= d.coeff(j) * q[k - j];
    q[k] = acc * d0inv;
  }
  return TruncLaurent::from_coeffs(val_shift, std::move(q));
}

}  // namespace fbx
