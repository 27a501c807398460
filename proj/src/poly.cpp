#include "fbx/poly.hpp"

#include <sstream>
#include <stdexcept>

namespace fbx {

Poly::Poly(Rat constant) {
  if (constant != 0) c_.push_back(constant);
}

Poly::Poly(std::vector<Rat> coeffs) : c_(std::move(coeffs)) { trim(); }

void Poly::trim() {
  while (!c_.empty() && c_.back() == 0) c_.pop_back();
}

Poly Poly::monomial(int degree, Rat coeff) {
  if (degree < 0) throw std::invalid_argument("Poly::monomial: negative degree");
  std::vector<Rat> c(degree + 1, Rat(0));
  c[degree] = std::move(coeff);
  return Poly(std::move(c));
}

Poly Poly::linear_root(const Rat& c) { return Poly({-c, Rat(1)}); }

Rat Poly::coeff(int k) const {
  if (k < 0 || k >= static_cast<int>(c_.size())) return Rat(0);
  return c_[k];
}

Rat Poly::leading() const { return c_.empty() ? Rat(0) : c_.back(); }

Poly Poly::operator-() const {
  Poly r = *this;
  for (auto& x : r.c_) x = -x;
  return r;
}

Poly Poly::operator+(const Poly& o) const {
  std::vector<Rat> c(std::max(c_.size(), o.c_.size()), Rat(0));
  for (size_t i = 0; i < c_.size(); ++i) c[i] += c_[i];
  for (size_t i = 0; i < o.c_.size(); ++i) c[i] += o.c_[i];
  return Poly(std::move(c));
}

Poly Poly::operator-(const Poly& o) const { return *this + (-o); }

Poly Poly::operator*(const Poly& o) const {
  if (is_zero() || o.is_zero()) return Poly();
  std::vector<Rat> c(c_.size() + o.c_.size() - 1, Rat(0));
  for (size_t i = 0; i < c_.size(); ++i)
    for (size_t j = 0; j < o.c_.size(); ++j) c[i + j] += c_[i] * o.c_[j];
  return Poly(std::move(c));
}

Poly Poly::operator*(const Rat& s) const {
  Poly r = *this;
  for (auto& x : r.c_) x *= s;
  r.trim();
  return r;
}

Poly Poly::derivative() const {
  if (c_.size() <= 1) return Poly();
  std::vector<Rat> c(c_.size() - 1);
  for (size_t i = 1; i < c_.size(); ++i) c[i - 1] = c_[i] * Rat(static_cast<long>(i));
  return Poly(std::move(c));
}

Rat Poly::eval(const Rat& x) const {
  Rat v(0);
  for (size_t i = c_.size(); i-- > 0;) v = v * x + c_[i];
  return v;
}

Poly Poly::shift(const Rat& c) const {
  // Horner in (t + c)
  Poly r;
  Poly lin({c, Rat(1)});
  for (size_t i = c_.size(); i-- > 0;) r = r * lin + Poly(c_[i]);
  return r;
}

Poly Poly::reversed() const {
  std::vector<Rat> c(c_.rbegin(), c_.rend());
  return Poly(std::move(c));
}

Poly Poly::monic() const {
  if (is_zero()) return *this;
  return *this * (1 / leading());
}

std::pair<Poly, Poly> Poly::divmod(const Poly& num, const Poly& den) {
  if (den.is_zero()) throw std::invalid_argument("Poly::divmod: division by zero");
  Poly rem = num;
  std::vector<Rat> q(std::max(0, num.degree() - den.degree() + 1), Rat(0));
  while (!rem.is_zero() && rem.degree() >= den.degree()) {
    int d = rem.degree() - den.degree();
    Rat f = rem.leading() / den.leading();
    q[d] = f;
    rem = rem - den * Poly::monomial(d, f);
  }
  return {Poly(std::move(q)), rem};
}

Poly Poly::gcd(const Poly& a, const Poly& b) {
  Poly x = a, y = b;
  while (!y.is_zero()) {
    Poly r = divmod(x, y).second;
    x = y;
    y = r;
  }
  return x.monic();
}

std::string Poly::str() const {
  if (is_zero()) return "0";
  std::ostringstream os;
  bool first = true;
  for (int k = degree(); k >= 0; --k) {
    Rat c = coeff(k);
    if (c == 0) continue;
    if (!first) os << (c > 0 ? " + " : " - ");
    else if (c < 0) os << "-";
    Rat a = abs(c);
    if (k == 0 || a != 1) os << a.get_str();
    if (k > 0) {
      if (a != 1) os << "*";
      os << "t";
      if (k > 1) os << "^" << k;
    }
    first = false;
  }
  return os.str();
}

}  // namespace fbx
