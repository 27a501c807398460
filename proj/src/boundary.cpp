#include "fbx/boundary.hpp"

#include <algorithm>
#include <limits>

#include "fbx/linalg.hpp"

namespace fbx {

LocalConnection::LocalConnection(const Connection& e, const DivisorPoint& p)
    : point_(p), rank_(e.rank) {
  bool found = p.at_infinity;
  if (!p.at_infinity) {
    found = p.finite_index >= 0 && p.finite_index < e.curve.num_finite() &&
            e.curve.finite_points[p.finite_index] == p.location;
  }
  if (!found) throw std::invalid_argument("LocalConnection: point not in the boundary divisor");
  b_.assign(rank_, std::vector<RegFun>(rank_));
  for (int i = 0; i < rank_; ++i) {
    for (int j = 0; j < rank_; ++j) {
      const RegFun& a = e.matrix[i][j];
      if (a.is_zero()) continue;
      if (!p.at_infinity) {
        // B(s) = A(c + s)
        b_[i][j] = RegFun(a.num().shift(p.location), a.den().shift(p.location));
      } else {
        // A(1/s) = s^(dd-dn) rev(num)/rev(den); B(s) = -s^-2 A(1/s)
        int dn = a.num().degree(), dd = a.den().degree();
        Poly num = -a.num().reversed();
        Poly den = a.den().reversed();
        int e2 = dd - dn - 2;
        if (e2 >= 0)
          num = num * Poly::monomial(e2);
        else
          den = den * Poly::monomial(-e2);
        b_[i][j] = RegFun(num, den);
      }
      q_ = std::max(q_, b_[i][j].pole_order_at(Rat(0)));
    }
  }
}

TruncLaurent LocalConnection::entry(int i, int j, int order) const {
  if (b_[i][j].is_zero()) return TruncLaurent();
  return laurent_expand(b_[i][j], DivisorPoint::finite(0, Rat(0)), order);
}

LocalConnection restrict(const Connection& e, const DivisorPoint& p) {
  return LocalConnection(e, p);
}

std::vector<TruncLaurent> apply_local(const LocalConnection& l, const std::vector<TruncLaurent>& v) {
  const int r = l.rank();
  std::vector<TruncLaurent> out(static_cast<size_t>(r));
  for (int i = 0; i < r; ++i) {
    out[i] = v[i].derivative();
    for (int j = 0; j < r; ++j) {
      if (v[j].is_zero() || l.entry_fun(i, j).is_zero()) continue;
      int ob = v[j].order() - v[j].valuation() + l.pole_order() + 2;
      out[i] = out[i] + l.entry(i, j, ob) * v[j];
    }
  }
  return out;
}

namespace {

Rat mat_det(MatQ m) {
  const int n = static_cast<int>(m.rows());
  Rat det(1);
  for (int col = 0; col < n; ++col) {
    int piv = -1;
    for (int row = col; row < n; ++row)
      if (m(row, col) != 0) {
        piv = row;
        break;
      }
    if (piv < 0) return Rat(0);
    if (piv != col) {
      m.row(piv).swap(m.row(col));
      det = -det;
    }
    det *= m(col, col);
    for (int row = col + 1; row < n; ++row) {
      if (m(row, col) == 0) continue;
      Rat f = m(row, col) / m(col, col);
      for (int k = col; k < n; ++k) m(row, k) -= f * m(col, k);
    }
  }
  return det;
}

Poly lagrange(const std::vector<std::pair<Rat, Rat>>& points) {
  Poly p;
  for (size_t i = 0; i < points.size(); ++i) {
    Poly term(Rat(1));
    Rat denom(1);
    for (size_t j = 0; j < points.size(); ++j) {
      if (j == i) continue;
      term = term * Poly::linear_root(points[j].first);
      denom *= points[i].first - points[j].first;
    }
    p = p + term * (points[i].second / denom);
  }
  return p;
}

/// Integer roots of a nonzero rational polynomial (divisor enumeration on
/// the cleared constant coefficient; divisor scan capped, ample in practice).
std::vector<long> integer_roots(Poly p) {
  std::vector<long> roots;
  while (p.degree() > 0 && p.coeff(0) == 0) {
    roots.push_back(0);
    p = Poly::divmod(p, Poly::monomial(1)).first;
  }
  if (p.degree() <= 0) return roots;
  mpz_class lcm(1);
  for (const Rat& c : p.coeffs()) mpz_lcm(lcm.get_mpz_t(), lcm.get_mpz_t(), c.get_den().get_mpz_t());
  mpz_class c0 = abs(mpz_class(Rat(p.coeff(0) * lcm).get_num()));
  auto try_root = [&](const mpz_class& cand) {
    if (!cand.fits_slong_p()) return;
    for (long sign : {1L, -1L}) {
      long k = sign * cand.get_si();
      if (p.eval(Rat(k)) == 0) roots.push_back(k);
    }
  };
  for (mpz_class d(1); d * d <= c0 && d <= 1000000; ++d) {
    if (c0 % d != 0) continue;
    try_root(d);
    try_root(c0 / d);
  }
  return roots;
}

/// Valuation floor for horizontal-section candidates: regular-singular
/// points get the exact indicial bound, irregular ones a fixed margin.
int valuation_floor(const LocalConnection& l) {
  const int r = l.rank(), q = l.pole_order();
  if (q > 1) return -(q + 1) * r - 16;
  long n_int = 0;
  MatQ bm1 = MatQ::Zero(r, r);
  for (int i = 0; i < r; ++i)
    for (int j = 0; j < r; ++j)
      if (!l.entry_fun(i, j).is_zero()) bm1(i, j) = l.entry(i, j, 0).coeff(-1);
  // indicial polynomial det(kI + B_-1), degree r, via interpolation
  std::vector<std::pair<Rat, Rat>> pts;
  for (int k = 0; k <= r; ++k) {
    MatQ m = bm1;
    for (int i = 0; i < r; ++i) m(i, i) += Rat(k);
    pts.push_back({Rat(k), mat_det(m)});
  }
  for (long root : integer_roots(lagrange(pts))) n_int = std::max(n_int, std::abs(root));
  return -(q + 1) * r - static_cast<int>(n_int);
}

/// Multiplied-through form of the local operator: M = s^q d(s) d/ds + C(s)
/// with d the monic unit part of the common denominator (d(0) != 0) and C a
/// polynomial matrix. M = u . nabla for the unit-times-power u = s^q d(s),
/// so ker M = ker nabla and coker M ~ coker nabla via multiplication by u.
/// The payoff: M has genuinely banded columns, while B expanded as a series
/// is dense whenever the connection has poles away from this point.
struct UForm {
  int q = 0;
  Poly d;
  std::vector<std::vector<Poly>> c;  // C(s) = s^q d(s) B(s)
  int vc_min;                        // min valuation over nonzero entries of C
};

UForm make_uform(const LocalConnection& l) {
  const int r = l.rank();
  UForm u;
  u.q = l.pole_order();
  u.d = Poly(Rat(1));
  u.vc_min = std::numeric_limits<int>::max();
  std::vector<std::vector<Poly>> rest(r, std::vector<Poly>(r));
  for (int i = 0; i < r; ++i)
    for (int j = 0; j < r; ++j) {
      const RegFun& f = l.entry_fun(i, j);
      if (f.is_zero()) continue;
      int k = f.pole_order_at(Rat(0));
      rest[i][j] = Poly::divmod(f.den(), Poly::monomial(k)).first;
      Poly g = Poly::gcd(u.d, rest[i][j]);
      u.d = (u.d * rest[i][j]);
      u.d = Poly::divmod(u.d, g).first;
    }
  u.c.assign(r, std::vector<Poly>(r));
  for (int i = 0; i < r; ++i)
    for (int j = 0; j < r; ++j) {
      const RegFun& f = l.entry_fun(i, j);
      if (f.is_zero()) continue;
      int k = f.pole_order_at(Rat(0));
      Poly cof = Poly::divmod(u.d, rest[i][j]).first;
      u.c[i][j] = f.num() * Poly::monomial(u.q - k) * cof;
      for (int a = 0; a <= u.c[i][j].degree(); ++a)
        if (u.c[i][j].coeff(a) != 0) {
          u.vc_min = std::min(u.vc_min, a);
          break;
        }
    }
  return u;
}

/// Sparse index: exponent-major, component-minor (works for negative e).
inline int sidx(int e, int r, int comp) { return e * r + comp; }

/// Column M(s^m e_i), entries with exponent > cutoff dropped.
SparseVec m_column(const UForm& u, int r, int m, int i, int cutoff) {
  SparseVec col;
  auto add = [&](int e, int comp, const Rat& c) {
    if (e > cutoff || c == 0) return;
    auto& slot = col[sidx(e, r, comp)];
    slot += c;
    if (slot == 0) col.erase(sidx(e, r, comp));
  };
  if (m != 0)
    for (int a = 0; a <= u.d.degree(); ++a) add(m + u.q - 1 + a, i, u.d.coeff(a) * Rat(m));
  for (int k = 0; k < r; ++k) {
    const Poly& p = u.c[k][i];
    for (int a = 0; a <= p.degree(); ++a) add(m + a, k, p.coeff(a));
  }
  return col;
}

/// u . (s^e e_i) = s^(e+q) d(s) e_i, the candidate monomial in M-coordinates.
SparseVec u_monomial(const UForm& u, int r, int e, int i, int cutoff) {
  SparseVec v;
  for (int a = 0; a <= u.d.degree(); ++a) {
    if (e + u.q + a > cutoff) break;
    if (u.d.coeff(a) != 0) v[sidx(e + u.q + a, r, i)] = u.d.coeff(a);
  }
  return v;
}

/// Highest M-coefficient exponent that sees no domain monomial above mhi, so
/// the equation remains valid for truncations of true solutions.
int h0_equation_cutoff(const UForm& u, int mhi) {
  int slack = u.q - 1;
  if (u.vc_min != std::numeric_limits<int>::max()) slack = std::min(slack, u.vc_min);
  return mhi + slack;
}

/// Default relation-depth margin: how far primitives of reducible candidates
/// near the floor can sink below them.
int default_margin(const LocalConnection& l) {
  return l.rank() * (std::max(1, l.pole_order()) + 1) + 8;
}

}  // namespace

std::vector<std::vector<TruncLaurent>> local_h0(const LocalConnection& l, int n, int floor) {
  const int r = l.rank();
  const int big = 2 * n;
  const int mlo = floor == std::numeric_limits<int>::min() ? valuation_floor(l) : floor;
  // kernel of the banded operator M = u.nabla (same kernel as nabla),
  // dropping the M-coefficients whose equations would see monomials above
  // the domain top. The kernel drops out as the dependent columns.
  const UForm u = make_uform(l);
  const int ecut = h0_equation_cutoff(u, big);
  SparseEliminator elim(true);
  for (int mm = mlo; mm <= big; ++mm)
    for (int i = 0; i < r; ++i)
      elim.insert(m_column(u, r, mm, i, ecut), (mm - mlo) * r + i);
  const auto& deps = elim.dependencies();
  // truncate the doubled-window solutions back to order n; junk solutions
  // supported near the top collapse here
  const int keep = (n - mlo + 1) * r;
  MatQ trunc = MatQ::Zero(keep, static_cast<int>(deps.size()));
  for (size_t d = 0; d < deps.size(); ++d)
    for (const auto& [idx, c] : deps[d])
      if (idx < keep) trunc(idx, static_cast<int>(d)) = c;
  std::vector<int> picked = row_echelon(trunc).pivot_cols;
  std::vector<std::vector<TruncLaurent>> basis;
  for (int col : picked) {
    std::vector<TruncLaurent> v(static_cast<size_t>(r));
    for (int i = 0; i < r; ++i) {
      std::vector<Rat> coeffs(static_cast<size_t>(n - mlo + 1));
      for (int mm = mlo; mm <= n; ++mm) coeffs[mm - mlo] = trunc((mm - mlo) * r + i, col);
      v[i] = TruncLaurent::from_coeffs(mlo, std::move(coeffs));
      if (v[i].is_zero()) v[i] = TruncLaurent::zero_to_order(n);
    }
    basis.push_back(std::move(v));
  }
  return basis;
}

LocalH1 local_h1(const LocalConnection& l, int n, int floor, int margin) {
  const int r = l.rank(), qe = std::max(1, l.pole_order());
  LocalH1 h(l);
  h.n_ = n;
  h.v_min_ = floor == std::numeric_limits<int>::min() ? valuation_floor(l) : floor;
  h.margin_ = margin < 0 ? default_margin(l) : margin;
  h.qe_ = qe;
  h.alo_ = h.v_min_ - qe;
  h.ahi_ = 2 * n - qe;
  // work in M = u.nabla coordinates: candidate s^e ds corresponds to
  // u.s^e against the span of the M-columns, everything truncated at the
  // same ceiling (reducibility is a statement mod high order — primitives
  // in Q((s)) are infinite series). Relations from the doubled domain kill
  // classes that merely look new because their primitive escapes a small
  // window.
  const UForm u = make_uform(l);
  const int cutoff = h.ahi_ + u.q;
  SparseEliminator elim(false);
  int idx_lo = sidx(h.v_min_ + u.q, r, 0);
  for (int mm = h.v_min_ - h.margin_; mm <= 2 * n; ++mm)
    for (int i = 0; i < r; ++i) {
      SparseVec col = m_column(u, r, mm, i, cutoff);
      if (!col.empty()) idx_lo = std::min(idx_lo, col.begin()->first);
      elim.insert(std::move(col));
    }
  // testing each candidate with a reduction cascade is quadratically
  // expensive; instead pair it against the (few) cokernel functionals of the
  // relation span, which picks exactly the same greedy basis
  auto lams = elim.cokernel_functionals(idx_lo, sidx(cutoff, r, r - 1));
  const int ncf = static_cast<int>(lams.size());
  SpanTracker tracker(ncf);
  // candidate monomials start at the valuation floor: lower exponents are
  // exact in Q((s)) but their primitives would escape the relation window,
  // so offering them as candidates would fake cohomology
  for (int e = h.v_min_; e <= n - qe; ++e)
    for (int i = 0; i < r; ++i) {
      VecQ w = VecQ::Zero(ncf);
      for (const auto& [idx, c] : u_monomial(u, r, e, i, cutoff))
        for (int s = 0; s < ncf; ++s) w(s) += c * lams[s][idx - idx_lo];
      if (tracker.insert(w)) h.basis_.push_back(FormMonomial{i, e});
    }
  return h;
}

std::vector<TruncLaurent> LocalH1::basis_form(int k, int order) const {
  std::vector<TruncLaurent> v(static_cast<size_t>(conn_.rank()));
  v[basis_[k].component] = TruncLaurent::monomial(basis_[k].exponent, Rat(1), order);
  return v;
}

LocalReduction LocalH1::reduce(const std::vector<TruncLaurent>& g) const {
  const int r = conn_.rank();
  if (static_cast<int>(g.size()) != r)
    throw std::invalid_argument("LocalH1::reduce: wrong number of components");
  int vg = alo_;
  bool all_zero = true;
  for (const TruncLaurent& gi : g) {
    if (gi.is_zero()) continue;
    all_zero = false;
    vg = std::min(vg, gi.valuation());
    if (gi.order() < ahi_)
      throw PrecisionError("LocalH1::reduce: form known to order " + std::to_string(gi.order()) +
                           ", need " + std::to_string(ahi_));
  }
  LocalReduction red;
  red.coords = VecQ::Zero(dim());
  if (all_zero) {
    red.primitive.assign(static_cast<size_t>(r), TruncLaurent::zero_to_order(ahi_));
    return red;
  }
  // deep poles in g are handled by extending the relation window downward;
  // everything runs in M = u.nabla coordinates truncated at the same
  // ceiling, so the solved congruence divides back by u to the guaranteed
  // order ahi
  const int mlo = v_min_ - margin_ - std::max(0, v_min_ - vg);
  const int big = 2 * n_;
  const UForm u = make_uform(conn_);
  const int cutoff = ahi_ + u.q;
  SparseEliminator elim(true);
  for (int mm = mlo; mm <= big; ++mm)
    for (int i = 0; i < r; ++i) elim.insert(m_column(u, r, mm, i, cutoff), (mm - mlo) * r + i);
  const int nrel = (big - mlo + 1) * r;
  for (int k = 0; k < dim(); ++k)
    elim.insert(u_monomial(u, r, basis_[k].exponent, basis_[k].component, cutoff), nrel + k);
  // b = u.g: coefficient e of s^q d(s) g_i, exact through the cutoff
  SparseVec b;
  for (int i = 0; i < r; ++i) {
    if (g[i].is_zero()) continue;
    for (int e = vg + u.q; e <= cutoff; ++e) {
      Rat c(0);
      for (int a = 0; a <= u.d.degree(); ++a) {
        int k = e - u.q - a;
        if (k >= vg && k <= g[i].order()) c += u.d.coeff(a) * g[i].coeff(k);
      }
      if (c != 0) b[sidx(e, r, i)] = c;
    }
  }
  auto sol = elim.reduce(std::move(b));
  if (!sol.in_span)
    throw StabilizationError("LocalH1::reduce: form outside the stabilized span at " +
                                 point().str() + "; increase the truncation",
                             n_);
  std::vector<std::vector<Rat>> coeffs(static_cast<size_t>(r),
                                       std::vector<Rat>(static_cast<size_t>(big - mlo + 1)));
  for (const auto& [id, c] : sol.comb) {
    if (id >= nrel)
      red.coords(id - nrel) = c;
    else
      coeffs[id % r][id / r] = c;
  }
  red.primitive.resize(static_cast<size_t>(r));
  for (int i = 0; i < r; ++i) {
    red.primitive[i] = TruncLaurent::from_coeffs(mlo, std::move(coeffs[i]));
    if (red.primitive[i].is_zero()) red.primitive[i] = TruncLaurent::zero_to_order(ahi_);
  }
  return red;
}

const DivisorPoint& LocalH1::point() const { return conn_.point(); }

LocalCohomology stabilized_cohomology(const LocalConnection& l, int max_truncation) {
  const int r = l.rank(), q = l.pole_order();
  int n = 2 * r * (q + 2) + 8;
  int floor = valuation_floor(l);
  int margin = default_margin(l);
  int deepenings = 0;
  std::pair<int, int> prev{-1, -1};
  std::pair<int, int> last{-1, -1};
  while (n <= max_truncation) {
    auto h0 = local_h0(l, n, floor);
    LocalH1 h1 = local_h1(l, n, floor, margin);
    prev = last;
    last = {static_cast<int>(h0.size()), h1.dim()};
    if (last == prev) {
      if (last.first == last.second)
        return LocalCohomology{l.point(), r, n, true, std::move(h0), std::move(h1)};
      // dimensions settled in the truncation but the index is nonzero: the
      // window floor is too shallow (a kernel element, class representative
      // or primitive lives below it), so deepen and restart the doubling
      if (++deepenings > 8) break;
      floor -= margin;
      margin *= 2;
      prev = last = {-1, -1};
      continue;
    }
    n *= 2;
  }
  throw StabilizationError("local cohomology at " + l.point().str() +
                               " did not stabilize within the truncation cap",
                           max_truncation, prev, last);
}

Rat residue(const TruncLaurent& form) { return form.residue(); }

Rat residue(const std::vector<TruncLaurent>& a, const std::vector<TruncLaurent>& b) {
  if (a.size() != b.size()) throw std::invalid_argument("residue: size mismatch");
  Rat r(0);
  for (size_t i = 0; i < a.size(); ++i) r += (a[i] * b[i]).residue();
  return r;
}

std::vector<TruncLaurent> restrict_section(const std::vector<RegFun>& v, const DivisorPoint& p,
                                           int order) {
  std::vector<TruncLaurent> out;
  out.reserve(v.size());
  for (const RegFun& f : v)
    out.push_back(f.is_zero() ? TruncLaurent::zero_to_order(order) : laurent_expand(f, p, order));
  return out;
}

std::vector<TruncLaurent> restrict_form(const std::vector<RegFun>& w, const DivisorPoint& p,
                                        int order) {
  std::vector<TruncLaurent> out;
  out.reserve(w.size());
  for (const RegFun& f : w) {
    if (f.is_zero()) {
      out.push_back(TruncLaurent::zero_to_order(order));
    } else if (!p.at_infinity) {
      out.push_back(laurent_expand(f, p, order));
    } else {
      // f dt = -s^-2 f(1/s) ds
      out.push_back(laurent_expand(f, p, order + 2).shifted(-2) * Rat(-1));
    }
  }
  return out;
}

}  // namespace fbx
