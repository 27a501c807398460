#include "fbx/cohomology.hpp"

#include <algorithm>
#include <limits>

#include "fbx/linalg.hpp"

namespace fbx {

namespace {

/// nabla(m e_i) componentwise in partial fractions.
std::vector<PartialFractions> nabla_column(const Connection& e, const Monomial& m, int i) {
  std::vector<PartialFractions> img(static_cast<size_t>(e.rank));
  img[i] = pf_add(img[i], pf_derivative(m));
  for (int j = 0; j < e.rank; ++j)
    if (!e.matrix[j][i].is_zero()) img[j] = pf_add(img[j], pf_multiply(e.matrix[j][i], m, e.curve));
  return img;
}

struct GlobalRound {
  int h0 = 0;
  int h1 = 0;
  std::vector<std::vector<RegFun>> h0_basis;
  std::vector<std::vector<RegFun>> h1_basis;
};

GlobalRound global_round(const Connection& e, int p, const std::vector<int>& k) {
  const int r = e.rank;
  // relations and the H^0 ansatz live on the doubled window, candidates on
  // the small one: a candidate whose primitive barely escapes the candidate
  // window must still be seen as reducible
  std::vector<int> k2(k), kc(k);
  for (int& v : k2) v *= 2;
  for (int& v : kc) v += 1;
  MonWindow dom(e.curve, 2 * p, k2);
  MonWindow cand(e.curve, p, kc);
  MonWindow ambient = cand;
  std::vector<std::vector<std::vector<PartialFractions>>> images(dom.dim());
  for (int mon = 0; mon < dom.dim(); ++mon) {
    images[mon].reserve(r);
    for (int i = 0; i < r; ++i) {
      images[mon].push_back(nabla_column(e, dom.at(mon), i));
      for (int j = 0; j < r; ++j) ambient.grow_to_contain(images[mon][i][j]);
    }
  }
  SparseEliminator elim(true);
  for (int mon = 0; mon < dom.dim(); ++mon)
    for (int i = 0; i < r; ++i) {
      SparseVec col;
      for (int j = 0; j < r; ++j) {
        auto v = ambient.coords(images[mon][i][j]);
        if (!v) throw WindowError("global_round: image escapes the grown window");
        for (int w = 0; w < ambient.dim(); ++w)
          if ((*v)(w) != 0) col[w * r + j] = (*v)(w);
      }
      elim.insert(std::move(col), mon * r + i);
    }
  GlobalRound out;
  // exact dependencies of exact columns are genuine horizontal sections
  for (const SparseVec& dep : elim.dependencies()) {
    std::vector<PartialFractions> sec(static_cast<size_t>(r));
    for (const auto& [id, c] : dep)
      sec[id % r] = pf_add(sec[id % r], pf_scale(partial_fractions(dom.monomial_regfun(dom.at(id / r)), e.curve), c));
    std::vector<RegFun> v(static_cast<size_t>(r));
    for (int i = 0; i < r; ++i) v[i] = to_regfun(sec[i], e.curve);
    out.h0_basis.push_back(std::move(v));
  }
  out.h0 = static_cast<int>(out.h0_basis.size());
  // candidates are tested against the cokernel functionals of the relation
  // span; window index order prefers small poles, so representatives come
  // out as tame as the window allows
  auto lams = elim.cokernel_functionals(0, ambient.dim() * r - 1);
  const int ncf = static_cast<int>(lams.size());
  SpanTracker tracker(ncf);
  for (int mon = 0; mon < cand.dim(); ++mon) {
    auto idx_in_ambient = ambient.index_of(cand.at(mon));
    if (!idx_in_ambient) throw WindowError("global_round: candidate outside the ambient window");
    for (int i = 0; i < r; ++i) {
      VecQ w(ncf);
      for (int s = 0; s < ncf; ++s) w(s) = lams[s][*idx_in_ambient * r + i];
      if (tracker.insert(w)) {
        std::vector<RegFun> form(static_cast<size_t>(r));
        form[i] = cand.monomial_regfun(cand.at(mon));
        out.h1_basis.push_back(std::move(form));
      }
    }
  }
  out.h1 = static_cast<int>(out.h1_basis.size());
  return out;
}

}  // namespace

GlobalH global_h(const Connection& e, int initial_doublings) {
  int p = 2;
  std::vector<int> k(static_cast<size_t>(e.curve.num_finite()), 1);
  for (const auto& row : e.matrix)
    for (const RegFun& f : row) {
      if (f.is_zero()) continue;
      p = std::max(p, f.num().degree() + 1);
      for (int j = 0; j < e.curve.num_finite(); ++j)
        k[j] = std::max(k[j], f.pole_order_at(e.curve.finite_points[j]));
    }
  for (int d = 0; d < initial_doublings; ++d) {
    p *= 2;
    for (int& v : k) v *= 2;
  }
  std::pair<int, int> prev{-1, -1};
  for (int round = 1; round <= 8; ++round) {
    GlobalRound res = global_round(e, p, k);
    if (std::pair<int, int>{res.h0, res.h1} == prev) {
      std::vector<int> k2(k), kc(k);
      for (int& v : k2) v *= 2;
      for (int& v : kc) v += 1;
      return GlobalH{std::move(res.h0_basis), std::move(res.h1_basis),
                     MonWindow(e.curve, 2 * p, k2), MonWindow(e.curve, p, kc), round};
    }
    prev = {res.h0, res.h1};
    p *= 2;
    for (int& v : k) v *= 2;
  }
  throw StabilizationError("global cohomology did not stabilize within the window cap");
}

namespace {

/// Coordinates of a restricted horizontal section on the local kernel basis
/// (exact coefficient matching through the common order).
VecQ express_in_local_h0(const std::vector<std::vector<TruncLaurent>>& basis,
                         const std::vector<TruncLaurent>& v, const DivisorPoint& p) {
  const int nb = static_cast<int>(basis.size());
  const int r = static_cast<int>(v.size());
  if (nb == 0) {
    for (const TruncLaurent& x : v)
      if (!x.is_zero())
        throw ConsistencyError("restriction of a horizontal section at " + p.str() +
                               " escapes the empty local kernel");
    return VecQ();
  }
  int order = std::numeric_limits<int>::max();
  int vlo = 0;
  auto scan = [&](const TruncLaurent& x) {
    order = std::min(order, x.order());
    if (!x.is_zero()) vlo = std::min(vlo, x.valuation());
  };
  for (const auto& b : basis)
    for (const TruncLaurent& x : b) scan(x);
  for (const TruncLaurent& x : v) scan(x);
  const int rows = (order - vlo + 1) * r;
  MatQ a = MatQ::Zero(rows, nb);
  VecQ b = VecQ::Zero(rows);
  for (int ee = vlo; ee <= order; ++ee)
    for (int i = 0; i < r; ++i) {
      for (int c = 0; c < nb; ++c) a((ee - vlo) * r + i, c) = basis[c][i].coeff(ee);
      b((ee - vlo) * r + i) = v[i].coeff(ee);
    }
  auto x = mat_solve(a, b);
  if (!x)
    throw ConsistencyError("restriction of a horizontal section at " + p.str() +
                           " escapes the local kernel basis");
  return *x;
}

std::vector<TruncLaurent> zero_local(int rank, int order) {
  return std::vector<TruncLaurent>(static_cast<size_t>(rank), TruncLaurent::zero_to_order(order));
}

/// Map H^0(X) -> direct sum of local H^0, one column per global section.
MatQ phi0_matrix(const Connection& e, const GlobalH& global,
                 const std::vector<LocalCohomology>& boundary,
                 const std::vector<DivisorPoint>& pts) {
  int bd0 = 0;
  for (const auto& loc : boundary) bd0 += loc.h0_dim();
  MatQ m0 = MatQ::Zero(bd0, global.h0_dim());
  for (int col = 0; col < global.h0_dim(); ++col) {
    int off = 0;
    for (size_t pi = 0; pi < boundary.size(); ++pi) {
      const auto& loc = boundary[pi];
      auto rv = restrict_section(global.h0_basis[col], pts[pi], loc.truncation_used);
      VecQ c = express_in_local_h0(loc.h0_basis, rv, pts[pi]);
      for (int kk = 0; kk < loc.h0_dim(); ++kk) m0(off + kk, col) = c(kk);
      off += loc.h0_dim();
    }
  }
  return m0;
}

}  // namespace

CompactH compact_h(const Connection& e, const GlobalH& global,
                   const std::vector<LocalCohomology>& boundary) {
  const int r = e.rank;
  const auto pts = boundary_points(e.curve);
  if (boundary.size() != pts.size())
    throw std::invalid_argument("compact_h: boundary data does not match the divisor");
  CompactH out;

  MatQ m0 = phi0_matrix(e, global, boundary, pts);
  const int bd0 = static_cast<int>(m0.rows());
  // H^0_c = ker phi0 (zero for nonzero sections; computed honestly)
  MatQ ker0 = global.h0_dim() ? mat_kernel(m0) : MatQ(0, 0);
  for (int col = 0; col < ker0.cols(); ++col) {
    ConeClass cc;
    cc.degree = 0;
    cc.global_part.assign(static_cast<size_t>(r), RegFun());
    for (int a = 0; a < ker0.rows(); ++a)
      for (int i = 0; i < r; ++i)
        cc.global_part[i] = cc.global_part[i] + global.h0_basis[a][i] * ker0(a, col);
    for (const auto& loc : boundary) cc.boundary_part.push_back(zero_local(r, loc.truncation_used));
    out.h0.push_back(std::move(cc));
  }

  // boundary H^0 classes not hit by phi0 enter H^1_c as (0, h) cone cocycles
  for (int id : complete_span(m0, MatQ::Identity(bd0, bd0))) {
    int off = 0;
    ConeClass cc;
    cc.degree = 1;
    cc.global_part.assign(static_cast<size_t>(r), RegFun());
    for (size_t pi = 0; pi < boundary.size(); ++pi) {
      const auto& loc = boundary[pi];
      if (id >= off && id < off + loc.h0_dim())
        cc.boundary_part.push_back(loc.h0_basis[id - off]);
      else
        cc.boundary_part.push_back(zero_local(r, loc.truncation_used));
      off += loc.h0_dim();
    }
    out.h1.push_back(std::move(cc));
  }

  // phi1 on the global H^1 basis, keeping the local primitives
  int bd1 = 0;
  for (const auto& loc : boundary) bd1 += loc.h1_dim();
  MatQ m1 = MatQ::Zero(bd1, global.h1_dim());
  std::vector<std::vector<std::vector<TruncLaurent>>> prim(global.h1_dim());
  for (int col = 0; col < global.h1_dim(); ++col) {
    int off = 0;
    for (size_t pi = 0; pi < boundary.size(); ++pi) {
      const auto& loc = boundary[pi];
      auto g = restrict_form(global.h1_basis[col], pts[pi], loc.h1.guaranteed_order());
      LocalReduction red = loc.h1.reduce(g);
      for (int kk = 0; kk < loc.h1_dim(); ++kk) m1(off + kk, col) = red.coords(kk);
      prim[col].push_back(std::move(red.primitive));
      off += loc.h1_dim();
    }
  }
  // global 1-forms restricting to zero classes: (w, h) with nabla h = R(w)
  if (global.h1_dim()) {
    MatQ ker1 = mat_kernel(m1);
    for (int col = 0; col < ker1.cols(); ++col) {
      ConeClass cc;
      cc.degree = 1;
      cc.global_part.assign(static_cast<size_t>(r), RegFun());
      for (size_t pi = 0; pi < boundary.size(); ++pi)
        cc.boundary_part.push_back(zero_local(r, boundary[pi].h1.guaranteed_order()));
      for (int a = 0; a < ker1.rows(); ++a) {
        if (ker1(a, col) == 0) continue;
        for (int i = 0; i < r; ++i)
          cc.global_part[i] = cc.global_part[i] + global.h1_basis[a][i] * ker1(a, col);
        for (size_t pi = 0; pi < boundary.size(); ++pi)
          for (int i = 0; i < r; ++i)
            cc.boundary_part[pi][i] = cc.boundary_part[pi][i] + prim[a][pi][i] * ker1(a, col);
      }
      out.h1.push_back(std::move(cc));
    }
  }

  // H^2_c = coker phi1, represented by local cokernel monomials
  for (int id : complete_span(m1, MatQ::Identity(bd1, bd1))) {
    int off = 0;
    ConeClass cc;
    cc.degree = 2;
    for (size_t pi = 0; pi < boundary.size(); ++pi) {
      const auto& loc = boundary[pi];
      if (id >= off && id < off + loc.h1_dim())
        cc.boundary_part.push_back(loc.h1.basis_form(id - off, loc.h1.guaranteed_order()));
      else
        cc.boundary_part.push_back(zero_local(r, loc.h1.guaranteed_order()));
      off += loc.h1_dim();
    }
    out.h2.push_back(std::move(cc));
  }
  return out;
}

CompactH compact_h(const Connection& e) {
  GlobalH g = global_h(e);
  std::vector<LocalCohomology> boundary;
  for (const auto& p : boundary_points(e.curve))
    boundary.push_back(stabilized_cohomology(LocalConnection(e, p)));
  return compact_h(e, g, boundary);
}

Rat orientation(const std::vector<TruncLaurent>& per_point_forms) {
  Rat s(0);
  for (const TruncLaurent& f : per_point_forms) s += residue(f);
  return s;
}

namespace {

/// Local H^0 basis of the given connection at p, to order at least `order`.
std::vector<std::vector<TruncLaurent>> h0_basis_to_order(const LocalConnection& l,
                                                         const LocalCohomology& loc, int order) {
  if (loc.truncation_used >= order) return loc.h0_basis;
  return local_h0(l, order);
}

}  // namespace

BoundaryPairing boundary_pairing(const Connection& e) {
  const Connection ed = dual(e);
  const auto pts = boundary_points(e.curve);
  int tot0 = 0, tot1 = 0, totd0 = 0, totd1 = 0;
  struct PointData {
    LocalCohomology loc, locd;
  };
  std::vector<PointData> data;
  for (const auto& p : pts) {
    PointData d{stabilized_cohomology(LocalConnection(e, p)),
                stabilized_cohomology(LocalConnection(ed, p))};
    tot0 += d.loc.h0_dim();
    tot1 += d.loc.h1_dim();
    totd0 += d.locd.h0_dim();
    totd1 += d.locd.h1_dim();
    data.push_back(std::move(d));
  }
  if (tot0 != totd1 || tot1 != totd0)
    throw DualityError("boundary duality dimension mismatch: H(bd,E) = (" + std::to_string(tot0) +
                       "," + std::to_string(tot1) + "), H(bd,dual E) = (" + std::to_string(totd0) +
                       "," + std::to_string(totd1) + ")");
  BoundaryPairing out;
  out.h0_vs_h1 = MatQ::Zero(tot0, totd1);
  out.h1_vs_h0 = MatQ::Zero(tot1, totd0);
  int r0 = 0, c1 = 0, r1 = 0, c0 = 0;
  for (size_t pi = 0; pi < data.size(); ++pi) {
    const auto& d = data[pi];
    // <x, s^e ds e_i> = coefficient of s^(-1-e) in x_i; deep dual poles may
    // need the kernel basis to a higher order than stabilization used
    int need = d.loc.truncation_used;
    for (const auto& fm : d.locd.h1.basis()) need = std::max(need, -1 - fm.exponent);
    auto basis0 = h0_basis_to_order(LocalConnection(e, pts[pi]), d.loc, need);
    for (int a = 0; a < d.loc.h0_dim(); ++a)
      for (int b = 0; b < d.locd.h1_dim(); ++b) {
        const FormMonomial& fm = d.locd.h1.basis()[b];
        out.h0_vs_h1(r0 + a, c1 + b) = basis0[a][fm.component].coeff(-1 - fm.exponent);
      }
    int needd = d.locd.truncation_used;
    for (const auto& fm : d.loc.h1.basis()) needd = std::max(needd, -1 - fm.exponent);
    auto basisd0 = h0_basis_to_order(LocalConnection(ed, pts[pi]), d.locd, needd);
    for (int a = 0; a < d.loc.h1_dim(); ++a)
      for (int b = 0; b < d.locd.h0_dim(); ++b) {
        const FormMonomial& fm = d.loc.h1.basis()[a];
        out.h1_vs_h0(r1 + a, c0 + b) = basisd0[b][fm.component].coeff(-1 - fm.exponent);
      }
    r0 += d.loc.h0_dim();
    c1 += d.locd.h1_dim();
    r1 += d.loc.h1_dim();
    c0 += d.locd.h0_dim();
  }
  return out;
}

CompactPairing duality_pairing_c(const Connection& e) {
  const Connection ed = dual(e);
  const auto pts = boundary_points(e.curve);
  GlobalH g = global_h(e);
  GlobalH gd = global_h(ed);
  std::vector<LocalCohomology> boundary;
  for (const auto& p : pts) boundary.push_back(stabilized_cohomology(LocalConnection(e, p)));
  CompactH ch = compact_h(e, g, boundary);
  if (ch.h0_dim() != 0 || ch.h1_dim() != gd.h1_dim() || ch.h2_dim() != gd.h0_dim())
    throw DualityError("compact-support duality dimension mismatch: H_c(E) = (" +
                       std::to_string(ch.h0_dim()) + "," + std::to_string(ch.h1_dim()) + "," +
                       std::to_string(ch.h2_dim()) + "), H(X,dual E) = (" +
                       std::to_string(gd.h0_dim()) + "," + std::to_string(gd.h1_dim()) + ",0)");
  CompactPairing out;
  out.h1c_vs_h1 = MatQ::Zero(ch.h1_dim(), gd.h1_dim());
  for (int a = 0; a < ch.h1_dim(); ++a)
    for (int b = 0; b < gd.h1_dim(); ++b) {
      Rat s(0);
      for (size_t pi = 0; pi < pts.size(); ++pi) {
        const auto& h = ch.h1[a].boundary_part[pi];
        int vmin = 0;
        for (const TruncLaurent& x : h)
          if (!x.is_zero()) vmin = std::min(vmin, x.valuation());
        auto ry = restrict_form(gd.h1_basis[b], pts[pi], -vmin + 2);
        s += residue(h, ry);
      }
      out.h1c_vs_h1(a, b) = s;
    }
  out.h2c_vs_h0 = MatQ::Zero(ch.h2_dim(), gd.h0_dim());
  for (int a = 0; a < ch.h2_dim(); ++a)
    for (int b = 0; b < gd.h0_dim(); ++b) {
      Rat s(0);
      for (size_t pi = 0; pi < pts.size(); ++pi) {
        const auto& form = ch.h2[a].boundary_part[pi];
        int vmin = 0;
        for (const TruncLaurent& x : form)
          if (!x.is_zero()) vmin = std::min(vmin, x.valuation());
        auto ry = restrict_section(gd.h0_basis[b], pts[pi], -vmin + 2);
        s += residue(ry, form);
      }
      out.h2c_vs_h0(a, b) = s;
    }
  return out;
}

TangentDims tangent_complex(const Connection& e) {
  GlobalH g = global_h(end_connection(e));
  return TangentDims{g.h0_dim(), g.h1_dim(), 0};
}

FredholmReport fredholm_check(const Connection& e) {
  GlobalH g = global_h(end_connection(e));
  return FredholmReport{true, g.h0_dim(), g.h1_dim(), g.rounds};
}

bool injectivity_check(const Connection& e) {
  const Connection en = end_connection(e);
  GlobalH g = global_h(en);
  const auto pts = boundary_points(e.curve);
  std::vector<LocalCohomology> boundary;
  for (const auto& p : pts) boundary.push_back(stabilized_cohomology(LocalConnection(en, p)));
  MatQ m0 = phi0_matrix(en, g, boundary, pts);
  return mat_rank(m0) == g.h0_dim();
}

LesRanks les_ranks(const Connection& e, const GlobalH& global,
                   const std::vector<LocalCohomology>& boundary) {
  const auto pts = boundary_points(e.curve);
  CompactH c = compact_h(e, global, boundary);

  MatQ m0 = phi0_matrix(e, global, boundary, pts);
  int bd1 = 0;
  for (const auto& loc : boundary) bd1 += loc.h1_dim();
  MatQ m1 = MatQ::Zero(bd1, global.h1_dim());
  for (int col = 0; col < global.h1_dim(); ++col) {
    int off = 0;
    for (size_t pi = 0; pi < boundary.size(); ++pi) {
      const auto& loc = boundary[pi];
      auto g = restrict_form(global.h1_basis[col], pts[pi], loc.h1.guaranteed_order());
      LocalReduction red = loc.h1.reduce(g);
      for (int kk = 0; kk < loc.h1_dim(); ++kk) m1(off + kk, col) = red.coords(kk);
      off += loc.h1_dim();
    }
  }

  LesRanks out;
  out.dims = {c.h0_dim(), global.h0_dim(), static_cast<int>(m0.rows()),
              c.h1_dim(), global.h1_dim(), bd1,          c.h2_dim()};
  const int r0 = mat_rank(m0);
  const int r1 = mat_rank(m1);
  // Inclusion of ker(phi0), phi0, the connecting map onto coker(phi0), the
  // projection of the cone classes onto ker(phi1), phi1, and the connecting
  // map onto coker(phi1) = H^2_c.
  out.ranks = {global.h0_dim() - r0,
               r0,
               static_cast<int>(m0.rows()) - r0,
               global.h1_dim() - r1,
               r1,
               bd1 - r1};
  out.exact = true;
  for (int term = 0; term < 7; ++term) {
    int in = term == 0 ? 0 : out.ranks[term - 1];
    int outgoing = term == 6 ? 0 : out.ranks[term];
    if (in + outgoing != out.dims[term]) out.exact = false;
  }
  return out;
}

LesRanks les_ranks(const Connection& e) {
  GlobalH g = global_h(e);
  std::vector<LocalCohomology> boundary;
  for (const auto& p : boundary_points(e.curve))
    boundary.push_back(stabilized_cohomology(LocalConnection(e, p)));
  return les_ranks(e, g, boundary);
}

CohomologyReport cohomology_report(const Connection& e) {
  CohomologyReport rep{global_h(e), {}, {}, 0, 0, 0, {}, false};
  for (const auto& p : boundary_points(e.curve))
    rep.boundary.push_back(stabilized_cohomology(LocalConnection(e, p)));
  rep.compact = compact_h(e, rep.global, rep.boundary);
  int bd0 = 0, bd1 = 0;
  for (const auto& loc : rep.boundary) {
    bd0 += loc.h0_dim();
    bd1 += loc.h1_dim();
  }
  rep.chi_x = rep.global.h0_dim() - rep.global.h1_dim();
  rep.chi_boundary = bd0 - bd1;
  rep.chi_c = rep.compact.h0_dim() - rep.compact.h1_dim() + rep.compact.h2_dim();
  if (rep.chi_boundary != 0)
    throw ConsistencyError("boundary Euler characteristic is nonzero: " +
                           std::to_string(rep.chi_boundary));
  rep.les_dims = {rep.compact.h0_dim(), rep.global.h0_dim(), bd0,
                  rep.compact.h1_dim(), rep.global.h1_dim(), bd1,
                  rep.compact.h2_dim()};
  int alt = 0, sign = 1;
  for (int d : rep.les_dims) {
    alt += sign * d;
    sign = -sign;
  }
  rep.les_ok = alt == 0;
  if (!rep.les_ok)
    throw ConsistencyError("long-exact-sequence alternating sum is nonzero: " +
                           std::to_string(alt));
  return rep;
}

}  // namespace fbx
