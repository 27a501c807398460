#include "fbx/tate.hpp"

#include <stdexcept>
#include <string>
#include <utility>

namespace fbx {

namespace {

void check(bool ok, const std::string& msg) {
  if (!ok) throw std::invalid_argument(msg);
}

// t (x) I_r in the block layout used by rank-r scalar extensions.
MatQ kron_identity(const MatQ& t, int r) {
  MatQ out = MatQ::Zero(t.rows() * r, t.cols() * r);
  for (int i = 0; i < t.rows(); ++i)
    for (int j = 0; j < t.cols(); ++j)
      for (int k = 0; k < r; ++k) out(i * r + k, j * r + k) = t(i, j);
  return out;
}

ProSpace scale_pro(const ProSpace& p, int r) {
  ProSpace out;
  for (int d : p.stage_dims) out.stage_dims.push_back(d * r);
  for (const MatQ& t : p.transitions) out.transitions.push_back(kron_identity(t, r));
  return out;
}

Rat binomial(int n, int k) {
  if (k < 0 || k > n) return Rat(0);
  Rat b(1);
  for (int i = 0; i < k; ++i) b *= Rat(n - i) / Rat(i + 1);
  return b;
}

Rat rat_pow(const Rat& c, int e) {
  Rat p(1);
  for (int i = 0; i < e; ++i) p *= c;
  return p;
}

// Jet matrix of H^0(P^1, O(a)) along the boundary divisor to order m:
// rows are point-major (boundary_points order, m rows per point, jet orders
// 0..m-1), columns are the monomial sections t^0..t^a. At a finite point c
// the order-j jet of t^k is C(k,j) c^(k-j); at infinity the section t^k
// reads u^(a-k) in the chart u = 1/t.
MatQ jet_matrix(int a, const CurveSpec& curve, int m) {
  const int nd = curve.num_points();
  const int ncols = a >= 0 ? a + 1 : 0;
  MatQ jet = MatQ::Zero(m * nd, ncols);
  const auto pts = boundary_points(curve);
  for (int p = 0; p < nd; ++p) {
    for (int j = 0; j < m; ++j) {
      const int row = p * m + j;
      for (int k = 0; k < ncols; ++k) {
        if (pts[p].at_infinity) {
          if (a - k == j) jet(row, k) = 1;
        } else if (k >= j) {
          jet(row, k) = binomial(k, j) * rat_pow(pts[p].location, k - j);
        }
      }
    }
  }
  return jet;
}

// Jet truncation (m+1)-jets -> m-jets, point-major blocks.
MatQ jet_truncation(int nd, int m) {
  MatQ t = MatQ::Zero(m * nd, (m + 1) * nd);
  for (int p = 0; p < nd; ++p)
    for (int j = 0; j < m; ++j) t(p * m + j, p * (m + 1) + j) = 1;
  return t;
}

// Any right inverse of a full-row-rank matrix, column by column.
MatQ right_inverse(const MatQ& p) {
  MatQ r = MatQ::Zero(p.cols(), p.rows());
  for (int k = 0; k < p.rows(); ++k) {
    VecQ e = VecQ::Zero(p.rows());
    e(k) = 1;
    auto x = mat_solve(p, e);
    if (!x) throw ConsistencyError("right_inverse: matrix is not surjective");
    r.col(k) = *x;
  }
  return r;
}

}  // namespace

void ProSpace::validate() const {
  check(!stage_dims.empty(), "ProSpace: at least one stage required");
  check(static_cast<int>(transitions.size()) == depth() - 1,
        "ProSpace: need depth-1 transitions");
  for (int m = 0; m + 1 < depth(); ++m) {
    check(transitions[m].rows() == stage_dims[m] &&
              transitions[m].cols() == stage_dims[m + 1],
          "ProSpace: transition " + std::to_string(m) + " has wrong shape");
  }
}

void IndSpace::validate() const {
  check(!stage_dims.empty(), "IndSpace: at least one stage required");
  check(static_cast<int>(maps.size()) == depth() - 1, "IndSpace: need depth-1 maps");
  for (int m = 0; m + 1 < depth(); ++m) {
    check(maps[m].rows() == stage_dims[m + 1] && maps[m].cols() == stage_dims[m],
          "IndSpace: map " + std::to_string(m) + " has wrong shape");
  }
}

void TateObject::validate() const {
  sub.validate();
  quotient.validate();
  const int n = depth();
  check(sub.depth() == n && quotient.depth() == n &&
            static_cast<int>(inclusions.size()) == n &&
            static_cast<int>(projections.size()) == n,
        "TateObject: stage counts disagree");
  for (int m = 0; m < n; ++m) {
    const int s = sub.stage_dims[m], t = total_dims[m], q = quotient.stage_dims[m];
    check(inclusions[m].rows() == t && inclusions[m].cols() == s,
          "TateObject: inclusion shape at stage " + std::to_string(m + 1));
    check(projections[m].rows() == q && projections[m].cols() == t,
          "TateObject: projection shape at stage " + std::to_string(m + 1));
    check(s + q == t, "TateObject: dimensions not additive at stage " +
                          std::to_string(m + 1));
    check(mat_rank(inclusions[m]) == s,
          "TateObject: inclusion not injective at stage " + std::to_string(m + 1));
    check(mat_rank(projections[m]) == q,
          "TateObject: projection not surjective at stage " + std::to_string(m + 1));
    MatQ z = projections[m] * inclusions[m];
    bool zero = true;
    for (int i = 0; i < z.rows(); ++i)
      for (int j = 0; j < z.cols(); ++j)
        if (z(i, j) != 0) zero = false;
    check(zero, "TateObject: sub -> total -> quotient not a complex at stage " +
                    std::to_string(m + 1));
  }
}

TateObject split_tate(ProSpace sub, IndSpace quotient) {
  TateObject t;
  t.sub = std::move(sub);
  t.quotient = std::move(quotient);
  check(t.sub.depth() == t.quotient.depth(),
        "split_tate: sub and quotient depth disagree");
  for (int m = 0; m < t.sub.depth(); ++m) {
    const int s = t.sub.stage_dims[m], q = t.quotient.stage_dims[m];
    t.total_dims.push_back(s + q);
    MatQ incl = MatQ::Zero(s + q, s);
    incl.topRows(s) = MatQ::Identity(s, s);
    MatQ proj = MatQ::Zero(q, s + q);
    proj.rightCols(q) = MatQ::Identity(q, q);
    t.inclusions.push_back(std::move(incl));
    t.projections.push_back(std::move(proj));
  }
  t.validate();
  return t;
}

IndSpace pro_dual(const ProSpace& p) {
  p.validate();
  IndSpace w;
  w.stage_dims = p.stage_dims;
  for (const MatQ& t : p.transitions) w.maps.push_back(t.transpose());
  return w;
}

ProSpace pro_dual(const IndSpace& w) {
  w.validate();
  ProSpace p;
  p.stage_dims = w.stage_dims;
  for (const MatQ& t : w.maps) p.transitions.push_back(t.transpose());
  return p;
}

RefinedCompact refined_compact_coherent(int a, const CurveSpec& curve, int depth) {
  check(depth >= 1, "refined_compact_coherent: depth must be positive");
  const int nd = curve.num_points();
  const int h1p = a <= -2 ? -a - 1 : 0;  // H^1(P^1, O(a))

  RefinedCompact rc;
  rc.twist = a;

  // Stage data: kernel bases and cokernel projections of the jet maps.
  std::vector<MatQ> kernels, projections;
  for (int m = 1; m <= depth; ++m) {
    MatQ jet = jet_matrix(a, curve, m);
    if (jet.cols() == 0) {
      kernels.push_back(MatQ::Zero(0, 0));
      projections.push_back(MatQ::Identity(m * nd, m * nd));
    } else {
      kernels.push_back(mat_kernel(jet));
      projections.push_back(mat_cokernel(jet).projection);
    }
    rc.h0c.stage_dims.push_back(static_cast<int>(kernels.back().cols()));
    rc.h1c.stage_dims.push_back(static_cast<int>(projections.back().rows()) + h1p);
  }

  for (int m = 1; m < depth; ++m) {
    // Kernel tower: ker(jet_{m+1}) includes into ker(jet_m); coordinates of
    // the deeper basis in the shallower one.
    const MatQ& klo = kernels[m - 1];
    const MatQ& khi = kernels[m];
    MatQ tk = MatQ::Zero(klo.cols(), khi.cols());
    for (int j = 0; j < khi.cols(); ++j) {
      if (klo.cols() == 0) break;
      auto x = mat_solve(klo, VecQ(khi.col(j)));
      if (!x) throw ConsistencyError("refined_compact_coherent: jet kernels not nested");
      tk.col(j) = *x;
    }
    rc.h0c.transitions.push_back(std::move(tk));

    // Cokernel tower: the map induced by jet truncation. With P the cokernel
    // projections and T the truncation, the transition M satisfies
    // M P_{m+1} = P_m T; it is well defined because T jet_{m+1} = jet_m.
    MatQ t = jet_truncation(nd, m);
    MatQ mc = projections[m - 1] * t * right_inverse(projections[m]);
    const int clo = static_cast<int>(projections[m - 1].rows());
    const int chi = static_cast<int>(projections[m].rows());
    MatQ tc = MatQ::Zero(clo + h1p, chi + h1p);
    tc.topLeftCorner(clo, chi) = mc;
    tc.bottomRightCorner(h1p, h1p) = MatQ::Identity(h1p, h1p);
    rc.h1c.transitions.push_back(std::move(tc));
  }

  rc.h0c.validate();
  rc.h1c.validate();
  return rc;
}

SerreStageReport serre_duality_stage_check(int a, const CurveSpec& curve, int depth) {
  RefinedCompact rc = refined_compact_coherent(a, curve, depth);
  const int nd = curve.num_points();

  SerreStageReport rep;
  rep.twist = a;
  rep.h0c_stage = rc.h0c.stage_dims;
  rep.h1c_stage = rc.h1c.stage_dims;
  // The Serre dual of the stage-m fiber is controlled by sections of
  // O(m|D| - 2 - a) = omega(mD) twisted by O(-a): the dual of the stage H^1_c
  // counts its monomial sections, the dual of the stage H^0_c its H^1.
  for (int m = 1; m <= depth; ++m) {
    const int d = m * nd - 2 - a;
    rep.expected_h1.push_back(d >= 0 ? d + 1 : 0);
    rep.expected_h0.push_back(d <= -2 ? -d - 1 : 0);
  }
  rep.ok = rep.h1c_stage == rep.expected_h1 && rep.h0c_stage == rep.expected_h0;

  // The duals must assemble into a colimit: the dual ind-tower of H^1_c has
  // to be a tower of injections (pole-order filtration steps), equivalently
  // every pro-transition is surjective.
  IndSpace dual_tower = pro_dual(rc.h1c);
  for (int m = 0; m + 1 < depth; ++m) {
    if (mat_rank(dual_tower.maps[m]) != dual_tower.stage_dims[m]) rep.ok = false;
  }
  return rep;
}

HodgePieces hodge_pieces(const Connection& e, int depth) {
  const int r = e.rank;
  const int nd = e.curve.num_points();

  HodgePieces hp;
  RefinedCompact p0 = refined_compact_coherent(0, e.curve, depth);
  RefinedCompact p1 = refined_compact_coherent(nd - 2, e.curve, depth);
  hp.piece0.twist = p0.twist;
  hp.piece0.h0c = scale_pro(p0.h0c, r);
  hp.piece0.h1c = scale_pro(p0.h1c, r);
  hp.piece1.twist = p1.twist;
  hp.piece1.h0c = scale_pro(p1.h0c, r);
  hp.piece1.h1c = scale_pro(p1.h1c, r);

  for (int m = 0; m < depth; ++m) {
    int chi0 = hp.piece0.h0c.stage_dims[m] - hp.piece0.h1c.stage_dims[m];
    int chi1 = hp.piece1.h0c.stage_dims[m] - hp.piece1.h1c.stage_dims[m];
    int chi = chi0 - chi1;  // piece 1 sits one degree higher
    if (m == 0) {
      hp.stage_chi = chi;
    } else if (chi != hp.stage_chi) {
      throw ConsistencyError("hodge_pieces: stage Euler characteristic drifts");
    }
  }

  CompactH hc = compact_h(e);
  hp.chi_c = hc.h0_dim() - hc.h1_dim() + hc.h2_dim();
  if (hp.stage_chi != hp.chi_c) {
    throw ConsistencyError(
        "hodge_pieces: stage chi " + std::to_string(hp.stage_chi) +
        " does not match chi_c " + std::to_string(hp.chi_c) +
        "; the canonical extension only recovers chi_c when it is topological");
  }
  return hp;
}

}  // namespace fbx
