#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "fbx/cohomology.hpp"

using namespace fbx;

namespace {

Connection random_connection(std::mt19937& rng, const CurveSpec& curve, int rank) {
  std::uniform_int_distribution<int> coeff(-3, 3);
  std::uniform_int_distribution<int> deg(0, 2);
  std::uniform_int_distribution<int> ord(0, 2);
  std::vector<std::vector<RegFun>> a(rank, std::vector<RegFun>(rank));
  for (auto& row : a)
    for (auto& f : row) {
      std::vector<Rat> nc(deg(rng) + 1);
      for (auto& c : nc) c = Rat(coeff(rng));
      Poly den(Rat(1));
      for (const Rat& c : curve.finite_points) {
        int e = ord(rng);
        for (int k = 0; k < e; ++k) den = den * Poly::linear_root(c);
      }
      f = RegFun(Poly(std::move(nc)), den);
    }
  return Connection(curve, rank, std::move(a));
}

Connection trivial_a1() { return Connection::trivial(CurveSpec(std::vector<Rat>{}), 1); }
Connection trivial_gm() { return Connection::trivial(CurveSpec({Rat(0)}), 1); }
Connection half_twist() {
  CurveSpec gm({Rat(0)});
  return Connection(gm, 1, {{RegFun(Poly(rat(1, 2)), Poly::monomial(1))}});
}
Connection exp_twist() {
  CurveSpec gm({Rat(0)});
  return Connection(gm, 1, {{RegFun(Poly(Rat(-1)), Poly::monomial(2))}});
}

// nabla applied to an exact rational section, componentwise
std::vector<RegFun> apply_global(const Connection& e, const std::vector<RegFun>& v) {
  std::vector<RegFun> out(static_cast<size_t>(e.rank));
  for (int i = 0; i < e.rank; ++i) {
    out[i] = v[i].derivative();
    for (int j = 0; j < e.rank; ++j) out[i] = out[i] + e.matrix[i][j] * v[j];
  }
  return out;
}

}  // namespace

TEST_CASE("global cohomology: golden connections") {
  GlobalH a1 = global_h(trivial_a1());
  CHECK(a1.h0_dim() == 1);
  CHECK(a1.h1_dim() == 0);
  // the horizontal section is a nonzero constant
  CHECK(a1.h0_basis[0][0].degree_at_infinity() == 0);

  GlobalH gm = global_h(trivial_gm());
  CHECK(gm.h0_dim() == 1);
  CHECK(gm.h1_dim() == 1);
  // representative prefers the smallest pole: dt/t
  CHECK(gm.h1_basis[0][0] == RegFun(Poly(Rat(1)), Poly::monomial(1)));

  GlobalH half = global_h(half_twist());
  CHECK(half.h0_dim() == 0);
  CHECK(half.h1_dim() == 0);

  GlobalH ex = global_h(exp_twist());
  CHECK(ex.h0_dim() == 0);
  CHECK(ex.h1_dim() == 1);
  // H^1 spanned by [dt]
  CHECK(ex.h1_basis[0][0] == RegFun(Poly(Rat(1)), Poly(Rat(1))));
}

TEST_CASE("global h0 sections are horizontal and h1 forms nontrivial") {
  std::mt19937 rng(11);
  CurveSpec curve({Rat(0), Rat(1)});
  for (int trial = 0; trial < 3; ++trial) {
    Connection e = random_connection(rng, curve, 2);
    GlobalH g = global_h(end_connection(e));  // End has the identity section
    CHECK(g.h0_dim() >= 1);
    for (const auto& v : g.h0_basis) {
      auto dv = apply_global(end_connection(e), v);
      for (const RegFun& f : dv) CHECK(f.is_zero());
    }
  }
}

TEST_CASE("compactly supported cohomology: golden dimensions") {
  CompactH a1 = compact_h(trivial_a1());
  CHECK(a1.h0_dim() == 0);
  CHECK(a1.h1_dim() == 0);
  CHECK(a1.h2_dim() == 1);

  CompactH gm = compact_h(trivial_gm());
  CHECK(gm.h0_dim() == 0);
  CHECK(gm.h1_dim() == 1);
  CHECK(gm.h2_dim() == 1);

  CompactH half = compact_h(half_twist());
  CHECK(half.h0_dim() == 0);
  CHECK(half.h1_dim() == 0);
  CHECK(half.h2_dim() == 0);

  CompactH ex = compact_h(exp_twist());
  CHECK(ex.h0_dim() == 0);
  CHECK(ex.h1_dim() == 1);
  CHECK(ex.h2_dim() == 0);
}

TEST_CASE("cone representatives satisfy the cocycle condition") {
  Connection e = exp_twist();
  CompactH ch = compact_h(e);
  REQUIRE(ch.h1_dim() == 1);
  const ConeClass& cc = ch.h1[0];
  auto pts = boundary_points(e.curve);
  for (size_t pi = 0; pi < pts.size(); ++pi) {
    LocalConnection l(e, pts[pi]);
    auto lhs = apply_local(l, cc.boundary_part[pi]);
    int order = 0;
    for (const TruncLaurent& x : lhs) order = std::min(order, x.order());
    auto rhs = restrict_form(cc.global_part, pts[pi], order + 4);
    for (size_t i = 0; i < lhs.size(); ++i) {
      int top = std::min(lhs[i].order(), rhs[i].order());
      int bot = std::min(lhs[i].is_zero() ? 0 : lhs[i].valuation(),
                         rhs[i].is_zero() ? 0 : rhs[i].valuation());
      for (int k = bot; k <= top; ++k) CHECK(lhs[i].coeff(k) == rhs[i].coeff(k));
    }
  }
}

TEST_CASE("orientation map and the residue theorem on classes") {
  // normalization: ds/s at one boundary point
  CurveSpec gm({Rat(0)});
  std::vector<TruncLaurent> cls{TruncLaurent::monomial(-1, Rat(1), 4),
                                TruncLaurent::zero_to_order(4)};
  CHECK(orientation(cls) == 1);

  // restriction of dt/t has residues +1 and -1
  RegFun dt_over_t(Poly(Rat(1)), Poly::monomial(1));
  std::vector<TruncLaurent> restr;
  for (const auto& p : boundary_points(gm)) restr.push_back(restrict_form({dt_over_t}, p, 4)[0]);
  CHECK(orientation(restr) == 0);

  // restrictions of arbitrary global forms are null classes
  std::mt19937 rng(5);
  std::uniform_int_distribution<int> coeff(-4, 4);
  CurveSpec curve({Rat(0), Rat(2)});
  for (int trial = 0; trial < 10; ++trial) {
    Poly den(Rat(1));
    den = den * Poly::monomial(1) * Poly::linear_root(Rat(2));
    std::vector<Rat> nc(4);
    for (auto& c : nc) c = Rat(coeff(rng));
    RegFun w(Poly(std::move(nc)), den);
    std::vector<TruncLaurent> forms;
    for (const auto& p : boundary_points(curve)) forms.push_back(restrict_form({w}, p, 8)[0]);
    CHECK(orientation(forms) == 0);
  }
}

TEST_CASE("boundary pairing: goldens and non-degeneracy") {
  BoundaryPairing triv = boundary_pairing(trivial_gm());
  REQUIRE(triv.h0_vs_h1.rows() == 2);
  CHECK(mat_rank(triv.h0_vs_h1) == 2);
  CHECK(mat_rank(triv.h1_vs_h0) == 2);
  CHECK(triv.h0_vs_h1(0, 0) == 1);  // <1, ds/s> at the finite point

  BoundaryPairing half = boundary_pairing(half_twist());
  CHECK(half.h0_vs_h1.rows() == 0);
  CHECK(half.h1_vs_h0.rows() == 0);

  BoundaryPairing ex = boundary_pairing(exp_twist());
  REQUIRE(ex.h0_vs_h1.rows() == 1);  // e^{-s} at infinity only
  CHECK(ex.h0_vs_h1(0, 0) != 0);
  CHECK(mat_rank(ex.h1_vs_h0) == 1);

  std::mt19937 rng(23);
  CurveSpec curve({Rat(0), Rat(1)});
  for (int trial = 0; trial < 3; ++trial) {
    Connection e = random_connection(rng, curve, 2);
    BoundaryPairing bp = boundary_pairing(e);
    CHECK(mat_rank(bp.h0_vs_h1) == bp.h0_vs_h1.rows());
    CHECK(mat_rank(bp.h1_vs_h0) == bp.h1_vs_h0.rows());
  }
}

TEST_CASE("compact-support duality pairing: goldens and non-degeneracy") {
  CompactPairing a1 = duality_pairing_c(trivial_a1());
  REQUIRE(a1.h2c_vs_h0.rows() == 1);
  CHECK(a1.h2c_vs_h0(0, 0) != 0);

  CompactPairing gm = duality_pairing_c(trivial_gm());
  CHECK(mat_rank(gm.h1c_vs_h1) == 1);
  CHECK(mat_rank(gm.h2c_vs_h0) == 1);

  CompactPairing ex = duality_pairing_c(exp_twist());
  CHECK(mat_rank(ex.h1c_vs_h1) == 1);
  CHECK(ex.h2c_vs_h0.rows() == 0);

  std::mt19937 rng(29);
  CurveSpec curve({Rat(0), Rat(1)});
  for (int trial = 0; trial < 3; ++trial) {
    Connection e = random_connection(rng, curve, 2);
    CompactPairing dp = duality_pairing_c(e);
    CHECK(mat_rank(dp.h1c_vs_h1) == dp.h1c_vs_h1.rows());
    CHECK(mat_rank(dp.h2c_vs_h0) == dp.h2c_vs_h0.rows());
  }
}

TEST_CASE("pairing is independent of the global representative") {
  // <(w,h), y> changes by a sum of residues of a global form when y moves
  // within its class, and that sum vanishes
  Connection e = trivial_gm();
  CompactH ch = compact_h(e);
  REQUIRE(ch.h1_dim() == 1);
  const ConeClass& cc = ch.h1[0];
  auto pts = boundary_points(e.curve);
  RegFun y1(Poly(Rat(1)), Poly::monomial(1));                      // dt/t
  RegFun y2 = y1 + RegFun(Poly({Rat(0), Rat(2)}), Poly(Rat(1)));  // + nabla(t^2)
  Rat s1(0), s2(0);
  for (size_t pi = 0; pi < pts.size(); ++pi) {
    s1 += residue(cc.boundary_part[pi], restrict_form({y1}, pts[pi], 8));
    s2 += residue(cc.boundary_part[pi], restrict_form({y2}, pts[pi], 8));
  }
  CHECK(s1 == s2);
  CHECK(s1 != 0);
}

TEST_CASE("tangent complex, Fredholm and injectivity") {
  TangentDims tg = tangent_complex(trivial_gm());
  CHECK(tg.t_minus_1 == 1);
  CHECK(tg.t_0 == 1);
  CHECK(tg.t_1 == 0);
  TangentDims ta = tangent_complex(trivial_a1());
  CHECK(ta.t_minus_1 == 1);
  CHECK(ta.t_0 == 0);
  // rank-1 twists have trivial End, so tangent dims ignore the twist
  TangentDims th = tangent_complex(half_twist());
  TangentDims te = tangent_complex(exp_twist());
  CHECK(th.t_minus_1 == tg.t_minus_1);
  CHECK(th.t_0 == tg.t_0);
  CHECK(te.t_minus_1 == tg.t_minus_1);
  CHECK(te.t_0 == tg.t_0);

  FredholmReport fr = fredholm_check(trivial_a1());
  CHECK(fr.fredholm);
  CHECK(fr.end_h0 == 1);
  CHECK(fr.end_h1 == 0);
  FredholmReport fh = fredholm_check(half_twist());
  CHECK(fh.fredholm);
  CHECK(fh.end_h0 == 1);
  CHECK(fh.end_h1 == 1);

  CHECK(injectivity_check(trivial_a1()));
  CHECK(injectivity_check(trivial_gm()));

  std::mt19937 rng(31);
  CurveSpec curve({Rat(0), Rat(1)});
  for (int trial = 0; trial < 2; ++trial) {
    Connection e = random_connection(rng, curve, 2);
    CHECK(fredholm_check(e).fredholm);
    CHECK(injectivity_check(e));
  }
}

TEST_CASE("report: long exact sequence and Euler characteristics") {
  for (const Connection& e : {trivial_a1(), trivial_gm(), half_twist(), exp_twist()}) {
    CohomologyReport rep = cohomology_report(e);
    CHECK(rep.les_ok);
    CHECK(rep.chi_boundary == 0);
    CHECK(rep.chi_c == rep.chi_x);
  }
  std::mt19937 rng(37);
  CurveSpec curve({Rat(0), Rat(1)});
  for (int trial = 0; trial < 3; ++trial) {
    Connection e = random_connection(rng, curve, 2);
    CohomologyReport rep = cohomology_report(e);
    CHECK(rep.les_ok);
    CHECK(rep.chi_c == rep.chi_x);
    // duality of dimensions against the dual connection
    GlobalH gd = global_h(dual(e));
    CHECK(rep.compact.h1_dim() == gd.h1_dim());
    CHECK(rep.compact.h2_dim() == gd.h0_dim());
    CHECK(rep.compact.h0_dim() == 0);
  }
}

TEST_CASE("hom complex cohomology matches global cohomology") {
  // gmc.hom_complex on sufficiently large truncations recovers
  // global_h(tensor(dual E, F))
  CurveSpec gm({Rat(0)});
  auto dims_of = [](const Connection& e, const Connection& f) {
    std::pair<int, int> prev{-1, -1};
    for (int p = 4; p <= 64; p *= 2) {
      DeRhamGmc de = de_rham_gmc(e, p, p);
      DeRhamGmc df = de_rham_gmc(f, p, p);
      ChainComplex hc = hom_complex(de, df);
      auto coh = cohomology(hc);
      std::pair<int, int> dims{coh.count(0) ? coh.at(0).dim : 0,
                               coh.count(1) ? coh.at(1).dim : 0};
      if (dims == prev) return dims;
      prev = dims;
    }
    return prev;
  };
  for (const Connection& e : {trivial_gm(), half_twist(), exp_twist()})
    for (const Connection& f : {trivial_gm(), half_twist(), exp_twist()}) {
      GlobalH g = global_h(tensor(dual(e), f));
      auto dims = dims_of(e, f);
      CHECK(dims.first == g.h0_dim());
      CHECK(dims.second == g.h1_dim());
    }
}
