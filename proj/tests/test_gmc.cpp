#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "fbx/connection.hpp"

using namespace fbx;

namespace {

MatQ make_mat(int rows, int cols, std::initializer_list<long> vals) {
  MatQ m(rows, cols);
  auto it = vals.begin();
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j) m(i, j) = Rat(*it++);
  return m;
}

std::map<int, int> h_dims(const ChainComplex& c) {
  std::map<int, int> out;
  for (auto& [n, g] : cohomology(c)) out[n] = g.dim;
  return out;
}

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

}  // namespace

TEST_CASE("chain complex validation and cohomology") {
  // 0 -> Q^2 -> Q^2 -> 0 with a rank-one differential
  MatQ d = make_mat(2, 2, {1, 0, 0, 0});
  ChainComplex c({{0, 2}, {1, 2}}, {{0, d}});
  auto h = cohomology(c);
  CHECK(h[0].dim == 1);
  CHECK(h[1].dim == 1);
  // representatives are honest cocycles outside the boundaries
  VecQ rep = h[0].basis.col(0);
  VecQ img = c.diff(0) * rep;
  CHECK(img(0) == 0);
  CHECK(img(1) == 0);

  CHECK_THROWS_AS(ChainComplex({{0, 1}, {1, 1}, {2, 1}},
                               {{0, make_mat(1, 1, {1})}, {1, make_mat(1, 1, {1})}}),
                  GmcError);
  CHECK_THROWS_AS(ChainComplex({{0, 2}, {1, 1}}, {{0, make_mat(1, 2, {1, 0}).transpose()}}),
                  GmcError);
}

TEST_CASE("graded mixed complex structure checks") {
  GradedMixedComplex u = GradedMixedComplex::unit();
  CHECK(u.dim({0, 0}) == 1);
  CHECK(u.eps({0, 0}).rows() == 0);

  // eps^2 != 0 must be rejected: two weight steps with identity maps
  std::map<PieceKey, int> pieces{{{0, 0}, 1}, {{-1, 1}, 1}, {{-2, 2}, 1}};
  std::map<PieceKey, MatQ> eps{{{0, 0}, make_mat(1, 1, {1})}, {{-1, 1}, make_mat(1, 1, {1})}};
  CHECK_THROWS_AS(GradedMixedComplex(pieces, {}, eps), GmcError);

  CHECK_THROWS_AS(GradedMixedComplex({{{0, -1}, 1}}, {}, {}), GmcError);
}

TEST_CASE("realization of the unit and of direct sums") {
  ChainComplex r = realization(GradedMixedComplex::unit());
  CHECK(r.dim(0) == 1);
  CHECK(r.dim(1) == 0);
  CHECK(h_dims(r) == std::map<int, int>{{0, 1}});

  GradedMixedComplex s = GradedMixedComplex::unit().direct_sum(GradedMixedComplex::unit());
  CHECK(realization(s).dim(0) == 2);
}

TEST_CASE("realization of truncated de Rham complexes: golden curves") {
  CurveSpec a1(std::vector<Rat>{});
  CurveSpec gm({Rat(0)});

  // trivial on the affine line: H^0 = Q, H^1 = 0
  DeRhamGmc t1 = de_rham_gmc(Connection::trivial(a1, 1), 4, 0);
  CHECK(h_dims(realization(t1.gmc)) == std::map<int, int>{{0, 1}});

  // trivial on G_m: H^0 = Q, H^1 = Q (dt/t)
  DeRhamGmc t2 = de_rham_gmc(Connection::trivial(gm, 1), 4, 4);
  auto h2 = cohomology(realization(t2.gmc));
  CHECK(h2[0].dim == 1);
  CHECK(h2[1].dim == 1);
  // the weight-1 block starts after the weight-0 block in degree 1... the
  // realization in degree 1 is pure weight 1, so the representative lives in
  // the form window; it should be a multiple of dt/t
  VecQ rep = h2[1].basis.col(0);
  int nonzero = 0, where = -1;
  for (int k = 0; k < rep.size(); ++k)
    if (rep(k) != 0) {
      ++nonzero;
      where = k;
    }
  CHECK(nonzero == 1);
  CHECK(t2.form_window.at(where) == Monomial::pole_at(0, 1));

  // the half twist d + (1/2) dt/t on G_m: everything vanishes
  Connection half(gm, 1, {{RegFun(Poly(rat(1, 2)), Poly::monomial(1))}});
  DeRhamGmc t3 = de_rham_gmc(half, 4, 4);
  CHECK(h_dims(realization(t3.gmc)).empty());

  // d + d(1/t) on G_m: H^0 = 0, H^1 one-dimensional
  Connection exp_twist(gm, 1, {{RegFun(Poly(Rat(-1)), Poly::monomial(2))}});
  DeRhamGmc t4 = de_rham_gmc(exp_twist, 4, 4);
  auto h4 = h_dims(realization(t4.gmc));
  CHECK(h4 == std::map<int, int>{{1, 1}});
}

TEST_CASE("hom complex from the unit matches the realization") {
  std::mt19937 rng(5);
  CurveSpec gm({Rat(0)});
  DeRhamGmc unit_gmc = de_rham_gmc(Connection::trivial(gm, 1), 3, 3);
  for (int trial = 0; trial < 5; ++trial) {
    Connection f = random_connection(rng, gm, 2);
    DeRhamGmc fg = de_rham_gmc(f, 3, 3);
    ChainComplex hom = hom_complex(unit_gmc, fg);
    ChainComplex real = realization(fg.gmc);
    CHECK(hom.dim(0) == real.dim(0));
    CHECK(hom.dim(1) == real.dim(1));
    CHECK(h_dims(hom) == h_dims(real));
  }
}

TEST_CASE("hom complex computes the internal Hom connection") {
  std::mt19937 rng(17);
  CurveSpec gm({Rat(0)});
  CurveSpec two({Rat(0), Rat(1)});
  for (const CurveSpec& curve : {gm, two}) {
    for (int trial = 0; trial < 6; ++trial) {
      Connection e = random_connection(rng, curve, 2);
      Connection f = random_connection(rng, curve, 2);
      ChainComplex hom = hom_complex(de_rham_gmc(e, 3, 2), de_rham_gmc(f, 3, 2));
      ChainComplex direct = realization(de_rham_gmc(tensor(dual(e), f), 3, 2).gmc);
      CHECK(hom.dim(0) == direct.dim(0));
      CHECK(hom.dim(1) == direct.dim(1));
      CHECK(h_dims(hom) == h_dims(direct));
    }
  }
}

TEST_CASE("endomorphisms of the half twist are the trivial line") {
  CurveSpec gm({Rat(0)});
  Connection half(gm, 1, {{RegFun(Poly(rat(1, 2)), Poly::monomial(1))}});
  DeRhamGmc g = de_rham_gmc(half, 4, 4);
  auto h = h_dims(hom_complex(g, g));
  CHECK(h == std::map<int, int>{{0, 1}, {1, 1}});
}

TEST_CASE("recover_connection inverts the de Rham construction") {
  std::mt19937 rng(23);
  CurveSpec curve({Rat(0), Rat(-1)});
  for (int trial = 0; trial < 10; ++trial) {
    Connection e = random_connection(rng, curve, 2);
    DeRhamGmc g = de_rham_gmc(e, 2, 2);
    auto back = recover_connection(g);
    REQUIRE(back.size() == 2);
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) CHECK(back[i][j] == e.matrix[i][j]);
  }
}
