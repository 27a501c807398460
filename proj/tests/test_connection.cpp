#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "fbx/connection.hpp"

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

}  // namespace

TEST_CASE("construction validates entries against the curve") {
  CurveSpec gm({Rat(0)});
  CHECK_THROWS_AS(Connection(gm, 1, {{RegFun(Poly(Rat(1)), Poly::linear_root(Rat(1)))}}),
                  ValidationError);
  CHECK_THROWS_AS(Connection(gm, 2, {{RegFun(), RegFun()}}), std::invalid_argument);
  Connection ok = Connection::trivial(gm, 3);
  CHECK(ok.rank == 3);
  for (auto& row : ok.matrix)
    for (auto& f : row) CHECK(f.is_zero());
}

TEST_CASE("dual and tensor algebra") {
  std::mt19937 rng(9);
  CurveSpec curve({Rat(0), Rat(2)});
  Connection e = random_connection(rng, curve, 2);
  Connection f = random_connection(rng, curve, 3);

  Connection dd = dual(dual(e));
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) CHECK(dd.matrix[i][j] == e.matrix[i][j]);

  Connection tf = tensor(e, f);
  CHECK(tf.rank == 6);
  // block structure: row (i,j), col (k,l) carries A_E[i][k] delta_{jl} + delta_{ik} A_F[j][l]
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 3; ++j)
      for (int k = 0; k < 2; ++k)
        for (int l = 0; l < 3; ++l) {
          RegFun expect;
          if (j == l) expect = expect + e.matrix[i][k];
          if (i == k) expect = expect + f.matrix[j][l];
          CHECK(tf.matrix[i * 3 + j][k * 3 + l] == expect);
        }

  // End(E) kills the identity section: sum over the diagonal of nabla_End
  // applied to id is [A, id] = 0, i.e. the column sums at (i,i) cancel
  Connection en = end_connection(e);
  CHECK(en.rank == 4);
  for (int a = 0; a < 4; ++a) {
    RegFun s;
    for (int i = 0; i < 2; ++i) s = s + en.matrix[a][i * 2 + i];
    CHECK(s.is_zero());
  }
}

TEST_CASE("de Rham windows: automatic hull and explicit overflow") {
  CurveSpec gm({Rat(0)});
  Connection exp_twist(gm, 1, {{RegFun(Poly(Rat(-1)), Poly::monomial(2))}});
  DeRhamGmc g = de_rham_gmc(exp_twist, 4, 4);
  // nabla(t^-4) has a t^-6 tail, nabla(t^4) tops out at degree 3
  CHECK(g.form_window.poly_deg() == 3);
  CHECK(g.form_window.pole_orders()[0] == 6);
  CHECK(g.gmc.dim({0, 0}) == 9);
  CHECK(g.gmc.dim({-1, 1}) == 10);

  MonWindow fun(gm, 4, 4);
  MonWindow too_small(gm, 3, 5);
  CHECK_THROWS_AS(de_rham_gmc(exp_twist, fun, too_small), WindowError);
  MonWindow big(gm, 3, 6);
  DeRhamGmc ok = de_rham_gmc(exp_twist, fun, big);
  CHECK(ok.gmc.dim({-1, 1}) == 10);
}

TEST_CASE("mixed differential is the connection in coordinates") {
  std::mt19937 rng(31);
  CurveSpec curve({Rat(0), Rat(1)});
  for (int trial = 0; trial < 8; ++trial) {
    Connection e = random_connection(rng, curve, 2);
    DeRhamGmc g = de_rham_gmc(e, 2, 2);
    MatQ eps = g.gmc.eps({0, 0});
    // pick a random section in the window and compare coordinates of eps
    // against nabla computed directly on rational functions
    std::uniform_int_distribution<int> val(-2, 2);
    VecQ x(g.gmc.dim({0, 0}));
    for (int k = 0; k < x.size(); ++k) x(k) = Rat(val(rng));
    VecQ y = eps * x;
    for (int j = 0; j < 2; ++j) {
      RegFun sec_j, expect;
      for (int mon = 0; mon < g.fun_window.dim(); ++mon) {
        for (int i = 0; i < 2; ++i) {
          Rat c = x(mon * 2 + i);
          if (c == 0) continue;
          RegFun m = g.fun_window.monomial_regfun(g.fun_window.at(mon));
          if (i == j) sec_j = sec_j + m * c;
          expect = expect + e.matrix[j][i] * m * c;
        }
      }
      expect = expect + sec_j.derivative();
      RegFun got;
      for (int k = 0; k < g.form_window.dim(); ++k) {
        Rat c = y(k * 2 + j);
        if (c != 0) got = got + g.form_window.monomial_regfun(g.form_window.at(k)) * c;
      }
      CHECK(got == expect);
    }
  }
}
