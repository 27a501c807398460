#include "fbx/connection.hpp"

namespace fbx {

Connection::Connection(CurveSpec c, int r, std::vector<std::vector<RegFun>> m)
    : curve(std::move(c)), rank(r), matrix(std::move(m)) {
  if (rank < 0) throw std::invalid_argument("Connection: negative rank");
  if (static_cast<int>(matrix.size()) != rank)
    throw std::invalid_argument("Connection: matrix row count != rank");
  for (const auto& row : matrix) {
    if (static_cast<int>(row.size()) != rank)
      throw std::invalid_argument("Connection: matrix column count != rank");
    for (const RegFun& f : row) f.validate_on(curve);
  }
}

Connection Connection::trivial(const CurveSpec& curve, int rank) {
  return Connection(curve, rank, std::vector<std::vector<RegFun>>(rank, std::vector<RegFun>(rank)));
}

Connection dual(const Connection& e) {
  std::vector<std::vector<RegFun>> a(e.rank, std::vector<RegFun>(e.rank));
  for (int i = 0; i < e.rank; ++i)
    for (int j = 0; j < e.rank; ++j) a[i][j] = -e.matrix[j][i];
  return Connection(e.curve, e.rank, std::move(a));
}

Connection tensor(const Connection& e, const Connection& f) {
  if (!(e.curve == f.curve)) throw std::invalid_argument("tensor: curve mismatch");
  const int re = e.rank, rf = f.rank, r = re * rf;
  std::vector<std::vector<RegFun>> a(r, std::vector<RegFun>(r));
  // A_E (x) I + I (x) A_F on basis (i, j) |-> i * rf + j
  for (int i = 0; i < re; ++i)
    for (int j = 0; j < rf; ++j) {
      for (int k = 0; k < re; ++k)
        if (!e.matrix[i][k].is_zero()) a[i * rf + j][k * rf + j] = a[i * rf + j][k * rf + j] + e.matrix[i][k];
      for (int l = 0; l < rf; ++l)
        if (!f.matrix[j][l].is_zero()) a[i * rf + j][i * rf + l] = a[i * rf + j][i * rf + l] + f.matrix[j][l];
    }
  return Connection(e.curve, r, std::move(a));
}

Connection end_connection(const Connection& e) { return tensor(dual(e), e); }

namespace {

DeRhamGmc build_gmc(const Connection& e, const MonWindow& fun_window, MonWindow form_window,
                    bool auto_grow) {
  const int r = e.rank;
  const int fun_dim = fun_window.dim();
  // nabla-image of every basis vector mon (x) e_i, in partial fractions
  std::vector<std::vector<PartialFractions>> images(
      static_cast<size_t>(fun_dim) * r, std::vector<PartialFractions>(r));
  for (int mon = 0; mon < fun_dim; ++mon) {
    Monomial m = fun_window.at(mon);
    for (int i = 0; i < r; ++i) {
      auto& img = images[static_cast<size_t>(mon) * r + i];
      img[i] = pf_add(img[i], pf_derivative(m));
      for (int j = 0; j < r; ++j)
        if (!e.matrix[j][i].is_zero())
          img[j] = pf_add(img[j], pf_multiply(e.matrix[j][i], m, e.curve));
      if (auto_grow)
        for (int j = 0; j < r; ++j) form_window.grow_to_contain(img[j]);
    }
  }
  const int form_dim = form_window.dim();
  MatQ eps = MatQ::Zero(form_dim * r, fun_dim * r);
  for (int col = 0; col < fun_dim * r; ++col) {
    for (int j = 0; j < r; ++j) {
      auto v = form_window.coords(images[col][j]);
      if (!v) throw WindowError("de_rham_gmc: enlarge window");
      for (int k = 0; k < form_dim; ++k)
        if ((*v)(k) != 0) eps(k * r + j, col) = (*v)(k);
    }
  }
  std::map<PieceKey, int> pieces{{PieceKey{0, 0}, fun_dim * r}, {PieceKey{-1, 1}, form_dim * r}};
  std::map<PieceKey, MatQ> eps_map;
  if (eps.size() > 0) eps_map[PieceKey{0, 0}] = std::move(eps);
  DeRhamGmc g{GradedMixedComplex(std::move(pieces), {}, std::move(eps_map)), e.curve, r,
              fun_window, std::move(form_window), e.matrix};
  return g;
}

}  // namespace

DeRhamGmc de_rham_gmc(const Connection& e, int poly_deg, int pole_order) {
  MonWindow fun(e.curve, poly_deg, pole_order);
  MonWindow form(e.curve, -1, 0);
  return build_gmc(e, fun, std::move(form), true);
}

DeRhamGmc de_rham_gmc(const Connection& e, const MonWindow& fun_window,
                      const MonWindow& form_window) {
  return build_gmc(e, fun_window, form_window, false);
}

}  // namespace fbx
