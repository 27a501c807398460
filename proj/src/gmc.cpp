#include "fbx/gmc.hpp"

namespace fbx {

namespace {

bool is_zero_mat(const MatQ& m) {
  for (int i = 0; i < m.rows(); ++i)
    for (int j = 0; j < m.cols(); ++j)
      if (m(i, j) != 0) return false;
  return true;
}

}  // namespace

ChainComplex::ChainComplex(std::map<int, int> dims, std::map<int, MatQ> diffs)
    : dims_(std::move(dims)), diffs_(std::move(diffs)) {
  for (auto& [n, m] : diffs_) {
    if (m.cols() != dim(n) || m.rows() != dim(n + 1))
      throw GmcError("ChainComplex: differential shape mismatch in degree " + std::to_string(n));
  }
  for (auto& [n, m] : diffs_) {
    MatQ next = diff(n + 1);
    if (!is_zero_mat(next * m)) throw GmcError("ChainComplex: d^2 != 0 in degree " + std::to_string(n));
  }
}

int ChainComplex::dim(int degree) const {
  auto it = dims_.find(degree);
  return it == dims_.end() ? 0 : it->second;
}

MatQ ChainComplex::diff(int degree) const {
  auto it = diffs_.find(degree);
  if (it != diffs_.end()) return it->second;
  return MatQ::Zero(dim(degree + 1), dim(degree));
}

std::map<int, CohomologyGroup> cohomology(const ChainComplex& c) {
  std::map<int, CohomologyGroup> h;
  for (const auto& [n, dn] : c.dims()) {
    if (dn == 0) continue;
    MatQ cycles = mat_kernel(c.diff(n));
    MatQ boundaries = c.diff(n - 1);
    std::vector<int> picked = complete_span(boundaries, cycles);
    CohomologyGroup g;
    g.dim = static_cast<int>(picked.size());
    g.basis.resize(dn, g.dim);
    for (size_t k = 0; k < picked.size(); ++k) g.basis.col(static_cast<int>(k)) = cycles.col(picked[k]);
    if (g.dim > 0) h[n] = std::move(g);
  }
  return h;
}

GradedMixedComplex::GradedMixedComplex(std::map<PieceKey, int> pieces,
                                       std::map<PieceKey, MatQ> d_in,
                                       std::map<PieceKey, MatQ> eps_in)
    : pieces_(std::move(pieces)), d_(std::move(d_in)), eps_(std::move(eps_in)) {
  for (auto& [k, n] : pieces_) {
    if (k.weight < 0) throw GmcError("GradedMixedComplex: negative weight");
    if (n < 0) throw GmcError("GradedMixedComplex: negative dimension");
  }
  auto check_shape = [&](const std::map<PieceKey, MatQ>& maps, int ddeg, int dwt, const char* name) {
    for (auto& [k, m] : maps) {
      PieceKey tgt{k.degree + ddeg, k.weight + dwt};
      if (m.cols() != dim(k) || m.rows() != dim(tgt))
        throw GmcError(std::string("GradedMixedComplex: ") + name + " shape mismatch");
    }
  };
  check_shape(d_, 1, 0, "d");
  check_shape(eps_, -1, 1, "eps");
  for (auto& [k, n] : pieces_) {
    if (n == 0) continue;
    PieceKey up{k.degree + 1, k.weight};
    PieceKey dn{k.degree - 1, k.weight + 1};
    if (!is_zero_mat(d(up) * d(k))) throw GmcError("GradedMixedComplex: d^2 != 0");
    if (!is_zero_mat(eps(dn) * eps(k))) throw GmcError("GradedMixedComplex: eps^2 != 0");
    // d: (deg-1, w+1) -> (deg, w+1) after eps; eps: (deg+1, w) -> (deg, w+1) after d
    MatQ anti = d(dn) * eps(k) + eps(up) * d(k);
    if (!is_zero_mat(anti)) throw GmcError("GradedMixedComplex: d eps + eps d != 0");
  }
}

GradedMixedComplex GradedMixedComplex::unit() {
  return GradedMixedComplex({{PieceKey{0, 0}, 1}}, {}, {});
}

int GradedMixedComplex::dim(PieceKey k) const {
  auto it = pieces_.find(k);
  return it == pieces_.end() ? 0 : it->second;
}

MatQ GradedMixedComplex::d(PieceKey k) const {
  auto it = d_.find(k);
  if (it != d_.end()) return it->second;
  return MatQ::Zero(dim({k.degree + 1, k.weight}), dim(k));
}

MatQ GradedMixedComplex::eps(PieceKey k) const {
  auto it = eps_.find(k);
  if (it != eps_.end()) return it->second;
  return MatQ::Zero(dim({k.degree - 1, k.weight + 1}), dim(k));
}

GradedMixedComplex GradedMixedComplex::direct_sum(const GradedMixedComplex& o) const {
  std::map<PieceKey, int> pieces;
  for (auto& [k, n] : pieces_) pieces[k] += n;
  for (auto& [k, n] : o.pieces_) pieces[k] += n;
  auto block = [&](const GradedMixedComplex& a, const GradedMixedComplex& b, PieceKey k, int ddeg,
                   int dwt, bool use_d) {
    PieceKey tgt{k.degree + ddeg, k.weight + dwt};
    int rows = (pieces.count(tgt) ? pieces.at(tgt) : 0);
    int cols = pieces.at(k);
    MatQ m = MatQ::Zero(rows, cols);
    MatQ ma = use_d ? a.d(k) : a.eps(k);
    MatQ mb = use_d ? b.d(k) : b.eps(k);
    m.topLeftCorner(ma.rows(), ma.cols()) = ma;
    m.bottomRightCorner(mb.rows(), mb.cols()) = mb;
    return m;
  };
  std::map<PieceKey, MatQ> d, eps;
  for (auto& [k, n] : pieces) {
    if (n == 0) continue;
    MatQ md = block(*this, o, k, 1, 0, true);
    MatQ me = block(*this, o, k, -1, 1, false);
    if (md.size() > 0 && !is_zero_mat(md)) d[k] = md;
    if (me.size() > 0 && !is_zero_mat(me)) eps[k] = me;
  }
  return GradedMixedComplex(std::move(pieces), std::move(d), std::move(eps));
}

ChainComplex realization(const GradedMixedComplex& e) {
  // degree-n piece: sum over w of E^(n-2w, w), blocks ordered by ascending w
  std::map<int, std::vector<std::pair<int, int>>> blocks;  // n -> [(w, offset)]
  std::map<int, int> dims;
  for (auto& [k, sz] : e.pieces()) {
    if (sz == 0) continue;
    int n = k.degree + 2 * k.weight;
    blocks[n].push_back({k.weight, 0});
    dims[n] += sz;
  }
  for (auto& [n, bl] : blocks) {
    std::sort(bl.begin(), bl.end());
    int off = 0;
    for (auto& [w, o] : bl) {
      o = off;
      off += e.dim({n - 2 * w, w});
    }
  }
  auto offset_of = [&](int n, int w) -> int {
    for (auto& [ww, o] : blocks.at(n))
      if (ww == w) return o;
    throw GmcError("realization: missing block");
  };
  std::map<int, MatQ> diffs;
  for (auto& [n, dn] : dims) {
    if (!dims.count(n + 1)) continue;
    MatQ m = MatQ::Zero(dims.at(n + 1), dn);
    for (auto& [w, off] : blocks.at(n)) {
      PieceKey k{n - 2 * w, w};
      MatQ md = e.d(k);
      if (md.rows() > 0 && e.dim({k.degree + 1, w}) > 0)
        m.block(offset_of(n + 1, w), off, md.rows(), md.cols()) = md;
      MatQ me = e.eps(k);
      if (me.rows() > 0 && e.dim({k.degree - 1, w + 1}) > 0)
        m.block(offset_of(n + 1, w + 1), off, me.rows(), me.cols()) = me;
    }
    diffs[n] = std::move(m);
  }
  return ChainComplex(std::move(dims), std::move(diffs));
}

namespace {

void check_de_rham_shape(const DeRhamGmc& e) {
  for (auto& [k, n] : e.gmc.pieces()) {
    if (n == 0) continue;
    if (!(k == PieceKey{0, 0} || k == PieceKey{-1, 1}))
      throw GmcError("expected a de Rham gmc concentrated in (0,0) and (-1,1)");
  }
  if (e.gmc.dim({0, 0}) != e.fun_window.dim() * e.rank ||
      e.gmc.dim({-1, 1}) != e.form_window.dim() * e.rank)
    throw GmcError("de Rham gmc windows do not match piece dimensions");
}

}  // namespace

ChainComplex hom_complex(const DeRhamGmc& e, const DeRhamGmc& f) {
  check_de_rham_shape(e);
  check_de_rham_shape(f);
  if (!(e.curve == f.curve)) throw GmcError("hom_complex: curve mismatch");
  const CurveSpec& curve = e.curve;
  const int re = e.rank, rf = f.rank;
  const int fun_dim = f.fun_window.dim();
  const int c0 = fun_dim * rf * re;

  // Image of each basis map in partial-fraction form, indexed by
  // (slot i' in [re], fiber a in [rf]); a basis map sends e_i to mon (x) e_a.
  struct Image {
    std::vector<std::vector<PartialFractions>> comp;  // [re][rf]
  };
  std::vector<Image> images(c0);
  MonWindow target(curve, -1, 0);
  for (int i = 0; i < re; ++i) {
    for (int mon = 0; mon < fun_dim; ++mon) {
      Monomial m = f.fun_window.at(mon);
      for (int a = 0; a < rf; ++a) {
        Image& img = images[(static_cast<size_t>(i) * fun_dim + mon) * rf + a];
        img.comp.assign(re, std::vector<PartialFractions>(rf));
        // eps_F(mon e_a) in slot i: derivative plus A_F action
        img.comp[i][a] = pf_add(img.comp[i][a], pf_derivative(m));
        for (int b = 0; b < rf; ++b) {
          if (!f.conn[b][a].is_zero())
            img.comp[i][b] = pf_add(img.comp[i][b], pf_multiply(f.conn[b][a], m, curve));
        }
        // minus M(eps_E e_i'): component at slot i' is A_E[i][i'] * mon e_a
        for (int ip = 0; ip < re; ++ip) {
          if (!e.conn[i][ip].is_zero())
            img.comp[ip][a] =
                pf_add(img.comp[ip][a], pf_scale(pf_multiply(e.conn[i][ip], m, curve), Rat(-1)));
        }
        for (int ip = 0; ip < re; ++ip)
          for (int b = 0; b < rf; ++b) target.grow_to_contain(img.comp[ip][b]);
      }
    }
  }
  const int form_dim = target.dim();
  const int c1 = form_dim * rf * re;
  MatQ d0 = MatQ::Zero(c1, c0);
  for (int col = 0; col < c0; ++col) {
    const Image& img = images[col];
    for (int ip = 0; ip < re; ++ip) {
      for (int b = 0; b < rf; ++b) {
        auto v = target.coords(img.comp[ip][b]);
        if (!v) throw WindowError("hom_complex: image escaped its window");
        for (int k = 0; k < form_dim; ++k)
          if ((*v)(k) != 0) d0((static_cast<size_t>(ip) * form_dim + k) * rf + b, col) = (*v)(k);
      }
    }
  }
  std::map<int, int> dims{{0, c0}};
  std::map<int, MatQ> diffs;
  if (c1 > 0) {
    dims[1] = c1;
    diffs[0] = std::move(d0);
  }
  return ChainComplex(std::move(dims), std::move(diffs));
}

std::vector<std::vector<RegFun>> recover_connection(const DeRhamGmc& e) {
  check_de_rham_shape(e);
  auto unit_idx = e.fun_window.index_of(Monomial::poly(0));
  if (!unit_idx) throw GmcError("recover_connection: window does not contain t^0");
  const int r = e.rank;
  std::vector<std::vector<RegFun>> a(r, std::vector<RegFun>(r));
  MatQ eps = e.gmc.eps({0, 0});
  for (int i = 0; i < r; ++i) {
    int col = *unit_idx * r + i;
    for (int k = 0; k < e.form_window.dim(); ++k) {
      RegFun mon = e.form_window.monomial_regfun(e.form_window.at(k));
      for (int j = 0; j < r; ++j) {
        Rat c = eps(k * r + j, col);
        if (c != 0) a[j][i] = a[j][i] + mon * c;
      }
    }
  }
  return a;
}

}  // namespace fbx
