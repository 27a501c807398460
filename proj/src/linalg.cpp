#include "fbx/linalg.hpp"

namespace fbx {

Echelon row_echelon(const MatQ& m) {
  Echelon e;
  e.rref = m;
  const int rows = static_cast<int>(m.rows());
  const int cols = static_cast<int>(m.cols());
  int r = 0;
  for (int c = 0; c < cols && r < rows; ++c) {
    int pivot = -1;
    for (int i = r; i < rows; ++i) {
      if (e.rref(i, c) != 0) {
        pivot = i;
        break;
      }
    }
    if (pivot < 0) continue;
    e.rref.row(r).swap(e.rref.row(pivot));
    Rat inv = 1 / e.rref(r, c);
    for (int j = c; j < cols; ++j) e.rref(r, j) *= inv;
    for (int i = 0; i < rows; ++i) {
      if (i == r || e.rref(i, c) == 0) continue;
      Rat f = e.rref(i, c);
      for (int j = c; j < cols; ++j) e.rref(i, j) -= f * e.rref(r, j);
    }
    e.pivot_cols.push_back(c);
    ++r;
  }
  e.rank = r;
  return e;
}

int mat_rank(const MatQ& m) { return row_echelon(m).rank; }

MatQ mat_kernel(const MatQ& m) {
  const int cols = static_cast<int>(m.cols());
  Echelon e = row_echelon(m);
  std::vector<bool> is_pivot(cols, false);
  for (int c : e.pivot_cols) is_pivot[c] = true;
  MatQ basis(cols, cols - e.rank);
  basis.setZero();
  int k = 0;
  for (int c = 0; c < cols; ++c) {
    if (is_pivot[c]) continue;
    basis(c, k) = 1;
    // back-substitute pivot coordinates
    for (int r = 0; r < e.rank; ++r) basis(e.pivot_cols[r], k) = -e.rref(r, c);
    ++k;
  }
  return basis;
}

Cokernel mat_cokernel(const MatQ& m) {
  Cokernel c;
  MatQ left = mat_kernel(m.transpose());
  c.dimension = static_cast<int>(left.cols());
  c.projection = left.transpose();
  return c;
}

std::optional<VecQ> mat_solve(const MatQ& a, const VecQ& b) {
  const int rows = static_cast<int>(a.rows());
  const int cols = static_cast<int>(a.cols());
  MatQ aug(rows, cols + 1);
  aug.leftCols(cols) = a;
  aug.col(cols) = b;
  Echelon e = row_echelon(aug);
  VecQ x(cols);
  x.setZero();
  for (int r = 0; r < e.rank; ++r) {
    int p = e.pivot_cols[r];
    if (p == cols) return std::nullopt;  // inconsistent
    x(p) = e.rref(r, cols);
  }
  return x;
}

SpanTracker::SpanTracker(int ambient_dim) : dim_(ambient_dim) {}

VecQ SpanTracker::reduce(const VecQ& v) const {
  VecQ w = v;
  for (size_t i = 0; i < rows_.size(); ++i) {
    if (w(leads_[i]) != 0) w -= w(leads_[i]) * rows_[i];
  }
  return w;
}

bool SpanTracker::insert(const VecQ& v) {
  VecQ w = reduce(v);
  int lead = -1;
  for (int i = 0; i < dim_; ++i) {
    if (w(i) != 0) {
      lead = i;
      break;
    }
  }
  if (lead < 0) return false;
  w /= w(lead);
  rows_.push_back(w);
  leads_.push_back(lead);
  ++rank_;
  return true;
}

bool SpanTracker::contains(const VecQ& v) const {
  VecQ w = reduce(v);
  for (int i = 0; i < dim_; ++i) {
    if (w(i) != 0) return false;
  }
  return true;
}

std::vector<int> complete_span(const MatQ& base, const MatQ& candidates) {
  SpanTracker t(static_cast<int>(candidates.rows()));
  for (int c = 0; c < base.cols(); ++c) t.insert(base.col(c));
  std::vector<int> picked;
  for (int c = 0; c < candidates.cols(); ++c) {
    if (t.insert(candidates.col(c))) picked.push_back(c);
  }
  return picked;
}

void sparse_axpy(SparseVec& dst, const Rat& c, const SparseVec& src) {
  if (c == 0) return;
  for (const auto& [k, val] : src) {
    auto it = dst.find(k);
    if (it == dst.end()) {
      Rat nv = c * val;
      if (nv != 0) dst.emplace(k, std::move(nv));
    } else {
      it->second += c * val;
      if (it->second == 0) dst.erase(it);
    }
  }
}

bool SparseEliminator::insert(SparseVec v, int id) {
  SparseVec comb;
  if (track_) comb[id] = Rat(1);
  while (!v.empty()) {
    auto lead = v.begin();
    auto it = rows_.find(lead->first);
    if (it == rows_.end()) {
      Rat inv = 1 / lead->second;
      for (auto& [k, val] : v) val *= inv;
      if (track_)
        for (auto& [k, val] : comb) val *= inv;
      rows_.emplace(lead->first, Row{std::move(v), std::move(comb)});
      ++rank_;
      return true;
    }
    Rat f = -lead->second;
    sparse_axpy(v, f, it->second.vec);
    if (track_) sparse_axpy(comb, f, it->second.comb);
  }
  if (track_) deps_.push_back(std::move(comb));
  return false;
}

SparseEliminator::Reduction SparseEliminator::reduce(SparseVec v) const {
  Reduction r;
  while (!v.empty()) {
    auto lead = v.begin();
    auto it = rows_.find(lead->first);
    // the lowest index of any span element is a stored lead, so a missing
    // lead certifies that v is outside the span
    if (it == rows_.end()) break;
    Rat f = lead->second;
    sparse_axpy(v, -f, it->second.vec);
    if (track_) sparse_axpy(r.comb, f, it->second.comb);
  }
  r.in_span = v.empty();
  r.residual = std::move(v);
  return r;
}

std::vector<std::vector<Rat>> SparseEliminator::cokernel_functionals(int idx_lo,
                                                                     int idx_hi) const {
  const int width = idx_hi - idx_lo + 1;
  std::vector<int> missing;
  for (int idx = idx_lo; idx <= idx_hi; ++idx)
    if (rows_.find(idx) == rows_.end()) missing.push_back(idx);
  std::vector<std::vector<Rat>> lams(missing.size(), std::vector<Rat>(width, Rat(0)));
  for (size_t j = 0; j < missing.size(); ++j) lams[j][missing[j] - idx_lo] = 1;
  // back-substitute downward: a lead coordinate is determined by the row's
  // higher entries, a missing coordinate is free (set above)
  for (auto it = rows_.rbegin(); it != rows_.rend(); ++it) {
    const int lead = it->first;
    if (lead < idx_lo || lead > idx_hi) continue;
    for (auto& lam : lams) {
      Rat v(0);
      for (const auto& [k, c] : it->second.vec)
        if (k != lead && k <= idx_hi) v -= c * lam[k - idx_lo];
      lam[lead - idx_lo] = std::move(v);
    }
  }
  return lams;
}

}  // namespace fbx
