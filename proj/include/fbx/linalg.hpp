#pragma once

#include <map>
#include <optional>
#include <vector>

#include "fbx/rat.hpp"

namespace fbx {

/// Reduced row echelon form together with the pivot columns.
struct Echelon {
  MatQ rref;
  std::vector<int> pivot_cols;
  int rank = 0;
};

Echelon row_echelon(const MatQ& m);

int mat_rank(const MatQ& m);

/// Basis of the right kernel, one column per basis vector.
/// Count is always cols - rank.
MatQ mat_kernel(const MatQ& m);

/// Cokernel of m as a projection of full row rank (rows - rank many rows)
/// with projection * m = 0.
struct Cokernel {
  int dimension = 0;
  MatQ projection;
};

Cokernel mat_cokernel(const MatQ& m);

/// One exact solution of a x = b, or nullopt when inconsistent.
std::optional<VecQ> mat_solve(const MatQ& a, const VecQ& b);

/// Incremental column-span tracker used for quotient/completion computations.
class SpanTracker {
 public:
  explicit SpanTracker(int ambient_dim);

  /// Inserts v into the span. Returns true when v enlarged it.
  bool insert(const VecQ& v);

  bool contains(const VecQ& v) const;
  int rank() const { return rank_; }
  int ambient_dim() const { return dim_; }

 private:
  VecQ reduce(const VecQ& v) const;

  int dim_;
  int rank_ = 0;
  // rows_[i]: an echelonized vector with leading entry 1 at lead_[i];
  // leads strictly increasing is not required, lookup is by lead index.
  std::vector<VecQ> rows_;
  std::vector<int> leads_;
};

/// Indices (into the given candidate columns) completing span(base) to
/// span(base) + span(candidates), scanned in candidate order.
std::vector<int> complete_span(const MatQ& base, const MatQ& candidates);

/// Sparse vector: index -> nonzero coefficient.
using SparseVec = std::map<int, Rat>;

/// dst += c * src, dropping entries that cancel to zero.
void sparse_axpy(SparseVec& dst, const Rat& c, const SparseVec& src);

/// Incremental sparse Gaussian eliminator over Q with the *lowest* index as
/// the pivot of each stored row. Rows are kept sparse, which makes spans of
/// banded matrices (differential-operator columns) cheap. With tracking on,
/// every stored row remembers its expression in the inserted columns, so
/// dependencies (kernel vectors) and solutions of A x = b come for free.
class SparseEliminator {
 public:
  explicit SparseEliminator(bool track) : track_(track) {}

  /// Returns true when the column enlarged the span. Dependent columns are
  /// recorded (combination summing to zero over the ids) when tracking.
  bool insert(SparseVec v, int id = -1);

  int rank() const { return rank_; }
  const std::vector<SparseVec>& dependencies() const { return deps_; }

  struct Reduction {
    bool in_span = false;
    SparseVec comb;      // v = sum comb[id] * column(id) + residual (tracking only)
    SparseVec residual;  // what could not be eliminated
  };
  Reduction reduce(SparseVec v) const;

  /// Functionals on coordinates [idx_lo, idx_hi] that vanish on the span,
  /// one per index in the range that is not a stored lead (so their count is
  /// the codimension of the span in that coordinate window). Each functional
  /// is dense, offset by idx_lo. Pairing a vector against these functionals
  /// gives its image in the quotient by the span without a reduction cascade.
  std::vector<std::vector<Rat>> cokernel_functionals(int idx_lo, int idx_hi) const;

 private:
  struct Row {
    SparseVec vec;   // normalized: leading (lowest-index) coefficient 1
    SparseVec comb;  // expression of vec over inserted column ids
  };
  bool track_;
  int rank_ = 0;
  std::map<int, Row> rows_;  // keyed by lead index
  std::vector<SparseVec> deps_;
};

}  // namespace fbx
