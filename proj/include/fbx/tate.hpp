#pragma once

#include "fbx/cohomology.hpp"

namespace fbx {

/// Finite truncated pro-tower V_1 <- V_2 <- ... <- V_depth of Q-spaces.
/// transitions[m-1] maps stage m+1 to stage m (so there are depth-1 maps).
struct ProSpace {
  std::vector<int> stage_dims;
  std::vector<MatQ> transitions;

  int depth() const { return static_cast<int>(stage_dims.size()); }
  void validate() const;
};

/// Finite truncated ind-tower W_1 -> W_2 -> ... -> W_depth.
/// maps[m-1] maps stage m to stage m+1.
struct IndSpace {
  std::vector<int> stage_dims;
  std::vector<MatQ> maps;

  int depth() const { return static_cast<int>(stage_dims.size()); }
  void validate() const;
};

/// Stage-wise extension of an ind-quotient by a pro-sub inside a total
/// tower: at every stage, sub -> total -> quotient is a short exact
/// sequence (inclusion injective, projection surjective, composite zero,
/// dimensions additive).
struct TateObject {
  ProSpace sub;
  IndSpace quotient;
  std::vector<int> total_dims;
  std::vector<MatQ> inclusions;   // sub_m -> total_m
  std::vector<MatQ> projections;  // total_m -> quotient_m

  int depth() const { return static_cast<int>(total_dims.size()); }
  void validate() const;
};

/// Split Tate object with total = sub (+) quotient at every stage.
TateObject split_tate(ProSpace sub, IndSpace quotient);

/// Stage-wise linear dual: directions reverse, maps transpose.
IndSpace pro_dual(const ProSpace& p);
ProSpace pro_dual(const IndSpace& w);

/// Pro-stage towers of the compactly supported coherent cohomology of O(a)
/// on P^1 relative to the boundary divisor of the curve: stage m is the
/// fiber of H(P^1, O(a)) -> (jets of order m along D), with transitions
/// induced by jet truncation.
struct RefinedCompact {
  int twist = 0;
  ProSpace h0c;  // kernels of the jet maps
  ProSpace h1c;  // jet cokernels plus H^1(P^1, O(a))
};
RefinedCompact refined_compact_coherent(int a, const CurveSpec& curve, int depth);

/// Stage-wise Serre duality for the refined towers: the dual of the stage-m
/// fiber must match the pole-order-m filtration stage of sections of the
/// Serre twist O(m|D| - 2 - a) (counted as independent monomials).
struct SerreStageReport {
  int twist = 0;
  std::vector<int> h0c_stage, h1c_stage;      // computed pro-stage dims
  std::vector<int> expected_h1, expected_h0;  // monomial counts of the dual
  bool ok = false;
};
SerreStageReport serre_duality_stage_check(int a, const CurveSpec& curve, int depth);

/// Hodge graded pieces of the refined compactly supported de Rham
/// cohomology for the underlying trivial bundle: piece 0 is the coherent
/// tower of O^r, piece 1 the tower of (omega(D))^r = O(|D|-2)^r shifted one
/// degree up. The combined stage Euler characteristic is stage independent
/// and must equal chi_c of the connection (ConsistencyError otherwise; with
/// the canonical extension this holds for connections whose chi_c is
/// topological, in particular all regular-singular ones).
struct HodgePieces {
  RefinedCompact piece0;  // degrees (0, 1)
  RefinedCompact piece1;  // degrees (1, 2) after the shift
  int stage_chi = 0;      // chi(piece0) - chi(piece1), constant in the stage
  int chi_c = 0;          // from the cone model
};
HodgePieces hodge_pieces(const Connection& e, int depth = 6);

}  // namespace fbx
