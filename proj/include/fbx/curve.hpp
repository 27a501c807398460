#pragma once

#include <optional>
#include <string>
#include <vector>

#include "fbx/rat.hpp"

namespace fbx {

/// X = P^1 minus D where D = {c_1, ..., c_m, infinity}. The point at
/// infinity is always removed, so X = Spec Q[t, 1/q] with q = prod (t - c_i).
struct CurveSpec {
  std::vector<Rat> finite_points;
  bool include_infinity = true;

  CurveSpec() = default;
  explicit CurveSpec(std::vector<Rat> pts);

  int num_finite() const { return static_cast<int>(finite_points.size()); }
  int num_points() const { return num_finite() + 1; }
  bool operator==(const CurveSpec& o) const { return finite_points == o.finite_points; }
};

/// A point of the boundary divisor with its local parameter:
/// s = t - c at a finite point, s = 1/t at infinity.
struct DivisorPoint {
  bool at_infinity = false;
  Rat location;       // meaningful when !at_infinity
  int finite_index = -1;  // index into CurveSpec::finite_points, -1 at infinity

  static DivisorPoint finite(int index, Rat c) {
    DivisorPoint p;
    p.at_infinity = false;
    p.location = std::move(c);
    p.finite_index = index;
    return p;
  }
  static DivisorPoint infinity() {
    DivisorPoint p;
    p.at_infinity = true;
    return p;
  }

  std::string str() const { return at_infinity ? "inf" : location.get_str(); }
};

/// All points of D in a fixed order: finite points first, then infinity.
std::vector<DivisorPoint> boundary_points(const CurveSpec& curve);

}  // namespace fbx
