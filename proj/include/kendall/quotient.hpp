#pragma once

#include "kendall/preshape.hpp"

namespace kendall {

// A pre-shape standing in for its shape [x] = {R x : R in SO(m)}. Tangent
// vectors of the shape space are represented by horizontal vectors at rep().
class ShapeRepresentative {
 public:
  ShapeRepresentative() = default;
  // Throws RankDeficient when rank(x) < m-1 (singular shapes are not handled).
  explicit ShapeRepresentative(PreShapePoint x);

  const PreShapePoint& rep() const noexcept { return rep_; }
  const Matrix& matrix() const noexcept { return rep_.matrix(); }

 private:
  PreShapePoint rep_;
};

namespace quotient {

// exp_x(hor_x(v)); the horizontal projection is skipped for certified input.
ShapeRepresentative exp(const ShapeRepresentative& x, const TangentVector& v);

// log_x(omega(x, y)), certified horizontal at x.
TangentVector log(const ShapeRepresentative& x, const ShapeRepresentative& y);

// inf over R in SO(m) of dist(x, R y).
double dist(const ShapeRepresentative& x, const ShapeRepresentative& y);

}  // namespace quotient
}  // namespace kendall
