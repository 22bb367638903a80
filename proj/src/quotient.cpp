#include "kendall/quotient.hpp"

namespace kendall {

ShapeRepresentative::ShapeRepresentative(PreShapePoint x) : rep_(std::move(x)) {
  (void)GramSpectrum::of(rep_.matrix());
}

namespace quotient {

ShapeRepresentative exp(const ShapeRepresentative& x, const TangentVector& v) {
  if (v.horizontal_certified()) return ShapeRepresentative(preshape::exp(x.rep(), v));
  return ShapeRepresentative(preshape::exp(x.rep(), preshape::horizontal_projection(x.rep(), v)));
}

TangentVector log(const ShapeRepresentative& x, const ShapeRepresentative& y) {
  const PreShapePoint aligned = preshape::align(x.rep(), y.rep());
  // x omega^T is symmetric, and so is x x^T, hence log_x(omega) is horizontal.
  const TangentVector w = preshape::log(x.rep(), aligned);
  return TangentVector::assume_valid(x.rep(), w.matrix(), true);
}

double dist(const ShapeRepresentative& x, const ShapeRepresentative& y) {
  return preshape::dist(x.rep(), preshape::align(x.rep(), y.rep()));
}

}  // namespace quotient
}  // namespace kendall
