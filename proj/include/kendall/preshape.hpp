#pragma once

#include <filesystem>

#include "kendall/linalg.hpp"

namespace kendall {

// k landmarks in R^m stored as the columns of an m x k matrix.
class LandmarkConfiguration {
 public:
  // Throws InvalidArgument unless m >= 1, k >= 3 and every entry is finite.
  explicit LandmarkConfiguration(Matrix points);

  const Matrix& points() const noexcept { return points_; }
  Eigen::Index dim() const noexcept { return points_.rows(); }
  Eigen::Index landmarks() const noexcept { return points_.cols(); }

 private:
  Matrix points_;
};

// Centred, unit Frobenius norm configuration: a point of the pre-shape sphere.
class PreShapePoint {
 public:
  PreShapePoint() = default;

  // Validates zero column sum and unit norm to 1e-12.
  static PreShapePoint from_matrix(Matrix x);
  // For kernels whose output satisfies the invariants by construction.
  static PreShapePoint assume_valid(Matrix x) { return PreShapePoint(std::move(x)); }

  const Matrix& matrix() const noexcept { return entries_; }
  Eigen::Index dim() const noexcept { return entries_.rows(); }
  Eigen::Index landmarks() const noexcept { return entries_.cols(); }

  PreShapePoint operator-() const { return PreShapePoint(-entries_); }

 private:
  explicit PreShapePoint(Matrix x) : entries_(std::move(x)) {}

  Matrix entries_;
};

// m x k matrix tangent to the pre-shape sphere at `base`. The horizontal flag
// is only ever set by operations whose output is horizontal by construction or
// after an explicit certificate check.
class TangentVector {
 public:
  TangentVector() = default;

  // Validates centring and tangency (|<w, x>| <= 1e-12 relative to |w|).
  static TangentVector from_matrix(const PreShapePoint& base, Matrix w);
  static TangentVector assume_valid(const PreShapePoint& base, Matrix w, bool horizontal = false) {
    return TangentVector(base, std::move(w), horizontal);
  }
  static TangentVector zero(const PreShapePoint& base) {
    return TangentVector(base, Matrix::Zero(base.dim(), base.landmarks()), true);
  }

  const PreShapePoint& base() const noexcept { return base_; }
  const Matrix& matrix() const noexcept { return entries_; }
  bool horizontal_certified() const noexcept { return horizontal_; }
  double norm() const { return entries_.norm(); }

  TangentVector scaled(double s) const { return TangentVector(base_, s * entries_, horizontal_); }
  TangentVector operator-() const { return scaled(-1.0); }

 private:
  TangentVector(const PreShapePoint& base, Matrix w, bool horizontal)
      : base_(base), entries_(std::move(w)), horizontal_(horizontal) {}

  PreShapePoint base_;
  Matrix entries_;
  bool horizontal_ = false;
};

// ||x w^T - w x^T||_F; zero exactly when w is horizontal at x.
double horizontality_defect(const Matrix& x, const Matrix& w);

inline constexpr double kHorizontalTolerance = 1e-10;

namespace preshape {

// Removes translation and scale. Throws DegenerateConfiguration when all
// landmarks coincide.
PreShapePoint project(const LandmarkConfiguration& cfg);

// Orthogonal projection of an arbitrary m x k matrix onto T_x: centre the
// columns, then drop the radial component <raw, x> x.
TangentVector to_tangent(const PreShapePoint& x, const Matrix& raw);

PreShapePoint exp(const PreShapePoint& x, const TangentVector& w);
PreShapePoint exp(const PreShapePoint& x, const Matrix& w);

// Throws AntipodalPoints when <x, y> <= -1 + 1e-10.
TangentVector log(const PreShapePoint& x, const PreShapePoint& y);

// Great-circle distance in [0, pi].
double dist(const PreShapePoint& x, const PreShapePoint& y);

// Velocity of t -> exp(x, t w) at time t.
Matrix geodesic_velocity(const PreShapePoint& x, const Matrix& w, double t);

// Ver_x(w) = A x with A the skew solution of A x x^T + x x^T A = w x^T - x w^T.
TangentVector vertical_projection(const PreShapePoint& x, const TangentVector& w);
// w - Ver_x(w); certified horizontal.
TangentVector horizontal_projection(const PreShapePoint& x, const TangentVector& w);

Rotation optimal_rotation(const PreShapePoint& x, const PreShapePoint& y);

// omega(x, y) = R y, the rotated copy of y closest to x.
PreShapePoint align(const PreShapePoint& x, const PreShapePoint& y);

}  // namespace preshape

// Landmark CSV: one landmark per row, m comma-separated coordinates, no header.
LandmarkConfiguration read_landmarks_csv(const std::filesystem::path& path);
// Same layout, 17 significant digits.
void write_landmarks_csv(const Matrix& points, const std::filesystem::path& path);

}  // namespace kendall
