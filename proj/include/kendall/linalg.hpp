#pragma once

#include <Eigen/Dense>

namespace kendall {

using Matrix = Eigen::MatrixXd;

// Relative threshold under which an eigenvalue or singular value counts as zero.
inline constexpr double kRankTolerance = 1e-9;

inline double inner(const Matrix& a, const Matrix& b) { return (a.array() * b.array()).sum(); }

// m x m skew-symmetric matrix. Only the strict upper triangle of the input is
// read; the lower triangle is its negated mirror and the diagonal is zero, so
// A + A^T == 0 holds bit for bit.
class SkewMatrix {
 public:
  SkewMatrix() = default;
  explicit SkewMatrix(const Matrix& upper);

  static SkewMatrix zero(Eigen::Index m) { return SkewMatrix(Matrix::Zero(m, m)); }

  const Matrix& matrix() const noexcept { return entries_; }
  Eigen::Index dim() const noexcept { return entries_.rows(); }

 private:
  Matrix entries_;
};

// Element of SO(m).
class Rotation {
 public:
  Rotation() = default;

  // Throws InvalidArgument unless R^T R = I and det R = 1 to within 1e-12.
  static Rotation from_matrix(const Matrix& r);
  static Rotation identity(Eigen::Index m) { return Rotation(Matrix::Identity(m, m)); }

  const Matrix& matrix() const noexcept { return entries_; }
  Eigen::Index dim() const noexcept { return entries_.rows(); }

  Matrix apply(const Matrix& y) const { return entries_ * y; }

 private:
  explicit Rotation(Matrix r) : entries_(std::move(r)) {}
  friend Rotation optimal_rotation(const Matrix& x, const Matrix& y);

  Matrix entries_;
};

// Spectral data of S = x x^T, reusable for several right-hand sides at the
// same base point.
struct GramSpectrum {
  Eigen::VectorXd eigenvalues;  // ascending
  Matrix eigenvectors;

  // Throws RankDeficient if two or more eigenvalues fall below the rank tolerance.
  static GramSpectrum of(const Matrix& x);
};

// Unique skew A with A S + S A = rhs, where rhs must be skew. Solved in the
// eigenbasis of S, where the equation is diagonal: A~_ij (l_i + l_j) = C~_ij.
SkewMatrix solve_sylvester_skew_rhs(const GramSpectrum& spectrum, const Matrix& rhs);

// Solves A x x^T + x x^T A = w x^T - x w^T for skew A. Requires rank(x) >= m-1.
SkewMatrix solve_sylvester_skew(const Matrix& x, const Matrix& w);

// Rotation R maximising <x, R y>, i.e. minimising ||x - R y||. Kabsch
// construction from the SVD of x y^T, flipping the weakest singular direction
// when needed to land in SO(m). Throws AmbiguousAlignment when that flip is
// not uniquely determined.
Rotation optimal_rotation(const Matrix& x, const Matrix& y);

}  // namespace kendall
