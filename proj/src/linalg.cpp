#include "kendall/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "kendall/error.hpp"

namespace kendall {

SkewMatrix::SkewMatrix(const Matrix& upper) : entries_(Matrix::Zero(upper.rows(), upper.cols())) {
  if (upper.rows() != upper.cols()) {
    throw Error(ErrorKind::kInvalidArgument, "skew matrix must be square");
  }
  const Eigen::Index m = upper.rows();
  for (Eigen::Index i = 0; i < m; ++i) {
    for (Eigen::Index j = i + 1; j < m; ++j) {
      entries_(i, j) = upper(i, j);
      entries_(j, i) = -upper(i, j);
    }
  }
}

Rotation Rotation::from_matrix(const Matrix& r) {
  if (r.rows() != r.cols()) {
    throw Error(ErrorKind::kInvalidArgument, "rotation must be square");
  }
  const Matrix gram = r.transpose() * r;
  const double orth_err = (gram - Matrix::Identity(r.rows(), r.cols())).cwiseAbs().maxCoeff();
  const double det = r.determinant();
  if (orth_err > 1e-12 || std::abs(det - 1.0) > 1e-12) {
    std::ostringstream os;
    os << "matrix is not in SO(" << r.rows() << "): orthogonality error " << orth_err
       << ", det " << det;
    throw Error(ErrorKind::kInvalidArgument, os.str());
  }
  return Rotation(r);
}

GramSpectrum GramSpectrum::of(const Matrix& x) {
  const Matrix s = x * x.transpose();
  Eigen::SelfAdjointEigenSolver<Matrix> eig(s);
  if (eig.info() != Eigen::Success) {
    throw Error(ErrorKind::kNumericalFailure, "eigendecomposition of x x^T did not converge");
  }
  GramSpectrum out{eig.eigenvalues(), eig.eigenvectors()};
  const Eigen::Index m = out.eigenvalues.size();
  if (m >= 2) {
    const double cutoff = kRankTolerance * out.eigenvalues(m - 1);
    // Ascending order: the two smallest decide whether l_i + l_j can vanish.
    if (out.eigenvalues(1) < cutoff) {
      std::ostringstream os;
      os << "x x^T has eigenvalues " << out.eigenvalues(0) << ", " << out.eigenvalues(1)
         << " below " << cutoff << "; rank(x) < m-1";
      throw Error(ErrorKind::kRankDeficient, os.str());
    }
  }
  return out;
}

SkewMatrix solve_sylvester_skew_rhs(const GramSpectrum& spectrum, const Matrix& rhs) {
  const Matrix& u = spectrum.eigenvectors;
  const Eigen::VectorXd& lambda = spectrum.eigenvalues;
  const Eigen::Index m = lambda.size();
  const Matrix c = u.transpose() * rhs * u;
  Matrix a_tilde = Matrix::Zero(m, m);
  for (Eigen::Index i = 0; i < m; ++i) {
    for (Eigen::Index j = i + 1; j < m; ++j) {
      // Skewness of rhs is preserved by the orthogonal change of basis.
      const double cij = 0.5 * (c(i, j) - c(j, i));
      a_tilde(i, j) = cij / (lambda(i) + lambda(j));
      a_tilde(j, i) = -a_tilde(i, j);
    }
  }
  return SkewMatrix(u * a_tilde * u.transpose());
}

SkewMatrix solve_sylvester_skew(const Matrix& x, const Matrix& w) {
  if (x.rows() != w.rows() || x.cols() != w.cols()) {
    throw Error(ErrorKind::kInvalidArgument, "x and w must have the same shape");
  }
  const Matrix rhs = w * x.transpose() - x * w.transpose();
  return solve_sylvester_skew_rhs(GramSpectrum::of(x), rhs);
}

Rotation optimal_rotation(const Matrix& x, const Matrix& y) {
  if (x.rows() != y.rows() || x.cols() != y.cols()) {
    throw Error(ErrorKind::kInvalidArgument, "x and y must have the same shape");
  }
  const Eigen::Index m = x.rows();
  if (m == 1) return Rotation::identity(1);

  const Matrix n = x * y.transpose();
  Eigen::JacobiSVD<Matrix> svd(n, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const Matrix& p = svd.matrixU();
  const Matrix& q = svd.matrixV();
  const Eigen::VectorXd& sigma = svd.singularValues();  // descending

  const double cutoff = kRankTolerance * std::max(sigma(0), std::numeric_limits<double>::min());
  const double det = (p * q.transpose()).determinant();
  const bool flip = det < 0.0;
  // Two vanishing singular values leave a free rotation; with a reflection to
  // undo, a tie between the two smallest ones leaves the flip axis free.
  if (sigma(m - 2) < cutoff || (flip && sigma(m - 2) - sigma(m - 1) < cutoff)) {
    std::ostringstream os;
    os << "optimal rotation is not unique (sigma_{m-1}=" << sigma(m - 2)
       << ", sigma_m=" << sigma(m - 1) << ", det(PQ^T)=" << det << ")";
    throw Error(ErrorKind::kAmbiguousAlignment, os.str());
  }

  Eigen::VectorXd d = Eigen::VectorXd::Ones(m);
  if (flip) d(m - 1) = -1.0;
  return Rotation(p * d.asDiagonal() * q.transpose());
}

}  // namespace kendall
