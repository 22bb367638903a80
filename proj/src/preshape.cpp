#include "kendall/preshape.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "kendall/error.hpp"

namespace kendall {

namespace {

constexpr double kInvariantTolerance = 1e-12;
constexpr double kAntipodalCutoff = -1.0 + 1e-10;
constexpr double kSmallAngle = 1e-9;

Matrix centred(const Matrix& raw) { return raw.colwise() - raw.rowwise().mean(); }

double parse_number(std::string_view field, const std::filesystem::path& path, std::size_t line_no) {
  const auto b = field.find_first_not_of(" \t");
  const auto e = field.find_last_not_of(" \t");
  double value = 0.0;
  if (b != std::string_view::npos) {
    const char* first = field.data() + b;
    const char* last = field.data() + e + 1;
    const auto [ptr, ec] = std::from_chars(first, last, value);
    if (ec == std::errc() && ptr == last) return value;
  }
  throw Error(ErrorKind::kIoFailure, path.string() + ":" + std::to_string(line_no) +
                                         ": malformed number '" + std::string(field) + "'");
}

}  // namespace

LandmarkConfiguration::LandmarkConfiguration(Matrix points) : points_(std::move(points)) {
  if (points_.rows() < 1 || points_.cols() < 3) {
    std::ostringstream os;
    os << "need m >= 1 and k >= 3, got m=" << points_.rows() << ", k=" << points_.cols();
    throw Error(ErrorKind::kInvalidArgument, os.str());
  }
  if (!points_.allFinite()) {
    throw Error(ErrorKind::kInvalidArgument, "landmark coordinates must be finite");
  }
}

PreShapePoint PreShapePoint::from_matrix(Matrix x) {
  const double col_sum = x.rowwise().sum().norm();
  const double norm_err = std::abs(x.norm() - 1.0);
  if (!x.allFinite() || col_sum > kInvariantTolerance || norm_err > kInvariantTolerance) {
    std::ostringstream os;
    os << "not a pre-shape: |sum of columns| = " << col_sum << ", |norm - 1| = " << norm_err;
    throw Error(ErrorKind::kInvalidArgument, os.str());
  }
  return PreShapePoint(std::move(x));
}

TangentVector TangentVector::from_matrix(const PreShapePoint& base, Matrix w) {
  if (w.rows() != base.dim() || w.cols() != base.landmarks()) {
    throw Error(ErrorKind::kInvalidArgument, "tangent vector shape does not match its base");
  }
  const double scale = std::max(1.0, w.norm());
  const double col_sum = w.rowwise().sum().norm();
  const double radial = std::abs(inner(w, base.matrix()));
  if (col_sum > kInvariantTolerance * scale || radial > kInvariantTolerance * scale) {
    std::ostringstream os;
    os << "not tangent: |sum of columns| = " << col_sum << ", |<w, x>| = " << radial;
    throw Error(ErrorKind::kInvalidArgument, os.str());
  }
  const bool horizontal = horizontality_defect(base.matrix(), w) <= kHorizontalTolerance;
  return TangentVector(base, std::move(w), horizontal);
}

double horizontality_defect(const Matrix& x, const Matrix& w) {
  const Matrix xw = x * w.transpose();
  return (xw - xw.transpose()).norm();
}

namespace preshape {

PreShapePoint project(const LandmarkConfiguration& cfg) {
  Matrix x = centred(cfg.points());
  const double size = x.norm();
  if (!(size > kInvariantTolerance)) {
    throw Error(ErrorKind::kDegenerateConfiguration, "all landmarks coincide");
  }
  x /= size;
  return PreShapePoint::assume_valid(std::move(x));
}

TangentVector to_tangent(const PreShapePoint& x, const Matrix& raw) {
  if (raw.rows() != x.dim() || raw.cols() != x.landmarks()) {
    throw Error(ErrorKind::kInvalidArgument, "matrix shape does not match the base point");
  }
  Matrix w = centred(raw);
  w -= inner(w, x.matrix()) * x.matrix();
  return TangentVector::assume_valid(x, std::move(w));
}

PreShapePoint exp(const PreShapePoint& x, const Matrix& w) {
  const double theta = w.norm();
  if (theta == 0.0) return x;
  Matrix y;
  if (theta < kSmallAngle) {
    // cos t = 1 - O(t^2), sin t / t = 1 - O(t^2)
    y = x.matrix() + w;
  } else {
    y = std::cos(theta) * x.matrix() + (std::sin(theta) / theta) * w;
  }
  y /= y.norm();
  return PreShapePoint::assume_valid(std::move(y));
}

PreShapePoint exp(const PreShapePoint& x, const TangentVector& w) { return exp(x, w.matrix()); }

TangentVector log(const PreShapePoint& x, const PreShapePoint& y) {
  if (x.matrix() == y.matrix()) return TangentVector::zero(x);
  const double c = inner(x.matrix(), y.matrix());
  if (c <= kAntipodalCutoff) {
    throw Error(ErrorKind::kAntipodalPoints, "log is undefined between antipodal pre-shapes");
  }
  Matrix u = y.matrix() - c * x.matrix();
  const double nu = u.norm();
  if (nu == 0.0) return TangentVector::zero(x);
  // atan2 keeps full relative accuracy for nearby points, where acos(c) loses half the digits.
  const double theta = std::atan2(nu, c);
  u *= theta / nu;
  return TangentVector::assume_valid(x, std::move(u));
}

double dist(const PreShapePoint& x, const PreShapePoint& y) {
  if (x.matrix() == y.matrix()) return 0.0;
  const double c = inner(x.matrix(), y.matrix());
  const double nu = (y.matrix() - c * x.matrix()).norm();
  return std::atan2(nu, c);
}

Matrix geodesic_velocity(const PreShapePoint& x, const Matrix& w, double t) {
  const double speed = w.norm();
  return std::cos(t * speed) * w - speed * std::sin(t * speed) * x.matrix();
}

TangentVector vertical_projection(const PreShapePoint& x, const TangentVector& w) {
  const SkewMatrix a = solve_sylvester_skew(x.matrix(), w.matrix());
  return TangentVector::assume_valid(x, a.matrix() * x.matrix());
}

TangentVector horizontal_projection(const PreShapePoint& x, const TangentVector& w) {
  const SkewMatrix a = solve_sylvester_skew(x.matrix(), w.matrix());
  return TangentVector::assume_valid(x, w.matrix() - a.matrix() * x.matrix(), true);
}

Rotation optimal_rotation(const PreShapePoint& x, const PreShapePoint& y) {
  return kendall::optimal_rotation(x.matrix(), y.matrix());
}

PreShapePoint align(const PreShapePoint& x, const PreShapePoint& y) {
  return PreShapePoint::assume_valid(optimal_rotation(x, y).apply(y.matrix()));
}

}  // namespace preshape

LandmarkConfiguration read_landmarks_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::kIoFailure, "cannot open " + path.string());

  std::vector<std::vector<double>> rows;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos) continue;
    std::vector<double> row;
    std::istringstream fields(line);
    std::string field;
    while (std::getline(fields, field, ',')) {
      row.push_back(parse_number(field, path, line_no));
    }
    if (line.back() == ',') row.push_back(parse_number("", path, line_no));
    if (!rows.empty() && row.size() != rows.front().size()) {
      throw Error(ErrorKind::kIoFailure, path.string() + ":" + std::to_string(line_no) +
                                             ": inconsistent column count");
    }
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw Error(ErrorKind::kIoFailure, path.string() + ": no landmarks");

  const auto m = static_cast<Eigen::Index>(rows.front().size());
  const auto k = static_cast<Eigen::Index>(rows.size());
  Matrix points(m, k);
  for (Eigen::Index j = 0; j < k; ++j) {
    for (Eigen::Index i = 0; i < m; ++i) points(i, j) = rows[j][i];
  }
  return LandmarkConfiguration(std::move(points));
}

void write_landmarks_csv(const Matrix& points, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorKind::kIoFailure, "cannot open " + path.string() + " for writing");
  char buf[32];
  for (Eigen::Index j = 0; j < points.cols(); ++j) {
    for (Eigen::Index i = 0; i < points.rows(); ++i) {
      std::snprintf(buf, sizeof buf, "%.16e", points(i, j));
      if (i > 0) out << ',';
      out << buf;
    }
    out << '\n';
  }
  if (!out) throw Error(ErrorKind::kIoFailure, "write to " + path.string() + " failed");
}

}  // namespace kendall
