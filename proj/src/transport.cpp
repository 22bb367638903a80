#include "kendall/transport.hpp"

#include <cmath>
#include <sstream>

#include "kendall/error.hpp"

namespace kendall {

std::string_view to_string(TransportMethod method) {
  switch (method) {
    case TransportMethod::kEuler: return "euler";
    case TransportMethod::kRK2: return "rk2";
    case TransportMethod::kRK4: return "rk4";
    case TransportMethod::kPoleLadder: return "pole";
  }
  return "unknown";
}

std::optional<TransportMethod> parse_method(std::string_view name) {
  for (auto m : {TransportMethod::kEuler, TransportMethod::kRK2, TransportMethod::kRK4,
                 TransportMethod::kPoleLadder}) {
    if (name == to_string(m)) return m;
  }
  return std::nullopt;
}

TransportProblem::TransportProblem(ShapeRepresentative x, TangentVector w, TangentVector v, int n)
    : x_(std::move(x)), w_(std::move(w)), v_(std::move(v)), n_(n) {
  if (n_ < 1) throw Error(ErrorKind::kInvalidArgument, "step count must be at least 1");
  if (!w_.horizontal_certified() || !v_.horizontal_certified()) {
    throw Error(ErrorKind::kInvalidArgument, "v and w must be certified horizontal at x");
  }
  const auto& xm = x_.matrix();
  if (w_.matrix().rows() != xm.rows() || w_.matrix().cols() != xm.cols() ||
      v_.matrix().rows() != xm.rows() || v_.matrix().cols() != xm.cols()) {
    throw Error(ErrorKind::kInvalidArgument, "v and w must have the shape of x");
  }
}

GeodesicState geodesic_state(const PreShapePoint& x, const TangentVector& w, double s) {
  PreShapePoint point = preshape::exp(x, s * w.matrix());
  Matrix velocity = preshape::geodesic_velocity(x, w.matrix(), s);
  TangentVector tv = TangentVector::assume_valid(point, std::move(velocity), w.horizontal_certified());
  return {std::move(point), std::move(tv)};
}

Matrix transport_ode_rhs(const PreShapePoint& gamma, const Matrix& gamma_dot, const Matrix& v) {
  const Matrix& g = gamma.matrix();
  const Matrix skew_rhs = gamma_dot * v.transpose() - v * gamma_dot.transpose();
  const SkewMatrix a = solve_sylvester_skew_rhs(GramSpectrum::of(g), skew_rhs);
  return -inner(gamma_dot, v) * g + a.matrix() * g;
}

namespace {

Matrix rhs_at(const PreShapePoint& x, const TangentVector& w, double s, const Matrix& v) {
  const GeodesicState st = geodesic_state(x, w, s);
  return transport_ode_rhs(st.point, st.velocity.matrix(), v);
}

TangentVector project_horizontal(const PreShapePoint& at, const Matrix& v) {
  return preshape::horizontal_projection(at, preshape::to_tangent(at, v));
}

}  // namespace

TransportResult transport_integrated(const TransportProblem& problem, TransportMethod scheme) {
  const PreShapePoint& x = problem.start().rep();
  const TangentVector& w = problem.velocity();
  const int n = problem.steps();
  const double h = 1.0 / n;

  Matrix v = problem.vector().matrix();
  switch (scheme) {
    case TransportMethod::kEuler:
      for (int i = 0; i < n; ++i) {
        const double s = i * h;
        v += h * rhs_at(x, w, s, v);
        const PreShapePoint next = geodesic_state(x, w, (i + 1) * h).point;
        v = project_horizontal(next, v).matrix();
      }
      break;
    case TransportMethod::kRK2:
      for (int i = 0; i < n; ++i) {
        const double s = i * h;
        const Matrix k1 = rhs_at(x, w, s, v);
        const Matrix k2 = rhs_at(x, w, s + 0.5 * h, v + 0.5 * h * k1);
        v += h * k2;
      }
      break;
    case TransportMethod::kRK4:
      for (int i = 0; i < n; ++i) {
        const double s = i * h;
        const Matrix k1 = rhs_at(x, w, s, v);
        const Matrix k2 = rhs_at(x, w, s + 0.5 * h, v + 0.5 * h * k1);
        const Matrix k3 = rhs_at(x, w, s + 0.5 * h, v + 0.5 * h * k2);
        const Matrix k4 = rhs_at(x, w, s + h, v + h * k3);
        v += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
      }
      break;
    case TransportMethod::kPoleLadder:
      throw Error(ErrorKind::kInvalidArgument, "pole ladder is not an integration scheme");
  }

  ShapeRepresentative endpoint(preshape::exp(x, w));
  TangentVector transported = project_horizontal(endpoint.rep(), v);
  return {std::move(endpoint), std::move(transported), scheme, n};
}

TransportResult pole_ladder(const TransportProblem& problem, double alpha) {
  if (!(alpha >= 1.0)) {
    std::ostringstream os;
    os << "ladder exponent must be >= 1, got " << alpha;
    throw Error(ErrorKind::kInvalidArgument, os.str());
  }
  const ShapeRepresentative& x = problem.start();
  const TangentVector& w = problem.velocity();
  const int n = problem.steps();
  const double scale = std::pow(static_cast<double>(n), alpha);

  ShapeRepresentative rung_end = quotient::exp(x, problem.vector().scaled(1.0 / scale));
  for (int i = 0; i < n; ++i) {
    const double t = (2.0 * i + 1.0) / (2.0 * n);
    const ShapeRepresentative mid = quotient::exp(x, w.scaled(t));
    const TangentVector diagonal = quotient::log(mid, rung_end);
    rung_end = quotient::exp(mid, -diagonal);
  }

  ShapeRepresentative endpoint = quotient::exp(x, w);
  const double sign = (n % 2 == 0) ? 1.0 : -1.0;
  TangentVector transported = quotient::log(endpoint, rung_end).scaled(sign * scale);
  return {std::move(endpoint), std::move(transported), TransportMethod::kPoleLadder, n};
}

TransportResult transport(const TransportProblem& problem, TransportMethod method, double alpha) {
  if (method == TransportMethod::kPoleLadder) return pole_ladder(problem, alpha);
  return transport_integrated(problem, method);
}

}  // namespace kendall
