#pragma once

#include <optional>
#include <string_view>

#include "kendall/quotient.hpp"

namespace kendall {

enum class TransportMethod { kEuler, kRK2, kRK4, kPoleLadder };

std::string_view to_string(TransportMethod method);
std::optional<TransportMethod> parse_method(std::string_view name);

// Transport of v along the horizontal geodesic t -> exp(x, t w), t in [0, 1].
class TransportProblem {
 public:
  // Throws InvalidArgument unless v and w are certified horizontal at x and n >= 1.
  TransportProblem(ShapeRepresentative x, TangentVector w, TangentVector v, int n);

  const ShapeRepresentative& start() const noexcept { return x_; }
  const TangentVector& velocity() const noexcept { return w_; }
  const TangentVector& vector() const noexcept { return v_; }
  int steps() const noexcept { return n_; }

  TransportProblem with_steps(int n) const { return TransportProblem(x_, w_, v_, n); }

 private:
  ShapeRepresentative x_;
  TangentVector w_;
  TangentVector v_;
  int n_;
};

struct TransportResult {
  ShapeRepresentative endpoint;  // exp(x, w)
  TangentVector transported;     // tangent and horizontal at endpoint
  TransportMethod method;
  int n;
};

struct GeodesicState {
  PreShapePoint point;
  TangentVector velocity;
};

// gamma(s) = exp(x, s w) and its analytic velocity.
GeodesicState geodesic_state(const PreShapePoint& x, const TangentVector& w, double s);

// Right-hand side of the horizontal transport ODE along gamma:
//   v' = -<gamma', v> gamma + A gamma,  A gamma gamma^T + gamma gamma^T A = gamma' v^T - v gamma'^T.
// The A gamma term is the vertical correction that keeps v horizontal.
Matrix transport_ode_rhs(const PreShapePoint& gamma, const Matrix& gamma_dot, const Matrix& v);

// Fixed-step integration with step 1/n along exact geodesic states.
// Euler re-projects v onto the tangent and horizontal spaces after every step;
// RK2 (explicit midpoint) and RK4 (classical) project once at the end.
TransportResult transport_integrated(const TransportProblem& problem, TransportMethod scheme);

inline constexpr double kDefaultLadderExponent = 2.0;

// Pole ladder with n rungs built from quotient geodesics. The transported
// vector is shrunk by n^alpha before the first rung and rescaled at the end.
TransportResult pole_ladder(const TransportProblem& problem, double alpha = kDefaultLadderExponent);

// Dispatches to one of the two above.
TransportResult transport(const TransportProblem& problem, TransportMethod method,
                          double alpha = kDefaultLadderExponent);

}  // namespace kendall
