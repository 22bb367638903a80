#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "kendall/error.hpp"
#include "kendall/transport.hpp"
#include "test_support.hpp"

namespace kendall {
namespace {

using testing::random_horizontal;
using testing::random_preshape;

constexpr TransportMethod kAllMethods[] = {TransportMethod::kEuler, TransportMethod::kRK2,
                                           TransportMethod::kRK4, TransportMethod::kPoleLadder};

// Unit, mutually orthogonal horizontal v and w at a random x.
TransportProblem make_problem(int m, int k, std::mt19937_64& rng, int n = 1) {
  const ShapeRepresentative x(random_preshape(m, k, rng));
  Matrix w = random_horizontal(x.rep(), rng).matrix();
  w /= w.norm();
  Matrix v = random_horizontal(x.rep(), rng).matrix();
  v -= inner(v, w) * w;
  v /= v.norm();
  return TransportProblem(x, TangentVector::assume_valid(x.rep(), w, true),
                          TangentVector::assume_valid(x.rep(), v, true), n);
}

Matrix reference(const TransportProblem& p, int n_ref = 1100) {
  return transport_integrated(p.with_steps(n_ref), TransportMethod::kRK4).transported.matrix();
}

double error_of(const TransportProblem& p, TransportMethod method, int n, const Matrix& ref) {
  return (transport(p.with_steps(n), method).transported.matrix() - ref).norm();
}

double loglog_slope(const std::vector<int>& ns, const std::vector<double>& errs) {
  double mx = 0, my = 0;
  int count = 0;
  for (std::size_t i = 0; i < ns.size(); ++i) {
    if (errs[i] <= 1e-13) continue;
    mx += std::log(ns[i]);
    my += std::log(errs[i]);
    ++count;
  }
  mx /= count;
  my /= count;
  double sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < ns.size(); ++i) {
    if (errs[i] <= 1e-13) continue;
    sxx += (std::log(ns[i]) - mx) * (std::log(ns[i]) - mx);
    sxy += (std::log(ns[i]) - mx) * (std::log(errs[i]) - my);
  }
  return sxy / sxx;
}

TEST(TransportProblem, RequiresHorizontalInputs) {
  std::mt19937_64 rng(40);
  const ShapeRepresentative x(random_preshape(3, 4, rng));
  const TangentVector raw = testing::random_tangent(x.rep(), rng);
  const TangentVector h = random_horizontal(x.rep(), rng);
  EXPECT_THROW(TransportProblem(x, raw, h, 10), Error);
  EXPECT_THROW(TransportProblem(x, h, h, 0), Error);
}

TEST(GeodesicState, EndpointsAndConstantSpeed) {
  std::mt19937_64 rng(41);
  const TransportProblem p = make_problem(3, 4, rng);
  const auto& x = p.start().rep();
  const GeodesicState s0 = geodesic_state(x, p.velocity(), 0.0);
  EXPECT_LT((s0.point.matrix() - x.matrix()).norm(), 1e-15);
  EXPECT_LT((s0.velocity.matrix() - p.velocity().matrix()).norm(), 1e-15);
  const GeodesicState s1 = geodesic_state(x, p.velocity(), 1.0);
  EXPECT_LT((s1.point.matrix() - preshape::exp(x, p.velocity()).matrix()).norm(), 1e-15);
  EXPECT_NEAR(s1.velocity.norm(), p.velocity().norm(), 1e-12);
}

TEST(GeodesicState, VelocityMatchesFiniteDifference) {
  std::mt19937_64 rng(42);
  for (int trial = 0; trial < 10; ++trial) {
    const TransportProblem p = make_problem(3, 4, rng);
    const auto& x = p.start().rep();
    const Matrix& w = p.velocity().matrix();
    constexpr double h = 1e-5, s = 0.5;
    const Matrix fd =
        (preshape::exp(x, (s + h) * w).matrix() - preshape::exp(x, (s - h) * w).matrix()) / (2 * h);
    EXPECT_LT((geodesic_state(x, p.velocity(), s).velocity.matrix() - fd).norm(), 1e-8);
  }
}

TEST(TransportOdeRhs, VanishingSylvesterTerm) {
  std::mt19937_64 rng(43);
  const TransportProblem p = make_problem(3, 5, rng);
  const auto& x = p.start().rep();
  const Matrix& w = p.velocity().matrix();
  const Matrix rhs = transport_ode_rhs(x, w, w);
  EXPECT_LT((rhs + w.squaredNorm() * x.matrix()).norm(), 1e-14);
  // v w^T symmetric: v = 2.5 w.
  const Matrix v = 2.5 * w;
  const Matrix rhs2 = transport_ode_rhs(x, w, v);
  EXPECT_LT((rhs2 + inner(w, v) * x.matrix()).norm(), 1e-14);
}

TEST(TransportOdeRhs, PreservesTangency) {
  std::mt19937_64 rng(44);
  for (int trial = 0; trial < 50; ++trial) {
    const TransportProblem p = make_problem(3, 4, rng);
    const auto st = geodesic_state(p.start().rep(), p.velocity(), 0.37);
    const Matrix v = random_horizontal(st.point, rng).matrix();
    const Matrix rhs = transport_ode_rhs(st.point, st.velocity.matrix(), v);
    EXPECT_LT(std::abs(inner(rhs, st.point.matrix()) + inner(v, st.velocity.matrix())), 1e-10);
  }
}

TEST(TransportIntegrated, VelocityIsSelfTransported) {
  std::mt19937_64 rng(45);
  const TransportProblem base = make_problem(3, 4, rng);
  const TransportProblem p(base.start(), base.velocity(), base.velocity(), 100);
  const Matrix expected = preshape::geodesic_velocity(p.start().rep(), p.velocity().matrix(), 1.0);
  for (const auto method : kAllMethods) {
    const TransportResult r = transport(p, method);
    // Euler inflates the norm by (1 + h^2)^(n/2) ~ 1 + 1/(2n) on this problem.
    const double tol = method == TransportMethod::kEuler ? 0.51 / 100 : 5e-3;
    EXPECT_LT((r.transported.matrix() - expected).norm(), tol) << to_string(method);
  }
}

TEST(TransportIntegrated, ZeroStaysZero) {
  std::mt19937_64 rng(46);
  const TransportProblem base = make_problem(3, 4, rng);
  const TransportProblem p(base.start(), base.velocity(), TangentVector::zero(base.start().rep()),
                           1);
  for (const int n : {1, 7, 50}) {
    for (const auto method : {TransportMethod::kEuler, TransportMethod::kRK2, TransportMethod::kRK4}) {
      EXPECT_EQ(transport(p.with_steps(n), method).transported.norm(), 0.0) << to_string(method);
    }
  }
}

TEST(TransportIntegrated, EulerErrorHalvesWhenStepsDouble) {
  std::mt19937_64 rng(47);
  double ratio_sum = 0;
  for (int trial = 0; trial < 10; ++trial) {
    const TransportProblem p = make_problem(3, 4, rng);
    const Matrix ref = reference(p);
    ratio_sum += error_of(p, TransportMethod::kEuler, 100, ref) /
                 error_of(p, TransportMethod::kEuler, 200, ref);
  }
  const double ratio = ratio_sum / 10;
  EXPECT_GE(ratio, 1.7);
  EXPECT_LE(ratio, 2.3);
}

TEST(TransportIntegrated, ReferenceIsConverged) {
  std::mt19937_64 rng(48);
  const TransportProblem p = make_problem(3, 4, rng);
  EXPECT_LT((reference(p) - reference(p, 2200)).norm(), 1e-10);
}

TEST(PoleLadder, ZeroVectorStaysAtRoundOff) {
  // Every diagonal lies on the main geodesic; only rounding in the rungs
  // remains, amplified by the final n^alpha rescaling.
  std::mt19937_64 rng(49);
  const TransportProblem base = make_problem(3, 4, rng);
  const TransportProblem p(base.start(), base.velocity(), TangentVector::zero(base.start().rep()),
                           1);
  for (const int n : {1, 5, 50}) {
    EXPECT_LT(pole_ladder(p.with_steps(n)).transported.norm(), 1e-15 * std::pow(n, 3.0) + 1e-15);
  }
}

TEST(PoleLadder, RejectsSmallExponent) {
  std::mt19937_64 rng(50);
  EXPECT_THROW(pole_ladder(make_problem(3, 4, rng, 3), 0.5), Error);
}

TEST(PoleLadder, OneRungIsExactForPlanarShapes) {
  std::mt19937_64 rng(51);
  for (int k = 3; k <= 6; ++k) {
    for (int trial = 0; trial < 5; ++trial) {
      const TransportProblem p = make_problem(2, k, rng);
      const double err = error_of(p, TransportMethod::kPoleLadder, 1, reference(p));
      EXPECT_LT(err, 1e-9) << "k=" << k;
    }
  }
}

TEST(PoleLadder, OneRungIsNotExactInThreeDimensions) {
  // Not a symmetric space: a single rung carries an O(1) curvature error.
  std::mt19937_64 rng(52);
  const TransportProblem p = make_problem(3, 4, rng);
  const double err = error_of(p, TransportMethod::kPoleLadder, 1, reference(p));
  RecordProperty("one_rung_error_m3_k4", std::to_string(err));
  EXPECT_GT(err, 1e-6);
}

TEST(Transport, IsometryAngleAndHorizontality) {
  std::mt19937_64 rng(53);
  for (int trial = 0; trial < 5; ++trial) {
    const TransportProblem p = make_problem(3, 4, rng, 100);
    const auto& x = p.start().rep();
    const Matrix gdot1 = preshape::geodesic_velocity(x, p.velocity().matrix(), 1.0);
    const double angle = inner(p.vector().matrix(), p.velocity().matrix());
    for (const auto method : kAllMethods) {
      const TransportResult r = transport(p, method);
      const Matrix& t = r.transported.matrix();
      if (method == TransportMethod::kEuler) {
        // First order: the defect halves with the step, but is well above 2e-3 at n=100.
        const double d100 = std::abs(t.norm() - 1.0);
        const double d200 = std::abs(transport(p.with_steps(200), method).transported.norm() - 1.0);
        EXPECT_LT(d100, 2.5 / 100);
        EXPECT_NEAR(d100 / d200, 2.0, 0.1);
      } else {
        EXPECT_NEAR(t.norm(), p.vector().norm(), 2e-3) << to_string(method);
      }
      EXPECT_NEAR(inner(t, gdot1), angle, 2e-3) << to_string(method);
      EXPECT_LT(horizontality_defect(r.endpoint.matrix(), t), 1e-8) << to_string(method);
      EXPECT_LT(std::abs(inner(t, r.endpoint.matrix())), 1e-11);
      EXPECT_LT(t.rowwise().sum().norm(), 1e-10);
    }
  }
}

TEST(Transport, MethodsAgreeAtFineResolution) {
  std::mt19937_64 rng(54);
  for (int trial = 0; trial < 3; ++trial) {
    const TransportProblem p = make_problem(3, 4, rng, 1000);
    std::vector<Matrix> results;
    for (const auto method : kAllMethods) results.push_back(transport(p, method).transported.matrix());
    for (std::size_t i = 0; i < results.size(); ++i) {
      for (std::size_t j = i + 1; j < results.size(); ++j) {
        // Euler (index 0) is only first order: its error at n=1000 is a few 1e-4.
        const double tol = i == 0 ? 5e-3 : 1e-4;
        EXPECT_LT((results[i] - results[j]).norm(), tol) << i << " vs " << j;
      }
    }
  }
}

TEST(Transport, BackwardTransportRecoversVector) {
  std::mt19937_64 rng(55);
  for (int trial = 0; trial < 5; ++trial) {
    const TransportProblem p = make_problem(3, 4, rng, 100);
    for (const auto method : {TransportMethod::kRK4, TransportMethod::kPoleLadder}) {
      const TransportResult fwd = transport(p, method);
      const auto& y = fwd.endpoint;
      const Matrix back_velocity =
          -preshape::geodesic_velocity(p.start().rep(), p.velocity().matrix(), 1.0);
      const TransportProblem rev(y, TangentVector::assume_valid(y.rep(), back_velocity, true),
                                 fwd.transported, 100);
      const TransportResult bwd = transport(rev, method);
      EXPECT_LT((bwd.endpoint.matrix() - p.start().matrix()).norm(), 1e-12);
      EXPECT_LT((bwd.transported.matrix() - p.vector().matrix()).norm(), 5e-3) << to_string(method);
    }
  }
}

struct OrderCase {
  TransportMethod method;
  std::vector<int> steps;
  double expected;
  double tolerance;
};

void PrintTo(const OrderCase& c, std::ostream* os) {
  *os << to_string(c.method) << " slope " << c.expected << "+-" << c.tolerance;
}

class ConvergenceOrder : public ::testing::TestWithParam<OrderCase> {};

// Single problems can sit in the pre-asymptotic regime at n = 10..50, so the
// band applies to the median slope over several draws.
TEST_P(ConvergenceOrder, MedianLogLogSlope) {
  const OrderCase& c = GetParam();
  std::mt19937_64 rng(56);
  std::vector<double> slopes;
  for (int trial = 0; trial < 5; ++trial) {
    const TransportProblem p = make_problem(3, 4, rng);
    const Matrix ref = reference(p);
    std::vector<double> errs;
    for (const int n : c.steps) errs.push_back(error_of(p, c.method, n, ref));
    slopes.push_back(loglog_slope(c.steps, errs));
  }
  std::sort(slopes.begin(), slopes.end());
  EXPECT_NEAR(slopes[2], c.expected, c.tolerance) << to_string(c.method);
}

const std::vector<int> kSweep{10, 20, 50, 100, 200, 500};

INSTANTIATE_TEST_SUITE_P(
    Methods, ConvergenceOrder,
    ::testing::Values(OrderCase{TransportMethod::kEuler, kSweep, -1.0, 0.2},
                      OrderCase{TransportMethod::kRK2, kSweep, -2.0, 0.3},
                      OrderCase{TransportMethod::kRK4, kSweep, -4.0, 0.5},
                      OrderCase{TransportMethod::kPoleLadder, kSweep, -2.0, 0.3},
                      OrderCase{TransportMethod::kPoleLadder, {10, 20, 50, 100, 200}, -2.0, 0.3}),
    [](const auto& info) {
      return std::string(to_string(info.param.method)) + std::to_string(info.index);
    });

}  // namespace
}  // namespace kendall
