#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <regex>
#include <sstream>

#include "kendall/error.hpp"
#include "kendall/report.hpp"

namespace kendall {
namespace {

std::vector<ConvergenceRecord> power_law(TransportMethod method, double c, double order,
                                         int trials = 1) {
  std::vector<ConvergenceRecord> out;
  for (int t = 0; t < trials; ++t) {
    for (const int n : {10, 20, 50, 100, 200, 500, 1000}) {
      out.push_back({method, n, t, (c + t) * std::pow(n, -order), 3, 4, 0, false});
    }
  }
  return out;
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

TEST(EstimateOrder, ExactPowerLaws) {
  EXPECT_NEAR(estimate_order(power_law(TransportMethod::kEuler, 0.7, 1.0), TransportMethod::kEuler)
                  .slope,
              -1.0, 1e-10);
  const auto rk2 = power_law(TransportMethod::kRK2, 3.0, 2.0);
  const OrderEstimate est = estimate_order(rk2, TransportMethod::kRK2);
  EXPECT_NEAR(est.slope, -2.0, 1e-10);
  EXPECT_NEAR(est.intercept, std::log(3.0), 1e-10);
  EXPECT_LT(est.rms_residual, 1e-12);
  EXPECT_EQ(est.points, 7);
}

TEST(EstimateOrder, SkipsFloorAndFailures) {
  auto recs = power_law(TransportMethod::kRK4, 1.0, 4.0);
  recs.push_back({TransportMethod::kRK4, 5000, 0, 1e-16, 3, 4, 0, false});
  recs.push_back({TransportMethod::kRK4, 7000, 0, NAN, 3, 4, 0, true});
  const OrderEstimate est = estimate_order(recs, TransportMethod::kRK4);
  EXPECT_NEAR(est.slope, -4.0, 1e-10);
  EXPECT_EQ(est.points, 7);
}

TEST(EstimateOrder, InsufficientData) {
  std::vector<ConvergenceRecord> recs{{TransportMethod::kEuler, 10, 0, 0.1, 3, 4, 0, false},
                                      {TransportMethod::kEuler, 20, 0, 0.05, 3, 4, 0, false}};
  try {
    estimate_order(recs, TransportMethod::kEuler);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kInsufficientData);
  }
  EXPECT_THROW(estimate_order(recs, TransportMethod::kRK2), Error);
}

TEST(MedianOrder, PerTrialSlopes) {
  auto recs = power_law(TransportMethod::kEuler, 1.0, 1.0, 3);
  EXPECT_NEAR(median_order(recs, TransportMethod::kEuler), -1.0, 1e-10);
}

TEST(Csv, SingleRecordIsTwoLines) {
  const std::vector<ConvergenceRecord> one{{TransportMethod::kPoleLadder, 10, 2, 0.125, 3, 4, 9, false}};
  EXPECT_EQ(format_csv(one), "method,n,trial,error,m,k,seed\npole,10,2,1.2500000000000000e-01,3,4,9\n");
}

TEST(Csv, CommentsAndFailures) {
  const std::vector<ConvergenceRecord> recs{{TransportMethod::kEuler, 10, 0, NAN, 3, 4, 0, true}};
  EXPECT_EQ(format_csv(recs, {"rng=x"}), "# rng=x\nmethod,n,trial,error,m,k,seed\neuler,10,0,nan,3,4,0\n");
  EXPECT_THROW(format_csv({}), Error);
}

TEST(Csv, SeventeenSignificantDigitsRoundTrip) {
  const auto dir = std::filesystem::temp_directory_path();
  std::mt19937_64 rng(60);
  std::uniform_real_distribution<double> expo(-15, 0);
  std::vector<ConvergenceRecord> recs;
  for (int i = 0; i < 200; ++i) {
    recs.push_back({static_cast<TransportMethod>(i % 4), 10 + i, i % 7, std::pow(10.0, expo(rng)),
                    3, 6, 0xffffffffffffull, false});
  }
  recs.push_back({TransportMethod::kRK2, 5, 0, NAN, 3, 6, 1, true});
  const auto path = dir / "kendall_roundtrip.csv";
  write_csv(recs, path, {"rng=test"});
  EXPECT_EQ(read_csv(path), recs);
  std::filesystem::remove(path);
}

TEST(Csv, IoFailures) {
  EXPECT_THROW(write_csv(power_law(TransportMethod::kEuler, 1, 1), "/nonexistent_dir/x.csv"), Error);
  EXPECT_THROW(read_csv("/nonexistent_dir/x.csv"), Error);
}

TEST(Svg, OnePolylinePerMethodAndDescendingEuler) {
  std::vector<ConvergenceRecord> recs;
  for (auto [method, order] : {std::pair{TransportMethod::kEuler, 1.0},
                               {TransportMethod::kRK2, 2.0},
                               {TransportMethod::kRK4, 4.0},
                               {TransportMethod::kPoleLadder, 2.0}}) {
    auto part = power_law(method, 1.0, order, 3);
    recs.insert(recs.end(), part.begin(), part.end());
  }
  const std::string svg = format_svg_loglog(recs);
  const std::regex poly(R"re(<polyline [^>]*data-method="(\w+)" points="([^"]*)")re");
  int count = 0;
  for (auto it = std::sregex_iterator(svg.begin(), svg.end(), poly); it != std::sregex_iterator(); ++it) {
    ++count;
    if ((*it)[1] != "euler") continue;
    std::istringstream pts((*it)[2].str());
    std::string pair;
    double prev_x = -1, prev_y = -1;
    while (pts >> pair) {
      const double x = std::stod(pair.substr(0, pair.find(',')));
      const double y = std::stod(pair.substr(pair.find(',') + 1));
      EXPECT_GT(x, prev_x);
      EXPECT_GT(y, prev_y);  // screen y grows downwards
      prev_x = x;
      prev_y = y;
    }
  }
  EXPECT_EQ(count, 4);
  EXPECT_NE(svg.find(">steps n<"), std::string::npos);
  EXPECT_NE(svg.find(">error<"), std::string::npos);
  EXPECT_EQ(svg, format_svg_loglog(recs));
}

}  // namespace
}  // namespace kendall
