// bench: convergence study and single-shot parallel transport on Kendall shape spaces.
#include <algorithm>
#include <cstdio>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "kendall/error.hpp"
#include "kendall/experiment.hpp"
#include "kendall/report.hpp"

namespace {

constexpr int kExitValidation = 2;
constexpr int kExitNumerical = 3;

using namespace kendall;

std::vector<TransportMethod> parse_methods(const std::vector<std::string>& names) {
  std::vector<TransportMethod> out;
  for (const auto& name : names) {
    const auto m = parse_method(name);
    if (!m) throw Error(ErrorKind::kInvalidArgument, "unknown method '" + name + "'");
    out.push_back(*m);
  }
  return out;
}

void print_orders(const std::vector<ConvergenceRecord>& records) {
  std::vector<TransportMethod> seen;
  for (const auto& r : records) {
    if (std::find(seen.begin(), seen.end(), r.method) == seen.end()) seen.push_back(r.method);
  }
  std::printf("%-8s %12s %12s %10s %8s\n", "method", "median_slope", "pooled_slope", "rms_resid",
              "points");
  for (const auto method : seen) {
    const std::string name(to_string(method));
    try {
      const double median = median_order(records, method);
      const OrderEstimate pooled = estimate_order(records, method);
      std::printf("%-8s %12.4f %12.4f %10.4f %8d\n", name.c_str(), median, pooled.slope,
                  pooled.rms_residual, pooled.points);
    } catch (const Error& e) {
      std::printf("%-8s %s\n", name.c_str(), e.what());
    }
  }
}

void print_table(const ExperimentConfig& cfg, const std::vector<ConvergenceRecord>& records) {
  std::printf("median error over %d trial(s), m=%d k=%d seed=%llu\n", cfg.trials, cfg.m, cfg.k,
              static_cast<unsigned long long>(cfg.seed));
  std::printf("%8s", "n");
  for (const auto method : cfg.methods) std::printf(" %14s", std::string(to_string(method)).c_str());
  std::printf("\n");
  for (const int n : cfg.step_counts) {
    std::printf("%8d", n);
    for (const auto method : cfg.methods) {
      std::vector<double> errs;
      int failed = 0;
      for (const auto& r : records) {
        if (r.method != method || r.n != n) continue;
        if (r.failed) {
          ++failed;
        } else {
          errs.push_back(r.error);
        }
      }
      if (errs.empty()) {
        std::printf(" %14s", failed ? "failed" : "-");
        continue;
      }
      std::sort(errs.begin(), errs.end());
      const std::size_t mid = errs.size() / 2;
      const double med = errs.size() % 2 ? errs[mid] : 0.5 * (errs[mid - 1] + errs[mid]);
      std::printf(" %14.6e", med);
    }
    std::printf("\n");
  }
}

Matrix read_matrix(const std::string& path) { return read_landmarks_csv(path).points(); }

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Parallel transport on Kendall shape spaces"};
  app.require_subcommand(1);

  ExperimentConfig cfg;
  std::vector<std::string> method_names{"euler", "rk2", "rk4", "pole"};
  std::string csv_path, svg_path;
  auto* run = app.add_subcommand("run", "Convergence study against an RK4 reference");
  run->add_option("--m", cfg.m, "Ambient dimension of the landmarks")->capture_default_str();
  run->add_option("--k", cfg.k, "Number of landmarks")->capture_default_str();
  run->add_option("--steps", cfg.step_counts, "Comma-separated step counts")
      ->delimiter(',')
      ->capture_default_str();
  run->add_option("--ref-steps", cfg.n_ref, "RK4 steps for the reference")->capture_default_str();
  run->add_option("--methods", method_names, "Subset of euler,rk2,rk4,pole")
      ->delimiter(',')
      ->capture_default_str();
  run->add_option("--alpha", cfg.alpha, "Pole ladder scaling exponent")->capture_default_str();
  run->add_option("--trials", cfg.trials, "Random problems to draw")->capture_default_str();
  run->add_option("--seed", cfg.seed, "Master seed")->capture_default_str();
  run->add_option("--csv", csv_path, "Write records to this CSV file");
  run->add_option("--svg", svg_path, "Write a log-log plot to this SVG file");

  std::string order_csv;
  auto* order = app.add_subcommand("order", "Fit convergence orders from a results CSV");
  order->add_option("--csv", order_csv, "Results CSV written by `bench run`")->required();

  std::string input, target, velocity, vector, output, method_name = "pole";
  int steps = 100;
  double alpha = kDefaultLadderExponent;
  auto* single = app.add_subcommand("transport", "Transport one vector on user landmarks");
  single->add_option("--input", input, "Landmark CSV of the start shape")->required();
  auto* target_opt =
      single->add_option("--target", target, "Landmark CSV of the end shape (geodesic to it)");
  auto* velocity_opt =
      single->add_option("--velocity", velocity, "CSV of the geodesic velocity (same layout)");
  target_opt->excludes(velocity_opt);
  single->add_option("--vector", vector, "CSV of the vector to transport (same layout)")->required();
  single->add_option("--method", method_name, "euler, rk2, rk4 or pole")->capture_default_str();
  single->add_option("--steps", steps, "Steps or rungs")->capture_default_str();
  single->add_option("--alpha", alpha, "Pole ladder scaling exponent")->capture_default_str();
  single->add_option("--output", output, "Write the transported vector here instead of stdout");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitValidation;
  }

  try {
    if (*run) {
      cfg.methods = parse_methods(method_names);
      cfg.validate();
      const auto records = run_convergence(cfg);
      print_table(cfg, records);
      std::printf("\n");
      print_orders(records);
      if (!csv_path.empty()) write_csv(records, csv_path, {std::string("rng=") + kRngName});
      if (!svg_path.empty()) write_svg_loglog(records, svg_path);
    } else if (*order) {
      print_orders(read_csv(order_csv));
    } else if (*single) {
      const auto method = parse_method(method_name);
      if (!method) throw Error(ErrorKind::kInvalidArgument, "unknown method '" + method_name + "'");
      if (target.empty() && velocity.empty()) {
        throw Error(ErrorKind::kInvalidArgument, "one of --target or --velocity is required");
      }
      const ShapeRepresentative x(preshape::project(read_landmarks_csv(input)));
      TangentVector w;
      if (!target.empty()) {
        const ShapeRepresentative y(preshape::project(read_landmarks_csv(target)));
        w = quotient::log(x, y);
      } else {
        w = preshape::horizontal_projection(x.rep(), preshape::to_tangent(x.rep(), read_matrix(velocity)));
      }
      const TangentVector v =
          preshape::horizontal_projection(x.rep(), preshape::to_tangent(x.rep(), read_matrix(vector)));
      const TransportResult r = transport(TransportProblem(x, w, v, steps), *method, alpha);

      std::fprintf(stderr, "method=%s n=%d |v|=%.12g |transported|=%.12g\n",
                   std::string(to_string(r.method)).c_str(), r.n, v.norm(), r.transported.norm());
      if (output.empty()) {
        const Matrix& t = r.transported.matrix();
        for (Eigen::Index j = 0; j < t.cols(); ++j) {
          for (Eigen::Index i = 0; i < t.rows(); ++i) {
            std::printf(i ? ",%.16e" : "%.16e", t(i, j));
          }
          std::printf("\n");
        }
      } else {
        write_landmarks_csv(r.transported.matrix(), output);
      }
    }
  } catch (const Error& e) {
    std::cerr << "bench: " << e.what() << '\n';
    return e.is_validation() ? kExitValidation : kExitNumerical;
  } catch (const std::exception& e) {
    std::cerr << "bench: " << e.what() << '\n';
    return kExitNumerical;
  }
  return 0;
}
