#include "kendall/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <limits>
#include <optional>
#include <set>
#include <sstream>
#include <tuple>

#include "kendall/error.hpp"

namespace kendall {

std::mt19937_64 trial_rng(std::uint64_t seed, int trial) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed & 0xffffffffu),
                    static_cast<std::uint32_t>(seed >> 32), static_cast<std::uint32_t>(trial)};
  return std::mt19937_64(seq);
}

namespace {

constexpr int kMaxSamplingAttempts = 100;

Matrix gaussian(int rows, int cols, std::mt19937_64& rng) {
  std::normal_distribution<double> normal;
  Matrix out(rows, cols);
  for (int j = 0; j < cols; ++j) {
    for (int i = 0; i < rows; ++i) out(i, j) = normal(rng);
  }
  return out;
}

std::optional<Matrix> random_horizontal(const PreShapePoint& x, int m, int k, std::mt19937_64& rng) {
  const TangentVector raw = preshape::to_tangent(x, gaussian(m, k, rng));
  Matrix h = preshape::horizontal_projection(x, raw).matrix();
  const double norm = h.norm();
  if (norm < 1e-8) return std::nullopt;
  return h / norm;
}

}  // namespace

TransportProblem sample_problem(int m, int k, std::mt19937_64& rng) {
  if (m < 2 || k < 3) {
    throw Error(ErrorKind::kInvalidArgument, "sampling needs m >= 2 and k >= 3");
  }
  for (int attempt = 0; attempt < kMaxSamplingAttempts; ++attempt) {
    try {
      ShapeRepresentative x(preshape::project(LandmarkConfiguration(gaussian(m, k, rng))));
      const auto w = random_horizontal(x.rep(), m, k, rng);
      if (!w) continue;
      auto v = random_horizontal(x.rep(), m, k, rng);
      if (!v) continue;
      *v -= inner(*v, *w) * *w;
      const double norm = v->norm();
      if (norm < 1e-8) continue;
      *v /= norm;

      const Matrix& xm = x.matrix();
      const bool ok = std::abs(w->norm() - 1.0) <= 1e-12 && std::abs(v->norm() - 1.0) <= 1e-12 &&
                      std::abs(inner(*v, *w)) <= 1e-12 &&
                      horizontality_defect(xm, *w) <= kHorizontalTolerance &&
                      horizontality_defect(xm, *v) <= kHorizontalTolerance;
      if (!ok) continue;

      TangentVector tw = TangentVector::assume_valid(x.rep(), *w, true);
      TangentVector tv = TangentVector::assume_valid(x.rep(), *v, true);
      return TransportProblem(std::move(x), std::move(tw), std::move(tv), 1);
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::kDegenerateConfiguration &&
          e.kind() != ErrorKind::kRankDeficient) {
        throw;
      }
    }
  }
  throw Error(ErrorKind::kSamplingFailed, "no valid problem after 100 draws");
}

void ExperimentConfig::validate() const {
  auto fail = [](const std::string& msg) { throw Error(ErrorKind::kInvalidArgument, msg); };
  if (m < 2) fail("m must be at least 2");
  if (k < 3) fail("k must be at least 3");
  if (trials < 1) fail("trials must be at least 1");
  if (step_counts.empty()) fail("step counts must not be empty");
  if (step_counts.front() < 1) fail("step counts must be positive");
  if (!std::is_sorted(step_counts.begin(), step_counts.end(),
                      [](int a, int b) { return a <= b; })) {
    fail("step counts must be strictly increasing");
  }
  if (n_ref <= step_counts.back()) fail("reference steps must exceed every step count");
  if (methods.empty()) fail("no methods selected");
  if (std::set<TransportMethod>(methods.begin(), methods.end()).size() != methods.size()) {
    fail("methods must not repeat");
  }
  if (!(alpha >= 1.0)) fail("alpha must be at least 1");
}

bool operator==(const ConvergenceRecord& a, const ConvergenceRecord& b) {
  const bool same_error =
      (std::isnan(a.error) && std::isnan(b.error)) || a.error == b.error;
  return a.method == b.method && a.n == b.n && a.trial == b.trial && same_error && a.m == b.m &&
         a.k == b.k && a.seed == b.seed && a.failed == b.failed;
}

void sort_records(std::vector<ConvergenceRecord>& records) {
  std::sort(records.begin(), records.end(), [](const auto& a, const auto& b) {
    return std::tuple(a.method, a.n, a.trial) < std::tuple(b.method, b.n, b.trial);
  });
}

TrialSetup prepare_trial(const ExperimentConfig& cfg, int trial) {
  auto rng = trial_rng(cfg.seed, trial);
  TransportProblem problem = sample_problem(cfg.m, cfg.k, rng);
  TangentVector reference =
      transport_integrated(problem.with_steps(cfg.n_ref), TransportMethod::kRK4).transported;
  const TangentVector finer =
      transport_integrated(problem.with_steps(2 * cfg.n_ref), TransportMethod::kRK4).transported;
  const double drift = (reference.matrix() - finer.matrix()).norm();
  if (!(drift < kReferenceConsistency)) {
    std::ostringstream os;
    os << "trial " << trial << ": RK4 reference moves by " << drift << " between n="
       << cfg.n_ref << " and n=" << 2 * cfg.n_ref << " (limit " << kReferenceConsistency << ")";
    throw Error(ErrorKind::kNumericalFailure, os.str());
  }
  return {std::move(problem), std::move(reference)};
}

ConvergenceRecord measure(const ExperimentConfig& cfg, const TrialSetup& setup, int trial,
                          TransportMethod method, int n) {
  ConvergenceRecord rec{method, n, trial, 0.0, cfg.m, cfg.k, cfg.seed, false};
  try {
    const TransportResult r = transport(setup.problem.with_steps(n), method, cfg.alpha);
    rec.error = (r.transported.matrix() - setup.reference.matrix()).norm();
    if (!std::isfinite(rec.error)) throw Error(ErrorKind::kNumericalFailure, "non-finite error");
  } catch (const Error&) {
    rec.error = std::numeric_limits<double>::quiet_NaN();
    rec.failed = true;
  }
  return rec;
}

std::vector<ConvergenceRecord> run_convergence(const ExperimentConfig& cfg) {
  cfg.validate();
  const int trials = cfg.trials;
  std::vector<std::optional<TrialSetup>> setups(trials);
  std::vector<std::exception_ptr> errors(trials);

#pragma omp parallel for schedule(dynamic)
  for (int t = 0; t < trials; ++t) {
    try {
      setups[t] = prepare_trial(cfg, t);
    } catch (...) {
      errors[t] = std::current_exception();
    }
  }
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }

  const int n_methods = static_cast<int>(cfg.methods.size());
  const int n_steps = static_cast<int>(cfg.step_counts.size());
  const int tasks = trials * n_methods * n_steps;
  std::vector<ConvergenceRecord> records(tasks);

#pragma omp parallel for schedule(dynamic)
  for (int task = 0; task < tasks; ++task) {
    const int t = task / (n_methods * n_steps);
    const int mi = (task / n_steps) % n_methods;
    const int si = task % n_steps;
    records[task] = measure(cfg, *setups[t], t, cfg.methods[mi], cfg.step_counts[si]);
  }

  sort_records(records);
  return records;
}

std::vector<ConvergenceRecord> run_convergence_serial(const ExperimentConfig& cfg) {
  cfg.validate();
  std::vector<ConvergenceRecord> records;
  for (int t = 0; t < cfg.trials; ++t) {
    const TrialSetup setup = prepare_trial(cfg, t);
    for (const TransportMethod method : cfg.methods) {
      for (const int n : cfg.step_counts) records.push_back(measure(cfg, setup, t, method, n));
    }
  }
  sort_records(records);
  return records;
}

}  // namespace kendall
