#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "kendall/transport.hpp"

namespace kendall {

// Every trial draws from its own mt19937_64, seeded through std::seed_seq from
// the master seed and the trial index, so trials can run in any order.
inline constexpr const char* kRngName = "mt19937_64/seed_seq(seed_lo,seed_hi,trial)";

std::mt19937_64 trial_rng(std::uint64_t seed, int trial);

// Random start x with two orthonormal horizontal vectors: v (to transport)
// and w (geodesic velocity). The problem is returned with n = 1.
// Throws SamplingFailed after 100 rejected draws.
TransportProblem sample_problem(int m, int k, std::mt19937_64& rng);

struct ExperimentConfig {
  int m = 3;
  int k = 4;
  std::vector<int> step_counts{10, 20, 50, 100, 200, 500, 1000};
  std::vector<TransportMethod> methods{TransportMethod::kEuler, TransportMethod::kRK2,
                                       TransportMethod::kRK4, TransportMethod::kPoleLadder};
  int n_ref = 1100;
  double alpha = kDefaultLadderExponent;
  std::uint64_t seed = 0;
  int trials = 10;

  // Throws InvalidArgument describing the first violated constraint.
  void validate() const;
};

struct ConvergenceRecord {
  TransportMethod method = TransportMethod::kEuler;
  int n = 0;
  int trial = 0;
  double error = 0.0;  // NaN when failed
  int m = 0;
  int k = 0;
  std::uint64_t seed = 0;
  bool failed = false;
};

bool operator==(const ConvergenceRecord& a, const ConvergenceRecord& b);

// Orders by (method, n, trial).
void sort_records(std::vector<ConvergenceRecord>& records);

// Reference transport used to score a trial: RK4 with n_ref steps, checked
// against RK4 with 2 n_ref steps.
inline constexpr double kReferenceConsistency = 1e-10;

struct TrialSetup {
  TransportProblem problem;
  TangentVector reference;
};

// Throws NumericalFailure when the reference is not self-consistent.
TrialSetup prepare_trial(const ExperimentConfig& cfg, int trial);

// Error of one (method, n) against the trial reference. Library errors are
// caught and turned into a failed record.
ConvergenceRecord measure(const ExperimentConfig& cfg, const TrialSetup& setup, int trial,
                          TransportMethod method, int n);

// OpenMP sweep over trials and (trial, method, n) tasks.
std::vector<ConvergenceRecord> run_convergence(const ExperimentConfig& cfg);

// Plain nested loops; kept as the reference the parallel sweep must match bit for bit.
std::vector<ConvergenceRecord> run_convergence_serial(const ExperimentConfig& cfg);

}  // namespace kendall
