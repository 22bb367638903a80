#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "kendall/experiment.hpp"

namespace kendall {

// Errors at or below this are treated as round-off and left out of fits and plots.
inline constexpr double kErrorFloor = 1e-13;

struct OrderEstimate {
  double slope = 0.0;
  double intercept = 0.0;
  double rms_residual = 0.0;  // of log(error) around the fitted line
  int points = 0;
};

// Least-squares fit of log(error) against log(n) over the successful records
// of `method` (optionally a single trial) above the error floor.
// Throws InsufficientData with fewer than 3 usable points.
OrderEstimate estimate_order(const std::vector<ConvergenceRecord>& records,
                             TransportMethod method, std::optional<int> trial = std::nullopt);

// Median of the per-trial slopes; trials with too few usable points are skipped.
double median_order(const std::vector<ConvergenceRecord>& records, TransportMethod method);

// Header `method,n,trial,error,m,k,seed`, optionally preceded by `# ` comment
// lines. Errors are printed with 17 significant digits, failures as `nan`.
void write_csv(const std::vector<ConvergenceRecord>& records, const std::filesystem::path& path,
               const std::vector<std::string>& comments = {});
std::string format_csv(const std::vector<ConvergenceRecord>& records,
                       const std::vector<std::string>& comments = {});
std::vector<ConvergenceRecord> read_csv(const std::filesystem::path& path);

// Log-log chart of the median error across trials, one polyline per method.
void write_svg_loglog(const std::vector<ConvergenceRecord>& records,
                      const std::filesystem::path& path);
std::string format_svg_loglog(const std::vector<ConvergenceRecord>& records);

}  // namespace kendall
