#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace kendall {

enum class ErrorKind {
  kRankDeficient,
  kAmbiguousAlignment,
  kAntipodalPoints,
  kDegenerateConfiguration,
  kSamplingFailed,
  kInsufficientData,
  kIoFailure,
  kInvalidArgument,
  kNumericalFailure,
};

std::string_view to_string(ErrorKind kind);

// Every failure raised by the library carries one of the kinds above so that
// callers (the CLI in particular) can map it to an exit status.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

  // Input validation problems as opposed to numerical breakdowns.
  bool is_validation() const noexcept {
    return kind_ == ErrorKind::kInvalidArgument || kind_ == ErrorKind::kIoFailure ||
           kind_ == ErrorKind::kDegenerateConfiguration;
  }

 private:
  ErrorKind kind_;
};

inline std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kRankDeficient: return "RankDeficient";
    case ErrorKind::kAmbiguousAlignment: return "AmbiguousAlignment";
    case ErrorKind::kAntipodalPoints: return "AntipodalPoints";
    case ErrorKind::kDegenerateConfiguration: return "DegenerateConfiguration";
    case ErrorKind::kSamplingFailed: return "SamplingFailed";
    case ErrorKind::kInsufficientData: return "InsufficientData";
    case ErrorKind::kIoFailure: return "IoFailure";
    case ErrorKind::kInvalidArgument: return "InvalidArgument";
    case ErrorKind::kNumericalFailure: return "NumericalFailure";
  }
  return "Unknown";
}

}  // namespace kendall
