#include "parsim/error.hpp"

#include <utility>

namespace parsim {

namespace {

std::string format_error(ErrorCategory category, const std::string& stage,
                         const std::string& message) {
  std::string out(category_prefix(category));
  out += ": ";
  if (!stage.empty()) {
    out += "[";
    out += stage;
    out += "] ";
  }
  out += message;
  return out;
}

}  // namespace

std::string_view category_prefix(ErrorCategory category) noexcept {
  switch (category) {
    case ErrorCategory::excitation: return "EXCITATION";
    case ErrorCategory::rank: return "RANK";
    case ErrorCategory::io: return "IO";
    case ErrorCategory::config: return "CONFIG";
    case ErrorCategory::numeric: return "NUMERIC";
  }
  return "ERROR";
}

Error::Error(ErrorCategory category, std::string message, std::string stage)
    : std::runtime_error(format_error(category, stage, message)),
      category_(category),
      stage_(std::move(stage)),
      message_(std::move(message)) {}

Error Error::with_stage(std::string stage) const {
  if (!stage_.empty()) return *this;
  return Error(category_, message_, std::move(stage));
}

}  // namespace parsim
