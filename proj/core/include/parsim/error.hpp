#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace parsim {

/// Stable failure categories. The CLI prints these as upper-case prefixes.
enum class ErrorCategory {
  excitation,  // input not persistently exciting / regressor rank loss from the input side
  rank,        // numerical rank below what a stage needs
  io,
  config,      // invalid arguments, dimensions, horizons
  numeric,     // divergence, non-finite values, failed factorizations
};

std::string_view category_prefix(ErrorCategory category) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorCategory category, std::string message, std::string stage = {});

  ErrorCategory category() const noexcept { return category_; }
  const std::string& stage() const noexcept { return stage_; }
  const std::string& message() const noexcept { return message_; }

  /// Copy of this error tagged with a pipeline stage; an existing stage is kept.
  Error with_stage(std::string stage) const;

 private:
  ErrorCategory category_;
  std::string stage_;
  std::string message_;
};

}  // namespace parsim
