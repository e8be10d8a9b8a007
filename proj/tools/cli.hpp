#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>

#include "parsim/estimators.hpp"
#include "parsim/realization.hpp"

namespace parsim::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitNoInput = 66;

enum class Command { identify, simulate, benchmark };

enum class InputKind { impulse, white, rbs };

struct RunConfig {
  Command command = Command::identify;

  // identify
  Method method = Method::parsim_opt;
  Index order = 1;
  Index f = 10;
  std::optional<Index> p;  // nullopt: AIC
  Index max_p = 30;
  W2Mode w2 = W2Mode::zp_projected;

  // simulate
  std::string system;  // example1 | example2, empty when model_path is set
  std::filesystem::path model_path;
  Index samples = 2000;
  std::optional<double> noise_variance;  // default: the system's own
  InputKind input_kind = InputKind::white;
  double rbs_band = 0.1;

  // benchmark
  std::string scenario;
  std::optional<Index> trials;
  unsigned jobs = 1;
  std::filesystem::path out_dir;

  std::uint64_t seed = 7;
  std::filesystem::path input;
  std::filesystem::path output;
};

struct ParseResult {
  std::optional<RunConfig> config;
  int exit_code = kExitOk;
  std::string message;  // help text or usage diagnostics when config is empty
};

ParseResult parse_args(int argc, const char* const* argv);

/// Executes a validated config. Failures are reported on stderr with their
/// category prefix and stage, returning kExitFailure.
int run(const RunConfig& cfg);

/// Applies PARSIM_LOG (error, info, debug) to the stderr logger.
void configure_logging();

}  // namespace parsim::cli
