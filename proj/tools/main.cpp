#include "cli.hpp"

#include <iostream>

int main(int argc, char** argv) {
  parsim::cli::configure_logging();
  const auto parsed = parsim::cli::parse_args(argc, argv);
  if (!parsed.config) {
    (parsed.exit_code == 0 ? std::cout : std::cerr) << parsed.message;
    return parsed.exit_code;
  }
  return parsim::cli::run(*parsed.config);
}
