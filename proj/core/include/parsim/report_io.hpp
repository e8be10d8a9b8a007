#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "parsim/monte_carlo.hpp"

namespace parsim::bench {

/// Per-trial table: header `trial,method,fit,error_g,seed`.
std::string trials_csv(const BenchReport& report);

/// Scenario parameters, per-method aggregates, chosen p per trial and failures.
nlohmann::json summary_json(const BenchReport& report);

/// FIT box statistics per method: `method,count,min,q1,median,q3,max,mean`.
std::string fit_distribution_csv(const BenchReport& report);

/// Error(G) versus sample size, one report per N:
/// `N,method,count,mean_error_g,var_error_g`.
std::string markov_error_csv(const std::vector<BenchReport>& sweep);

/// Joint FIT pairs per noise level: `sigma_e2,trial,seed,fit_<method>...`.
std::string joint_fit_csv(const std::vector<BenchReport>& levels);

void write_text(const std::filesystem::path& path, const std::string& content);

}  // namespace parsim::bench
