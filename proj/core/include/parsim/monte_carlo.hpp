#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "parsim/estimators.hpp"
#include "parsim/ss_model.hpp"

namespace parsim::bench {

enum class SystemSource { example1, example2, random };

struct Scenario {
  std::string name;
  SystemSource source = SystemSource::example1;
  Index samples = 2000;     // record length N
  Index f = 10;
  std::optional<Index> p;   // nullopt: AIC over {order + 1, ..., aic_max_p}, shared by all methods
  Index aic_max_p = 30;
  double noise_variance = 4.0;
  Index trials = 50;
  std::vector<Method> methods;
  Index order = 3;
  Index fit_lags = 100;
  double rbs_band = 0.1;    // random systems only

  void validate() const;
};

Scenario example1_scenario();
Scenario example2_scenario();
Scenario example3_scenario(double noise_variance);

struct TrialData {
  StateSpaceModel system;
  SignalRecord record;
};

/// Draws system (random source only), input and innovations for one trial.
TrialData generate_trial(const Scenario& sc, std::uint64_t trial_seed);

struct TrialResult {
  Index trial = 0;
  Method method = Method::parsim;
  double fit = 0.0;       // NaN on failure
  double error_g = 0.0;   // NaN on failure or when the method has no G_ff estimate
  std::uint64_t seed = 0;
  Index p = 0;
  std::string failure_stage;
  std::string failure_message;

  bool failed() const { return !failure_stage.empty(); }
};

struct Aggregate {
  Index count = 0;
  double mean = 0.0;
  double median = 0.0;
  double variance = 0.0;  // unbiased; 0 when count < 2
};

/// Aggregate of the finite entries of `values`.
Aggregate aggregate(std::vector<double> values);

struct MethodSummary {
  Method method = Method::parsim;
  Aggregate fit;
  Aggregate error_g;
  Index failures = 0;
};

struct BenchReport {
  Scenario scenario;
  std::uint64_t master_seed = 0;
  std::vector<TrialResult> trials;  // ordered by (trial, position in scenario.methods)
  std::vector<MethodSummary> summary;

  Index failure_count() const;
  /// FIT / Error(G) values of one method in trial order (NaN kept).
  std::vector<double> fits(Method m) const;
  std::vector<double> errors(Method m) const;
};

std::vector<MethodSummary> summarize(const Scenario& sc, const std::vector<TrialResult>& trials);

/// Runs every trial; per-trial failures are recorded, never thrown. `jobs`
/// worker threads share the trials; results do not depend on `jobs`.
BenchReport monte_carlo(const Scenario& sc, std::uint64_t master_seed, unsigned jobs = 1);

}  // namespace parsim::bench
