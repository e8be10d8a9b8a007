#include "parsim/monte_carlo.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <numeric>
#include <thread>

#include "parsim/error.hpp"
#include "parsim/metrics.hpp"
#include "parsim/realization.hpp"
#include "parsim/signals.hpp"
#include "parsim/systems.hpp"

namespace parsim::bench {

namespace {

constexpr std::uint64_t kSystemStream = 0;
constexpr std::uint64_t kInputStream = 1;
constexpr std::uint64_t kNoiseStream = 2;

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

bool has_bank_markov(Method m) { return m == Method::parsim || m == Method::parsim_opt; }

}  // namespace

void Scenario::validate() const {
  if (trials < 1) throw Error(ErrorCategory::config, "scenario: trials must be >= 1");
  if (methods.empty()) throw Error(ErrorCategory::config, "scenario: no methods");
  const Index p_max = p.value_or(aic_max_p);
  if (samples <= f + p_max) throw Error(ErrorCategory::config, "scenario: N must exceed f + p");
  if (noise_variance < 0.0) throw Error(ErrorCategory::config, "scenario: negative noise variance");
  if (fit_lags < 2) throw Error(ErrorCategory::config, "scenario: fit_lags must be >= 2");
}

Scenario example1_scenario() {
  Scenario sc;
  sc.name = "example1";
  sc.source = SystemSource::example1;
  sc.samples = 2000;
  sc.f = 10;
  sc.noise_variance = 4.0;
  sc.order = 3;
  sc.methods = {Method::parsim, Method::parsim_opt, Method::ssarx, Method::classical};
  return sc;
}

Scenario example2_scenario() {
  Scenario sc;
  sc.name = "example2";
  sc.source = SystemSource::example2;
  sc.samples = 2000;
  sc.f = 7;
  sc.noise_variance = 217.1;
  sc.order = 2;
  sc.methods = {Method::parsim, Method::parsim_opt, Method::ssarx, Method::classical};
  return sc;
}

Scenario example3_scenario(double noise_variance) {
  Scenario sc;
  sc.name = "example3";
  sc.source = SystemSource::random;
  sc.samples = 1000;
  sc.f = 15;
  sc.noise_variance = noise_variance;
  sc.order = kRandomSystemOrder;
  sc.methods = {Method::parsim, Method::parsim_opt, Method::ssarx};
  return sc;
}

TrialData generate_trial(const Scenario& sc, std::uint64_t trial_seed) {
  const Index n = sc.samples;
  const std::uint64_t input_seed = derive_seed(trial_seed, kInputStream);
  const std::uint64_t noise_seed = derive_seed(trial_seed, kNoiseStream);

  auto build = [&](StateSpaceModel system, Vector u) {
    SignalRecord rec;
    rec.e = white_noise(n, sc.noise_variance, noise_seed);
    rec.y = simulate(system, u, *rec.e);
    rec.u = std::move(u);
    return TrialData{std::move(system), std::move(rec)};
  };

  switch (sc.source) {
    case SystemSource::example1:
      return build(example1_system(sc.noise_variance), white_noise(n, 1.0, input_seed));
    case SystemSource::example2: {
      Example2 ex = example2_system();
      const Index taps = ex.input_filter.size();
      // Pre-roll the FIR so every kept sample has a full history.
      const Vector r = white_noise(n + taps - 1, 1.0, input_seed);
      Vector u = fir_filter(ex.input_filter, r).tail(n);
      return build(ex.model.with_noise_variance(sc.noise_variance), std::move(u));
    }
    case SystemSource::random:
      return build(random_system(derive_seed(trial_seed, kSystemStream), sc.noise_variance),
                   gen_rbs(n, sc.rbs_band, input_seed));
  }
  throw Error(ErrorCategory::config, "unknown system source");
}

Aggregate aggregate(std::vector<double> values) {
  std::erase_if(values, [](double v) { return !std::isfinite(v); });
  Aggregate a;
  a.count = static_cast<Index>(values.size());
  if (values.empty()) {
    a.mean = a.median = a.variance = kNaN;
    return a;
  }
  a.mean = std::accumulate(values.begin(), values.end(), 0.0) / static_cast<double>(a.count);
  if (a.count > 1) {
    double ss = 0.0;
    for (double v : values) ss += (v - a.mean) * (v - a.mean);
    a.variance = ss / static_cast<double>(a.count - 1);
  }
  std::sort(values.begin(), values.end());
  const std::size_t mid = values.size() / 2;
  a.median = values.size() % 2 ? values[mid] : 0.5 * (values[mid - 1] + values[mid]);
  return a;
}

Index BenchReport::failure_count() const {
  return std::count_if(trials.begin(), trials.end(), [](const TrialResult& t) { return t.failed(); });
}

std::vector<double> BenchReport::fits(Method m) const {
  std::vector<double> out;
  for (const auto& t : trials) {
    if (t.method == m) out.push_back(t.fit);
  }
  return out;
}

std::vector<double> BenchReport::errors(Method m) const {
  std::vector<double> out;
  for (const auto& t : trials) {
    if (t.method == m) out.push_back(t.error_g);
  }
  return out;
}

std::vector<MethodSummary> summarize(const Scenario& sc, const std::vector<TrialResult>& trials) {
  std::vector<MethodSummary> out;
  for (const Method m : sc.methods) {
    std::vector<double> fits, errors;
    Index failures = 0;
    for (const auto& t : trials) {
      if (t.method != m) continue;
      fits.push_back(t.fit);
      errors.push_back(t.error_g);
      if (t.failed()) ++failures;
    }
    out.push_back({m, aggregate(std::move(fits)), aggregate(std::move(errors)), failures});
  }
  return out;
}

namespace {

std::vector<TrialResult> run_trial(const Scenario& sc, Index trial, std::uint64_t master_seed) {
  const std::uint64_t seed = derive_seed(master_seed, static_cast<std::uint64_t>(trial));
  std::vector<TrialResult> out;
  out.reserve(sc.methods.size());
  auto fail_all = [&](const std::string& stage, const std::string& message) {
    for (const Method m : sc.methods) {
      out.push_back({trial, m, kNaN, kNaN, seed, 0, stage, message});
    }
    return out;
  };

  std::optional<TrialData> data;
  try {
    data = generate_trial(sc, seed);
  } catch (const Error& e) {
    return fail_all("data", e.what());
  }

  // One past horizon for every method in the trial.
  Index p = 0;
  try {
    if (sc.p) {
      p = *sc.p;
    } else {
      std::vector<Index> grid = default_aic_grid(sc.order, sc.aic_max_p);
      std::erase_if(grid, [&](Index n) { return data->record.size() < kArxSamplesPerOrder * n; });
      p = select_order_aic(data->record, grid);
    }
  } catch (const Error& e) {
    return fail_all("past-horizon", e.what());
  }

  const Vector g_true = impulse_response(data->system, sc.fit_lags);
  Vector g_ff_true(sc.f);  // [G_{f-1}, ..., G_1, G_0]
  {
    const Vector g = impulse_response(data->system, sc.f);
    for (Index t = 0; t < sc.f; ++t) g_ff_true(t) = g(sc.f - 1 - t);
  }

  for (const Method m : sc.methods) {
    TrialResult r{trial, m, kNaN, kNaN, seed, p, {}, {}};
    try {
      RealizationConfig cfg;
      cfg.order = sc.order;
      cfg.f = sc.f;
      cfg.p = p;
      cfg.method = m;
      const IdentifiedModel id = identify(data->record, cfg);
      r.fit = fit_metric(g_true, impulse_response(id.model, sc.fit_lags));
      if (has_bank_markov(m)) {
        r.error_g = error_g(id.range.g_rows.back().transpose(), g_ff_true);
      }
    } catch (const Error& e) {
      r.failure_stage = e.stage().empty() ? "identify" : e.stage();
      r.failure_message = e.what();
    } catch (const std::exception& e) {
      r.failure_stage = "identify";
      r.failure_message = e.what();
    }
    out.push_back(std::move(r));
  }
  return out;
}

}  // namespace

BenchReport monte_carlo(const Scenario& sc, std::uint64_t master_seed, unsigned jobs) {
  sc.validate();
  std::vector<std::vector<TrialResult>> per_trial(static_cast<std::size_t>(sc.trials));
  std::atomic<Index> next{0};
  auto worker = [&] {
    for (Index t = next++; t < sc.trials; t = next++) {
      per_trial[static_cast<std::size_t>(t)] = run_trial(sc, t, master_seed);
    }
  };
  const unsigned n_workers = std::clamp<unsigned>(jobs, 1u, static_cast<unsigned>(sc.trials));
  if (n_workers == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(n_workers);
    for (unsigned w = 0; w < n_workers; ++w) pool.emplace_back(worker);
  }

  BenchReport report;
  report.scenario = sc;
  report.master_seed = master_seed;
  for (auto& rows : per_trial) {
    for (auto& r : rows) report.trials.push_back(std::move(r));
  }
  report.summary = summarize(sc, report.trials);
  return report;
}

}  // namespace parsim::bench
