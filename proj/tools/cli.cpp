#include "cli.hpp"

#include <array>
#include <charconv>
#include <cstdlib>
#include <iostream>
#include <map>
#include <sstream>
#include <vector>

#include <CLI11.hpp>
#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include "parsim/error.hpp"
#include "parsim/model_io.hpp"
#include "parsim/monte_carlo.hpp"
#include "parsim/report_io.hpp"
#include "parsim/signals.hpp"
#include "parsim/systems.hpp"

namespace parsim::cli {

namespace {

constexpr std::array<double, 3> kExample3NoiseLevels = {1.0, 10.0, 100.0};
constexpr Index kMarkovSweepFirst = 1000;
constexpr Index kMarkovSweepLast = 3000;
constexpr Index kMarkovSweepStep = 500;

const std::map<std::string, Method> kMethodNames = {{"parsim", Method::parsim},
                                                    {"parsim-opt", Method::parsim_opt},
                                                    {"parsim_opt", Method::parsim_opt},
                                                    {"classical", Method::classical},
                                                    {"ssarx", Method::ssarx}};
const std::map<std::string, W2Mode> kW2Names = {{"zp", W2Mode::zp_projected},
                                                {"identity", W2Mode::identity}};
const std::map<std::string, InputKind> kInputKinds = {
    {"impulse", InputKind::impulse}, {"white", InputKind::white}, {"rbs", InputKind::rbs}};

struct UsageError {
  int code;
  std::string message;
};

std::optional<Index> parse_past_horizon(const std::string& text) {
  if (text == "aic") return std::nullopt;
  Index value = 0;
  const auto [end, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc{} || end != text.data() + text.size() || value < 1) {
    throw UsageError{kExitUsage, "--p must be 'aic' or a positive integer, got '" + text + "'"};
  }
  return value;
}

void require_input_file(const std::filesystem::path& path, const char* flag) {
  std::error_code ec;
  if (!std::filesystem::is_regular_file(path, ec)) {
    throw UsageError{kExitNoInput, std::string("IO: ") + flag + " " + path.string() + ": no such file"};
  }
}

void require_output_parent(const std::filesystem::path& path) {
  const auto parent = path.parent_path();
  std::error_code ec;
  if (!parent.empty() && !std::filesystem::is_directory(parent, ec)) {
    throw UsageError{kExitNoInput, "IO: output directory " + parent.string() + " does not exist"};
  }
}

std::shared_ptr<spdlog::logger> logger() {
  auto log = spdlog::get("parsim");
  if (!log) log = spdlog::stderr_color_mt("parsim");
  return log;
}

Vector example2_input(Index n, std::uint64_t seed) {
  const bench::Example2 ex = bench::example2_system();
  const Index taps = ex.input_filter.size();
  const Vector r = bench::white_noise(n + taps - 1, 1.0, seed);
  return bench::fir_filter(ex.input_filter, r).tail(n);
}

int run_identify(const RunConfig& cfg) {
  const SignalRecord rec = io::read_record_csv(cfg.input);
  RealizationConfig rc;
  rc.order = cfg.order;
  rc.f = cfg.f;
  rc.p = cfg.p;
  rc.method = cfg.method;
  rc.w2_mode = cfg.w2;
  rc.aic_max_p = cfg.max_p;

  const IdentifiedModel id = identify(rec, rc);
  const auto& d = id.diagnostics;
  logger()->info("identify: method={} n_x={} f={} p={} arx_order={} sigma_e2={}",
                 method_name(cfg.method), cfg.order, cfg.f, d.p, d.arx_order,
                 d.arx_residual_variance);
  logger()->debug("singular values: {}", io::format_double(id.singular_values(0)));
  for (Index k = 1; k < id.singular_values.size(); ++k) {
    logger()->debug("  sigma_{} = {}", k + 1, io::format_double(id.singular_values(k)));
  }
  for (const auto& note : d.notes) logger()->warn("{}", note);
  io::write_model(cfg.output, id.model);
  return kExitOk;
}

int run_simulate(const RunConfig& cfg) {
  StateSpaceModel model = [&] {
    if (!cfg.model_path.empty()) return io::read_model(cfg.model_path);
    if (cfg.system == "example2") return bench::example2_system().model;
    return bench::example1_system();
  }();
  const double variance = cfg.noise_variance.value_or(model.sigma_e2());
  const std::uint64_t input_seed = bench::derive_seed(cfg.seed, 1);
  const std::uint64_t noise_seed = bench::derive_seed(cfg.seed, 2);

  SignalRecord rec;
  switch (cfg.input_kind) {
    case InputKind::impulse:
      rec.u = Vector::Zero(cfg.samples);
      rec.u(0) = 1.0;
      break;
    case InputKind::white:
      rec.u = cfg.system == "example2" ? example2_input(cfg.samples, input_seed)
                                       : bench::white_noise(cfg.samples, 1.0, input_seed);
      break;
    case InputKind::rbs:
      rec.u = bench::gen_rbs(cfg.samples, cfg.rbs_band, input_seed);
      break;
  }
  const Vector e = bench::white_noise(cfg.samples, variance, noise_seed);
  rec.y = simulate(model, rec.u, e);
  io::write_record_csv(cfg.output, rec);
  logger()->info("simulate: {} samples, noise variance {}", cfg.samples, variance);
  return kExitOk;
}

void log_report(const bench::BenchReport& report) {
  for (const auto& s : report.summary) {
    logger()->info("{} N={} sigma_e2={}: {} median FIT {:.3f}, mean Error(G) {:.4f}, failures {}",
                   report.scenario.name, report.scenario.samples, report.scenario.noise_variance,
                   method_name(s.method), s.fit.median, s.error_g.mean, s.failures);
  }
}

bench::BenchReport run_scenario(bench::Scenario sc, const RunConfig& cfg) {
  if (cfg.trials) sc.trials = *cfg.trials;
  logger()->info("running {} ({} trials, seed {}, {} jobs)", sc.name, sc.trials, cfg.seed, cfg.jobs);
  bench::BenchReport report = bench::monte_carlo(sc, cfg.seed, cfg.jobs);
  log_report(report);
  return report;
}

void write_json(const std::filesystem::path& path, const nlohmann::json& j) {
  bench::write_text(path, j.dump(2) + "\n");
}

int run_benchmark(const RunConfig& cfg) {
  const auto& dir = cfg.out_dir;
  std::filesystem::create_directories(dir);
  const std::string& name = cfg.scenario;

  if (name == "example1" || name == "example2") {
    const auto report =
        run_scenario(name == "example1" ? bench::example1_scenario() : bench::example2_scenario(), cfg);
    bench::write_text(dir / (name + "_trials.csv"), bench::trials_csv(report));
    bench::write_text(dir / (name + "_fit_distribution.csv"), bench::fit_distribution_csv(report));
    write_json(dir / (name + "_summary.json"), bench::summary_json(report));
  } else if (name == "example1-markov") {
    std::vector<bench::BenchReport> sweep;
    auto summaries = nlohmann::json::array();
    for (Index n = kMarkovSweepFirst; n <= kMarkovSweepLast; n += kMarkovSweepStep) {
      bench::Scenario sc = bench::example1_scenario();
      sc.name = name;
      sc.samples = n;
      sc.methods = {Method::parsim, Method::parsim_opt};
      sweep.push_back(run_scenario(sc, cfg));
      summaries.push_back(bench::summary_json(sweep.back()));
    }
    bench::write_text(dir / (name + "_error_g.csv"), bench::markov_error_csv(sweep));
    write_json(dir / (name + "_summary.json"), summaries);
  } else {
    std::vector<bench::BenchReport> levels;
    auto summaries = nlohmann::json::array();
    for (const double s2 : kExample3NoiseLevels) {
      levels.push_back(run_scenario(bench::example3_scenario(s2), cfg));
      summaries.push_back(bench::summary_json(levels.back()));
    }
    bench::write_text(dir / (name + "_joint_fit.csv"), bench::joint_fit_csv(levels));
    write_json(dir / (name + "_summary.json"), summaries);
  }
  return kExitOk;
}

}  // namespace

void configure_logging() {
  auto log = logger();
  spdlog::set_default_logger(log);
  spdlog::level::level_enum level = spdlog::level::warn;
  if (const char* env = std::getenv("PARSIM_LOG")) {
    const std::string value = env;
    if (value == "error") level = spdlog::level::err;
    else if (value == "info") level = spdlog::level::info;
    else if (value == "debug") level = spdlog::level::debug;
  }
  log->set_level(level);
}

ParseResult parse_args(int argc, const char* const* argv) {
  CLI::App app{"PARSIM-family subspace identification", "parsim"};
  app.require_subcommand(1);

  RunConfig cfg;
  std::string method = "parsim-opt";
  std::string past = "aic";
  std::string w2 = "zp";
  std::string input_kind = "white";

  auto* identify = app.add_subcommand("identify", "Identify a state-space model from a t,u,y CSV");
  identify->add_option("--method", method, "parsim | parsim-opt | classical | ssarx")
      ->transform(CLI::IsMember(kMethodNames));
  identify->add_option("--order", cfg.order, "Model order n_x")->required()->check(CLI::Range(Index{1}, Index{999}));
  identify->add_option("--f", cfg.f, "Future horizon")->check(CLI::Range(Index{2}, Index{1000}));
  identify->add_option("--p", past, "Past horizon: 'aic' or a positive integer");
  identify->add_option("--max-p", cfg.max_p, "Largest past horizon tried by AIC")
      ->check(CLI::PositiveNumber);
  identify->add_option("--w2", w2, "Column weighting: zp | identity")->transform(CLI::IsMember(kW2Names));
  identify->add_option("--in", cfg.input, "Input CSV (t,u,y)")->required();
  identify->add_option("--out", cfg.output, "Output model JSON")->required();

  auto* simulate = app.add_subcommand("simulate", "Simulate a model and write a t,u,y CSV");
  auto* system_opt = simulate->add_option("--system", cfg.system, "example1 | example2")
                         ->check(CLI::IsMember({"example1", "example2"}));
  auto* model_opt = simulate->add_option("--model", cfg.model_path, "Model JSON");
  system_opt->excludes(model_opt);
  simulate->add_option("--n", cfg.samples, "Number of samples")->check(CLI::PositiveNumber);
  simulate->add_option("--noise-variance", cfg.noise_variance, "Innovations variance")
      ->check(CLI::NonNegativeNumber);
  simulate->add_option("--input-kind", input_kind, "impulse | white | rbs")
      ->transform(CLI::IsMember(kInputKinds));
  simulate->add_option("--rbs-band", cfg.rbs_band, "RBS cut-off as a fraction of Nyquist")
      ->check(CLI::Range(1e-6, 1.0));
  simulate->add_option("--seed", cfg.seed, "Master seed");
  simulate->add_option("--out", cfg.output, "Output CSV")->required();

  auto* benchmark = app.add_subcommand("benchmark", "Run a Monte Carlo scenario");
  benchmark->add_option("--scenario", cfg.scenario, "example1 | example1-markov | example2 | example3")
      ->required()
      ->check(CLI::IsMember({"example1", "example1-markov", "example2", "example3"}));
  benchmark->add_option("--trials", cfg.trials, "Trials per configuration")->check(CLI::PositiveNumber);
  benchmark->add_option("--seed", cfg.seed, "Master seed");
  benchmark->add_option("--jobs", cfg.jobs, "Worker threads")->check(CLI::PositiveNumber);
  benchmark->add_option("--out-dir", cfg.out_dir, "Output directory")->capture_default_str();
  cfg.out_dir = "results";

  ParseResult result;
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    std::ostringstream out, err;
    const int code = app.exit(e, out, err);
    result.exit_code = code == 0 ? kExitOk : kExitUsage;
    result.message = out.str() + err.str();
    return result;
  }

  try {
    if (identify->parsed()) {
      cfg.command = Command::identify;
      cfg.method = kMethodNames.at(method);
      cfg.w2 = kW2Names.at(w2);
      cfg.p = parse_past_horizon(past);
      if (cfg.order > cfg.f - 1) {
        throw UsageError{kExitUsage, "--order must not exceed --f - 1"};
      }
      if (!cfg.p && cfg.max_p <= cfg.order) {
        throw UsageError{kExitUsage, "--max-p must exceed --order"};
      }
      require_input_file(cfg.input, "--in");
      require_output_parent(cfg.output);
    } else if (simulate->parsed()) {
      cfg.command = Command::simulate;
      cfg.input_kind = kInputKinds.at(input_kind);
      if (cfg.system.empty() && cfg.model_path.empty()) cfg.system = "example1";
      if (!cfg.model_path.empty()) require_input_file(cfg.model_path, "--model");
      require_output_parent(cfg.output);
    } else {
      cfg.command = Command::benchmark;
    }
  } catch (const UsageError& e) {
    result.exit_code = e.code;
    result.message = e.message + "\n";
    return result;
  }
  result.config = std::move(cfg);
  return result;
}

int run(const RunConfig& cfg) {
  try {
    switch (cfg.command) {
      case Command::identify:
        return run_identify(cfg);
      case Command::simulate:
        return run_simulate(cfg);
      case Command::benchmark:
        return run_benchmark(cfg);
    }
  } catch (const Error& e) {
    std::cerr << e.what() << "\n";
  } catch (const std::filesystem::filesystem_error& e) {
    std::cerr << "IO: " << e.what() << "\n";
  } catch (const std::exception& e) {
    std::cerr << "NUMERIC: " << e.what() << "\n";
  }
  return kExitFailure;
}

}  // namespace parsim::cli
