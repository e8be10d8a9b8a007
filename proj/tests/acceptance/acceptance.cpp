// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any fails.
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <fmt/format.h>

#include "cli.hpp"
#include "parsim/arx.hpp"
#include "parsim/data_blocks.hpp"
#include "parsim/estimators.hpp"
#include "parsim/metrics.hpp"
#include "parsim/monte_carlo.hpp"
#include "parsim/realization.hpp"
#include "parsim/report_io.hpp"
#include "parsim/signals.hpp"
#include "parsim/systems.hpp"
#include "test_support.hpp"

namespace {

using namespace parsim;
namespace fs = std::filesystem;
using Clock = std::chrono::steady_clock;

constexpr std::uint64_t kMasterSeed = 7;

struct Outcome {
  bool pass = false;
  std::string detail;
};

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

Outcome within_budget(Outcome o, double elapsed, double budget) {
  o.detail += fmt::format(" [{:.2f} s, limit {:.0f} s]", elapsed, budget);
  if (elapsed >= budget) {
    o.pass = false;
    o.detail += " runtime exceeded";
  }
  return o;
}

Outcome criterion1() {
  const StateSpaceModel sys = bench::example1_system();
  const SignalRecord rec = test::noise_free_record(sys, 2000, kMasterSeed);
  const Vector truth = impulse_response(sys, 100);
  Outcome o{true, ""};
  for (Method m : {Method::parsim, Method::parsim_opt}) {
    RealizationConfig cfg;
    cfg.order = 2;
    cfg.f = 10;
    cfg.p = 20;
    cfg.method = m;
    const auto start = Clock::now();
    const IdentifiedModel id = identify(rec, cfg);
    const double elapsed = seconds_since(start);
    const double fit = bench::fit_metric(truth, impulse_response(id.model, 100));
    const bool ok = fit > 99.9 && elapsed < 5.0;
    o.pass = o.pass && ok;
    o.detail += fmt::format("{} FIT {:.6f} in {:.3f} s; ", method_name(m), fit, elapsed);
  }
  return o;
}

Outcome criterion2() {
  std::mt19937_64 rng(kMasterSeed);
  std::uniform_int_distribution<Index> band(1, 6);
  std::uniform_int_distribution<Index> cols(1, 50);
  double worst = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    const Index i = band(rng);
    const Index n = cols(rng);
    const Vector h = test::gaussian_matrix(rng, i - 1, 1);
    const NoiseToeplitz t = build_noise_toeplitz(h, i, n);
    const RowVector noise = test::gaussian_matrix(rng, 1, n + i - 1);
    RowVector hfi(i);
    for (Index c = 0; c < i; ++c) hfi(c) = t.coefficient(i - 1 - c);
    const Matrix ei = build_hankel(noise.transpose(), 0, i, n);
    worst = std::max(worst, (hfi * ei - noise * t.dense()).cwiseAbs().maxCoeff());
  }
  return {worst < 1e-12, fmt::format("max deviation {:.3e} over 100 instances (tol 1e-12)", worst)};
}

Outcome criterion3() {
  std::mt19937_64 rng(kMasterSeed);
  double worst = 0.0;
  for (int trial = 0; trial < 200; ++trial) {
    const Index n = 1 + trial % 5;
    const StateSpaceModel m = test::random_stable_model(rng, n);
    const PredictorModel pf = to_predictor_form(m);
    PredictorMarkov pm;
    pm.h_bar.resize(15);
    pm.g_bar.resize(15);
    Matrix row = pf.C();
    for (Index k = 0; k < 15; ++k) {
      pm.h_bar(k) = (row * pf.K())(0, 0);
      pm.g_bar(k) = (row * pf.B_bar())(0, 0);
      row = row * pf.A_bar();
    }
    const Vector h = predictor_to_innovations(pm).h;
    worst = std::max(worst, (h - markov_h(m, 15)).cwiseAbs().maxCoeff());
  }
  return {worst < 1e-9, fmt::format("max |H_i - C A^(i-1) K| {:.3e} over 200 models (tol 1e-9)", worst)};
}

Outcome criterion4() {
  const double sigma2 = 2.5;
  const Index band = 4, cols = 10, draws = 10000;
  Vector h(band - 1);
  h << 0.8, 0.5, 0.3;
  const NoiseToeplitz t = build_noise_toeplitz(h, band, cols);
  const Matrix expected = sigma2 * t.dense().transpose() * t.dense();
  Matrix sample = Matrix::Zero(cols, cols);
  const Vector e = bench::white_noise(draws * (cols + band - 1), sigma2, kMasterSeed);
  for (Index d = 0; d < draws; ++d) {
    const RowVector noise = e.segment(d * (cols + band - 1), cols + band - 1).transpose();
    const RowVector x = t.left_multiply(noise);
    sample.noalias() += x.transpose() * x;
  }
  sample /= static_cast<double>(draws);
  const double rel = (sample - expected).norm() / expected.norm();
  return {rel < 0.05, fmt::format("Frobenius relative error {:.4f} over 1e4 draws (tol 0.05)", rel)};
}

Outcome criterion5() {
  const Index rows = 5, cols = 100, band = 5, reps = 2000;
  std::mt19937_64 rng(kMasterSeed);
  const Matrix z = test::gaussian_matrix(rng, rows, cols);
  const RowVector theta = test::gaussian_matrix(rng, 1, rows);
  Vector h(band - 1);
  h << 0.9, 0.8, 0.7, 0.6;
  const NoiseToeplitz t = build_noise_toeplitz(h, band, cols);
  Matrix ols(reps, rows), wls(reps, rows);
  for (Index r = 0; r < reps; ++r) {
    const Vector e = bench::white_noise(cols + band - 1, 1.0, bench::derive_seed(kMasterSeed, r));
    const RowVector y = theta * z + t.left_multiply(e.transpose());
    ols.row(r) = ols_row(z, y);
    wls.row(r) = wls_row(z, y, t);
  }
  auto variance = [&](const Matrix& est) {
    const RowVector mean = est.colwise().mean();
    return RowVector((est.rowwise() - mean).colwise().squaredNorm() / static_cast<double>(reps - 1));
  };
  const RowVector v_ols = variance(ols);
  const RowVector v_wls = variance(wls);
  bool ok = true;
  std::string detail = "var ratio WLS/OLS:";
  for (Index c = 0; c < rows; ++c) {
    const double ratio = v_wls(c) / v_ols(c);
    ok = ok && v_wls(c) <= v_ols(c) * 1.03;
    detail += fmt::format(" {:.3f}", ratio);
  }
  return {ok, detail + " (limit 1.03)"};
}

double mean_error(const bench::BenchReport& r, Method m) {
  return bench::aggregate(r.errors(m)).mean;
}

double median_fit(const bench::BenchReport& r, Method m) {
  return bench::aggregate(r.fits(m)).median;
}

Outcome criterion6() {
  Outcome o{true, ""};
  for (Index n : {1000, 2000, 3000}) {
    bench::Scenario sc = bench::example1_scenario();
    sc.samples = n;
    sc.methods = {Method::parsim, Method::parsim_opt};
    const bench::BenchReport r = bench::monte_carlo(sc, kMasterSeed);
    const double e_ols = mean_error(r, Method::parsim);
    const double e_wls = mean_error(r, Method::parsim_opt);
    o.pass = o.pass && e_wls < e_ols;
    o.detail += fmt::format("N={}: opt {:.4f} vs parsim {:.4f}; ", n, e_wls, e_ols);
  }
  return o;
}

Outcome criterion7() {
  const bench::BenchReport r = bench::monte_carlo(bench::example1_scenario(), kMasterSeed);
  const double parsim = median_fit(r, Method::parsim);
  const double opt = median_fit(r, Method::parsim_opt);
  const double ssarx = median_fit(r, Method::ssarx);
  const double classical = median_fit(r, Method::classical);
  return {opt > parsim && ssarx > parsim,
          fmt::format("median FIT parsim {:.2f}, parsim_opt {:.2f}, ssarx {:.2f}, classical {:.2f}, failures {}",
                      parsim, opt, ssarx, classical, r.failure_count())};
}

Outcome criterion8() {
  const bench::BenchReport r = bench::monte_carlo(bench::example2_scenario(), kMasterSeed);
  const double parsim = median_fit(r, Method::parsim);
  const double opt = median_fit(r, Method::parsim_opt);
  const double ssarx = median_fit(r, Method::ssarx);
  return {parsim > ssarx,
          fmt::format("median FIT parsim {:.2f} > ssarx {:.2f}; non-binding: parsim_opt {:.2f} ({} parsim), "
                      "failures {}",
                      parsim, ssarx, opt, opt < parsim ? "below" : "not below", r.failure_count())};
}

Outcome criterion9() {
  Outcome o{true, ""};
  for (double s2 : {1.0, 10.0, 100.0}) {
    const bench::BenchReport r = bench::monte_carlo(bench::example3_scenario(s2), kMasterSeed);
    const std::vector<double> fp = r.fits(Method::parsim);
    const std::vector<double> fo = r.fits(Method::parsim_opt);
    Index wins = 0;
    for (std::size_t k = 0; k < fp.size(); ++k) {
      if (fo[k] >= fp[k]) ++wins;  // NaN on either side counts as a loss
    }
    const double share = 100.0 * static_cast<double>(wins) / static_cast<double>(fp.size());
    if (s2 > 1.0) o.pass = o.pass && share > 60.0;
    o.detail += fmt::format("sigma2={:g}: {:.0f}%{}; ", s2, share, s2 > 1.0 ? "" : " (reported)");
  }
  return o;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

int run_cli(const std::vector<std::string>& args) {
  std::vector<const char*> argv{"parsim"};
  for (const auto& a : args) argv.push_back(a.c_str());
  const cli::ParseResult r = cli::parse_args(static_cast<int>(argv.size()), argv.data());
  return r.config ? cli::run(*r.config) : r.exit_code;
}

Outcome criterion10(const fs::path& scratch) {
  bench::Scenario sc = bench::example1_scenario();
  sc.trials = 10;
  const bench::BenchReport a = bench::monte_carlo(sc, kMasterSeed, 1);
  const bench::BenchReport b = bench::monte_carlo(sc, kMasterSeed, 1);
  const bench::BenchReport c = bench::monte_carlo(sc, kMasterSeed, 4);
  bool ok = bench::trials_csv(a) == bench::trials_csv(b) && bench::trials_csv(a) == bench::trials_csv(c) &&
            bench::summary_json(a).dump() == bench::summary_json(c).dump();
  std::string detail = fmt::format("in-process repeat and jobs 1/4 {}; ", ok ? "identical" : "DIFFER");

  Index files = 0;
  for (const char* scenario : {"example1", "example1-markov", "example2", "example3"}) {
    for (const char* run : {"run1", "run2"}) {
      const fs::path dir = scratch / run;
      if (run_cli({"benchmark", "--scenario", scenario, "--trials", "3", "--seed", "7", "--jobs", "2",
                   "--out-dir", dir.string()}) != cli::kExitOk) {
        return {false, detail + fmt::format("CLI benchmark {} failed", scenario)};
      }
    }
  }
  for (const auto& entry : fs::directory_iterator(scratch / "run1")) {
    ++files;
    const fs::path twin = scratch / "run2" / entry.path().filename();
    if (!fs::exists(twin) || slurp(entry.path()) != slurp(twin)) {
      ok = false;
      detail += fmt::format("{} differs; ", entry.path().filename().string());
    }
  }
  return {ok && files > 0, detail + fmt::format("{} CLI output files compared", files)};
}

}  // namespace

int main(int argc, char** argv) {
  fs::path scratch = fs::temp_directory_path() / "parsim_acceptance";
  for (int i = 1; i + 1 < argc; ++i) {
    if (std::string(argv[i]) == "--scratch") scratch = argv[i + 1];
  }
  fs::remove_all(scratch);
  fs::create_directories(scratch);
  cli::configure_logging();

  struct Entry {
    int id;
    double budget;
    std::function<Outcome()> body;
  };
  const std::vector<Entry> entries = {
      {1, 10.0, criterion1},  {2, 1.0, criterion2},     {3, 5.0, criterion3},
      {4, 10.0, criterion4},  {5, 30.0, criterion5},    {6, 600.0, criterion6},
      {7, 600.0, criterion7}, {8, 600.0, criterion8},   {9, 1200.0, criterion9},
      {10, 600.0, [&] { return criterion10(scratch); }},
  };

  int failures = 0;
  for (const Entry& e : entries) {
    const auto start = Clock::now();
    Outcome o;
    try {
      Outcome body = e.body();
      o = within_budget(std::move(body), seconds_since(start), e.budget);
    } catch (const std::exception& ex) {
      o = {false, fmt::format("threw: {}", ex.what())};
    }
    if (!o.pass) ++failures;
    std::printf("%s criterion %d: %s\n", o.pass ? "PASS" : "FAIL", e.id, o.detail.c_str());
    std::fflush(stdout);
  }
  return failures == 0 ? 0 : 1;
}
