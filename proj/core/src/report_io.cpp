#include "parsim/report_io.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>

#include "parsim/error.hpp"
#include "parsim/model_io.hpp"

namespace parsim::bench {

namespace {

std::string num(double v) { return std::isfinite(v) ? io::format_double(v) : "nan"; }

nlohmann::json json_num(double v) {
  return std::isfinite(v) ? nlohmann::json(v) : nlohmann::json(nullptr);
}

nlohmann::json aggregate_json(const Aggregate& a) {
  return {{"count", a.count},
          {"mean", json_num(a.mean)},
          {"median", json_num(a.median)},
          {"variance", json_num(a.variance)}};
}

// Linear interpolation between order statistics.
double quantile(const std::vector<double>& sorted, double q) {
  if (sorted.empty()) return std::nan("");
  const double pos = q * static_cast<double>(sorted.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const auto hi = std::min(lo + 1, sorted.size() - 1);
  return sorted[lo] + (pos - static_cast<double>(lo)) * (sorted[hi] - sorted[lo]);
}

const char* source_name(SystemSource s) {
  switch (s) {
    case SystemSource::example1: return "example1";
    case SystemSource::example2: return "example2";
    case SystemSource::random: return "random";
  }
  return "unknown";
}

}  // namespace

std::string trials_csv(const BenchReport& report) {
  std::string out = "trial,method,fit,error_g,seed\n";
  for (const auto& t : report.trials) {
    out += std::to_string(t.trial);
    out += ',';
    out += method_name(t.method);
    out += ',';
    out += num(t.fit);
    out += ',';
    out += num(t.error_g);
    out += ',';
    out += std::to_string(t.seed);
    out += '\n';
  }
  return out;
}

nlohmann::json summary_json(const BenchReport& report) {
  const Scenario& sc = report.scenario;
  nlohmann::json j;
  j["scenario"] = {{"name", sc.name},
                   {"system", source_name(sc.source)},
                   {"N", sc.samples},
                   {"f", sc.f},
                   {"p", sc.p ? nlohmann::json(*sc.p) : nlohmann::json("aic")},
                   {"aic_max_p", sc.aic_max_p},
                   {"noise_variance", sc.noise_variance},
                   {"trials", sc.trials},
                   {"order", sc.order},
                   {"fit_lags", sc.fit_lags}};
  j["master_seed"] = report.master_seed;

  auto methods = nlohmann::json::object();
  for (const auto& s : report.summary) {
    methods[std::string(method_name(s.method))] = {{"fit", aggregate_json(s.fit)},
                                                   {"error_g", aggregate_json(s.error_g)},
                                                   {"failures", s.failures}};
  }
  j["methods"] = methods;

  auto chosen_p = nlohmann::json::array();
  auto failures = nlohmann::json::array();
  Index last_trial = -1;
  for (const auto& t : report.trials) {
    if (t.trial != last_trial) {
      chosen_p.push_back(t.p);
      last_trial = t.trial;
    }
    if (t.failed()) {
      failures.push_back({{"trial", t.trial},
                          {"method", method_name(t.method)},
                          {"stage", t.failure_stage},
                          {"message", t.failure_message}});
    }
  }
  j["chosen_p"] = chosen_p;
  j["failure_count"] = report.failure_count();
  j["failures"] = failures;
  return j;
}

std::string fit_distribution_csv(const BenchReport& report) {
  std::string out = "method,count,min,q1,median,q3,max,mean\n";
  for (const Method m : report.scenario.methods) {
    std::vector<double> v = report.fits(m);
    std::erase_if(v, [](double x) { return !std::isfinite(x); });
    std::sort(v.begin(), v.end());
    const Aggregate a = aggregate(v);
    out += method_name(m);
    out += ',' + std::to_string(v.size());
    out += ',' + num(v.empty() ? std::nan("") : v.front());
    out += ',' + num(quantile(v, 0.25));
    out += ',' + num(a.median);
    out += ',' + num(quantile(v, 0.75));
    out += ',' + num(v.empty() ? std::nan("") : v.back());
    out += ',' + num(a.mean);
    out += '\n';
  }
  return out;
}

std::string markov_error_csv(const std::vector<BenchReport>& sweep) {
  std::string out = "N,method,count,mean_error_g,var_error_g\n";
  for (const auto& report : sweep) {
    for (const auto& s : report.summary) {
      out += std::to_string(report.scenario.samples);
      out += ',';
      out += method_name(s.method);
      out += ',' + std::to_string(s.error_g.count);
      out += ',' + num(s.error_g.mean);
      out += ',' + num(s.error_g.variance);
      out += '\n';
    }
  }
  return out;
}

std::string joint_fit_csv(const std::vector<BenchReport>& levels) {
  if (levels.empty()) return "sigma_e2,trial,seed\n";
  const auto& methods = levels.front().scenario.methods;
  std::string out = "sigma_e2,trial,seed";
  for (const Method m : methods) {
    out += ",fit_";
    out += method_name(m);
  }
  out += '\n';
  for (const auto& report : levels) {
    for (Index t = 0; t < report.scenario.trials; ++t) {
      std::string row = num(report.scenario.noise_variance) + ',' + std::to_string(t);
      bool seeded = false;
      for (const Method m : methods) {
        auto it = std::find_if(report.trials.begin(), report.trials.end(),
                               [&](const TrialResult& r) { return r.trial == t && r.method == m; });
        if (!seeded) {
          row += ',' + std::to_string(it != report.trials.end() ? it->seed : 0);
          seeded = true;
        }
        row += ',' + num(it != report.trials.end() ? it->fit : std::nan(""));
      }
      out += row + '\n';
    }
  }
  return out;
}

void write_text(const std::filesystem::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCategory::io, "cannot write " + path.string());
  out << content;
  if (!out) throw Error(ErrorCategory::io, "write failed for " + path.string());
}

}  // namespace parsim::bench
