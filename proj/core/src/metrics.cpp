#include "parsim/metrics.hpp"

#include "parsim/error.hpp"

namespace parsim::bench {

double fit_metric(const Vector& g_true, const Vector& g_hat) {
  if (g_true.size() != g_hat.size() || g_true.size() == 0) {
    throw Error(ErrorCategory::config, "FIT: sequences must be non-empty and of equal length");
  }
  const double denom = (g_true.array() - g_true.mean()).matrix().norm();
  if (denom == 0.0) throw Error(ErrorCategory::config, "FIT: true response is constant");
  return 100.0 * (1.0 - (g_true - g_hat).norm() / denom);
}

double error_g(const Vector& g_hat, const Vector& g_true) {
  if (g_true.size() != g_hat.size()) {
    throw Error(ErrorCategory::config, "Error(G): sequences must have equal length");
  }
  const double denom = g_true.norm();
  if (denom == 0.0) throw Error(ErrorCategory::config, "Error(G): true Markov parameters are zero");
  return (g_hat - g_true).norm() / denom;
}

}  // namespace parsim::bench
