#pragma once

#include "parsim/types.hpp"

namespace parsim::bench {

/// 100 (1 - ||g_o - g_hat|| / ||g_o - mean(g_o)||).
/// Throws ErrorCategory::config on length mismatch or constant g_o.
double fit_metric(const Vector& g_true, const Vector& g_hat);

/// ||G_hat - G|| / ||G||. Throws ErrorCategory::config on mismatch or ||G|| = 0.
double error_g(const Vector& g_hat, const Vector& g_true);

}  // namespace parsim::bench
