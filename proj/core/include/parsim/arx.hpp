#pragma once

#include <span>
#include <vector>

#include "parsim/ss_model.hpp"
#include "parsim/types.hpp"

namespace parsim {

/// Coefficients of the order-n ARX predictor
///   y[k] = sum_i h_bar[i] y[k-i] + sum_i g_bar[i] u[k-i] + e[k],  i = 1..n
/// i.e. the predictor-form Markov parameters C Abar^{i-1} K and C Abar^{i-1} Bbar.
/// Index 0 of each vector holds lag 1. There is no u[k] term (D = 0).
struct PredictorMarkov {
  Vector h_bar;
  Vector g_bar;
  double residual_variance = 0.0;

  Index order() const { return h_bar.size(); }
};

/// Innovations-form Markov parameters; index 0 holds lag 1. `g` may be empty.
struct InnovationsMarkov {
  Vector h;
  Vector g;
};

/// Minimum record length for an order-n ARX fit.
inline constexpr Index kArxSamplesPerOrder = 10;

/// Least-squares ARX fit over samples k = n..N-1.
///
/// Regressors that are collinear only through the output lags (noise-free
/// data) are resolved by the minimum-norm solution; collinear input lags throw
/// ErrorCategory::excitation.
PredictorMarkov fit_arx(const SignalRecord& rec, Index order);

/// AIC score N_eff ln(RSS / N_eff) + 2 (2n) for each grid order, all fits on
/// the common window k = max(grid)..N-1. Orders that cannot be fitted get +inf.
std::vector<double> aic_scores(const SignalRecord& rec, std::span<const Index> grid);

/// argmin of aic_scores; ties go to the smaller order.
Index select_order_aic(const SignalRecord& rec, std::span<const Index> grid);

/// H_1 = Hbar_1, H_i = Hbar_i + sum_{j=1}^{i-1} Hbar_j H_{i-j}.
InnovationsMarkov predictor_to_innovations(const PredictorMarkov& pm);

/// g_i = gbar_i + sum_{j=1}^{i-1} hbar_j g_{i-j}.
Vector predictor_to_innovations_g(const PredictorMarkov& pm);

}  // namespace parsim
