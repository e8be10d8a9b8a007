#pragma once

#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "parsim/arx.hpp"
#include "parsim/data_blocks.hpp"
#include "parsim/estimators.hpp"
#include "parsim/ss_model.hpp"

namespace parsim {

enum class W2Mode { zp_projected, identity };

struct RealizationConfig {
  Index order = 1;  // n_x
  Index f = 2;
  /// Past horizon; std::nullopt selects it by AIC over {order + 1, ..., aic_max_p}.
  std::optional<Index> p;
  Method method = Method::parsim_opt;
  W2Mode w2_mode = W2Mode::zp_projected;
  Index aic_max_p = 30;
  BankOptions bank;

  /// Throws ErrorCategory::config unless 1 <= order <= f - 1 and f >= 2.
  void validate() const;
};

/// Default AIC grid {order + 1, ..., max_p}.
std::vector<Index> default_aic_grid(Index order, Index max_p = 30);

/// (Z_p Pi Z_p')^{1/2} with Pi the orthogonal complement of U_f.
Matrix weight_w2(const DataBlocks& blocks);

struct SvdRealization {
  Matrix gamma;           // f x n_x, U_n S_n^{1/2}
  Vector singular_values;  // full spectrum of gamma_lp * W2
};

/// SVD of gamma_lp * w2 (W1 = I); keeps the n_x leading directions.
/// Throws ErrorCategory::rank when n_x exceeds the numerical rank.
SvdRealization weighted_svd_realize(const RangeEstimate& est, const Matrix& w2, Index order);

/// C = first row of gamma; A solves gamma(0..f-2) A = gamma(1..f-1) in least squares.
std::pair<Matrix, Matrix> extract_AC(const Matrix& gamma, Index order);

/// One observed Markov parameter C A^{lag-1} X = value.
struct MarkovObservation {
  Index lag;
  double value;
};

/// Least-squares X (n_x x 1) over the supplied observations.
/// Throws ErrorCategory::rank when the stacked [C A^{lag-1}] regressor is rank deficient.
Matrix fit_markov_gain(const Matrix& a, const Matrix& c,
                       std::span<const MarkovObservation> observations);

/// Observations G_j from every row of a bank estimate (lags >= 1 only).
std::vector<MarkovObservation> markov_observations(const RangeEstimate& est);
/// Observations from a plain lag-1-first sequence.
std::vector<MarkovObservation> markov_observations(const Vector& sequence);

/// B from the input Markov estimates (est.g_rows, or h.g when the estimate has
/// none) and K from h.h.
std::pair<Matrix, Matrix> estimate_BK(const Matrix& a, const Matrix& c, const RangeEstimate& est,
                                      const InnovationsMarkov& h);

struct IdentifyDiagnostics {
  Index p = 0;
  Index arx_order = 0;
  double arx_residual_variance = 0.0;
  /// sigma_{n+1} / sigma_n of the weighted SVD (0 when n_x equals the spectrum length).
  double singular_value_gap = 0.0;
  double b_fit_residual = 0.0;
  double k_fit_residual = 0.0;
  bool unstable = false;
  std::vector<std::string> notes;
};

struct IdentifiedModel {
  StateSpaceModel model;
  Vector singular_values;
  RangeEstimate range;
  IdentifyDiagnostics diagnostics;
};

struct IdentifyOverrides {
  /// Replaces the ARX-derived H_i used for the WLS weighting (parsim_opt only).
  std::optional<Vector> weighting_h;
};

/// Full pipeline: p selection, block assembly, ARX pre-estimation, range
/// estimation by cfg.method, weighted SVD, (A, C) by shift invariance, (B, K)
/// by Markov-parameter least squares. SSARX realises the predictor form and
/// converts (A = Abar + K C). Errors carry the failing stage.
IdentifiedModel identify(const SignalRecord& rec, const RealizationConfig& cfg,
                         const IdentifyOverrides& overrides = {});

}  // namespace parsim
