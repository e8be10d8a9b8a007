#pragma once

#include <string_view>
#include <vector>

#include "parsim/arx.hpp"
#include "parsim/data_blocks.hpp"
#include "parsim/types.hpp"

namespace parsim {

enum class Method { parsim, parsim_opt, classical, ssarx };

std::string_view method_name(Method m) noexcept;
/// Accepts "parsim", "parsim_opt" / "parsim-opt", "classical", "ssarx".
Method parse_method(std::string_view name);

/// Estimate of Gamma_f L_p (or Gammabar_f L_p for SSARX) plus the per-row
/// input Markov estimates.
///
/// g_rows[i-1] has i entries [G_{i-1}, ..., G_1, G_0], matching the order of
/// the rows of U_i. It is empty for the classical projection method.
struct RangeEstimate {
  Matrix gamma_lp;
  std::vector<RowVector> g_rows;
  Method method = Method::parsim;
  Index f = 0;
  Index p = 0;
};

struct BankOptions {
  /// When false (the default) D = 0 is imposed: the u[k+i-1] regressor is
  /// dropped from row i and G_0 is reported as exactly zero.
  bool estimate_feedthrough = false;
};

/// Banded lower Toeplitz matrix T of size (N + i - 1) x N whose column j holds
/// H_{i-1}, ..., H_1, H_0 in rows j..j+i-1 (H_0 = 1). It rewrites the row noise
/// H_fi E_i as the product of an innovations row vector with T.
class NoiseToeplitz {
 public:
  /// `h` supplies H_1..H_{band-1}; extra entries are ignored.
  NoiseToeplitz(const Vector& h, Index band, Index cols);

  Index band() const { return generator_.size(); }
  Index cols() const { return cols_; }
  Index rows() const { return cols_ + band() - 1; }

  /// H_k for k = 0..band-1.
  double coefficient(Index k) const { return generator_(k); }

  Matrix dense() const;

  /// noise * T for a row vector of length rows().
  RowVector left_multiply(const RowVector& noise) const;

  /// First column of the banded Toeplitz Gram matrix T'T: r_d = sum_a H_a H_{a+d}.
  Vector gram_autocovariance() const;

 private:
  Vector generator_;  // H_0..H_{band-1}
  Index cols_;
};

/// Throws ErrorCategory::config when h has fewer than i - 1 entries.
NoiseToeplitz build_noise_toeplitz(const Vector& h, Index i, Index cols);

/// Least-squares row fit target ~ theta * regressors (regressors: m x N).
RowVector ols_row(const Matrix& regressors, const RowVector& target);

/// Weighted row fit with weight (T'T)^{-1}:
///   theta = y Z' W (Z W Z')^{-1}
/// computed by whitening with the banded Cholesky factor of T'T, so W is never
/// formed. Identity weighting (band 1) reproduces ols_row exactly.
RowVector wls_row(const Matrix& regressors, const RowVector& target, const NoiseToeplitz& weight);

/// Bank of f OLS fits of Y_fi on [Z_p; U_i].
RangeEstimate parsim_ols(const DataBlocks& blocks, const BankOptions& options = {});

/// Bank of f WLS fits with T built from H_1..H_{i-1} of `h`; lags beyond h.h
/// are treated as zero. Row 1 always coincides with the OLS row.
RangeEstimate parsim_wls(const DataBlocks& blocks, const InnovationsMarkov& h,
                         const BankOptions& options = {});

/// Single projection estimate Y_f Pi Z_p' (Z_p Pi Z_p')^+ with Pi the orthogonal
/// complement of U_f. g_rows is left empty.
RangeEstimate classical_projection(const DataBlocks& blocks);

/// SSARX: subtracts Gbar_f U_f + Hbar_f Y_f built from the ARX estimates and
/// regresses the remainder on Z_p, estimating Gammabar_f L_p. D = 0.
/// g_rows carries the predictor Markov parameters gbar.
RangeEstimate ssarx_estimate(const DataBlocks& blocks, const PredictorMarkov& pm);

}  // namespace parsim
