#include "parsim/estimators.hpp"

#include <sstream>
#include <string>

#include "parsim/error.hpp"
#include "parsim/linalg.hpp"

namespace parsim {

std::string_view method_name(Method m) noexcept {
  switch (m) {
    case Method::parsim: return "parsim";
    case Method::parsim_opt: return "parsim_opt";
    case Method::classical: return "classical";
    case Method::ssarx: return "ssarx";
  }
  return "unknown";
}

Method parse_method(std::string_view name) {
  std::string key(name);
  for (char& c : key) {
    if (c == '-') c = '_';
  }
  if (key == "parsim") return Method::parsim;
  if (key == "parsim_opt") return Method::parsim_opt;
  if (key == "classical") return Method::classical;
  if (key == "ssarx") return Method::ssarx;
  throw Error(ErrorCategory::config, "unknown method '" + std::string(name) + "'");
}

NoiseToeplitz::NoiseToeplitz(const Vector& h, Index band, Index cols) : cols_(cols) {
  if (band < 1 || cols < 1) {
    throw Error(ErrorCategory::config, "noise Toeplitz: band and column count must be >= 1");
  }
  if (h.size() < band - 1) {
    std::ostringstream msg;
    msg << "noise Toeplitz: need " << band - 1 << " Markov parameters, got " << h.size();
    throw Error(ErrorCategory::config, msg.str());
  }
  generator_.resize(band);
  generator_(0) = 1.0;
  generator_.tail(band - 1) = h.head(band - 1);
}

Matrix NoiseToeplitz::dense() const {
  Matrix t = Matrix::Zero(rows(), cols_);
  const Index i = band();
  for (Index j = 0; j < cols_; ++j) {
    // rows j..j+i-1 hold H_{i-1}..H_0
    for (Index r = 0; r < i; ++r) t(j + r, j) = generator_(i - 1 - r);
  }
  return t;
}

RowVector NoiseToeplitz::left_multiply(const RowVector& noise) const {
  if (noise.size() != rows()) {
    throw Error(ErrorCategory::config, "noise Toeplitz: noise row has wrong length");
  }
  const Index i = band();
  RowVector out(cols_);
  for (Index j = 0; j < cols_; ++j) {
    double acc = 0.0;
    for (Index r = 0; r < i; ++r) acc += noise(j + r) * generator_(i - 1 - r);
    out(j) = acc;
  }
  return out;
}

Vector NoiseToeplitz::gram_autocovariance() const {
  const Index i = band();
  Vector r(i);
  for (Index d = 0; d < i; ++d) {
    r(d) = generator_.head(i - d).dot(generator_.tail(i - d));
  }
  return r;
}

NoiseToeplitz build_noise_toeplitz(const Vector& h, Index i, Index cols) {
  return NoiseToeplitz(h, i, cols);
}

RowVector ols_row(const Matrix& regressors, const RowVector& target) {
  if (regressors.cols() != target.size()) {
    throw Error(ErrorCategory::config, "row fit: regressor and target lengths differ");
  }
  auto ls = linalg::solve_least_squares(regressors.transpose(), target.transpose());
  return ls.solution.col(0).transpose();
}

RowVector wls_row(const Matrix& regressors, const RowVector& target,
                  const NoiseToeplitz& weight) {
  if (regressors.cols() != target.size() || weight.cols() != target.size()) {
    throw Error(ErrorCategory::config, "row fit: regressor, target and weight sizes differ");
  }
  if (weight.band() == 1) return ols_row(regressors, target);

  const auto chol = linalg::BandedCholesky::from_toeplitz(weight.gram_autocovariance(),
                                                          weight.cols());
  Matrix stacked(target.size(), regressors.rows() + 1);
  stacked.leftCols(regressors.rows()) = regressors.transpose();
  stacked.col(regressors.rows()) = target.transpose();
  chol.solve_lower_in_place(stacked);

  auto ls = linalg::solve_least_squares(stacked.leftCols(regressors.rows()),
                                        stacked.rightCols(1));
  return ls.solution.col(0).transpose();
}

namespace {

Index input_rows_for(Index i, const BankOptions& options) {
  return options.estimate_feedthrough ? i : i - 1;
}

Matrix row_regressors(const DataBlocks& blocks, Index i, const BankOptions& options) {
  const Index n_inputs = input_rows_for(i, options);
  Matrix z(blocks.z_past.rows() + n_inputs, blocks.columns);
  z.topRows(blocks.z_past.rows()) = blocks.z_past;
  z.bottomRows(n_inputs) = blocks.u_future.topRows(n_inputs);
  return z;
}

void require_row_excitation(const DataBlocks& blocks, Index i, const BankOptions& options) {
  const Index n_inputs = input_rows_for(i, options);
  Matrix inputs(blocks.p + n_inputs, blocks.columns);
  inputs << blocks.u_past, blocks.u_future.topRows(n_inputs);
  if (linalg::numerical_rank(inputs.transpose()) < inputs.rows()) {
    std::ostringstream msg;
    msg << "row " << i << ": input regressors [U_p; U_" << n_inputs << "] are rank deficient";
    throw Error(ErrorCategory::excitation, msg.str());
  }
}

template <typename RowSolver>
RangeEstimate run_bank(const DataBlocks& blocks, Method method, const BankOptions& options,
                       RowSolver&& solve) {
  RangeEstimate est;
  est.method = method;
  est.f = blocks.f;
  est.p = blocks.p;
  const Index zp_rows = blocks.z_past.rows();
  est.gamma_lp.resize(blocks.f, zp_rows);
  est.g_rows.reserve(static_cast<std::size_t>(blocks.f));

  for (Index i = 1; i <= blocks.f; ++i) {
    require_row_excitation(blocks, i, options);
    const Matrix z = row_regressors(blocks, i, options);
    const RowVector theta = solve(z, blocks.y_future.row(i - 1), i);
    est.gamma_lp.row(i - 1) = theta.head(zp_rows);
    RowVector g = RowVector::Zero(i);
    g.head(input_rows_for(i, options)) = theta.tail(input_rows_for(i, options));
    est.g_rows.push_back(std::move(g));
  }
  return est;
}

}  // namespace

RangeEstimate parsim_ols(const DataBlocks& blocks, const BankOptions& options) {
  return run_bank(blocks, Method::parsim, options,
                  [](const Matrix& z, const RowVector& y, Index) { return ols_row(z, y); });
}

RangeEstimate parsim_wls(const DataBlocks& blocks, const InnovationsMarkov& h,
                         const BankOptions& options) {
  // Lags past the supplied sequence are taken as zero.
  Vector padded = Vector::Zero(std::max<Index>(blocks.f - 1, 0));
  const Index available = std::min<Index>(h.h.size(), padded.size());
  padded.head(available) = h.h.head(available);
  if (!padded.allFinite()) {
    throw Error(ErrorCategory::numeric, "weighting Markov parameters are not finite");
  }
  return run_bank(blocks, Method::parsim_opt, options,
                  [&](const Matrix& z, const RowVector& y, Index i) {
                    return wls_row(z, y, NoiseToeplitz(padded, i, z.cols()));
                  });
}

RangeEstimate classical_projection(const DataBlocks& blocks) {
  const OrthogonalComplement proj = orth_projection_complement(blocks.u_future);
  const Matrix y_perp = proj.apply(blocks.y_future);
  const Matrix z_perp = proj.apply(blocks.z_past);
  // Y Pi Z' (Z Pi Z')^+ = (Y Pi) (Z Pi)^+ since Pi is a symmetric idempotent.
  auto ls = linalg::solve_least_squares(z_perp.transpose(), y_perp.transpose());
  RangeEstimate est;
  est.method = Method::classical;
  est.f = blocks.f;
  est.p = blocks.p;
  est.gamma_lp = ls.solution.transpose();
  return est;
}

RangeEstimate ssarx_estimate(const DataBlocks& blocks, const PredictorMarkov& pm) {
  const Index f = blocks.f;
  if (pm.order() < f - 1 || pm.g_bar.size() != pm.h_bar.size()) {
    std::ostringstream msg;
    msg << "SSARX needs at least f - 1 = " << f - 1 << " predictor Markov parameters, got "
        << pm.order();
    throw Error(ErrorCategory::config, msg.str());
  }
  Matrix g_bar_f = Matrix::Zero(f, f);
  Matrix h_bar_f = Matrix::Zero(f, f);
  for (Index r = 1; r < f; ++r) {
    for (Index c = 0; c < r; ++c) {
      g_bar_f(r, c) = pm.g_bar(r - c - 1);
      h_bar_f(r, c) = pm.h_bar(r - c - 1);
    }
  }
  const Matrix residual = blocks.y_future - g_bar_f * blocks.u_future - h_bar_f * blocks.y_future;

  const Index input_rank = linalg::numerical_rank(blocks.u_past.transpose());
  if (input_rank < blocks.p) {
    throw Error(ErrorCategory::excitation, "SSARX: past inputs U_p are rank deficient");
  }
  auto ls = linalg::solve_least_squares(blocks.z_past.transpose(), residual.transpose());

  RangeEstimate est;
  est.method = Method::ssarx;
  est.f = f;
  est.p = blocks.p;
  est.gamma_lp = ls.solution.transpose();
  est.g_rows.reserve(static_cast<std::size_t>(f));
  for (Index i = 1; i <= f; ++i) {
    RowVector g = RowVector::Zero(i);
    for (Index t = 0; t + 1 < i; ++t) g(t) = pm.g_bar(i - 2 - t);  // G_{i-1-t}
    est.g_rows.push_back(std::move(g));
  }
  return est;
}

}  // namespace parsim
