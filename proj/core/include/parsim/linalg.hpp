#pragma once

#include "parsim/types.hpp"

namespace parsim::linalg {

/// Minimum-norm least-squares solution of `design * X = targets` via a complete
/// orthogonal decomposition. Rank threshold is eps * max(rows, cols) relative to
/// the leading pivot.
struct LeastSquares {
  Matrix solution;
  Index rank = 0;
};

LeastSquares solve_least_squares(const Matrix& design, const Matrix& targets);

/// Numerical rank with the same threshold convention as solve_least_squares.
Index numerical_rank(const Matrix& m);

/// Relative tolerance used for rank decisions on an (rows x cols) matrix.
double rank_threshold(Index rows, Index cols);

/// Cholesky factor of a symmetric positive-definite banded matrix, stored by
/// rows: entry (i, d) of the band holds L(i, i - d) for d = 0..bandwidth.
class BandedCholesky {
 public:
  /// Factor the symmetric banded Toeplitz matrix whose first column is
  /// `autocovariance` (length bandwidth + 1) and whose order is `size`.
  static BandedCholesky from_toeplitz(const Vector& autocovariance, Index size);

  Index size() const { return band_.rows(); }
  Index bandwidth() const { return band_.cols() - 1; }

  /// rhs <- L^{-1} rhs, column by column (rhs has size() rows).
  void solve_lower_in_place(Matrix& rhs) const;

  /// Dense lower-triangular factor, for tests.
  Matrix dense_lower() const;

 private:
  explicit BandedCholesky(Matrix band) : band_(std::move(band)) {}
  Matrix band_;
};

/// Principal square root of a symmetric positive semidefinite matrix.
/// Eigenvalues in [-tol * max(1, lambda_max), 0) are clamped to zero; anything
/// more negative throws ErrorCategory::numeric.
Matrix psd_sqrt(const Matrix& m, double tol = 1e-10);

}  // namespace parsim::linalg
