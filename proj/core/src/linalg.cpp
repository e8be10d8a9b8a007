#include "parsim/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "parsim/error.hpp"

namespace parsim::linalg {

double rank_threshold(Index rows, Index cols) {
  return std::numeric_limits<double>::epsilon() *
         static_cast<double>(std::max<Index>({rows, cols, 1}));
}

LeastSquares solve_least_squares(const Matrix& design, const Matrix& targets) {
  if (design.rows() != targets.rows()) {
    throw Error(ErrorCategory::config, "least squares: design and target row counts differ");
  }
  Eigen::CompleteOrthogonalDecomposition<Matrix> cod;
  cod.setThreshold(rank_threshold(design.rows(), design.cols()));
  cod.compute(design);
  return {cod.solve(targets), cod.rank()};
}

Index numerical_rank(const Matrix& m) {
  if (m.size() == 0) return 0;
  Eigen::ColPivHouseholderQR<Matrix> qr;
  qr.setThreshold(rank_threshold(m.rows(), m.cols()));
  qr.compute(m);
  return qr.rank();
}

BandedCholesky BandedCholesky::from_toeplitz(const Vector& autocovariance, Index size) {
  const Index bw = std::min<Index>(autocovariance.size() - 1, std::max<Index>(size - 1, 0));
  if (autocovariance.size() == 0 || size <= 0) {
    throw Error(ErrorCategory::config, "banded Cholesky: empty input");
  }
  auto sigma = [&](Index i, Index j) {
    const Index d = i > j ? i - j : j - i;
    return d <= bw ? autocovariance(d) : 0.0;
  };
  Matrix band = Matrix::Zero(size, bw + 1);
  auto at = [&](Index i, Index j) -> double& { return band(i, i - j); };
  for (Index i = 0; i < size; ++i) {
    const Index first = std::max<Index>(0, i - bw);
    for (Index j = first; j <= i; ++j) {
      double s = sigma(i, j);
      const Index kfirst = std::max<Index>(first, j - bw);
      for (Index k = kfirst; k < j; ++k) s -= at(i, k) * at(j, k);
      if (i == j) {
        if (!(s > 0.0) || !std::isfinite(s)) {
          std::ostringstream msg;
          msg << "banded Cholesky: matrix not positive definite at pivot " << i;
          throw Error(ErrorCategory::numeric, msg.str());
        }
        at(i, i) = std::sqrt(s);
      } else {
        at(i, j) = s / at(j, j);
      }
    }
  }
  return BandedCholesky(std::move(band));
}

void BandedCholesky::solve_lower_in_place(Matrix& rhs) const {
  const Index n = size();
  const Index bw = bandwidth();
  if (rhs.rows() != n) {
    throw Error(ErrorCategory::config, "banded Cholesky: right-hand side has wrong row count");
  }
  for (Index i = 0; i < n; ++i) {
    const Index first = std::max<Index>(0, i - bw);
    for (Index k = first; k < i; ++k) rhs.row(i) -= band_(i, i - k) * rhs.row(k);
    rhs.row(i) /= band_(i, 0);
  }
}

Matrix BandedCholesky::dense_lower() const {
  const Index n = size();
  Matrix l = Matrix::Zero(n, n);
  for (Index i = 0; i < n; ++i) {
    for (Index d = 0; d <= bandwidth() && d <= i; ++d) l(i, i - d) = band_(i, d);
  }
  return l;
}

Matrix psd_sqrt(const Matrix& m, double tol) {
  if (m.rows() != m.cols()) {
    throw Error(ErrorCategory::config, "psd_sqrt: matrix is not square");
  }
  if (m.size() == 0) return m;
  const Matrix sym = 0.5 * (m + m.transpose());
  Eigen::SelfAdjointEigenSolver<Matrix> eig(sym);
  if (eig.info() != Eigen::Success) {
    throw Error(ErrorCategory::numeric, "psd_sqrt: eigendecomposition failed");
  }
  Vector lambda = eig.eigenvalues();
  const double floor = -tol * std::max(1.0, lambda.maxCoeff());
  for (Index i = 0; i < lambda.size(); ++i) {
    if (lambda(i) < floor) {
      std::ostringstream msg;
      msg << "psd_sqrt: matrix is indefinite (eigenvalue " << lambda(i) << ")";
      throw Error(ErrorCategory::numeric, msg.str());
    }
    lambda(i) = std::sqrt(std::max(lambda(i), 0.0));
  }
  const Matrix& v = eig.eigenvectors();
  return v * lambda.asDiagonal() * v.transpose();
}

}  // namespace parsim::linalg
