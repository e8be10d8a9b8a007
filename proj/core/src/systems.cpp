#include "parsim/systems.hpp"

#include <cmath>
#include <complex>
#include <numbers>
#include <random>
#include <vector>

#include "parsim/error.hpp"
#include "parsim/signals.hpp"

namespace parsim::bench {

namespace {

// Coefficients in descending powers of q (leading entry first).
std::vector<double> poly_mul(const std::vector<double>& a, const std::vector<double>& b) {
  std::vector<double> out(a.size() + b.size() - 1, 0.0);
  for (std::size_t i = 0; i < a.size(); ++i) {
    for (std::size_t j = 0; j < b.size(); ++j) out[i + j] += a[i] * b[j];
  }
  return out;
}

// Observer canonical realisation of num_u/den and num_e/den, where den is monic
// of degree n and both numerators have degree n - 1 (n coefficients).
StateSpaceModel observer_canonical(const std::vector<double>& den,
                                   const std::vector<double>& num_u,
                                   const std::vector<double>& num_e, double sigma_e2) {
  const auto n = static_cast<Index>(den.size()) - 1;
  Matrix a = Matrix::Zero(n, n);
  Matrix b(n, 1), k(n, 1), c = Matrix::Zero(1, n);
  for (Index i = 0; i < n; ++i) {
    a(i, 0) = -den[static_cast<std::size_t>(i + 1)];
    if (i + 1 < n) a(i, i + 1) = 1.0;
    b(i, 0) = num_u[static_cast<std::size_t>(i)];
    k(i, 0) = num_e[static_cast<std::size_t>(i)];
  }
  c(0, 0) = 1.0;
  return StateSpaceModel(a, b, c, Matrix::Zero(1, 1), k, sigma_e2);
}

Matrix krylov(const Matrix& a, const Matrix& x) {
  const Index n = a.rows();
  Matrix out(n, n * x.cols());
  Matrix block = x;
  for (Index i = 0; i < n; ++i) {
    out.middleCols(i * x.cols(), x.cols()) = block;
    block = a * block;
  }
  return out;
}

Index relative_rank(const Matrix& m, double tol) {
  Eigen::JacobiSVD<Matrix> svd(m);
  const Vector& s = svd.singularValues();
  if (s.size() == 0 || s(0) == 0.0) return 0;
  Index r = 0;
  for (Index i = 0; i < s.size(); ++i) {
    if (s(i) > tol * s(0)) ++r;
  }
  return r;
}

}  // namespace

StateSpaceModel example1_system(double sigma_e2) {
  const std::vector<double> plant_den{1.0, -0.6, 0.8};
  const std::vector<double> noise_den{1.0, -0.98};
  const std::vector<double> den = poly_mul(plant_den, noise_den);
  // G = (0.21 q + 0.07)(q - 0.98) / den,  H - 1 = 0.98 (q^2 - 0.6 q + 0.8) / den
  const std::vector<double> num_u = poly_mul({0.21, 0.07}, noise_den);
  std::vector<double> num_e = plant_den;
  for (double& v : num_e) v *= 0.98;
  return observer_canonical(den, num_u, num_e, sigma_e2);
}

Example2 example2_system() {
  const double g = kExample2Gamma;
  Matrix a(2, 2);
  a << 2.0 * g, -g * g, 1.0, 0.0;
  Matrix b(2, 1);
  b << 1.0, -2.0;
  Matrix k(2, 1);
  k << -0.21, -0.559;
  Matrix c(1, 2);
  c << 2.0, -1.0;
  const std::vector<double> filter =
      poly_mul(poly_mul({1.0, -g}, {1.0, -g}), poly_mul({1.0, g}, {1.0, g}));
  Vector fir = Eigen::Map<const Vector>(filter.data(), static_cast<Index>(filter.size()));
  return {StateSpaceModel(a, b, c, Matrix::Zero(1, 1), k, 217.1), fir};
}

Index controllability_rank(const Matrix& a, const Matrix& x, double tol) {
  return relative_rank(krylov(a, x), tol);
}

Index observability_rank(const Matrix& a, const Matrix& c, double tol) {
  return relative_rank(krylov(a.transpose(), c.transpose()), tol);
}

StateSpaceModel random_system(std::uint64_t seed, double sigma_e2) {
  constexpr Index n = kRandomSystemOrder;
  constexpr int kBudget = 10000;
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::uniform_int_distribution<int> pairs_dist(0, static_cast<int>(n / 2));

  for (int attempt = 0; attempt < kBudget; ++attempt) {
    // Poles: some complex pairs (r e^{+-i theta}) plus real poles in (-1, 1).
    const int pairs = pairs_dist(rng);
    Matrix modal = Matrix::Zero(n, n);
    double dominant = 0.0;
    Index at = 0;
    for (int q = 0; q < pairs; ++q, at += 2) {
      const double r = unit(rng);
      const double theta = std::numbers::pi * unit(rng);
      const double re = r * std::cos(theta);
      const double im = r * std::sin(theta);
      modal(at, at) = re;
      modal(at, at + 1) = im;
      modal(at + 1, at) = -im;
      modal(at + 1, at + 1) = re;
      dominant = std::max(dominant, r);
    }
    for (; at < n; ++at) {
      const double pole = 2.0 * unit(rng) - 1.0;
      modal(at, at) = pole;
      dominant = std::max(dominant, std::abs(pole));
    }
    if (!(dominant > kRandomPoleMin && dominant < kRandomPoleMax)) continue;

    Matrix gauss(n, n);
    for (Index i = 0; i < gauss.size(); ++i) gauss.data()[i] = normal(rng);
    const Matrix q = Eigen::HouseholderQR<Matrix>(gauss).householderQ();
    const Matrix a = q * modal * q.transpose();

    Matrix b(n, 1), c(1, n), k(n, 1);
    for (Index i = 0; i < n; ++i) b(i, 0) = 5.0 * normal(rng);
    for (Index i = 0; i < n; ++i) c(0, i) = normal(rng);
    bool gain_ok = false;
    for (int tries = 0; tries < 100 && !gain_ok; ++tries) {
      for (Index i = 0; i < n; ++i) k(i, 0) = 0.1 * normal(rng);
      gain_ok = is_stable(Matrix(a - k * c));
    }
    if (!gain_ok) continue;
    if (controllability_rank(a, b) < n || observability_rank(a, c) < n) continue;
    return StateSpaceModel(a, b, c, Matrix::Zero(1, 1), k, sigma_e2);
  }
  throw Error(ErrorCategory::numeric, "random_system: rejection-sampling budget exhausted");
}

}  // namespace parsim::bench
