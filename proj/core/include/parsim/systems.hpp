#pragma once

#include <cstdint>

#include "parsim/ss_model.hpp"

namespace parsim::bench {

/// y = (0.21 q^-1 + 0.07 q^-2) / (1 - 0.6 q^-1 + 0.8 q^-2) u + 1 / (1 - 0.98 q^-1) e,
/// realised as a third-order innovations model in observer canonical form.
StateSpaceModel example1_system(double sigma_e2 = 4.0);

inline constexpr double kExample2Gamma = 0.9184;

struct Example2 {
  StateSpaceModel model;
  /// FIR coefficients of (1 - g q^-1)^2 (1 + g q^-1)^2, lag 0 first.
  Vector input_filter;
};

/// Double pole at gamma, sigma_e2 = 217.1, input u = filter * r with white r.
Example2 example2_system();

/// Sixth-order SISO model: dominant pole magnitude in (0.78, 0.9), B ~ N(0, 25),
/// C ~ N(0, 1), D = 0, K ~ N(0, 0.01) with A - K C stable; (A, B) controllable
/// and (A, C) observable. Deterministic in `seed`.
StateSpaceModel random_system(std::uint64_t seed, double sigma_e2 = 1.0);

inline constexpr Index kRandomSystemOrder = 6;
inline constexpr double kRandomPoleMin = 0.78;
inline constexpr double kRandomPoleMax = 0.9;

/// Rank of [X, A X, ..., A^{n-1} X] with relative tolerance `tol`.
Index controllability_rank(const Matrix& a, const Matrix& x, double tol = 1e-10);
Index observability_rank(const Matrix& a, const Matrix& c, double tol = 1e-10);

}  // namespace parsim::bench
