#pragma once

#include <optional>

#include "parsim/types.hpp"

namespace parsim {

/// Discrete LTI system in innovations form
///
///   x[k+1] = A x[k] + B u[k] + K e[k]
///   y[k]   = C x[k] + D u[k] + e[k],     E[e e'] = sigma_e2
///
/// Estimation in this library is single-input single-output, so construction
/// rejects n_u != 1 or n_y != 1. Instances are immutable.
class StateSpaceModel {
 public:
  StateSpaceModel(Matrix a, Matrix b, Matrix c, Matrix d, Matrix k, double sigma_e2 = 0.0);

  const Matrix& A() const { return a_; }
  const Matrix& B() const { return b_; }
  const Matrix& C() const { return c_; }
  const Matrix& D() const { return d_; }
  const Matrix& K() const { return k_; }
  double sigma_e2() const { return sigma_e2_; }

  Index nx() const { return a_.rows(); }
  Index nu() const { return b_.cols(); }
  Index ny() const { return c_.rows(); }

  /// Same dynamics with a different innovations variance.
  StateSpaceModel with_noise_variance(double sigma_e2) const;

  friend bool operator==(const StateSpaceModel&, const StateSpaceModel&) = default;

 private:
  Matrix a_, b_, c_, d_, k_;
  double sigma_e2_;
};

/// Predictor form: x[k+1] = A_bar x + B_bar u + K y, with A_bar = A - K C and
/// B_bar = B - K D.
class PredictorModel {
 public:
  PredictorModel(Matrix a_bar, Matrix b_bar, Matrix c, Matrix d, Matrix k);

  const Matrix& A_bar() const { return a_bar_; }
  const Matrix& B_bar() const { return b_bar_; }
  const Matrix& C() const { return c_; }
  const Matrix& D() const { return d_; }
  const Matrix& K() const { return k_; }

  friend bool operator==(const PredictorModel&, const PredictorModel&) = default;

 private:
  Matrix a_bar_, b_bar_, c_, d_, k_;
};

/// One input/output record; `e` is present only for simulated data.
struct SignalRecord {
  Vector u;
  Vector y;
  std::optional<Vector> e;

  Index size() const { return u.size(); }
  /// Throws ErrorCategory::config on length mismatch or non-finite samples.
  void validate() const;
};

PredictorModel to_predictor_form(const StateSpaceModel& m);
StateSpaceModel from_predictor_form(const PredictorModel& p, double sigma_e2 = 0.0);

/// Iterates the innovations recursion from `x0` (zero when omitted).
/// Throws ErrorCategory::numeric naming the step if the state stops being finite.
Vector simulate(const StateSpaceModel& m, const Vector& u, const Vector& e,
                const std::optional<Vector>& x0 = std::nullopt);

/// G_1..G_count with G_i = C A^{i-1} B.
Vector markov_g(const StateSpaceModel& m, Index count);
/// H_1..H_count with H_i = C A^{i-1} K.  (H_0 = 1 is implicit.)
Vector markov_h(const StateSpaceModel& m, Index count);

/// u -> y impulse response [D, G_1, ..., G_{length-1}].
Vector impulse_response(const StateSpaceModel& m, Index length);
/// e -> y impulse response [1, H_1, ..., H_{length-1}].
Vector noise_impulse_response(const StateSpaceModel& m, Index length);

double spectral_radius(const Matrix& a);
double spectral_radius(const StateSpaceModel& m);

inline constexpr double kStabilityMargin = 1e-9;

/// max |eig(A)| < 1 - margin.
bool is_stable(const Matrix& a, double margin = kStabilityMargin);
bool is_stable(const StateSpaceModel& m, double margin = kStabilityMargin);

}  // namespace parsim
