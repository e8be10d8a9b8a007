#include "parsim/ss_model.hpp"

#include <cmath>
#include <sstream>
#include <string>

#include "parsim/error.hpp"

namespace parsim {

namespace {

void require(bool ok, const std::string& what) {
  if (!ok) throw Error(ErrorCategory::config, what);
}

void check_dimensions(const Matrix& a, const Matrix& b, const Matrix& c, const Matrix& d,
                      const Matrix& k, const char* a_name) {
  const Index nx = a.rows();
  require(nx >= 1 && a.cols() == nx, std::string(a_name) + " must be square and non-empty");
  require(b.rows() == nx, "B must have n_x rows");
  require(c.cols() == nx, "C must have n_x columns");
  require(k.rows() == nx, "K must have n_x rows");
  const Index nu = b.cols();
  const Index ny = c.rows();
  require(d.rows() == ny && d.cols() == nu, "D must be n_y x n_u");
  require(k.cols() == ny, "K must be n_x x n_y");
  require(nu == 1 && ny == 1, "only single-input single-output models are supported");
  for (const Matrix* m : {&a, &b, &c, &d, &k}) {
    require(m->allFinite(), "model matrices must be finite");
  }
}

Vector markov_sequence(const Matrix& a, const Matrix& c, const Matrix& right, Index count) {
  if (count < 0) throw Error(ErrorCategory::config, "Markov parameter count must be >= 0");
  Vector out(count);
  Matrix ca = c;
  for (Index i = 0; i < count; ++i) {
    out(i) = (ca * right)(0, 0);
    ca = ca * a;
  }
  return out;
}

}  // namespace

StateSpaceModel::StateSpaceModel(Matrix a, Matrix b, Matrix c, Matrix d, Matrix k,
                                 double sigma_e2)
    : a_(std::move(a)),
      b_(std::move(b)),
      c_(std::move(c)),
      d_(std::move(d)),
      k_(std::move(k)),
      sigma_e2_(sigma_e2) {
  check_dimensions(a_, b_, c_, d_, k_, "A");
  require(std::isfinite(sigma_e2_) && sigma_e2_ >= 0.0, "sigma_e2 must be finite and >= 0");
}

StateSpaceModel StateSpaceModel::with_noise_variance(double sigma_e2) const {
  return StateSpaceModel(a_, b_, c_, d_, k_, sigma_e2);
}

PredictorModel::PredictorModel(Matrix a_bar, Matrix b_bar, Matrix c, Matrix d, Matrix k)
    : a_bar_(std::move(a_bar)),
      b_bar_(std::move(b_bar)),
      c_(std::move(c)),
      d_(std::move(d)),
      k_(std::move(k)) {
  check_dimensions(a_bar_, b_bar_, c_, d_, k_, "A_bar");
}

void SignalRecord::validate() const {
  require(u.size() == y.size(), "u and y must have equal length");
  require(u.allFinite() && y.allFinite(), "signal samples must be finite");
  if (e) {
    require(e->size() == u.size(), "e must have the same length as u");
    require(e->allFinite(), "signal samples must be finite");
  }
}

PredictorModel to_predictor_form(const StateSpaceModel& m) {
  return PredictorModel(m.A() - m.K() * m.C(), m.B() - m.K() * m.D(), m.C(), m.D(), m.K());
}

StateSpaceModel from_predictor_form(const PredictorModel& p, double sigma_e2) {
  return StateSpaceModel(p.A_bar() + p.K() * p.C(), p.B_bar() + p.K() * p.D(), p.C(), p.D(),
                         p.K(), sigma_e2);
}

Vector simulate(const StateSpaceModel& m, const Vector& u, const Vector& e,
                const std::optional<Vector>& x0) {
  require(u.size() == e.size(), "simulate: u and e must have equal length");
  Vector x = Vector::Zero(m.nx());
  if (x0) {
    require(x0->size() == m.nx(), "simulate: x0 must have n_x entries");
    x = *x0;
  }
  const Vector b = m.B().col(0);
  const Vector k = m.K().col(0);
  const Eigen::RowVectorXd c = m.C().row(0);
  const double d = m.D()(0, 0);

  Vector y(u.size());
  Vector next(m.nx());
  for (Index t = 0; t < u.size(); ++t) {
    y(t) = c.dot(x) + d * u(t) + e(t);
    next.noalias() = m.A() * x;
    next += b * u(t) + k * e(t);
    x.swap(next);
    if (!x.allFinite()) {
      std::ostringstream msg;
      msg << "simulate: state diverged at step " << t;
      throw Error(ErrorCategory::numeric, msg.str());
    }
  }
  return y;
}

Vector markov_g(const StateSpaceModel& m, Index count) {
  return markov_sequence(m.A(), m.C(), m.B(), count);
}

Vector markov_h(const StateSpaceModel& m, Index count) {
  return markov_sequence(m.A(), m.C(), m.K(), count);
}

Vector impulse_response(const StateSpaceModel& m, Index length) {
  require(length >= 1, "impulse response length must be >= 1");
  Vector g(length);
  g(0) = m.D()(0, 0);
  g.tail(length - 1) = markov_g(m, length - 1);
  return g;
}

Vector noise_impulse_response(const StateSpaceModel& m, Index length) {
  require(length >= 1, "impulse response length must be >= 1");
  Vector h(length);
  h(0) = 1.0;
  h.tail(length - 1) = markov_h(m, length - 1);
  return h;
}

double spectral_radius(const Matrix& a) {
  require(a.rows() == a.cols(), "spectral radius needs a square matrix");
  if (a.size() == 0) return 0.0;
  Eigen::EigenSolver<Matrix> eig(a, false);
  if (eig.info() != Eigen::Success) {
    throw Error(ErrorCategory::numeric, "eigenvalue computation failed");
  }
  return eig.eigenvalues().cwiseAbs().maxCoeff();
}

double spectral_radius(const StateSpaceModel& m) { return spectral_radius(m.A()); }

bool is_stable(const Matrix& a, double margin) { return spectral_radius(a) < 1.0 - margin; }

bool is_stable(const StateSpaceModel& m, double margin) { return is_stable(m.A(), margin); }

}  // namespace parsim
