#include "parsim/realization.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "parsim/error.hpp"
#include "parsim/linalg.hpp"

namespace parsim {

void RealizationConfig::validate() const {
  if (f < 2) throw Error(ErrorCategory::config, "future horizon f must be >= 2");
  if (order < 1 || order > f - 1) {
    std::ostringstream msg;
    msg << "model order must satisfy 1 <= n_x <= f - 1 (n_x = " << order << ", f = " << f << ")";
    throw Error(ErrorCategory::config, msg.str());
  }
  if (p && *p < 1) throw Error(ErrorCategory::config, "past horizon p must be >= 1");
  if (!p && aic_max_p < order + 1) {
    throw Error(ErrorCategory::config, "AIC grid is empty: aic_max_p < n_x + 1");
  }
}

std::vector<Index> default_aic_grid(Index order, Index max_p) {
  std::vector<Index> grid;
  for (Index p = order + 1; p <= max_p; ++p) grid.push_back(p);
  return grid;
}

Matrix weight_w2(const DataBlocks& blocks) {
  const OrthogonalComplement proj = orth_projection_complement(blocks.u_future);
  const Matrix z_perp = proj.apply(blocks.z_past);
  return linalg::psd_sqrt(z_perp * z_perp.transpose());
}

SvdRealization weighted_svd_realize(const RangeEstimate& est, const Matrix& w2, Index order) {
  if (w2.rows() != est.gamma_lp.cols() || w2.cols() != est.gamma_lp.cols()) {
    throw Error(ErrorCategory::config, "W2 does not match the column count of Gamma_f L_p");
  }
  const Matrix weighted = est.gamma_lp * w2;
  Eigen::JacobiSVD<Matrix> svd(weighted, Eigen::ComputeThinU);
  const Vector& s = svd.singularValues();
  const double tol =
      linalg::rank_threshold(weighted.rows(), weighted.cols()) * (s.size() ? s(0) : 0.0);
  if (order > s.size() || !(s.size() > 0 && s(order - 1) > tol)) {
    std::ostringstream msg;
    msg << "model order " << order << " exceeds the numerical rank of the weighted estimate;"
        << " singular values:";
    for (Index i = 0; i < s.size(); ++i) msg << ' ' << s(i);
    throw Error(ErrorCategory::rank, msg.str());
  }
  SvdRealization out;
  out.singular_values = s;
  out.gamma = svd.matrixU().leftCols(order) * s.head(order).cwiseSqrt().asDiagonal();
  return out;
}

std::pair<Matrix, Matrix> extract_AC(const Matrix& gamma, Index order) {
  const Index f = gamma.rows();
  if (gamma.cols() != order) throw Error(ErrorCategory::config, "Gamma column count != n_x");
  if (f < order + 1) {
    throw Error(ErrorCategory::config, "shift extraction needs f >= n_x + 1");
  }
  const Matrix upper = gamma.topRows(f - 1);
  if (linalg::numerical_rank(upper) < order) {
    throw Error(ErrorCategory::rank, "upper block of Gamma_f is rank deficient");
  }
  auto ls = linalg::solve_least_squares(upper, gamma.bottomRows(f - 1));
  return {ls.solution, gamma.topRows(1)};
}

Matrix fit_markov_gain(const Matrix& a, const Matrix& c,
                       std::span<const MarkovObservation> observations) {
  const Index nx = a.rows();
  if (observations.empty()) return Matrix::Zero(nx, 1);
  Index max_lag = 0;
  for (const auto& obs : observations) {
    if (obs.lag < 1) throw Error(ErrorCategory::config, "Markov observation lag must be >= 1");
    max_lag = std::max(max_lag, obs.lag);
  }
  std::vector<RowVector> powers;  // C A^{lag-1}
  powers.reserve(static_cast<std::size_t>(max_lag));
  RowVector ca = c.row(0);
  for (Index l = 1; l <= max_lag; ++l) {
    powers.push_back(ca);
    ca = ca * a;
  }
  const auto n_obs = static_cast<Index>(observations.size());
  Matrix design(n_obs, nx);
  Vector rhs(n_obs);
  for (Index r = 0; r < n_obs; ++r) {
    const auto& obs = observations[static_cast<std::size_t>(r)];
    design.row(r) = powers[static_cast<std::size_t>(obs.lag - 1)];
    rhs(r) = obs.value;
  }
  if (!design.allFinite()) {
    throw Error(ErrorCategory::numeric, "Markov regressor overflowed (|A| too large)");
  }
  if (linalg::numerical_rank(design) < nx) {
    throw Error(ErrorCategory::rank,
                "Markov regressor [C; CA; ...] is rank deficient (unobservable (A, C))");
  }
  return linalg::solve_least_squares(design, rhs).solution;
}

std::vector<MarkovObservation> markov_observations(const RangeEstimate& est) {
  std::vector<MarkovObservation> obs;
  for (const RowVector& row : est.g_rows) {
    const Index i = row.size();
    // position t holds G_{i-1-t}; the last entry is G_0 = D
    for (Index t = 0; t + 1 < i; ++t) obs.push_back({i - 1 - t, row(t)});
  }
  return obs;
}

std::vector<MarkovObservation> markov_observations(const Vector& sequence) {
  std::vector<MarkovObservation> obs;
  obs.reserve(static_cast<std::size_t>(sequence.size()));
  for (Index j = 0; j < sequence.size(); ++j) obs.push_back({j + 1, sequence(j)});
  return obs;
}

namespace {

double markov_residual(const Matrix& a, const Matrix& c, const Matrix& x,
                       std::span<const MarkovObservation> obs) {
  double rss = 0.0;
  for (const auto& o : obs) {
    RowVector ca = c.row(0);
    for (Index l = 1; l < o.lag; ++l) ca = ca * a;
    const double r = o.value - (ca * x)(0, 0);
    rss += r * r;
  }
  return obs.empty() ? 0.0 : std::sqrt(rss / static_cast<double>(obs.size()));
}

}  // namespace

std::pair<Matrix, Matrix> estimate_BK(const Matrix& a, const Matrix& c, const RangeEstimate& est,
                                      const InnovationsMarkov& h) {
  const auto g_obs = est.g_rows.empty() ? markov_observations(h.g) : markov_observations(est);
  const auto h_obs = markov_observations(h.h);
  return {fit_markov_gain(a, c, g_obs), fit_markov_gain(a, c, h_obs)};
}

namespace {

template <typename Fn>
auto run_stage(const char* stage, Fn&& fn) -> decltype(fn()) {
  try {
    return fn();
  } catch (const Error& e) {
    throw e.with_stage(stage);
  }
}

}  // namespace

IdentifiedModel identify(const SignalRecord& rec, const RealizationConfig& cfg,
                         const IdentifyOverrides& overrides) {
  run_stage("config", [&] {
    cfg.validate();
    rec.validate();
  });

  const Index p = run_stage("past-horizon", [&] {
    if (cfg.p) return *cfg.p;
    std::vector<Index> grid = default_aic_grid(cfg.order, cfg.aic_max_p);
    std::erase_if(grid, [&](Index n) { return rec.size() < kArxSamplesPerOrder * n; });
    if (grid.empty()) throw Error(ErrorCategory::config, "record too short for any AIC order");
    return select_order_aic(rec, grid);
  });

  const DataBlocks blocks = run_stage("blocks", [&] {
    DataBlocks b = assemble_blocks(rec, cfg.f, p);
    require_input_excitation(b);
    return b;
  });

  // The ARX order follows p; SSARX additionally needs f - 1 predictor lags.
  const Index arx_order = cfg.method == Method::ssarx ? std::max(p, cfg.f - 1) : p;
  const PredictorMarkov pm = run_stage("arx", [&] { return fit_arx(rec, arx_order); });
  InnovationsMarkov innovations = predictor_to_innovations(pm);
  if (cfg.method == Method::classical) innovations.g = predictor_to_innovations_g(pm);

  RangeEstimate est = run_stage("range", [&] {
    switch (cfg.method) {
      case Method::parsim: return parsim_ols(blocks, cfg.bank);
      case Method::parsim_opt: {
        InnovationsMarkov weighting = innovations;
        if (overrides.weighting_h) weighting.h = *overrides.weighting_h;
        return parsim_wls(blocks, weighting, cfg.bank);
      }
      case Method::classical: return classical_projection(blocks);
      case Method::ssarx: return ssarx_estimate(blocks, pm);
    }
    throw Error(ErrorCategory::config, "unknown method");
  });

  const SvdRealization svd = run_stage("svd", [&] {
    const Matrix w2 = cfg.w2_mode == W2Mode::identity
                          ? Matrix::Identity(est.gamma_lp.cols(), est.gamma_lp.cols())
                          : weight_w2(blocks);
    return weighted_svd_realize(est, w2, cfg.order);
  });

  auto [a_hat, c_hat] = run_stage("shift", [&] { return extract_AC(svd.gamma, cfg.order); });

  IdentifyDiagnostics diag;
  diag.p = p;
  diag.arx_order = arx_order;
  diag.arx_residual_variance = pm.residual_variance;
  if (cfg.order < svd.singular_values.size()) {
    diag.singular_value_gap =
        svd.singular_values(cfg.order) / svd.singular_values(cfg.order - 1);
  }

  Matrix b_hat, k_hat;
  run_stage("markov-fit", [&] {
    if (cfg.method == Method::ssarx) {
      // a_hat is Abar here; fit Bbar and K in predictor form.
      InnovationsMarkov predictor{pm.h_bar, pm.g_bar};
      std::tie(b_hat, k_hat) = estimate_BK(a_hat, c_hat, est, predictor);
      diag.b_fit_residual = markov_residual(a_hat, c_hat, b_hat, markov_observations(est));
      diag.k_fit_residual = markov_residual(a_hat, c_hat, k_hat, markov_observations(pm.h_bar));
      a_hat = a_hat + k_hat * c_hat;
    } else {
      std::tie(b_hat, k_hat) = estimate_BK(a_hat, c_hat, est, innovations);
      const auto g_obs = est.g_rows.empty() ? markov_observations(innovations.g)
                                            : markov_observations(est);
      diag.b_fit_residual = markov_residual(a_hat, c_hat, b_hat, g_obs);
      diag.k_fit_residual =
          markov_residual(a_hat, c_hat, k_hat, markov_observations(innovations.h));
    }
  });

  StateSpaceModel model = run_stage("assemble", [&] {
    return StateSpaceModel(a_hat, b_hat, c_hat, Matrix::Zero(1, 1), k_hat,
                           pm.residual_variance);
  });
  diag.unstable = !is_stable(model);
  if (diag.unstable) diag.notes.emplace_back("identified A is not strictly stable");

  return IdentifiedModel{std::move(model), svd.singular_values, std::move(est), std::move(diag)};
}

}  // namespace parsim
