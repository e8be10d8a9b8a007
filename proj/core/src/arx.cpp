#include "parsim/arx.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "parsim/error.hpp"
#include "parsim/linalg.hpp"

namespace parsim {

namespace {

struct ArxFit {
  Vector theta;
  double rss = 0.0;
  Index samples = 0;
};

// Fit on samples k = start..N-1; requires start >= order.
ArxFit fit_window(const SignalRecord& rec, Index order, Index start) {
  const Index n_samples = rec.size() - start;
  Matrix phi(n_samples, 2 * order);
  for (Index row = 0; row < n_samples; ++row) {
    const Index k = start + row;
    for (Index i = 1; i <= order; ++i) {
      phi(row, i - 1) = rec.y(k - i);
      phi(row, order + i - 1) = rec.u(k - i);
    }
  }
  const Vector target = rec.y.segment(start, n_samples);

  const Index input_rank = linalg::numerical_rank(phi.rightCols(order));
  if (input_rank < order) {
    std::ostringstream msg;
    msg << "ARX(" << order << "): input lags are collinear (rank " << input_rank << ")";
    throw Error(ErrorCategory::excitation, msg.str());
  }
  auto ls = linalg::solve_least_squares(phi, target);
  ArxFit fit;
  fit.theta = ls.solution.col(0);
  fit.rss = (target - phi * fit.theta).squaredNorm();
  fit.samples = n_samples;
  return fit;
}

void check_order(const SignalRecord& rec, Index order) {
  if (order < 1) throw Error(ErrorCategory::config, "ARX order must be >= 1");
  if (rec.size() < kArxSamplesPerOrder * order) {
    std::ostringstream msg;
    msg << "ARX(" << order << ") needs at least " << kArxSamplesPerOrder * order
        << " samples, record has " << rec.size();
    throw Error(ErrorCategory::config, msg.str());
  }
}

}  // namespace

PredictorMarkov fit_arx(const SignalRecord& rec, Index order) {
  rec.validate();
  check_order(rec, order);
  const ArxFit fit = fit_window(rec, order, order);
  PredictorMarkov pm;
  pm.h_bar = fit.theta.head(order);
  pm.g_bar = fit.theta.tail(order);
  const Index dof = fit.samples - 2 * order;
  pm.residual_variance = dof > 0 ? fit.rss / static_cast<double>(dof) : 0.0;
  return pm;
}

std::vector<double> aic_scores(const SignalRecord& rec, std::span<const Index> grid) {
  rec.validate();
  if (grid.empty()) throw Error(ErrorCategory::config, "AIC grid is empty");
  const Index start = *std::max_element(grid.begin(), grid.end());
  const double scale = std::max(rec.y.squaredNorm(), std::numeric_limits<double>::min());
  std::vector<double> scores;
  scores.reserve(grid.size());
  for (const Index order : grid) {
    double score = std::numeric_limits<double>::infinity();
    try {
      check_order(rec, order);
      if (start < rec.size()) {
        const ArxFit fit = fit_window(rec, order, start);
        const auto n_eff = static_cast<double>(fit.samples);
        // Exact fits (noise-free data) would give ln(0); floor at rounding level.
        const double rss = std::max(fit.rss, 1e-30 * scale);
        score = n_eff * std::log(rss / n_eff) + 2.0 * static_cast<double>(2 * order);
      }
    } catch (const Error&) {
      // left at +inf
    }
    scores.push_back(score);
  }
  return scores;
}

Index select_order_aic(const SignalRecord& rec, std::span<const Index> grid) {
  const std::vector<double> scores = aic_scores(rec, grid);
  Index best = -1;
  double best_score = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (!std::isfinite(scores[i])) continue;
    if (best < 0 || scores[i] < best_score || (scores[i] == best_score && grid[i] < best)) {
      best = grid[i];
      best_score = scores[i];
    }
  }
  if (best < 0) throw Error(ErrorCategory::rank, "AIC order selection: no order could be fitted");
  return best;
}

namespace {

// out_i = driven_i + sum_{j=1}^{i-1} h_bar_j out_{i-j}
Vector markov_recursion(const Vector& h_bar, const Vector& driven) {
  const Index n = driven.size();
  Vector out(n);
  for (Index i = 0; i < n; ++i) {
    double acc = driven(i);
    for (Index j = 0; j < i; ++j) acc += h_bar(j) * out(i - 1 - j);
    out(i) = acc;
  }
  return out;
}

}  // namespace

InnovationsMarkov predictor_to_innovations(const PredictorMarkov& pm) {
  InnovationsMarkov im;
  im.h = markov_recursion(pm.h_bar, pm.h_bar);
  return im;
}

Vector predictor_to_innovations_g(const PredictorMarkov& pm) {
  if (pm.g_bar.size() != pm.h_bar.size()) {
    throw Error(ErrorCategory::config, "predictor Markov sequences differ in length");
  }
  return markov_recursion(pm.h_bar, pm.g_bar);
}

}  // namespace parsim
