#include <random>
#include <string>

#include <gtest/gtest.h>

#include "parsim/arx.hpp"
#include "parsim/error.hpp"
#include "parsim/estimators.hpp"
#include "parsim/linalg.hpp"
#include "parsim/systems.hpp"
#include "test_support.hpp"

namespace parsim {
namespace {

Vector seq(std::initializer_list<double> values) {
  Vector v(static_cast<Index>(values.size()));
  Index i = 0;
  for (double x : values) v(i++) = x;
  return v;
}

Matrix leading_left_vectors(const Matrix& m, Index n) {
  return Eigen::JacobiSVD<Matrix>(m, Eigen::ComputeThinU).matrixU().leftCols(n);
}

RowVector ols_reference(const Matrix& z, const RowVector& y) {
  return linalg::solve_least_squares(z.transpose(), y.transpose()).solution.transpose();
}

PredictorMarkov exact_predictor_markov(const StateSpaceModel& m, Index count) {
  const PredictorModel p = to_predictor_form(m);
  PredictorMarkov pm;
  pm.h_bar.resize(count);
  pm.g_bar.resize(count);
  Matrix row = p.C();
  for (Index i = 0; i < count; ++i) {
    pm.h_bar(i) = (row * p.K())(0, 0);
    pm.g_bar(i) = (row * p.B_bar())(0, 0);
    row = row * p.A_bar();
  }
  return pm;
}

TEST(Method, NamesRoundTrip) {
  for (Method m : {Method::parsim, Method::parsim_opt, Method::classical, Method::ssarx}) {
    EXPECT_EQ(parse_method(method_name(m)), m);
  }
  EXPECT_EQ(parse_method("parsim-opt"), Method::parsim_opt);
  EXPECT_THROW(parse_method("n4sid"), Error);
}

TEST(NoiseToeplitz, BandTwoDisplay) {
  const double h1 = 0.7;
  const NoiseToeplitz t = build_noise_toeplitz(seq({h1}), 2, 2);
  Matrix expected(3, 2);
  expected << h1, 0, 1, h1, 0, 1;
  EXPECT_EQ(t.dense(), expected);
}

TEST(NoiseToeplitz, BandOneIsIdentity) {
  const NoiseToeplitz t = build_noise_toeplitz(Vector(), 1, 5);
  EXPECT_EQ(t.dense(), Matrix::Identity(5, 5));
}

TEST(NoiseToeplitz, ColumnStructure) {
  const Vector h = seq({0.5, -0.2, 0.1, 9.0});  // last entry beyond the band
  const NoiseToeplitz t = build_noise_toeplitz(h, 4, 6);
  const Matrix d = t.dense();
  ASSERT_EQ(d.rows(), 9);
  ASSERT_EQ(d.cols(), 6);
  for (Index j = 0; j < 6; ++j) {
    for (Index r = 0; r < 9; ++r) {
      const Index offset = r - j;
      const double expected = (offset >= 0 && offset < 4) ? t.coefficient(3 - offset) : 0.0;
      EXPECT_EQ(d(r, j), expected);
    }
  }
  EXPECT_EQ(t.coefficient(0), 1.0);
  EXPECT_EQ(t.coefficient(3), 0.1);
}

TEST(NoiseToeplitz, InsufficientMarkovParametersIsConfigError) {
  try {
    build_noise_toeplitz(seq({0.5}), 3, 10);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.category(), ErrorCategory::config);
  }
}

TEST(NoiseToeplitz, RewritesHankelNoiseProduct) {
  std::mt19937_64 rng(71);
  const Index i = 4, n = 30;
  const Vector h = test::gaussian_matrix(rng, i - 1, 1);
  const NoiseToeplitz t = build_noise_toeplitz(h, i, n);
  const RowVector noise = test::gaussian_matrix(rng, 1, n + i - 1);
  RowVector hfi(i);  // [H_{i-1}, ..., H_1, H_0]
  for (Index c = 0; c < i; ++c) hfi(c) = t.coefficient(i - 1 - c);
  const Matrix ei = build_hankel(noise.transpose(), 0, i, n);
  const RowVector lhs = hfi * ei;
  EXPECT_LT((lhs - noise * t.dense()).cwiseAbs().maxCoeff(), 1e-12);
  EXPECT_LT((lhs - t.left_multiply(noise)).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(NoiseToeplitz, GramAutocovariance) {
  const NoiseToeplitz t = build_noise_toeplitz(seq({0.5, -0.2}), 3, 8);
  const Matrix gram = t.dense().transpose() * t.dense();
  const Vector r = t.gram_autocovariance();
  ASSERT_EQ(r.size(), 3);
  for (Index a = 0; a < 8; ++a) {
    for (Index b = 0; b < 8; ++b) {
      const Index d = std::abs(a - b);
      EXPECT_NEAR(gram(a, b), d < 3 ? r(d) : 0.0, 1e-15);
    }
  }
}

TEST(WlsRow, IdentityWeightEqualsOls) {
  std::mt19937_64 rng(72);
  const Matrix z = test::gaussian_matrix(rng, 5, 80);
  const RowVector y = test::gaussian_matrix(rng, 1, 80);
  const NoiseToeplitz white = build_noise_toeplitz(Vector::Zero(3), 4, 80);
  EXPECT_LT((wls_row(z, y, white) - ols_row(z, y)).cwiseAbs().maxCoeff(), 1e-10);
  EXPECT_EQ(wls_row(z, y, build_noise_toeplitz(Vector(), 1, 80)), ols_row(z, y));
}

TEST(WlsRow, MatchesExplicitWeightedNormalEquations) {
  std::mt19937_64 rng(73);
  const Index n = 60;
  const Matrix z = test::gaussian_matrix(rng, 4, n);
  const RowVector y = test::gaussian_matrix(rng, 1, n);
  const NoiseToeplitz t = build_noise_toeplitz(seq({0.9, 0.4, -0.3}), 4, n);
  const Matrix w = (t.dense().transpose() * t.dense()).inverse();
  const RowVector reference = (y * w * z.transpose()) * (z * w * z.transpose()).inverse();
  EXPECT_LT((wls_row(z, y, t) - reference).cwiseAbs().maxCoeff(), 1e-10);
}

TEST(ParsimOls, NoiseFreeExample1RecoversMarkovParameters) {
  const StateSpaceModel m = bench::example1_system();
  const SignalRecord rec = test::noise_free_record(m, 2000, 74);
  const RangeEstimate est = parsim_ols(assemble_blocks(rec, 10, 20));
  ASSERT_EQ(static_cast<Index>(est.g_rows.size()), 10);
  const Vector g = markov_g(m, 9);
  for (Index i = 1; i <= 10; ++i) {
    const RowVector& row = est.g_rows[static_cast<std::size_t>(i - 1)];
    ASSERT_EQ(row.size(), i);
    EXPECT_EQ(row(i - 1), 0.0);  // G_0 = D = 0
    for (Index lag = 1; lag < i; ++lag) {
      EXPECT_NEAR(row(i - 1 - lag), g(lag - 1), 1e-6) << "row " << i << " lag " << lag;
    }
  }
}

TEST(ParsimOls, SingleRowBankIsOneRegression) {
  const SignalRecord rec = test::noisy_record(bench::example1_system(), 300, 75);
  const DataBlocks b = assemble_blocks(rec, 1, 4);
  const RangeEstimate est = parsim_ols(b);
  EXPECT_LT((est.gamma_lp.row(0) - ols_reference(b.z_past, b.y_row(1))).cwiseAbs().maxCoeff(), 1e-12);

  BankOptions with_d;
  with_d.estimate_feedthrough = true;
  const RangeEstimate est_d = parsim_ols(b, with_d);
  Matrix z(b.z_past.rows() + 1, b.columns);
  z << b.z_past, b.u_stack(1);
  const RowVector theta = ols_reference(z, b.y_row(1));
  EXPECT_LT((est_d.gamma_lp.row(0) - theta.head(b.z_past.rows())).cwiseAbs().maxCoeff(), 1e-12);
  EXPECT_NEAR(est_d.g_rows[0](0), theta(theta.size() - 1), 1e-12);
}

TEST(ParsimOls, RowWithoutExcitationIsNamed) {
  // Period-3 input: any four consecutive input rows are dependent.
  const double period[] = {1.0, -2.0, 0.5};
  std::mt19937_64 rng(76);
  SignalRecord rec;
  const Index n = 120;
  rec.u.resize(n);
  for (Index k = 0; k < n; ++k) rec.u(k) = period[k % 3];
  rec.y = test::gaussian_matrix(rng, n, 1);
  try {
    parsim_ols(assemble_blocks(rec, 4, 2));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.category(), ErrorCategory::excitation);
    EXPECT_NE(std::string(e.what()).find("row 3"), std::string::npos) << e.what();
  }
}

TEST(ParsimWls, ZeroNoiseMarkovEqualsOls) {
  const SignalRecord rec = test::noisy_record(bench::example1_system(), 800, 77);
  const DataBlocks b = assemble_blocks(rec, 6, 8);
  InnovationsMarkov white;
  white.h = Vector::Zero(5);
  const RangeEstimate ols = parsim_ols(b);
  const RangeEstimate wls = parsim_wls(b, white);
  EXPECT_LT((ols.gamma_lp - wls.gamma_lp).cwiseAbs().maxCoeff(), 1e-10);
  for (std::size_t i = 0; i < ols.g_rows.size(); ++i) {
    EXPECT_LT((ols.g_rows[i] - wls.g_rows[i]).cwiseAbs().maxCoeff(), 1e-10);
  }
}

TEST(ParsimWls, FirstRowMatchesOlsForAnyWeighting) {
  std::mt19937_64 rng(78);
  const SignalRecord rec = test::noisy_record(bench::example1_system(), 800, 79);
  const DataBlocks b = assemble_blocks(rec, 6, 8);
  const RangeEstimate ols = parsim_ols(b);
  for (int trial = 0; trial < 5; ++trial) {
    InnovationsMarkov h;
    h.h = test::gaussian_matrix(rng, 5, 1);
    const RangeEstimate wls = parsim_wls(b, h);
    EXPECT_EQ(wls.gamma_lp.row(0), ols.gamma_lp.row(0));
    EXPECT_EQ(wls.g_rows[0], ols.g_rows[0]);
  }
}

TEST(ParsimWls, RowsMatchExplicitWeighting) {
  const StateSpaceModel m = bench::example1_system();
  const SignalRecord rec = test::noisy_record(m, 150, 80);
  const DataBlocks b = assemble_blocks(rec, 4, 5);
  InnovationsMarkov h;
  h.h = markov_h(m, 3);
  const RangeEstimate wls = parsim_wls(b, h);
  for (Index i = 2; i <= 4; ++i) {
    const NoiseToeplitz t = build_noise_toeplitz(h.h, i, b.columns);
    const Matrix w = (t.dense().transpose() * t.dense()).inverse();
    Matrix z(b.z_past.rows() + i - 1, b.columns);
    z << b.z_past, b.u_stack(i - 1);
    const RowVector y = b.y_row(i);
    const RowVector theta = (y * w * z.transpose()) * (z * w * z.transpose()).inverse();
    EXPECT_LT((wls.gamma_lp.row(i - 1) - theta.head(b.z_past.rows())).cwiseAbs().maxCoeff(), 1e-8);
  }
}

TEST(Classical, NoiseFreeColumnSpaceMatchesObservability) {
  std::mt19937_64 rng(81);
  const StateSpaceModel m = test::random_stable_model(rng, 3, 0.8, 0.1);
  const SignalRecord rec = test::noise_free_record(m, 3000, 82);
  const Index f = 8;
  const RangeEstimate est = classical_projection(assemble_blocks(rec, f, 30));
  EXPECT_TRUE(est.g_rows.empty());
  const double angle = test::max_principal_angle(leading_left_vectors(est.gamma_lp, 3),
                                                 test::observability(m.A(), m.C(), f));
  EXPECT_LT(angle, 1e-4);
}

TEST(Classical, IndependentSignalsGiveSmallEstimate) {
  SignalRecord rec;
  rec.u = bench::white_noise(10000, 1.0, 83);
  rec.y = bench::white_noise(10000, 1.0, 84);
  const RangeEstimate est = classical_projection(assemble_blocks(rec, 3, 3));
  EXPECT_LT(est.gamma_lp.cwiseAbs().maxCoeff(), 0.05);
}

TEST(Classical, ScalarCaseMatchesPartialRegression) {
  const SignalRecord rec = test::noisy_record(bench::example1_system(), 200, 85);
  const DataBlocks b = assemble_blocks(rec, 1, 1);
  Matrix z(3, b.columns);
  z << b.z_past, b.u_future;
  const RowVector theta = ols_reference(z, b.y_future.row(0));
  const RangeEstimate est = classical_projection(b);
  ASSERT_EQ(est.gamma_lp.cols(), 2);
  EXPECT_LT((est.gamma_lp.row(0) - theta.head(2)).cwiseAbs().maxCoeff(), 1e-10);
}

TEST(Ssarx, ZeroGainReducesToOlsAfterInputRemoval) {
  std::mt19937_64 rng(86);
  StateSpaceModel m = test::random_stable_model(rng, 3);
  m = StateSpaceModel(m.A(), m.B(), m.C(), m.D(), Matrix::Zero(3, 1), 1.0);
  const SignalRecord rec = test::noisy_record(m, 600, 87);
  const Index f = 5, p = 6;
  const DataBlocks b = assemble_blocks(rec, f, p);
  const RangeEstimate est = ssarx_estimate(b, exact_predictor_markov(m, p));
  const Matrix residual = b.y_future - test::true_g_toeplitz(m, f) * b.u_future;
  const Matrix reference =
      linalg::solve_least_squares(b.z_past.transpose(), residual.transpose()).solution.transpose();
  EXPECT_LT((est.gamma_lp - reference).cwiseAbs().maxCoeff(), 1e-10);
}

TEST(Ssarx, NoiseFreeColumnSpaceMatchesPredictorObservability) {
  std::mt19937_64 rng(88);
  const StateSpaceModel m = test::random_stable_model(rng, 3, 0.8, 0.3);
  const SignalRecord rec = test::noise_free_record(m, 3000, 89);
  const Index f = 8, p = 30;
  const RangeEstimate est = ssarx_estimate(assemble_blocks(rec, f, p), exact_predictor_markov(m, p));
  const PredictorModel pm = to_predictor_form(m);
  const double angle = test::max_principal_angle(leading_left_vectors(est.gamma_lp, 3),
                                                 test::observability(pm.A_bar(), pm.C(), f));
  EXPECT_LT(angle, 1e-4);
}

TEST(Ssarx, SingleRowMatchesParsimFirstRow) {
  const StateSpaceModel m = bench::example1_system();
  const SignalRecord rec = test::noisy_record(m, 500, 90);
  const DataBlocks b = assemble_blocks(rec, 1, 6);
  const RangeEstimate ss = ssarx_estimate(b, fit_arx(rec, 6));
  const RangeEstimate ols = parsim_ols(b);
  EXPECT_LT((ss.gamma_lp - ols.gamma_lp).cwiseAbs().maxCoeff(), 1e-10);
}

TEST(Ssarx, ShortPredictorSequenceIsConfigError) {
  const SignalRecord rec = test::noisy_record(bench::example1_system(), 500, 91);
  try {
    ssarx_estimate(assemble_blocks(rec, 8, 6), fit_arx(rec, 5));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.category(), ErrorCategory::config);
  }
}

}  // namespace
}  // namespace parsim
