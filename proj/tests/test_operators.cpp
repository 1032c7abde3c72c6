#include <doctest.h>

#include <cmath>

#include "volterra/operators.hpp"

using namespace volterra;

namespace {

double max_abs(const Eigen::MatrixXd& m) { return m.cwiseAbs().maxCoeff(); }

DiscreteKernel fbm_prediction(double hurst, std::size_t n) {
  const DiscreteKernel dk = discretize_kernel(fbm_volterra_kernel(hurst), make_grid(1.0, n), EvalPoint::weighted_midpoint);
  return prediction_kernel(dk);
}

}  // namespace

TEST_CASE("eta projects onto zero-mean functions") {
  const QuadraticVariation qv = brownian_qv(make_grid(1.0, 16));
  const Eigen::MatrixXd e = eta_matrix(qv).matrix;
  CHECK(max_abs(e * Eigen::VectorXd::Constant(16, 2.5)) < 1e-14);
  CHECK(max_abs(e * e - e) < 1e-12);
  const Eigen::VectorXd f = indicator(16, 4);
  CHECK(max_abs(e * f - (f.array() - 0.25).matrix()) < 1e-14);
  CHECK(std::abs(measure_sum(e * f, qv.increments())) < 1e-15);
}

TEST_CASE("Hardy operators fix constants and have measure adjoints") {
  const QuadraticVariation qv = quadratic_variation(
      discretize_kernel(fbm_volterra_kernel(0.75), make_grid(1.0, 32), EvalPoint::weighted_midpoint));
  const Eigen::VectorXd ones = Eigen::VectorXd::Ones(32);
  Eigen::VectorXd d(32);
  for (long j = 0; j < 32; ++j) d(j) = qv.increment(static_cast<std::size_t>(j));
  for (int i : {1, 2}) {
    const Eigen::MatrixXd h = hardy_matrix(qv, i, false).matrix;
    const Eigen::MatrixXd hs = hardy_matrix(qv, i, true).matrix;
    CHECK(max_abs(h * ones - ones) < 1e-13);
    CHECK(max_abs(d.asDiagonal() * h - (d.asDiagonal() * hs).transpose()) < 1e-14);
  }
}

TEST_CASE("adjoint of H1 on constants is the logarithm of the remaining qv") {
  const TimeGrid g = make_grid(1.0, 128);
  const Eigen::VectorXd h = hardy_matrix(brownian_qv(g), 1, true).matrix * Eigen::VectorXd::Ones(128);
  // Cell average of ln(1 / s) over cell 64.
  const double a = g.node(64), b = g.node(65);
  const double avg = ((a * std::log(a) - a) - (b * std::log(b) - b)) / (b - a);
  CHECK(h(64) == doctest::Approx(avg).epsilon(1e-12));
}

TEST_CASE("H1 of an indicator on Brownian qv") {
  const std::size_t n = 256;
  const TimeGrid g = make_grid(1.0, n);
  const Eigen::VectorXd h = hardy_matrix(brownian_qv(g), 1, false).matrix * indicator(n, 64);
  CHECK(h(10) == doctest::Approx(1.0));
  // Cell average of 0.25 / s.
  CHECK(h(200) == doctest::Approx(0.25 * std::log(g.node(201) / g.node(200)) / g.width(200)).epsilon(1e-12));
}

TEST_CASE("alpha and beta on Brownian qv") {
  const std::size_t n = 512;
  const TimeGrid g = make_grid(1.0, n);
  const QuadraticVariation qv = brownian_qv(g);
  for (int i : {1, 2})
    for (auto mode : {OperatorMode::analytic, OperatorMode::consistent}) {
      const OperatorPair ab = alpha_beta_m(qv, i, mode);
      CHECK(max_abs(ab.alpha.matrix * Eigen::VectorXd::Ones(n)) < 1e-12);
    }
  const OperatorPair a1 = alpha_beta_m(qv, 1);
  const Eigen::VectorXd b = a1.beta.matrix * indicator(n, 256);
  CHECK(b(128) == doctest::Approx(1.0 - std::log(0.5 / g.midpoint(128))).epsilon(0.01));
  CHECK(b(400) == doctest::Approx(0.0));
  const OperatorPair a2 = alpha_beta_m(qv, 2);
  const Eigen::VectorXd a = a2.alpha.matrix * indicator(n, 256);
  CHECK(a.tail(256).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("consistent mode inverts beta on the zero-mean subspace exactly") {
  const QuadraticVariation qv = brownian_qv(make_grid(1.0, 64));
  const Eigen::MatrixXd eta = eta_matrix(qv).matrix;
  for (int i : {1, 2}) {
    const OperatorPair ab = alpha_beta_m(qv, i, OperatorMode::consistent);
    CHECK(max_abs(ab.beta.matrix * ab.alpha.matrix - eta) < 1e-10);
  }
}

TEST_CASE("kappa") {
  const TimeGrid g = make_grid(1.0, 32);
  const DiscreteKernel pk = fbm_prediction(0.75, 32);
  const QuadraticVariation qv = quadratic_variation(
      discretize_kernel(fbm_volterra_kernel(0.75), g, EvalPoint::weighted_midpoint));
  const KappaMatrices km = kappa_matrix(pk, qv);
  CHECK(max_abs(km.kappa.matrix * Eigen::VectorXd::Ones(32) - Eigen::VectorXd::Ones(32)) < 1e-12);
  CHECK(max_abs(km.inverse * Eigen::VectorXd::Constant(32, 3.0) - Eigen::VectorXd::Constant(32, 3.0)) < 1e-10);
  CHECK(max_abs(km.kappa.matrix * km.inverse - Eigen::MatrixXd::Identity(32, 32)) < 1e-10);
  const Eigen::MatrixXd ks = kstar_from_kappa_inverse(km.inverse);
  CHECK(max_abs(kappa_inverse_from_kstar(ks) - km.inverse) < 1e-10);

  const DiscreteKernel bm = prediction_kernel(discretize_kernel(brownian_kernel(), g, EvalPoint::left));
  CHECK(max_abs(kappa_matrix(bm, brownian_qv(g)).kappa.matrix - Eigen::MatrixXd::Identity(32, 32)) < 1e-14);
}

TEST_CASE("X operators") {
  const std::size_t n = 64;
  const TimeGrid g = make_grid(1.0, n);
  const QuadraticVariation bq = brownian_qv(g);
  const DiscreteKernel bm = prediction_kernel(discretize_kernel(brownian_kernel(), g, EvalPoint::left));
  for (int i : {1, 2}) {
    const OperatorPair x = alpha_beta_x(bm, bq, i);
    const OperatorPair m = alpha_beta_m(bq, i);
    CHECK(max_abs(x.alpha.matrix - m.alpha.matrix) < 1e-12);
    CHECK(max_abs(x.beta.matrix - m.beta.matrix) < 1e-12);
  }
  const DiscreteKernel dk = discretize_kernel(fbm_volterra_kernel(0.75), g, EvalPoint::weighted_midpoint);
  const DiscreteKernel pk = prediction_kernel(dk);
  const QuadraticVariation qv = quadratic_variation(dk);
  for (int i : {1, 2}) {
    const OperatorPair x = alpha_beta_x(pk, qv, i);
    CHECK(max_abs(x.alpha.matrix * Eigen::VectorXd::Ones(n)) < 1e-10);
  }
  const Eigen::VectorXd b2 = alpha_beta_x(pk, qv, 2).beta.matrix * indicator(n, 32);
  CHECK((b2.tail(32).array() - b2(32)).abs().maxCoeff() < 1e-10);
}

TEST_CASE("measure operator norm of the identity") {
  std::vector<double> m = {0.1, 0.5, 0.4};
  CHECK(measure_operator_norm(Eigen::MatrixXd::Identity(3, 3), m) == doctest::Approx(1.0));
  CHECK(measure_norm2(Eigen::VectorXd::Ones(3), m) == doctest::Approx(1.0));
}

TEST_CASE("discrete Hardy operators respect the Hardy bound") {
  for (std::size_t n : {64, 256}) {
    const TimeGrid g = make_grid(1.0, n);
    const QuadraticVariation bq = brownian_qv(g);
    const QuadraticVariation fq = quadratic_variation(
        discretize_kernel(fbm_volterra_kernel(0.25), g, EvalPoint::weighted_midpoint));
    for (const QuadraticVariation* qv : {&bq, &fq})
      for (int i : {1, 2})
        for (bool adj : {false, true})
          CHECK(measure_operator_norm(hardy_matrix(*qv, i, adj).matrix, qv->increments()) <= 2.1);
  }
}
