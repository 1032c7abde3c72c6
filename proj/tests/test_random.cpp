#include <doctest.h>

#include <cmath>
#include <vector>

#include "volterra/random.hpp"
#include "volterra/simulate.hpp"
#include "volterra/stats.hpp"

using namespace volterra;

// Known-answer vectors of the Random123 distribution.
TEST_CASE("Philox4x32-10 known answers") {
  using A = std::array<std::uint32_t, 4>;
  CHECK(philox4x32({0, 0, 0, 0}, {0, 0}) == A{0x6627e8d5, 0xe169c58d, 0xbc57ac4c, 0x9b00dbd8});
  CHECK(philox4x32({0xffffffff, 0xffffffff, 0xffffffff, 0xffffffff}, {0xffffffff, 0xffffffff}) ==
        A{0x408f276d, 0x41c83b0e, 0xa20bc7c6, 0x6d5451fd});
  CHECK(philox4x32({0x243f6a88, 0x85a308d3, 0x13198a2e, 0x03707344}, {0xa4093822, 0x299f31d0}) ==
        A{0xd16cfe09, 0x94fdcceb, 0x5001e420, 0x24126ea1});
}

TEST_CASE("normal quantile") {
  CHECK(normal_quantile(0.975) == doctest::Approx(1.959963984540054).epsilon(1e-15));
  CHECK(normal_quantile(1e-10) == doctest::Approx(-6.3613409024040562).epsilon(1e-14));
  CHECK(normal_quantile(0.5) == 0.0);
}

TEST_CASE("counter generator is addressable") {
  const CounterRng rng(5, 3);
  const double u = rng.uniform(11);
  CHECK(u > 0.0);
  CHECK(u < 1.0);
  CHECK(CounterRng(5, 3).uniform(11) == u);
  CHECK(CounterRng(5, 4).uniform(11) != u);
  std::vector<double> z(10);
  rng.normals(4, z.data(), z.size());
  CHECK(z[3] == rng.normal(7));
}

TEST_CASE("standard normals pass KS") {
  const CounterRng rng(42, 0);
  std::vector<double> z(5000);
  rng.normals(0, z.data(), z.size());
  CHECK(ks_normality(z).pass);
}

TEST_CASE("increments do not depend on thread count") {
  const TimeGrid g = make_grid(1.0, 64);
  const PathMatrix a = sample_increments(g, 40, 9, 0, 1);
  const PathMatrix b = sample_increments(g, 40, 9, 0, 4);
  CHECK(a == b);
  const PathMatrix tail = sample_increments(g, 10, 9, 30, 1);
  CHECK(tail == a.bottomRows(10));
}

TEST_CASE("kernel synthesis of Brownian motion is the running sum") {
  const TimeGrid g = make_grid(1.0, 32);
  const PathMatrix dw = sample_increments(g, 5, 1);
  const PathEnsemble ens = synthesize_from_kernel(discretize_kernel(brownian_kernel(), g, EvalPoint::left), dw);
  const PathMatrix cum = cumulative_paths(dw);
  CHECK((ens.paths - cum).cwiseAbs().maxCoeff() < 1e-13);
  CHECK(ens.paths.col(0).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("Cholesky synthesis reproduces the covariance") {
  const TimeGrid g = make_grid(1.0, 8);
  const Eigen::MatrixXd cov = fbm_covariance_matrix(0.75, g);
  const Eigen::MatrixXd l = jittered_cholesky(cov.bottomRightCorner(8, 8));
  CHECK(((l * l.transpose()) - cov.bottomRightCorner(8, 8)).cwiseAbs().maxCoeff() < 1e-10);
  const PathEnsemble ens = synthesize_cholesky(cov.bottomRightCorner(8, 8), g, 20000, 3);
  const CovarianceEstimate est = sample_covariance(Eigen::MatrixXd(ens.paths.rightCols(8)));
  CHECK(est.estimate(7, 7) == doctest::Approx(1.0).epsilon(4.0 * est.standard_error(7, 7)));
  CHECK(est.estimate(3, 7) == doctest::Approx(cov(4, 8)).epsilon(4.0 * est.standard_error(3, 7) / cov(4, 8)));
}

TEST_CASE("Cholesky fails on an indefinite matrix") {
  Eigen::MatrixXd m(2, 2);
  m << 1.0, 2.0, 2.0, 1.0;
  CHECK_THROWS(jittered_cholesky(m));
}
