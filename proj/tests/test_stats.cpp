#include <doctest.h>

#include <sstream>
#include <vector>

#include "volterra/error.hpp"
#include "volterra/random.hpp"
#include "volterra/simulate.hpp"
#include "volterra/stats.hpp"

using namespace volterra;

TEST_CASE("sample covariance of two opposite samples") {
  Eigen::MatrixXd s(2, 1);
  s << 1.5, -1.5;
  const CovarianceEstimate c = sample_covariance(s);
  CHECK(c.estimate(0, 0) == doctest::Approx(2.0 * 1.5 * 1.5));
  CHECK(c.standard_error(0, 0) == doctest::Approx(std::sqrt(2.0) * 4.5));
}

TEST_CASE("sample covariance rejects degenerate input") {
  CHECK_THROWS_AS(sample_covariance(Eigen::MatrixXd::Ones(1, 3)), InsufficientData);
  CHECK_THROWS_AS(sample_covariance(Eigen::MatrixXd::Ones(10, 3)), InsufficientData);
}

TEST_CASE("Brownian covariance at one half") {
  const TimeGrid g = make_grid(1.0, 16);
  PathEnsemble ens;
  ens.grid = g;
  ens.paths = cumulative_paths(sample_increments(g, 10000, 11));
  const CovarianceEstimate c = empirical_covariance(ens, {8, 16});
  CHECK(std::abs(c.estimate(0, 0) - 0.5) <= 3.0 * c.standard_error(0, 0));
  CHECK(std::abs(c.estimate(0, 1) - 0.5) <= 3.0 * c.standard_error(0, 1));
}

TEST_CASE("comparison rule") {
  ComparisonReport r(3.0, 0.05);
  CHECK(r.add("a", 1.04, 1.0, 0.001).pass);
  CHECK(r.add("b", 1.02, 1.0, 0.01).pass);
  CHECK_FALSE(r.add("c", 1.1, 1.0, 0.01).pass);
  r.add_check("d", 1e-13, 1e-12, true);
  CHECK(r.failures() == 1);
  CHECK_FALSE(r.all_pass());
  std::ostringstream out;
  r.write_csv(out);
  CHECK(out.str().rfind("label,estimate,target,se,pass\na,1.04,1,0.001,true\n", 0) == 0);
}

TEST_CASE("KS normality") {
  std::vector<double> z(10000);
  CounterRng(1, 0).normals(0, z.data(), z.size());
  const KsResult ok = ks_normality(z);
  CHECK(ok.pass);
  CHECK(ok.critical == doctest::Approx(0.01628));
  std::vector<double> shifted = z;
  for (double& v : shifted) v += 1.0;
  const KsResult bad = ks_normality(shifted);
  CHECK_FALSE(bad.pass);
  CHECK(bad.statistic > 0.3);
  CHECK_FALSE(ks_normality(std::vector<double>(200, 0.3)).pass);
  CHECK_THROWS_AS(ks_normality(std::vector<double>(99, 0.0)), InsufficientData);
}

TEST_CASE("convergence order") {
  CHECK(convergence_order({0.4, 0.2, 0.1}) == doctest::Approx(1.0));
  CHECK(convergence_order({0.09, 0.0225, 0.005625}) == doctest::Approx(2.0));
  CHECK(convergence_order({0.3, 0.3, 0.3}) == doctest::Approx(0.0));
  CHECK_THROWS_AS(convergence_order({0.3, 0.0, 0.1}), DomainError);
  CHECK_THROWS_AS(convergence_order({0.3, 0.1}), InsufficientData);
}
