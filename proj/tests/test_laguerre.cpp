#include <doctest.h>

#include <cmath>

#include "volterra/error.hpp"
#include "volterra/laguerre.hpp"
#include "volterra/specfun.hpp"

using namespace volterra;

namespace {

TimeGrid expansion_grid(int steps_per_octave, int octaves_below, double t_max) {
  const double h = std::log(2.0) / steps_per_octave;
  return TimeGrid::log_spaced(1.0, t_max, h, static_cast<std::size_t>(steps_per_octave * octaves_below));
}

PathEnsemble brownian(const TimeGrid& g, std::size_t paths, std::uint64_t seed) {
  PathEnsemble ens;
  ens.grid = g;
  ens.paths = cumulative_paths(sample_increments(g, paths, seed));
  return ens;
}

}  // namespace

TEST_CASE("Gram matrix is the identity") {
  for (double q : {1.0, 2.5}) {
    const Eigen::MatrixXd g = laguerre_gram(10, 64, q);
    CHECK((g - Eigen::MatrixXd::Identity(21, 21)).cwiseAbs().maxCoeff() <= 1e-10);
  }
}

TEST_CASE("basis functions") {
  CHECK(laguerre_basis(0, 4.0, 1.0) == doctest::Approx(0.5));
  CHECK(laguerre_basis(3, 4.0, 5.0) == 0.0);
  CHECK(laguerre_basis(-1, 4.0, 3.0) == 0.0);
  CHECK(laguerre_basis(-1, 4.0, 8.0) == doctest::Approx(-0.25));
  CHECK(laguerre_basis(2, 1.0, std::exp(-1.0)) == doctest::Approx(specfun::laguerre_eval(2, 1.0)));
}

TEST_CASE("coefficients of Brownian paths") {
  const TimeGrid g = expansion_grid(16, 30, 16.0);
  const QuadraticVariation qv = brownian_qv(g);
  const PathEnsemble ens = brownian(g, 6, 3);
  const ExpansionCoefficients c = epsilon_coefficients(ens, qv, 1.0, 4, 3);
  REQUIRE(c.values.cols() == 8);
  CHECK(c.truncation_ratio == doctest::Approx(1.0 / 16.0));
  const std::size_t split = g.index_of(1.0);
  for (std::size_t p = 0; p < 6; ++p) {
    const double mt = ens.paths(static_cast<long>(p), static_cast<long>(split));
    CHECK(c.at(p, 0) == doctest::Approx(mt / std::sqrt(qv.at_node(split))));
    for (int order : {0, 2, 4})
      CHECK(reconstruct_value(c, p, qv, split, order) == doctest::Approx(mt).epsilon(1e-12));
  }
  CHECK_THROWS_AS(reconstruct_value(c, 0, qv, split, 5), InvalidArgument);
  CHECK_THROWS_AS(reconstruct_value(c, 0, qv, split + 1, 1), InvalidArgument);

  PathEnsemble zero = ens;
  zero.paths.setZero();
  CHECK(epsilon_coefficients(zero, qv, 1.0, 4, 3).values.cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("functional coefficients") {
  const TimeGrid g = expansion_grid(16, 30, 16.0);
  const QuadraticVariation qv = brownian_qv(g);
  const std::size_t split = g.index_of(1.0);
  const long cells = static_cast<long>(g.cells());
  Eigen::VectorXd late = Eigen::VectorXd::Zero(cells);
  late.tail(cells - static_cast<long>(split)).setOnes();
  const auto c = functional_coefficients(late, qv, split, 6, 3);
  for (int n = 0; n <= 6; ++n) CHECK(c[static_cast<std::size_t>(n + 3)] == 0.0);
  CHECK(c[2] != 0.0);

  Eigen::VectorXd early = Eigen::VectorXd::Zero(cells);
  early.head(static_cast<long>(split)).setOnes();
  const auto e = functional_coefficients(early, qv, split, 40, 3);
  double sum = 0.0;
  for (double v : e) sum += v * v;
  CHECK(sum == doctest::Approx(1.0).epsilon(0.02));
  // c_0 = int_0^T L_0 d<M> = sqrt(T).
  CHECK(e[3] == doctest::Approx(1.0));
}

TEST_CASE("iterated shifts") {
  const TimeGrid g = expansion_grid(16, 30, 16.0);
  const QuadraticVariation qv = brownian_qv(g);
  const Eigen::VectorXd path = brownian(g, 1, 9).paths.row(0).transpose();
  CHECK(iterate_transform_check(path, qv, 1.0, 0) == 0.0);
  CHECK(iterate_transform_check(path, qv, 1.0, 1, LaguerreMode::consistent) <= 1e-9);
  CHECK_THROWS_AS(iterate_transform_check(path, qv, 1.0, 5), InvalidArgument);
}

TEST_CASE("negative shift gap shrinks under refinement") {
  const TimeGrid fine = expansion_grid(128, 20, 16.0);
  const Eigen::VectorXd w = brownian(fine, 1, 13).paths.row(0).transpose();
  std::vector<double> gap;
  for (int steps : {16, 32, 64, 128}) {
    const TimeGrid g = expansion_grid(steps, 20, 16.0);
    Eigen::VectorXd path(static_cast<long>(g.size()));
    for (std::size_t i = 0; i < g.size(); ++i) path(static_cast<long>(i)) = w(static_cast<long>(fine.nearest(g.node(i))));
    gap.push_back(iterate_transform_check(path, brownian_qv(g), 1.0, -2));
  }
  for (std::size_t k = 1; k < gap.size(); ++k) {
    INFO("gap ", gap[k - 1], " -> ", gap[k]);
    CHECK(gap[k - 1] / gap[k] >= 1.5);
  }
}
