#include <doctest.h>

#include <cmath>

#include "volterra/error.hpp"
#include "volterra/stats.hpp"
#include "volterra/transforms.hpp"

using namespace volterra;

namespace {

PathEnsemble brownian(const TimeGrid& g, std::size_t paths, std::uint64_t seed) {
  PathEnsemble ens;
  ens.grid = g;
  ens.process_name = "bm";
  ens.paths = cumulative_paths(sample_increments(g, paths, seed));
  return ens;
}

PathEnsemble zeros(const TimeGrid& g, std::size_t paths) {
  PathEnsemble ens;
  ens.grid = g;
  ens.paths = PathMatrix::Zero(static_cast<long>(paths), static_cast<long>(g.size()));
  return ens;
}

const TransformKind kAll[] = {TransformKind::T1, TransformKind::T2, TransformKind::B1, TransformKind::B2,
                              TransformKind::anticipative};

}  // namespace

TEST_CASE("zero paths map to zero paths") {
  const TimeGrid g = make_grid(1.0, 32);
  const DiscreteKernel dk = discretize_kernel(fbm_volterra_kernel(0.75), g, EvalPoint::weighted_midpoint);
  const ProcessContext ctx = volterra_context(dk);
  const PathEnsemble z = zeros(g, 3);
  for (TransformKind k : kAll)
    for (auto m : {TransformMethod::pathwise, TransformMethod::operator_form})
      CHECK(transform_volterra(z, ctx, k, m).paths.cwiseAbs().maxCoeff() == 0.0);
  CHECK(time_reverse(z).paths.cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("bridges are pinned") {
  const TimeGrid g = make_grid(1.0, 64);
  const PathEnsemble ens = brownian(g, 20, 3);
  const ProcessContext ctx = martingale_context(brownian_qv(g));
  CHECK(transform_volterra(ens, ctx, TransformKind::anticipative, TransformMethod::pathwise)
            .paths.col(64).cwiseAbs().maxCoeff() == 0.0);
  CHECK(bridge_B_martingale(ens, ctx.qv, 1).paths.col(64).cwiseAbs().maxCoeff() == 0.0);
  CHECK(bridge_B_martingale(ens, ctx.qv, 2).paths.col(0).cwiseAbs().maxCoeff() == 0.0);
  const DiscreteKernel dk = discretize_kernel(fbm_volterra_kernel(0.25), g, EvalPoint::weighted_midpoint);
  const PathEnsemble x = synthesize_from_kernel(dk, sample_increments(g, 20, 3));
  const ProcessContext xc = volterra_context(dk);
  for (TransformKind k : {TransformKind::B1, TransformKind::B2, TransformKind::anticipative})
    CHECK(transform_volterra(x, xc, k, TransformMethod::operator_form).paths.col(64).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("time reversal") {
  const TimeGrid g = make_grid(1.0, 16);
  const PathEnsemble ens = brownian(g, 4, 1);
  const PathEnsemble s = time_reverse(ens);
  CHECK(s.paths.col(0).cwiseAbs().maxCoeff() == 0.0);
  CHECK(s.paths.col(16) == ens.paths.col(16));
  CHECK((time_reverse(s).paths - ens.paths).cwiseAbs().maxCoeff() < 1e-15);
  PathEnsemble bad = ens;
  bad.grid = make_grid(1.0, 16).refine_origin(1);
  bad.paths = PathMatrix::Zero(4, 18);
  CHECK_THROWS_AS(time_reverse(bad), NonUniformGrid);
}

TEST_CASE("Volterra transforms of Brownian motion are the martingale transforms") {
  const TimeGrid g = make_grid(1.0, 64);
  const PathEnsemble ens = brownian(g, 10, 5);
  const DiscreteKernel dk = discretize_kernel(brownian_kernel(), g, EvalPoint::left);
  const ProcessContext ctx = volterra_context(dk);
  for (int i : {1, 2}) {
    const PathEnsemble t = transform_volterra(ens, ctx, kind_for('T', i), TransformMethod::operator_form);
    CHECK(max_abs_difference(t, transform_T_martingale(ens, ctx.qv, i)) < 1e-10);
    const PathEnsemble b = transform_volterra(ens, ctx, kind_for('B', i), TransformMethod::operator_form);
    CHECK(max_abs_difference(b, bridge_B_martingale(ens, ctx.qv, i)) < 1e-10);
  }
}

TEST_CASE("pathwise and operator forms agree") {
  const TimeGrid g = make_grid(1.0, 64);
  const DiscreteKernel dk = discretize_kernel(fbm_volterra_kernel(0.75), g, EvalPoint::weighted_midpoint);
  const PathEnsemble x = synthesize_from_kernel(dk, sample_increments(g, 10, 8));
  const ProcessContext ctx = volterra_context(dk);
  for (TransformKind k : {TransformKind::T1, TransformKind::T2, TransformKind::B1, TransformKind::B2}) {
    const PathEnsemble a = transform_volterra(x, ctx, k, TransformMethod::pathwise);
    const PathEnsemble b = transform_volterra(x, ctx, k, TransformMethod::operator_form);
    CHECK(max_abs_difference(a, b) < 1e-9);
  }
}

TEST_CASE("prediction martingale") {
  const TimeGrid g = make_grid(1.0, 64);
  const DiscreteKernel dk = discretize_kernel(fbm_volterra_kernel(0.75), g, EvalPoint::weighted_midpoint);
  PathEnsemble x = synthesize_from_kernel(dk, sample_increments(g, 5, 2));
  x.increments = sample_increments(g, 5, 2);
  const PathEnsemble m = prediction_martingale_path(x, dk, PredictionRoute::via_kstar);
  CHECK((m.paths.col(64) - x.paths.col(64)).cwiseAbs().maxCoeff() < 1e-12);
  const PathEnsemble mi = prediction_martingale_path(x, dk, PredictionRoute::from_increments);
  CHECK((mi.paths.col(64) - x.paths.col(64)).cwiseAbs().maxCoeff() < 1e-12);
  PathEnsemble plain = x;
  plain.increments.reset();
  CHECK_THROWS_AS(prediction_martingale_path(plain, dk, PredictionRoute::from_increments), MissingIncrements);

  const DiscreteKernel bk = discretize_kernel(brownian_kernel(), g, EvalPoint::left);
  const PathEnsemble w = brownian(g, 5, 2);
  CHECK(max_abs_difference(prediction_martingale_path(w, bk, PredictionRoute::via_kstar), w) < 1e-12);
}

TEST_CASE("prediction routes converge under refinement") {
  double prev = INFINITY;
  for (std::size_t n : {128, 256, 512}) {
    const TimeGrid g = make_grid(1.0, n);
    const DiscreteKernel dk = discretize_kernel(fbm_volterra_kernel(0.75), g, EvalPoint::weighted_midpoint);
    // One Brownian path sampled on the finest grid and aggregated.
    const PathMatrix fine = sample_increments(make_grid(1.0, 512), 1, 4);
    PathMatrix dw = PathMatrix::Zero(1, static_cast<long>(n));
    const long f = static_cast<long>(512 / n);
    for (long j = 0; j < static_cast<long>(n); ++j) dw(0, j) = fine.block(0, j * f, 1, f).sum();
    PathEnsemble x = synthesize_from_kernel(dk, dw);
    x.increments = dw;
    const PathEnsemble a = prediction_martingale_path(x, dk, PredictionRoute::from_increments);
    const Eigen::MatrixXd ks = fbm_kstar_matrix(0.75, g);
    const PathEnsemble b = prediction_martingale_path(x, dk, PredictionRoute::via_kstar, &ks);
    const double d = max_abs_difference(a, b);
    CHECK(d < prev);
    prev = d;
  }
}

TEST_CASE("consistent mode roundtrips are exact for i = 2") {
  const TimeGrid g = make_grid(1.0, 64);
  const ProcessContext ctx = martingale_context(brownian_qv(g));
  const auto sub = standard_subgrid(g);
  const RoundtripSpread s = roundtrip_spread(ctx, increment_covariance(ctx.qv), 2, OperatorMode::consistent, sub);
  CHECK(s.bridge_of_transform <= 1e-9);
  CHECK(s.transform_of_bridge <= 1e-9);
  const RoundtripSpread s1 = roundtrip_spread(ctx, increment_covariance(ctx.qv), 1, OperatorMode::consistent, sub);
  CHECK(s1.bridge_of_transform <= 1e-9);
}

TEST_CASE("analytic roundtrip gap shrinks under refinement") {
  std::vector<double> gap;
  for (std::size_t n : {64, 128, 256, 512}) {
    const TimeGrid g = make_grid(1.0, n).refine_origin(24);
    const ProcessContext ctx = martingale_context(brownian_qv(g));
    gap.push_back(roundtrip_spread(ctx, increment_covariance(ctx.qv), 2, OperatorMode::analytic, standard_subgrid(g))
                      .bridge_of_transform);
  }
  for (std::size_t k = 1; k < gap.size(); ++k) CHECK(gap[k - 1] / gap[k] >= 1.5);
}

TEST_CASE("Brownian transform laws") {
  const std::size_t n = 256;
  const TimeGrid g = make_grid(1.0, n);
  const PathEnsemble w = brownian(g, 10000, 1);
  const ProcessContext ctx = martingale_context(brownian_qv(g));
  const auto sub = standard_subgrid(n);
  Eigen::MatrixXd target(8, 8), bridge(8, 8);
  for (long a = 0; a < 8; ++a)
    for (long b = 0; b < 8; ++b) {
      const double s = g.node(sub[a]), t = g.node(sub[b]);
      target(a, b) = std::min(s, t);
      bridge(a, b) = std::min(s, t) - s * t;
    }
  for (int i : {1, 2}) {
    const PathEnsemble t = transform_T_martingale(w, ctx.qv, i);
    CHECK(compare_covariance(empirical_covariance(t, sub), target, "T").all_pass());
    const PathEnsemble b = bridge_B_martingale(w, ctx.qv, i);
    CHECK(compare_covariance(empirical_covariance(b, sub), bridge, "B").all_pass());
  }
  const PathEnsemble ant = anticipative_bridge(w, Eigen::Map<const Eigen::VectorXd>(g.nodes().data(), n + 1), 1.0);
  const CovarianceEstimate ca = empirical_covariance(ant, {n / 4, n / 2});
  CHECK(std::abs(ca.estimate(0, 1) - 0.125) <= 3.0 * ca.standard_error(0, 1));

  // T2 output is orthogonal to M_T.
  const PathEnsemble t2 = transform_T_martingale(w, ctx.qv, 2);
  for (std::size_t k : sub) {
    Eigen::MatrixXd pair(10000, 2);
    pair.col(0) = t2.paths.col(static_cast<long>(k));
    pair.col(1) = w.paths.col(static_cast<long>(n));
    const CovarianceEstimate c = sample_covariance(pair);
    const double corr = c.estimate(0, 1) / std::sqrt(c.estimate(0, 0) * c.estimate(1, 1));
    CHECK(std::abs(corr) <= 3.0 / std::sqrt(10000.0));
  }
}

TEST_CASE("reversal identities on Brownian paths") {
  const TimeGrid g = make_grid(1.0, 128);
  const PathEnsemble w = brownian(g, 10, 7);
  for (const auto& row : reversal_residuals(w, martingale_context(brownian_qv(g)))) {
    INFO(row.identity, " ", row.mode);
    CHECK(row.max_residual <= 1e-9);
  }
}
