#pragma once

#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "volterra/operators.hpp"
#include "volterra/simulate.hpp"

namespace volterra {

enum class TransformKind { T1, T2, B1, B2, anticipative, reverse, prediction };
enum class TransformMethod { pathwise, operator_form };

// Everything a transform needs to know about the input process. Without a
// prediction kernel the input is treated as its own prediction martingale.
struct ProcessContext {
  QuadraticVariation qv;
  std::optional<DiscreteKernel> prediction;
  Eigen::VectorXd cov_with_T;  // R(t_i, T), i = 0..n
  std::optional<Eigen::MatrixXd> kstar;

  bool is_martingale() const { return !prediction.has_value(); }
};

ProcessContext martingale_context(const QuadraticVariation& qv);
// Prediction kernel, qv and the kernel covariance column of dk.
ProcessContext volterra_context(const DiscreteKernel& dk);

// out(p, i) = sum_j g(i, j) dY_j, evaluated as sum_j Y_j (g(i, j-1) - g(i, j))
// with g(i, n) = 0.
PathEnsemble apply_integrands(const PathEnsemble& ens, const Eigen::MatrixXd& g, unsigned threads = 1);

// Row i: beta^{X,i} 1_{[0,t_i)} for T, alpha^{X,i} eta 1_{[0,t_i)} for B.
Eigen::MatrixXd transform_integrands(const ProcessContext& ctx, TransformKind kind,
                                     OperatorMode mode = OperatorMode::analytic);

PathEnsemble anticipative_bridge(const PathEnsemble& ens, const Eigen::VectorXd& cov_row, double r_tt);
PathEnsemble transform_T_martingale(const PathEnsemble& ens, const QuadraticVariation& qv, int i);
PathEnsemble bridge_B_martingale(const PathEnsemble& ens, const QuadraticVariation& qv, int i);
PathEnsemble time_reverse(const PathEnsemble& ens);

TransformKind kind_for(char family, int i);

PathEnsemble transform_volterra(const PathEnsemble& ens, const ProcessContext& ctx, TransformKind kind,
                                TransformMethod method, OperatorMode mode = OperatorMode::analytic,
                                unsigned threads = 1);

enum class PredictionRoute { from_increments, via_kstar };
// via_kstar uses the supplied k* rows, or the rows of the discrete kappa^{-1}.
PathEnsemble prediction_martingale_path(const PathEnsemble& ens, const DiscreteKernel& dk,
                                        PredictionRoute route,
                                        const Eigen::MatrixXd* kstar = nullptr, unsigned threads = 1);

struct ResidualRow {
  std::string identity;
  std::string mode;
  double max_residual = 0.0;
};

double max_abs_difference(const PathEnsemble& a, const PathEnsemble& b);
double max_abs_difference_at(const PathEnsemble& a, const PathEnsemble& b,
                             const std::vector<std::size_t>& nodes);

// Roundtrip rows are measured on the standard subgrid (fixed interior times);
// rows with mode suffix ":all-nodes" take the max over every node.

std::vector<ResidualRow> roundtrip_residuals(const PathEnsemble& ens, const ProcessContext& ctx, int i,
                                             unsigned threads = 1);
// Cov(dX_j, dX_k) of the kernel discretization, and diag(delta) for a martingale.
Eigen::MatrixXd increment_covariance(const DiscreteKernel& dk);
Eigen::MatrixXd increment_covariance(const QuadraticVariation& qv);

// Standard deviation of the roundtrip residual at each node, maximized over
// `nodes`: composite integrand minus target, measured in Cov(dX).
struct RoundtripSpread {
  double bridge_of_transform = 0.0;  // B(T(X)) - anticipative bridge
  double transform_of_bridge = 0.0;  // T(B(X)) - X
};
RoundtripSpread roundtrip_spread(const ProcessContext& ctx, const Eigen::MatrixXd& increment_cov, int i,
                                 OperatorMode mode, const std::vector<std::size_t>& nodes);

std::vector<ResidualRow> reversal_residuals(const PathEnsemble& ens, const ProcessContext& ctx,
                                            unsigned threads = 1);

}  // namespace volterra
