#pragma once

#include <functional>
#include <vector>

#include <Eigen/Dense>

#include "volterra/grid.hpp"

namespace volterra {

using KernelFn = std::function<double(double t, double s)>;

// A Volterra kernel plus the local power behaviour used to weight cell
// averages: z(t,s) ~ (t-s)^{diagonal_exponent} near s = t and
// z(t,s) ~ s^{origin_exponent} near s = 0.
struct VolterraKernel {
  KernelFn eval;
  double diagonal_exponent = 0.0;
  double origin_exponent = 0.0;
};

enum class EvalPoint { midpoint, left, weighted_midpoint };

// Z has grid.size() rows (nodes t_i) and grid.cells() columns (cells j).
struct DiscreteKernel {
  TimeGrid grid;
  Eigen::MatrixXd values;

  std::size_t cells() const { return grid.cells(); }
};

// Increments delta_j of <M> on each cell; cumulative has one entry per node.
class QuadraticVariation {
public:
  QuadraticVariation() = default;
  QuadraticVariation(TimeGrid grid, std::vector<double> increments);

  const TimeGrid& grid() const noexcept { return grid_; }
  std::size_t cells() const noexcept { return increments_.size(); }
  const std::vector<double>& increments() const noexcept { return increments_; }
  double increment(std::size_t j) const { return increments_[j]; }
  // <M>_{t_i}, i = 0..n.
  const std::vector<double>& cumulative() const noexcept { return cumulative_; }
  double at_node(std::size_t i) const { return cumulative_[i]; }
  double total() const { return cumulative_.back(); }
  // Inclusive head sum C_j = sum_{u<=j} delta_u and tail sum G_j = sum_{u>=j} delta_u.
  double head(std::size_t j) const { return cumulative_[j + 1]; }
  double tail(std::size_t j) const { return tails_[j]; }
  // Restriction to the first `cells` cells.
  QuadraticVariation truncated(std::size_t cells) const;
  // qv of the time-reversed martingale: increments in reverse order.
  QuadraticVariation reversed() const;

private:
  TimeGrid grid_;
  std::vector<double> increments_;
  std::vector<double> cumulative_;
  std::vector<double> tails_;
};

double fbm_constant(double hurst);
double fbm_kernel(double hurst, double t, double s);
double fbm_covariance(double hurst, double s, double t);
VolterraKernel fbm_volterra_kernel(double hurst);
VolterraKernel brownian_kernel();

DiscreteKernel discretize_kernel(const VolterraKernel& kernel, const TimeGrid& grid, EvalPoint point);
DiscreteKernel discretize_kernel(const KernelFn& kernel, const TimeGrid& grid, EvalPoint point);

// R[i][k] = sum_j Z[i][j] Z[k][j] dt_j on all nodes (row/column 0 is zero).
Eigen::MatrixXd covariance_from_kernel(const DiscreteKernel& dk);
Eigen::MatrixXd fbm_covariance_matrix(double hurst, const TimeGrid& grid);

QuadraticVariation quadratic_variation(const DiscreteKernel& dk);
QuadraticVariation brownian_qv(const TimeGrid& grid);

DiscreteKernel prediction_kernel(const DiscreteKernel& dk);

double fbm_kstar(double hurst, double horizon, double t, double s);
// KS[i][j] = k*(t_i, m_j), midpoint evaluation, last row identically one.
Eigen::MatrixXd fbm_kstar_matrix(double hurst, const TimeGrid& grid);

}  // namespace volterra
