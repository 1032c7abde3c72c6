#pragma once

#include <cstddef>
#include <vector>

#include <Eigen/Dense>

#include "volterra/kernels.hpp"

namespace volterra {

enum class Space { full, zero_mean };

// analytic: alpha = I - H. consistent: alpha is the exact inverse of beta on
// the zero-mean subspace composed with eta, so beta * alpha = eta holds as a
// matrix identity.
enum class OperatorMode { analytic, consistent };

// Hardy operators are the cell averages (in d<M>) of their continuous
// counterparts applied to step functions, so H^{i,*} is the exact measure
// adjoint of H^i. H^1 and H^2 fix constants.

// Dense operator on cell functions f_j, weighted by the cell measure delta_j.
struct OperatorMatrix {
  Eigen::MatrixXd matrix;
  std::vector<double> measure;
  Space domain = Space::full;
  Space range = Space::full;

  Eigen::VectorXd apply(const Eigen::VectorXd& f) const { return matrix * f; }
  long size() const { return matrix.rows(); }
};

struct OperatorPair {
  OperatorMatrix alpha;
  OperatorMatrix beta;
};

// Cell function 1_{[0, t_i)}: ones on cells j < i.
Eigen::VectorXd indicator(std::size_t cells, std::size_t node);
double measure_sum(const Eigen::VectorXd& f, const std::vector<double>& measure);
double measure_norm2(const Eigen::VectorXd& f, const std::vector<double>& measure);
// Spectral norm of D^{1/2} A D^{-1/2}, the operator norm on L^2(delta).
double measure_operator_norm(const Eigen::MatrixXd& a, const std::vector<double>& measure);

// Exact cell integrals of d<M>/<M> and d<M>/<M>_{T,.} on each cell:
// head_log[u] = ln(C_u / C_{u-1}), head_self[u] = 1 - (C_{u-1} / delta_u) head_log[u],
// tail_log[u] = ln(G_u / G_{u+1}), tail_self[u] = 1 - (G_{u+1} / delta_u) tail_log[u].
// head_log[0] and tail_log[n-1] are infinite; the matching self terms are 1.
struct HardyWeights {
  std::vector<double> head_log;
  std::vector<double> head_self;
  std::vector<double> tail_log;
  std::vector<double> tail_self;
};
HardyWeights hardy_weights(const QuadraticVariation& qv);

OperatorMatrix eta_matrix(const QuadraticVariation& qv);
OperatorMatrix hardy_matrix(const QuadraticVariation& qv, int i, bool adjoint);
OperatorPair alpha_beta_m(const QuadraticVariation& qv, int i, OperatorMode mode = OperatorMode::analytic);

struct KappaMatrices {
  OperatorMatrix kappa;
  Eigen::MatrixXd inverse;
  double condition = 1.0;
};

// Column j of kappa is k(t_{j+1}, .) - k(t_j, .). Throws SingularMatrix when
// the LU condition estimate exceeds 1e12.
KappaMatrices kappa_matrix(const DiscreteKernel& pk, const QuadraticVariation& qv);
// kappa^{-1} assembled from k* rows: column j is k*(t_{j+1}, .) - k*(t_j, .).
Eigen::MatrixXd kappa_inverse_from_kstar(const Eigen::MatrixXd& kstar);
// Discrete k*: row i is kappa^{-1} 1_{[0, t_i)}.
Eigen::MatrixXd kstar_from_kappa_inverse(const Eigen::MatrixXd& inverse);

OperatorPair conjugate(const OperatorPair& m, const KappaMatrices& kappa);
OperatorPair alpha_beta_x(const DiscreteKernel& pk, const QuadraticVariation& qv, int i,
                          OperatorMode mode = OperatorMode::analytic);

// eta^X built from X inner products: weights R(t_{j+1},T) - R(t_j,T) over R(T,T).
OperatorMatrix eta_x_from_covariance(const Eigen::VectorXd& cov_with_T, const QuadraticVariation& qv);

enum class ExplicitOp { alpha, beta };
// Quadrature form of alpha^{X,i} 1_{[0,t)} / beta^{X,i} 1_{[0,t)} at t = t_node.
Eigen::VectorXd explicit_alpha_beta_x(const DiscreteKernel& pk, const QuadraticVariation& qv,
                                      const Eigen::MatrixXd& kstar, int i, ExplicitOp op,
                                      std::size_t node);

}  // namespace volterra
