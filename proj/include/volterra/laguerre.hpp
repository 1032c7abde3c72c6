#pragma once

#include <cstddef>
#include <vector>

#include <Eigen/Dense>

#include "volterra/kernels.hpp"
#include "volterra/simulate.hpp"

namespace volterra {

// analytic: logarithms of <M> at left nodes (first cell at its midpoint).
// consistent: cell averages of the logarithms (the weights of hardy_weights),
// which turn the n = +-1 coefficients into the operator-form transforms exactly.
enum class LaguerreMode { analytic, consistent };

struct ExpansionCoefficients {
  double split_time = 0.0;
  double horizon = 0.0;
  std::size_t split_node = 0;
  int n_plus = 0;
  int n_minus = 0;
  double qv_split = 0.0;
  double truncation_ratio = 0.0;  // <M>_T / <M>_{T_max}
  bool truncation_warning = false;
  // raw(p, n + n_minus) = T^n_T(M) as a Wiener integral; values = raw / sqrt(<M>_T).
  Eigen::MatrixXd raw;
  Eigen::MatrixXd values;

  double at(std::size_t path, int n) const { return values(static_cast<long>(path), n + n_minus); }
  double raw_at(std::size_t path, int n) const { return raw(static_cast<long>(path), n + n_minus); }
  std::size_t paths() const { return static_cast<std::size_t>(values.rows()); }
};

// Basis function L^{M,T}_n at a time s with <M>_s = qv_s.
double laguerre_basis(int n, double qv_split, double qv_s);

// Row n + n_minus holds the cell integrand whose Wiener integral is T^n_T(M).
Eigen::MatrixXd laguerre_integrands(const QuadraticVariation& qv, std::size_t split_node, int n_plus,
                                    int n_minus, LaguerreMode mode = LaguerreMode::analytic);

ExpansionCoefficients epsilon_coefficients(const PathEnsemble& ens, const QuadraticVariation& qv,
                                           double split_time, int n_plus, int n_minus,
                                           LaguerreMode mode = LaguerreMode::analytic,
                                           unsigned threads = 1);

// sum_{n=0}^{N} sqrt(<M>_T) zeta_n(ln(<M>_T / <M>_t)) eps_n at node t <= T.
double reconstruct_value(const ExpansionCoefficients& coeffs, std::size_t path,
                         const QuadraticVariation& qv, std::size_t node, int order);

struct FunctionalExpansion {
  std::vector<int> indices;
  std::vector<double> coefficients;  // c_n = int f L_n d<M>
  Eigen::VectorXd target;            // Z = sum_j f_j dM_j per path
  // partial(p, N) = sum over |n| <= N of c_n eps_n
  Eigen::MatrixXd partial;
  double parseval_sum(int order) const;
};

// Exact cell integrals of the basis: sqrt(<M>_T)(zeta_n(x_{j+1}) - zeta_n(x_j))
// for n >= 0 and the antiderivative L_k - L_{k+1} for negative n.
std::vector<double> functional_coefficients(const Eigen::VectorXd& f, const QuadraticVariation& qv,
                                            std::size_t split_node, int n_plus, int n_minus);

FunctionalExpansion expand_functional(const Eigen::VectorXd& f, const ExpansionCoefficients& coeffs,
                                      const QuadraticVariation& qv, const PathEnsemble& ens);

// One step of T (n = 1) or T^{-1} (n = -1) on a whole path over [0, T_max].
Eigen::VectorXd laguerre_shift(const Eigen::VectorXd& path, const QuadraticVariation& qv, int direction,
                               LaguerreMode mode);

// |T^n applied iteratively, read at T| minus the direct Wiener integral.
double iterate_transform_check(const Eigen::VectorXd& path, const QuadraticVariation& qv, double split_time,
                               int n, LaguerreMode mode = LaguerreMode::analytic);

// Gram matrix of L^{M,T}_n, n = -n_max..n_max, with respect to d<M>, after the
// logarithmic substitution, using an order-point Gauss-Laguerre rule.
Eigen::MatrixXd laguerre_gram(int n_max, int order, double qv_split = 1.0);

}  // namespace volterra
