#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include <Eigen/Dense>

#include "volterra/kernels.hpp"

namespace volterra {

using PathMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

// paths(p, i) is the value of path p at node t_i; column 0 is zero.
struct PathEnsemble {
  TimeGrid grid;
  std::string process_name;
  PathMatrix paths;
  std::uint64_t seed = 0;
  std::string method;
  // Driving Brownian increments dW(p, j) when the sampler kept them.
  std::optional<PathMatrix> increments;

  std::size_t count() const { return static_cast<std::size_t>(paths.rows()); }
};

// dW(p, j) = sqrt(dt_j) * N, with N the j-th normal of stream first_path + p.
PathMatrix sample_increments(const TimeGrid& grid, std::size_t n_paths, std::uint64_t seed,
                             std::size_t first_path = 0, unsigned threads = 1);

PathEnsemble synthesize_from_kernel(const DiscreteKernel& dk, const PathMatrix& increments,
                                    unsigned threads = 1);

// Running sums of increments, node 0 set to zero.
PathMatrix cumulative_paths(const PathMatrix& increments);

// Lower Cholesky factor of cov + eps I with eps = 1e-12 * trace / m, escalated
// tenfold up to 1e-10 * trace / m before giving up.
Eigen::MatrixXd jittered_cholesky(const Eigen::MatrixXd& cov);

// cov is the covariance at nodes t_1..t_n of grid; node 0 is prepended as 0.
PathEnsemble synthesize_cholesky(const Eigen::MatrixXd& cov, const TimeGrid& grid,
                                 std::size_t n_paths, std::uint64_t seed, unsigned threads = 1,
                                 std::size_t first_path = 0);

}  // namespace volterra
