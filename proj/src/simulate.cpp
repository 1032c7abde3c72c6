#include "volterra/simulate.hpp"

#include <cmath>

#include "volterra/error.hpp"
#include "volterra/parallel.hpp"
#include "volterra/random.hpp"

namespace volterra {

PathMatrix sample_increments(const TimeGrid& grid, std::size_t n_paths, std::uint64_t seed,
                             std::size_t first_path, unsigned threads) {
  const std::size_t n = grid.cells();
  PathMatrix dw(static_cast<long>(n_paths), static_cast<long>(n));
  std::vector<double> root(n);
  for (std::size_t j = 0; j < n; ++j) root[j] = std::sqrt(grid.width(j));
  parallel_for(n_paths, threads, [&](std::size_t begin, std::size_t end) {
    for (std::size_t p = begin; p < end; ++p) {
      const CounterRng rng(seed, first_path + p);
      double* row = dw.row(static_cast<long>(p)).data();
      rng.normals(0, row, n);
      for (std::size_t j = 0; j < n; ++j) row[j] *= root[j];
    }
  });
  return dw;
}

PathEnsemble synthesize_from_kernel(const DiscreteKernel& dk, const PathMatrix& increments,
                                    unsigned threads) {
  const long n = static_cast<long>(dk.cells());
  if (increments.cols() != n) throw DimensionMismatch("increment matrix does not match kernel grid");
  PathEnsemble ens;
  ens.grid = dk.grid;
  ens.method = "kernel";
  ens.paths.resize(increments.rows(), n + 1);
  parallel_for(static_cast<std::size_t>(increments.rows()), threads,
               [&](std::size_t begin, std::size_t end) {
                 // Fresh aligned buffers keep the product's summation order
                 // independent of where a row lives in memory.
                 Eigen::VectorXd dw(n);
                 Eigen::VectorXd out(n + 1);
                 for (std::size_t p = begin; p < end; ++p) {
                   dw = increments.row(static_cast<long>(p)).transpose();
                   out.noalias() = dk.values * dw;
                   out(0) = 0.0;
                   ens.paths.row(static_cast<long>(p)) = out.transpose();
                 }
               });
  return ens;
}

PathMatrix cumulative_paths(const PathMatrix& increments) {
  PathMatrix out(increments.rows(), increments.cols() + 1);
  for (long p = 0; p < increments.rows(); ++p) {
    double acc = 0.0;
    out(p, 0) = 0.0;
    for (long j = 0; j < increments.cols(); ++j) {
      acc += increments(p, j);
      out(p, j + 1) = acc;
    }
  }
  return out;
}

Eigen::MatrixXd jittered_cholesky(const Eigen::MatrixXd& cov) {
  const long m = cov.rows();
  if (cov.cols() != m) throw DimensionMismatch("covariance must be square");
  const double scale = cov.trace() / static_cast<double>(m);
  if (scale == 0.0 && cov.isZero(0.0)) return Eigen::MatrixXd::Zero(m, m);
  if (!(scale > 0.0)) throw FactorizationFailure("covariance has nonpositive trace");
  for (double rel = 1e-12; rel <= 1.0001e-10; rel *= 10.0) {
    Eigen::MatrixXd a = cov;
    a.diagonal().array() += rel * scale;
    Eigen::LLT<Eigen::MatrixXd> llt(a);
    if (llt.info() == Eigen::Success) return llt.matrixL();
  }
  throw FactorizationFailure("Cholesky failed with jitter up to 1e-10 * trace / m");
}

PathEnsemble synthesize_cholesky(const Eigen::MatrixXd& cov, const TimeGrid& grid,
                                 std::size_t n_paths, std::uint64_t seed, unsigned threads,
                                 std::size_t first_path) {
  const long m = static_cast<long>(grid.cells());
  if (cov.rows() != m) throw DimensionMismatch("covariance size must equal the number of cells");
  const Eigen::MatrixXd l = jittered_cholesky(cov);
  PathEnsemble ens;
  ens.grid = grid;
  ens.method = "cholesky";
  ens.seed = seed;
  ens.paths = PathMatrix::Zero(static_cast<long>(n_paths), m + 1);
  parallel_for(n_paths, threads, [&](std::size_t begin, std::size_t end) {
    Eigen::VectorXd z(m);
    Eigen::VectorXd out(m);
    for (std::size_t p = begin; p < end; ++p) {
      CounterRng(seed, first_path + p).normals(0, z.data(), static_cast<std::size_t>(m));
      out.noalias() = l.triangularView<Eigen::Lower>() * z;
      ens.paths.row(static_cast<long>(p)).tail(m) = out.transpose();
    }
  });
  return ens;
}

}  // namespace volterra
