#include "volterra/operators.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "volterra/error.hpp"

namespace volterra {

namespace {

void check_index(int i) {
  if (i != 1 && i != 2) throw InvalidArgument("operator family index must be 1 or 2");
}

Eigen::Map<const Eigen::VectorXd> as_vector(const std::vector<double>& v) {
  return {v.data(), static_cast<long>(v.size())};
}

}  // namespace

Eigen::VectorXd indicator(std::size_t cells, std::size_t node) {
  Eigen::VectorXd f = Eigen::VectorXd::Zero(static_cast<long>(cells));
  f.head(static_cast<long>(std::min(node, cells))).setOnes();
  return f;
}

double measure_sum(const Eigen::VectorXd& f, const std::vector<double>& measure) {
  double s = 0.0;
  for (long j = 0; j < f.size(); ++j) s += f(j) * measure[static_cast<std::size_t>(j)];
  return s;
}

double measure_norm2(const Eigen::VectorXd& f, const std::vector<double>& measure) {
  double s = 0.0;
  for (long j = 0; j < f.size(); ++j) s += f(j) * f(j) * measure[static_cast<std::size_t>(j)];
  return s;
}

double measure_operator_norm(const Eigen::MatrixXd& a, const std::vector<double>& measure) {
  const Eigen::VectorXd root = as_vector(measure).cwiseSqrt();
  const Eigen::MatrixXd scaled = root.asDiagonal() * a * root.cwiseInverse().asDiagonal();
  Eigen::BDCSVD<Eigen::MatrixXd> svd(scaled);
  return svd.singularValues().size() ? svd.singularValues()(0) : 0.0;
}

OperatorMatrix eta_matrix(const QuadraticVariation& qv) {
  const long n = static_cast<long>(qv.cells());
  const double total = qv.total();
  if (!(total > 0.0)) throw DomainError("eta requires <M>_T > 0");
  OperatorMatrix e{Eigen::MatrixXd::Identity(n, n), qv.increments(), Space::full, Space::zero_mean};
  for (long i = 0; i < n; ++i)
    for (long u = 0; u < n; ++u) e.matrix(i, u) -= qv.increment(static_cast<std::size_t>(u)) / total;
  return e;
}

HardyWeights hardy_weights(const QuadraticVariation& qv) {
  const std::size_t n = qv.cells();
  HardyWeights w;
  w.head_log.resize(n);
  w.head_self.resize(n);
  w.tail_log.resize(n);
  w.tail_self.resize(n);
  // 1 - ln(1 + x) / x, with a series where the subtraction cancels.
  auto self = [](double x) {
    if (x < 1e-3) return x / 2.0 - x * x / 3.0 + x * x * x / 4.0 - x * x * x * x / 5.0;
    return 1.0 - std::log1p(x) / x;
  };
  const double inf = std::numeric_limits<double>::infinity();
  for (std::size_t u = 0; u < n; ++u) {
    const double d = qv.increment(u);
    const double before = qv.at_node(u);
    w.head_log[u] = before > 0.0 ? std::log1p(d / before) : inf;
    w.head_self[u] = before > 0.0 ? self(d / before) : 1.0;
    const double after = u + 1 < n ? qv.tail(u + 1) : 0.0;
    w.tail_log[u] = after > 0.0 ? std::log1p(d / after) : inf;
    w.tail_self[u] = after > 0.0 ? self(d / after) : 1.0;
  }
  return w;
}

OperatorMatrix hardy_matrix(const QuadraticVariation& qv, int i, bool adjoint) {
  check_index(i);
  const std::size_t n = qv.cells();
  const HardyWeights w = hardy_weights(qv);
  OperatorMatrix h{Eigen::MatrixXd::Zero(static_cast<long>(n), static_cast<long>(n)),
                   qv.increments(), Space::full, Space::full};
  auto& a = h.matrix;
  for (std::size_t j = 0; j < n; ++j) {
    const long lj = static_cast<long>(j);
    const double dj = qv.increment(j);
    a(lj, lj) = i == 1 ? w.head_self[j] : w.tail_self[j];
    for (std::size_t u = 0; u < n; ++u) {
      const long lu = static_cast<long>(u);
      const double du = qv.increment(u);
      if (i == 1 && !adjoint && u < j) a(lj, lu) = w.head_log[j] / dj * du;
      if (i == 1 && adjoint && u > j) a(lj, lu) = w.head_log[u];
      if (i == 2 && !adjoint && u > j) a(lj, lu) = w.tail_log[j] / dj * du;
      if (i == 2 && adjoint && u < j) a(lj, lu) = w.tail_log[u];
    }
  }
  return h;
}

OperatorPair alpha_beta_m(const QuadraticVariation& qv, int i, OperatorMode mode) {
  check_index(i);
  const long n = static_cast<long>(qv.cells());
  const Eigen::MatrixXd id = Eigen::MatrixXd::Identity(n, n);
  OperatorPair p;
  p.beta = OperatorMatrix{id - hardy_matrix(qv, i, true).matrix, qv.increments(), Space::full,
                          Space::zero_mean};
  if (mode == OperatorMode::analytic) {
    p.alpha = OperatorMatrix{id - hardy_matrix(qv, i, false).matrix, qv.increments(),
                             Space::zero_mean, Space::full};
    return p;
  }
  // beta has the one-dimensional kernel e_k (k = 0 for i = 1, k = n-1 for
  // i = 2) and is triangular with a nonzero diagonal elsewhere. Solving on the
  // remaining coordinates gives the inverse on the zero-mean subspace.
  const long k = i == 1 ? 0 : n - 1;
  const long m = n - 1;
  const long off = i == 1 ? 1 : 0;
  const Eigen::MatrixXd reduced = p.beta.matrix.block(off, off, m, m);
  const Eigen::MatrixXd eta = eta_matrix(qv).matrix;
  Eigen::MatrixXd sol = eta.block(off, 0, m, n);
  if (i == 1)
    reduced.triangularView<Eigen::Upper>().solveInPlace(sol);
  else
    reduced.triangularView<Eigen::Lower>().solveInPlace(sol);
  Eigen::MatrixXd alpha = Eigen::MatrixXd::Zero(n, n);
  alpha.block(off, 0, m, n) = sol;
  alpha.row(k).setZero();
  p.alpha = OperatorMatrix{std::move(alpha), qv.increments(), Space::zero_mean, Space::full};
  return p;
}

KappaMatrices kappa_matrix(const DiscreteKernel& pk, const QuadraticVariation& qv) {
  const long n = static_cast<long>(pk.cells());
  if (static_cast<long>(qv.cells()) != n) throw DimensionMismatch("kappa: kernel and qv grids differ");
  Eigen::MatrixXd kap(n, n);
  for (long j = 0; j < n; ++j) kap.col(j) = (pk.values.row(j + 1) - pk.values.row(j)).transpose();
  Eigen::PartialPivLU<Eigen::MatrixXd> lu(kap);
  const double rcond = lu.rcond();
  const double condition = rcond > 0.0 ? 1.0 / rcond : INFINITY;
  if (!(condition <= 1e12))
    throw SingularMatrix("kappa is near-degenerate (condition " + std::to_string(condition) + ")",
                         condition);
  KappaMatrices out;
  out.kappa = OperatorMatrix{kap, qv.increments(), Space::full, Space::full};
  out.inverse = lu.solve(Eigen::MatrixXd::Identity(n, n));
  out.condition = condition;
  return out;
}

Eigen::MatrixXd kappa_inverse_from_kstar(const Eigen::MatrixXd& kstar) {
  const long n = kstar.cols();
  Eigen::MatrixXd inv(n, n);
  for (long j = 0; j < n; ++j) inv.col(j) = (kstar.row(j + 1) - kstar.row(j)).transpose();
  return inv;
}

Eigen::MatrixXd kstar_from_kappa_inverse(const Eigen::MatrixXd& inverse) {
  const long n = inverse.cols();
  Eigen::MatrixXd ks = Eigen::MatrixXd::Zero(n + 1, n);
  for (long i = 1; i <= n; ++i) ks.row(i) = ks.row(i - 1) + inverse.col(i - 1).transpose();
  ks.row(n).setOnes();
  return ks;
}

OperatorPair conjugate(const OperatorPair& m, const KappaMatrices& kappa) {
  const auto& kap = kappa.kappa.matrix;
  OperatorPair x;
  x.alpha = OperatorMatrix{kappa.inverse * m.alpha.matrix * kap, m.alpha.measure, m.alpha.domain,
                           m.alpha.range};
  x.beta = OperatorMatrix{kappa.inverse * m.beta.matrix * kap, m.beta.measure, m.beta.domain,
                          m.beta.range};
  return x;
}

OperatorPair alpha_beta_x(const DiscreteKernel& pk, const QuadraticVariation& qv, int i,
                          OperatorMode mode) {
  return conjugate(alpha_beta_m(qv, i, mode), kappa_matrix(pk, qv));
}

OperatorMatrix eta_x_from_covariance(const Eigen::VectorXd& cov_with_T, const QuadraticVariation& qv) {
  const long n = static_cast<long>(qv.cells());
  if (cov_with_T.size() != n + 1) throw DimensionMismatch("eta^X: covariance column has wrong length");
  const double rtt = cov_with_T(n);
  if (!(rtt > 0.0)) throw DomainError("eta^X requires R(T,T) > 0");
  OperatorMatrix e{Eigen::MatrixXd::Identity(n, n), qv.increments(), Space::full, Space::zero_mean};
  for (long u = 0; u < n; ++u) {
    const double w = (cov_with_T(u + 1) - cov_with_T(u)) / rtt;
    e.matrix.col(u).array() -= w;
  }
  return e;
}

Eigen::VectorXd explicit_alpha_beta_x(const DiscreteKernel& pk, const QuadraticVariation& qv,
                                      const Eigen::MatrixXd& kstar, int i, ExplicitOp op,
                                      std::size_t node) {
  check_index(i);
  const std::size_t n = qv.cells();
  if (node > n) throw InvalidArgument("explicit formula: node out of range");
  const HardyWeights w = hardy_weights(qv);
  const auto ki = pk.values.row(static_cast<long>(node));
  auto kv = [&](std::size_t u) { return ki(static_cast<long>(u)); };
  auto ks = [&](std::size_t u) { return kstar.row(static_cast<long>(u)).transpose(); };
  // k*(t_{u+1}, .) - k*(t_u, .) is the X-integrand of the cell indicator e_u.
  auto cell = [&](std::size_t u) { return Eigen::VectorXd(ks(u + 1) - ks(u)); };
  Eigen::VectorXd g = indicator(n, node);

  if (op == ExplicitOp::beta && i == 1) {
    // 1_t - int_0^t k*(u,.) k(t,u) / <M>_u d<M>_u
    for (std::size_t u = 0; u < node; ++u) {
      g -= cell(u) * (kv(u) * w.head_self[u]);
      if (u > 0) g -= ks(u) * (kv(u) * w.head_log[u]);
    }
  } else if (op == ExplicitOp::beta && i == 2) {
    // 1_t - int_0^t (1 - k*(u,.)) k(t,u) / <M>_{T,u} d<M>_u
    for (std::size_t u = 0; u < node; ++u) {
      g -= cell(u) * (kv(u) * w.tail_self[u]);
      if (u + 1 < n) g -= (Eigen::VectorXd::Ones(static_cast<long>(n)) - ks(u + 1)) * (kv(u) * w.tail_log[u]);
    }
  } else if (op == ExplicitOp::alpha && i == 1) {
    // 1_t - sum_u (k*(t_{u+1},.) - k*(t_u,.)) (H^1 k(t,.))_u
    double acc = 0.0;
    for (std::size_t u = 0; u < n; ++u) {
      double c = kv(u) * w.head_self[u];
      if (u > 0) c += w.head_log[u] * acc / qv.increment(u);
      if (c != 0.0) g -= cell(u) * c;
      acc += kv(u) * qv.increment(u);
    }
  } else {
    // 1_t - sum_u (k*(t_{u+1},.) - k*(t_u,.)) (H^2 k(t,.))_u
    double acc = 0.0;
    for (std::size_t u = n; u-- > 0;) {
      double c = kv(u) * w.tail_self[u];
      if (u + 1 < n) c += w.tail_log[u] * acc / qv.increment(u);
      if (c != 0.0) g -= cell(u) * c;
      acc += kv(u) * qv.increment(u);
    }
  }
  return g;
}

}  // namespace volterra
