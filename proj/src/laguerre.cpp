#include "volterra/laguerre.hpp"

#include <cmath>
#include <limits>

#include "volterra/error.hpp"
#include "volterra/operators.hpp"
#include "volterra/parallel.hpp"
#include "volterra/specfun.hpp"

namespace volterra {

namespace {

void check_orders(int n_plus, int n_minus) {
  if (n_plus < 0 || n_minus < 0 || n_plus > 64 || n_minus > 64)
    throw InvalidArgument("expansion orders must lie in [0, 64]");
}

// Wiener integral sum_j g_j dM_j written as sum_{j>=1} M_j (g_{j-1} - g_j).
Eigen::MatrixXd by_parts(const Eigen::MatrixXd& g) {
  const long n = g.cols();
  Eigen::MatrixXd d(g.rows(), n);
  for (long j = 1; j <= n; ++j)
    d.col(j - 1) = j < n ? Eigen::VectorXd(g.col(j - 1) - g.col(j)) : Eigen::VectorXd(g.col(j - 1));
  return d;
}

double zeta_or_zero(int n, double x) {
  return std::isinf(x) ? 0.0 : specfun::laguerre_tail(n, x);
}

}  // namespace

double laguerre_basis(int n, double qv_split, double qv_s) {
  if (n >= 0) {
    if (!(qv_s > 0.0) || qv_s >= qv_split) return 0.0;
    return specfun::laguerre_eval(n, std::log(qv_split / qv_s)) / std::sqrt(qv_split);
  }
  if (qv_s <= qv_split) return 0.0;
  return -std::sqrt(qv_split) / qv_s * specfun::laguerre_eval(-n - 1, std::log(qv_s / qv_split));
}

Eigen::MatrixXd laguerre_integrands(const QuadraticVariation& qv, std::size_t split_node, int n_plus,
                                    int n_minus, LaguerreMode mode) {
  check_orders(n_plus, n_minus);
  const std::size_t cells = qv.cells();
  if (split_node == 0 || split_node > cells) throw InvalidArgument("split time must be a positive node");
  if (n_minus > 0 && split_node == cells)
    throw InvalidArgument("negative indices need nodes beyond the split time");
  const double q = qv.at_node(split_node);
  const int rows = n_plus + n_minus + 1;
  Eigen::MatrixXd g = Eigen::MatrixXd::Zero(rows, static_cast<long>(cells));

  const HardyWeights hw = hardy_weights(qv);
  std::vector<double> x(split_node);
  if (mode == LaguerreMode::analytic) {
    x[0] = std::log(q / (0.5 * qv.increment(0)));
    for (std::size_t j = 1; j < split_node; ++j) x[j] = std::log(q / qv.at_node(j));
  } else {
    double acc = 0.0;
    for (std::size_t j = split_node; j-- > 0;) {
      x[j] = acc + hw.head_self[j];
      acc += hw.head_log[j];
    }
  }
  for (std::size_t j = 0; j < split_node; ++j) {
    const auto l = specfun::laguerre_all(n_plus, x[j]);
    for (int n = 0; n <= n_plus; ++n) g(n + n_minus, static_cast<long>(j)) = l[static_cast<std::size_t>(n)];
  }
  if (n_minus > 0) {
    double acc = 0.0;
    for (std::size_t j = split_node; j < cells; ++j) {
      double y, w;
      if (mode == LaguerreMode::analytic) {
        w = qv.at_node(j);
        y = std::log(w / q);
      } else {
        w = qv.increment(j) / hw.head_log[j];
        y = acc + 0.5 * hw.head_log[j];
        acc += hw.head_log[j];
      }
      const auto l = specfun::laguerre_all(n_minus - 1, y);
      for (int k = 1; k <= n_minus; ++k)
        g(n_minus - k, static_cast<long>(j)) = -q * l[static_cast<std::size_t>(k - 1)] / w;
    }
  }
  return g;
}

ExpansionCoefficients epsilon_coefficients(const PathEnsemble& ens, const QuadraticVariation& qv,
                                           double split_time, int n_plus, int n_minus, LaguerreMode mode,
                                           unsigned threads) {
  if (static_cast<std::size_t>(ens.paths.cols()) != qv.cells() + 1)
    throw DimensionMismatch("path length does not match the quadratic variation grid");
  ExpansionCoefficients c;
  c.split_time = split_time;
  c.horizon = qv.grid().horizon();
  c.split_node = qv.grid().index_of(split_time);
  c.n_plus = n_plus;
  c.n_minus = n_minus;
  c.qv_split = qv.at_node(c.split_node);
  c.truncation_ratio = c.qv_split / qv.total();
  c.truncation_warning = c.truncation_ratio > 0.1;
  const Eigen::MatrixXd d = by_parts(laguerre_integrands(qv, c.split_node, n_plus, n_minus, mode));
  const long rows = d.rows();
  const long n = d.cols();
  c.raw.resize(ens.paths.rows(), rows);
  parallel_for(ens.count(), threads, [&](std::size_t begin, std::size_t end) {
    Eigen::VectorXd m(n);
    Eigen::VectorXd r(rows);
    for (std::size_t p = begin; p < end; ++p) {
      m = ens.paths.row(static_cast<long>(p)).tail(n).transpose();
      r.noalias() = d * m;
      c.raw.row(static_cast<long>(p)) = r.transpose();
    }
  });
  c.values = c.raw / std::sqrt(c.qv_split);
  return c;
}

double reconstruct_value(const ExpansionCoefficients& coeffs, std::size_t path, const QuadraticVariation& qv,
                         std::size_t node, int order) {
  if (order < 0 || order > coeffs.n_plus) throw InvalidArgument("reconstruction order exceeds N+");
  if (node == 0 || node > coeffs.split_node) throw InvalidArgument("reconstruction needs 0 < t <= T");
  const double x = std::log(coeffs.qv_split / qv.at_node(node));
  double sum = 0.0;
  for (int n = 0; n <= order; ++n) sum += specfun::laguerre_tail(n, x) * coeffs.raw_at(path, n);
  return sum;
}

double FunctionalExpansion::parseval_sum(int order) const {
  double s = 0.0;
  for (std::size_t k = 0; k < indices.size(); ++k)
    if (std::abs(indices[k]) <= order) s += coefficients[k] * coefficients[k];
  return s;
}

std::vector<double> functional_coefficients(const Eigen::VectorXd& f, const QuadraticVariation& qv,
                                            std::size_t split_node, int n_plus, int n_minus) {
  check_orders(n_plus, n_minus);
  const std::size_t cells = qv.cells();
  if (static_cast<std::size_t>(f.size()) != cells) throw DimensionMismatch("functional has wrong length");
  const double q = qv.at_node(split_node);
  const double root = std::sqrt(q);
  std::vector<double> c(static_cast<std::size_t>(n_plus + n_minus + 1), 0.0);
  auto x_at = [&](std::size_t i) {
    return i == 0 ? std::numeric_limits<double>::infinity() : std::log(q / qv.at_node(i));
  };
  for (int n = 0; n <= n_plus; ++n) {
    double s = 0.0;
    for (std::size_t j = 0; j < split_node; ++j)
      if (f(static_cast<long>(j)) != 0.0)
        s += f(static_cast<long>(j)) * root * (zeta_or_zero(n, x_at(j + 1)) - zeta_or_zero(n, x_at(j)));
    c[static_cast<std::size_t>(n + n_minus)] = s;
  }
  for (int k = 1; k <= n_minus; ++k) {
    double s = 0.0;
    for (std::size_t j = split_node; j < cells; ++j) {
      if (f(static_cast<long>(j)) == 0.0) continue;
      const double ya = std::log(qv.at_node(j) / q);
      const double yb = std::log(qv.at_node(j + 1) / q);
      s += f(static_cast<long>(j)) * -root *
           (specfun::laguerre_integral(k - 1, yb) - specfun::laguerre_integral(k - 1, ya));
    }
    c[static_cast<std::size_t>(n_minus - k)] = s;
  }
  return c;
}

FunctionalExpansion expand_functional(const Eigen::VectorXd& f, const ExpansionCoefficients& coeffs,
                                      const QuadraticVariation& qv, const PathEnsemble& ens) {
  FunctionalExpansion out;
  out.coefficients = functional_coefficients(f, qv, coeffs.split_node, coeffs.n_plus, coeffs.n_minus);
  for (int n = -coeffs.n_minus; n <= coeffs.n_plus; ++n) out.indices.push_back(n);
  const long paths = ens.paths.rows();
  const long cells = static_cast<long>(qv.cells());
  const int top = std::max(coeffs.n_plus, coeffs.n_minus);
  out.target.resize(paths);
  out.partial.resize(paths, top + 1);
  for (long p = 0; p < paths; ++p) {
    double z = 0.0;
    for (long j = 0; j < cells; ++j) z += f(j) * (ens.paths(p, j + 1) - ens.paths(p, j));
    out.target(p) = z;
    double acc = 0.0;
    for (int order = 0; order <= top; ++order) {
      if (order == 0) {
        acc += out.coefficients[static_cast<std::size_t>(coeffs.n_minus)] * coeffs.at(static_cast<std::size_t>(p), 0);
      } else {
        if (order <= coeffs.n_plus)
          acc += out.coefficients[static_cast<std::size_t>(order + coeffs.n_minus)] *
                 coeffs.at(static_cast<std::size_t>(p), order);
        if (order <= coeffs.n_minus)
          acc += out.coefficients[static_cast<std::size_t>(coeffs.n_minus - order)] *
                 coeffs.at(static_cast<std::size_t>(p), -order);
      }
      out.partial(p, order) = acc;
    }
  }
  return out;
}

Eigen::VectorXd laguerre_shift(const Eigen::VectorXd& path, const QuadraticVariation& qv, int direction,
                               LaguerreMode mode) {
  const long n = static_cast<long>(qv.cells());
  if (path.size() != n + 1) throw DimensionMismatch("path length does not match the quadratic variation grid");
  const HardyWeights hw = hardy_weights(qv);
  Eigen::VectorXd out(n + 1);
  out(0) = 0.0;
  if (direction > 0) {
    double acc = 0.0;
    for (long k = 1; k <= n; ++k) {
      const auto u = static_cast<std::size_t>(k - 1);
      if (mode == LaguerreMode::analytic) {
        if (u > 0) acc += path(k - 1) * qv.increment(u) / qv.at_node(u);
      } else {
        acc += (path(k) - path(k - 1)) * hw.head_self[u];
        if (u > 0) acc += path(k - 1) * hw.head_log[u];
      }
      out(k) = path(k) - acc;
    }
  } else {
    double acc = 0.0;
    out(n) = 0.0;
    for (long k = n - 1; k >= 1; --k) {
      const auto u = static_cast<std::size_t>(k);
      const double inv = mode == LaguerreMode::analytic ? 1.0 / qv.at_node(u)
                                                        : hw.head_log[u] / qv.increment(u);
      acc += (path(k + 1) - path(k)) * inv;
      out(k) = -qv.at_node(u) * acc;
    }
  }
  return out;
}

double iterate_transform_check(const Eigen::VectorXd& path, const QuadraticVariation& qv, double split_time,
                               int n, LaguerreMode mode) {
  if (n < -4 || n > 4) throw InvalidArgument("iterate check supports n in [-4, 4]");
  const std::size_t k = qv.grid().index_of(split_time);
  if (n == 0) return 0.0;
  Eigen::VectorXd y = path;
  for (int s = 0; s < std::abs(n); ++s) y = laguerre_shift(y, qv, n > 0 ? 1 : -1, mode);
  const int np = std::max(n, 0);
  const int nm = std::max(-n, 0);
  const Eigen::MatrixXd d = by_parts(laguerre_integrands(qv, k, np, nm, mode));
  const long row = n >= 0 ? n + nm : 0;
  const double direct = d.row(row).dot(path.tail(path.size() - 1));
  return std::abs(y(static_cast<long>(k)) - direct);
}

Eigen::MatrixXd laguerre_gram(int n_max, int order, double qv_split) {
  const auto rule = specfun::gauss_laguerre_rule(order);
  const int dim = 2 * n_max + 1;
  Eigen::MatrixXd g = Eigen::MatrixXd::Zero(dim, dim);
  for (int a = -n_max; a <= n_max; ++a) {
    for (int b = -n_max; b <= n_max; ++b) {
      if ((a >= 0) != (b >= 0)) continue;  // disjoint supports
      double s = 0.0;
      for (std::size_t k = 0; k < rule.order(); ++k) {
        const double x = rule.nodes[k];
        // d<M> = <M>_T e^{-x} dx below T and <M>_T e^{y} dy above it.
        const double qv_s = a >= 0 ? qv_split * std::exp(-x) : qv_split * std::exp(x);
        const double jac = a >= 0 ? qv_split : qv_split * std::exp(2.0 * x);
        s += rule.weights[k] * jac * laguerre_basis(a, qv_split, qv_s) * laguerre_basis(b, qv_split, qv_s);
      }
      g(a + n_max, b + n_max) = s;
    }
  }
  return g;
}

}  // namespace volterra
