#include "volterra/kernels.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include <boost/math/quadrature/tanh_sinh.hpp>

#include "volterra/error.hpp"
#include "volterra/specfun.hpp"

namespace volterra {

QuadraticVariation::QuadraticVariation(TimeGrid grid, std::vector<double> increments)
    : grid_(std::move(grid)), increments_(std::move(increments)) {
  if (increments_.size() != grid_.cells())
    throw DimensionMismatch("quadratic variation: one increment per cell expected");
  for (std::size_t j = 0; j < increments_.size(); ++j)
    if (!(increments_[j] > 0.0) || !std::isfinite(increments_[j]))
      throw DegenerateKernel("quadratic variation increment " + std::to_string(j) +
                             " is not positive");
  const std::size_t n = increments_.size();
  cumulative_.assign(n + 1, 0.0);
  for (std::size_t j = 0; j < n; ++j) cumulative_[j + 1] = cumulative_[j] + increments_[j];
  tails_.assign(n, 0.0);
  double acc = 0.0;
  for (std::size_t j = n; j-- > 0;) {
    acc += increments_[j];
    tails_[j] = acc;
  }
}

QuadraticVariation QuadraticVariation::truncated(std::size_t cells) const {
  if (cells < 2 || cells > increments_.size()) throw InvalidArgument("bad truncation length");
  std::vector<double> nodes(grid_.nodes().begin(), grid_.nodes().begin() + static_cast<long>(cells) + 1);
  std::vector<double> inc(increments_.begin(), increments_.begin() + static_cast<long>(cells));
  return {TimeGrid::from_nodes(std::move(nodes)), std::move(inc)};
}

QuadraticVariation QuadraticVariation::reversed() const {
  std::vector<double> inc(increments_.rbegin(), increments_.rend());
  return {grid_, std::move(inc)};
}

double fbm_constant(double hurst) {
  using specfun::gamma_fn;
  return std::sqrt(2.0 * hurst * gamma_fn(hurst + 0.5) * gamma_fn(1.5 - hurst) /
                   gamma_fn(2.0 - 2.0 * hurst));
}

namespace {

void check_hurst(double hurst) {
  if (!(hurst > 0.0 && hurst < 1.0)) throw DomainError("Hurst index must lie in (0, 1)");
}

double fbm_kernel_unchecked(double hurst, double prefactor, double t, double s) {
  if (s >= t) return 0.0;
  if (hurst == 0.5) return 1.0;
  if (!(s > 0.0)) throw DomainError("fBm kernel is singular at s <= 0");
  const double q = hurst - 0.5;
  return prefactor * std::pow(t - s, q) * specfun::gauss_2f1(-q, q, hurst + 0.5, (s - t) / s);
}

}  // namespace

double fbm_kernel(double hurst, double t, double s) {
  check_hurst(hurst);
  const double pre = fbm_constant(hurst) / specfun::gamma_fn(hurst + 0.5);
  return fbm_kernel_unchecked(hurst, pre, t, s);
}

double fbm_covariance(double hurst, double s, double t) {
  check_hurst(hurst);
  const double h2 = 2.0 * hurst;
  return 0.5 * (std::pow(s, h2) + std::pow(t, h2) - std::pow(std::abs(t - s), h2));
}

VolterraKernel fbm_volterra_kernel(double hurst) {
  check_hurst(hurst);
  const double pre = fbm_constant(hurst) / specfun::gamma_fn(hurst + 0.5);
  VolterraKernel k;
  k.eval = [hurst, pre](double t, double s) { return fbm_kernel_unchecked(hurst, pre, t, s); };
  k.diagonal_exponent = hurst - 0.5;
  k.origin_exponent = 0.5 - hurst;
  return k;
}

VolterraKernel brownian_kernel() {
  VolterraKernel k;
  k.eval = [](double t, double s) { return s < t ? 1.0 : 0.0; };
  return k;
}

namespace {

// Mean of x^p over [a, b] divided by m^p, m the midpoint.
double power_average_ratio(double a, double b, double p) {
  if (p == 0.0) return 1.0;
  const double m = 0.5 * (a + b);
  const double mean = (std::pow(b, p + 1.0) - std::pow(a, p + 1.0)) / ((p + 1.0) * (b - a));
  return mean / std::pow(m, p);
}

}  // namespace

DiscreteKernel discretize_kernel(const VolterraKernel& kernel, const TimeGrid& grid, EvalPoint point) {
  const std::size_t n = grid.cells();
  DiscreteKernel dk{grid, Eigen::MatrixXd::Zero(static_cast<long>(n + 1), static_cast<long>(n))};
  std::vector<double> origin_weight(n, 1.0);
  if (point == EvalPoint::weighted_midpoint) {
    const double p = 2.0 * kernel.origin_exponent;
    for (std::size_t j = 0; j < n; ++j)
      origin_weight[j] = std::sqrt(power_average_ratio(grid.node(j), grid.node(j + 1), p));
  }
  const double q = kernel.diagonal_exponent;
  for (std::size_t i = 1; i <= n; ++i) {
    const double t = grid.node(i);
    for (std::size_t j = 0; j < i; ++j) {
      const double m = point == EvalPoint::left ? grid.node(j) : grid.midpoint(j);
      double v = kernel.eval(t, m);
      if (point == EvalPoint::weighted_midpoint) {
        // (t - u)^q averaged over the cell, relative to its midpoint value.
        if (q != 0.0) v *= power_average_ratio(t - grid.node(j + 1), t - grid.node(j), q);
        v *= origin_weight[j];
      }
      dk.values(static_cast<long>(i), static_cast<long>(j)) = v;
    }
  }
  return dk;
}

DiscreteKernel discretize_kernel(const KernelFn& kernel, const TimeGrid& grid, EvalPoint point) {
  return discretize_kernel(VolterraKernel{kernel, 0.0, 0.0}, grid, point);
}

Eigen::MatrixXd covariance_from_kernel(const DiscreteKernel& dk) {
  const auto w = dk.grid.widths();
  const Eigen::Map<const Eigen::VectorXd> dt(w.data(), static_cast<long>(w.size()));
  return dk.values * dt.asDiagonal() * dk.values.transpose();
}

Eigen::MatrixXd fbm_covariance_matrix(double hurst, const TimeGrid& grid) {
  const long m = static_cast<long>(grid.size());
  Eigen::MatrixXd r(m, m);
  for (long i = 0; i < m; ++i)
    for (long k = 0; k < m; ++k)
      r(i, k) = fbm_covariance(hurst, grid.node(static_cast<std::size_t>(i)),
                               grid.node(static_cast<std::size_t>(k)));
  return r;
}

QuadraticVariation quadratic_variation(const DiscreteKernel& dk) {
  const std::size_t n = dk.cells();
  std::vector<double> inc(n);
  const long last = static_cast<long>(n);
  for (std::size_t j = 0; j < n; ++j) {
    const double z = dk.values(last, static_cast<long>(j));
    inc[j] = z * z * dk.grid.width(j);
    if (!(inc[j] > 0.0))
      throw DegenerateKernel("z(T, .) vanishes on cell " + std::to_string(j));
  }
  return {dk.grid, std::move(inc)};
}

QuadraticVariation brownian_qv(const TimeGrid& grid) { return {grid, grid.widths()}; }

DiscreteKernel prediction_kernel(const DiscreteKernel& dk) {
  const long rows = dk.values.rows();
  const long n = dk.values.cols();
  DiscreteKernel pk{dk.grid, Eigen::MatrixXd::Zero(rows, n)};
  for (long j = 0; j < n; ++j) {
    const double last = dk.values(rows - 1, j);
    if (last == 0.0) throw DegenerateKernel("z(T, .) vanishes on cell " + std::to_string(j));
    for (long i = 0; i < rows - 1; ++i) pk.values(i, j) = dk.values(i, j) / last;
    pk.values(rows - 1, j) = 1.0;
  }
  return pk;
}

namespace {

double kstar_integral(double hurst, double horizon, double t, double s, double& error) {
  // int_t^T u^{H-1/2} (u-t)^{H-1/2} / (u-s) du after u = t + (T-t) w^{1/a},
  // a = H + 1/2, which absorbs the endpoint singularity.
  const double a = hurst + 0.5;
  const double q = hurst - 0.5;
  const double span = horizon - t;
  auto f = [&](double w) {
    const double u = t + span * std::pow(w, 1.0 / a);
    return std::pow(u, q) / (u - s);
  };
  // Break points cluster where (T-t) w^{1/a} is comparable to t - s.
  const double wstar = std::pow((t - s) / span, a);
  std::vector<double> cuts{0.0};
  if (wstar < 1.0) {
    double c = wstar / 64.0;
    while (c < 1.0) {
      if (c > 0.0) cuts.push_back(c);
      c *= 4.0;
    }
  }
  cuts.push_back(1.0);
  // f behaves like w^{1/a} at w = 0, which tanh-sinh absorbs.
  static boost::math::quadrature::tanh_sinh<double> rule;
  double total = 0.0;
  double err_total = 0.0;
  for (std::size_t k = 0; k + 1 < cuts.size(); ++k) {
    double err = 0.0;
    total += rule.integrate(f, cuts[k], cuts[k + 1], 1e-12, &err);
    err_total += err;
  }
  const double scale = std::pow(span, a) / a;
  error = scale * err_total;
  return scale * total;
}

}  // namespace

double fbm_kstar(double hurst, double horizon, double t, double s) {
  check_hurst(hurst);
  if (!(s > 0.0)) throw DomainError("k* requires s > 0");
  if (t > horizon) throw DomainError("k* requires t <= T");
  if (s >= t) return 0.0;
  if (hurst == 0.5 || t >= horizon) return 1.0;
  const double q = hurst - 0.5;
  const double factor = std::sin(std::numbers::pi * q) / std::numbers::pi *
                        std::pow(s, -q) * std::pow(t - s, -q);
  double error = 0.0;
  const double integral = kstar_integral(hurst, horizon, t, s, error);
  const double value = 1.0 + factor * integral;
  const double achieved = std::abs(factor) * error;
  if (!std::isfinite(value) || achieved > 1e-8)
    throw ConvergenceError("k* quadrature missed its tolerance", achieved);
  return value;
}

Eigen::MatrixXd fbm_kstar_matrix(double hurst, const TimeGrid& grid) {
  const std::size_t n = grid.cells();
  Eigen::MatrixXd ks = Eigen::MatrixXd::Zero(static_cast<long>(n + 1), static_cast<long>(n));
  for (std::size_t i = 1; i < n; ++i)
    for (std::size_t j = 0; j < i; ++j)
      ks(static_cast<long>(i), static_cast<long>(j)) =
          fbm_kstar(hurst, grid.horizon(), grid.node(i), grid.midpoint(j));
  ks.row(static_cast<long>(n)).setOnes();
  return ks;
}

}  // namespace volterra
