#include "volterra/specfun.hpp"

#include <array>
#include <cmath>
#include <numbers>
#include <string>

#include "volterra/error.hpp"

namespace volterra::specfun {

namespace {

constexpr int kMaxLaguerreDegree = 64;
constexpr long kMaxSeriesTerms = 1'000'000;
constexpr double kSeriesTol = 1e-16;
constexpr double kInverseSwitch = -20.0;

// Lanczos coefficients for g = 7.
constexpr std::array<double, 9> kLanczos = {
    0.99999999999980993,     676.5203681218851,     -1259.1392167224028,
    771.32342877765313,      -176.61502916214059,   12.507343278686905,
    -0.13857109526572012,    9.9843695780195716e-6, 1.5056327351493116e-7};

bool is_nonpositive_integer(double c) {
  return c <= 0.0 && std::floor(c) == c;
}

void check_degree(int n) {
  if (n < 0 || n > kMaxLaguerreDegree)
    throw DomainError("Laguerre degree " + std::to_string(n) + " outside [0, 64]");
}

double laguerre_unchecked(int n, double x) {
  if (n == 0) return 1.0;
  double prev = 1.0;
  double cur = 1.0 - x;
  for (int k = 1; k < n; ++k) {
    const double next = ((2.0 * k + 1.0 - x) * cur - k * prev) / (k + 1.0);
    prev = cur;
    cur = next;
  }
  return cur;
}

double gamma_signed(double x) {
  if (x > 0.0) return gamma_fn(x);
  if (std::floor(x) == x) throw DomainError("gamma pole");
  return std::numbers::pi / (std::sin(std::numbers::pi * x) * gamma_fn(1.0 - x));
}

// 1/Gamma(x) for any real x, zero at the poles.
double rgamma(double x) {
  if (x > 0.0) return 1.0 / gamma_fn(x);
  if (std::floor(x) == x) return 0.0;
  // Reflection: 1/Gamma(x) = sin(pi x) Gamma(1 - x) / pi.
  return std::sin(std::numbers::pi * x) * gamma_fn(1.0 - x) / std::numbers::pi;
}

// Continuation to large negative z through 1/z, valid when b - a is not an integer:
// 2F1 = G(c)G(b-a)/(G(b)G(c-a)) (-z)^{-a} 2F1(a, a-c+1; a-b+1; 1/z) + (a <-> b).
double gauss_2f1_inverse(double a, double b, double c, double z) {
  const double gc = gamma_fn(c);
  const double t1 = gc * gamma_signed(b - a) * rgamma(b) * rgamma(c - a) * std::pow(-z, -a) *
                    gauss_2f1_series(a, a - c + 1.0, a - b + 1.0, 1.0 / z);
  const double t2 = gc * gamma_signed(a - b) * rgamma(a) * rgamma(c - b) * std::pow(-z, -b) *
                    gauss_2f1_series(b, b - c + 1.0, b - a + 1.0, 1.0 / z);
  return t1 + t2;
}

}  // namespace

double gamma_fn(double x) {
  if (!(x > 0.0)) throw DomainError("gamma_fn requires x > 0");
  if (x < 0.5) return gamma_fn(x + 1.0) / x;
  const double xm = x - 1.0;
  double a = kLanczos[0];
  const double t = xm + 7.5;
  for (std::size_t i = 1; i < kLanczos.size(); ++i) a += kLanczos[i] / (xm + static_cast<double>(i));
  return std::sqrt(2.0 * std::numbers::pi) * std::pow(t, xm + 0.5) * std::exp(-t) * a;
}

double gauss_2f1_series(double a, double b, double c, double z) {
  if (is_nonpositive_integer(c)) throw DomainError("2F1: c is a nonpositive integer");
  if (!(std::abs(z) < 1.0)) throw DomainError("2F1 series requires |z| < 1");
  double term = 1.0;
  double sum = 1.0;
  for (long k = 0; k < kMaxSeriesTerms; ++k) {
    const double ratio = (a + k) * (b + k) / ((c + k) * (k + 1.0)) * z;
    term *= ratio;
    sum += term;
    if (term == 0.0) return sum;
    // Once the ratio has settled below one the remaining tail is bounded by
    // |term| / (1 - |ratio|).
    const double r = std::abs(ratio);
    if (r < 1.0 && std::abs(term) < kSeriesTol * std::abs(sum) * (1.0 - r)) return sum;
  }
  throw ConvergenceError("2F1 series hit the term cap", std::abs(term / sum));
}

double gauss_2f1(double a, double b, double c, double z) {
  if (is_nonpositive_integer(c)) throw DomainError("2F1: c is a nonpositive integer");
  if (z > 0.0) throw DomainError("2F1 is only provided for z <= 0");
  if (z == 0.0 || a == 0.0 || b == 0.0) return 1.0;
  const double ba = b - a;
  if (z < kInverseSwitch && std::floor(ba) != ba) return gauss_2f1_inverse(a, b, c, z);
  const double w = z / (z - 1.0);
  return std::pow(1.0 - z, -a) * gauss_2f1_series(a, c - b, c, w);
}

double gauss_2f1_pfaff_b(double a, double b, double c, double z) {
  if (is_nonpositive_integer(c)) throw DomainError("2F1: c is a nonpositive integer");
  if (z > 0.0) throw DomainError("2F1 is only provided for z <= 0");
  if (z == 0.0 || a == 0.0 || b == 0.0) return 1.0;
  const double w = z / (z - 1.0);
  return std::pow(1.0 - z, -b) * gauss_2f1_series(c - a, b, c, w);
}

double laguerre_eval(int n, double x) {
  check_degree(n);
  return laguerre_unchecked(n, x);
}

std::vector<double> laguerre_all(int n, double x) {
  check_degree(n);
  std::vector<double> out(static_cast<std::size_t>(n) + 1);
  out[0] = 1.0;
  if (n >= 1) out[1] = 1.0 - x;
  for (int k = 1; k < n; ++k)
    out[k + 1] = ((2.0 * k + 1.0 - x) * out[k] - k * out[k - 1]) / (k + 1.0);
  return out;
}

double laguerre_tail(int n, double y) {
  check_degree(n);
  if (y < 0.0) throw DomainError("laguerre_tail requires y >= 0");
  if (n == 0) return std::exp(-y);
  return std::exp(-y) * (laguerre_unchecked(n, y) - laguerre_unchecked(n - 1, y));
}

double laguerre_integral(int n, double y) {
  check_degree(n);
  return laguerre_unchecked(n, y) - laguerre_unchecked(n + 1, y);
}

QuadratureRule gauss_laguerre_rule(int m) {
  if (m < 1 || m > kMaxLaguerreDegree)
    throw DomainError("gauss_laguerre_rule: order must lie in [1, 64]");
  QuadratureRule rule;
  rule.nodes.resize(static_cast<std::size_t>(m));
  rule.weights.resize(static_cast<std::size_t>(m));
  const double md = m;
  double z = 0.0;
  for (int i = 0; i < m; ++i) {
    // Initial guesses from the asymptotic node distribution.
    if (i == 0) {
      z = 3.0 / (1.0 + 2.4 * md);
    } else if (i == 1) {
      z += 15.0 / (1.0 + 2.5 * md);
    } else {
      const double ai = i - 1;
      z += (1.0 + 2.55 * ai) / (1.9 * ai) * (z - rule.nodes[static_cast<std::size_t>(i) - 2]);
    }
    double p1 = 0.0, p2 = 0.0, pp = 0.0;
    bool converged = false;
    double step = 0.0;
    for (int it = 0; it < 100; ++it) {
      p1 = 1.0;
      p2 = 0.0;
      for (int j = 1; j <= m; ++j) {
        const double p3 = p2;
        p2 = p1;
        p1 = ((2.0 * j - 1.0 - z) * p2 - (j - 1.0) * p3) / j;
      }
      pp = (md * p1 - md * p2) / z;
      const double z1 = z;
      z = z1 - p1 / pp;
      step = std::abs(z - z1);
      if (step <= 1e-14 * std::max(1.0, std::abs(z))) {
        converged = true;
        break;
      }
    }
    if (!converged) throw ConvergenceError("Gauss-Laguerre Newton iteration", step);
    // Recompute p2 = L_{m-1}(z) and the derivative at the converged node.
    p1 = 1.0;
    p2 = 0.0;
    for (int j = 1; j <= m; ++j) {
      const double p3 = p2;
      p2 = p1;
      p1 = ((2.0 * j - 1.0 - z) * p2 - (j - 1.0) * p3) / j;
    }
    pp = (md * p1 - md * p2) / z;
    rule.nodes[static_cast<std::size_t>(i)] = z;
    rule.weights[static_cast<std::size_t>(i)] = -1.0 / (pp * md * p2);
  }
  return rule;
}

}  // namespace volterra::specfun
