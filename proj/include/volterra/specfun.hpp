#pragma once

#include <cstddef>
#include <vector>

namespace volterra::specfun {

// Gauss-Laguerre rule for the weight e^{-x} on [0, inf).
struct QuadratureRule {
  std::vector<double> nodes;
  std::vector<double> weights;
  std::size_t order() const noexcept { return nodes.size(); }

  template <class F>
  double integrate(F&& f) const {
    double sum = 0.0;
    for (std::size_t k = 0; k < nodes.size(); ++k) sum += weights[k] * f(nodes[k]);
    return sum;
  }
};

// Gamma function for x > 0 (Lanczos, g = 7, nine coefficients).
double gamma_fn(double x);

// Gauss hypergeometric 2F1(a, b; c; z) for z <= 0.
//
// Uses the Pfaff transformation 2F1(a,b;c;z) = (1-z)^{-a} 2F1(a, c-b; c; z/(z-1))
// so the series argument lies in [0, 1). Throws DomainError when c is a
// nonpositive integer or z > 0, ConvergenceError when the series does not settle
// within the term cap.
double gauss_2f1(double a, double b, double c, double z);

// Same value through the other Pfaff branch, (1-z)^{-b} 2F1(c-a, b; c; z/(z-1)).
double gauss_2f1_pfaff_b(double a, double b, double c, double z);

// Raw hypergeometric series, valid for |z| < 1.
double gauss_2f1_series(double a, double b, double c, double z);

// Laguerre polynomial L_n(x) via (n+1)L_{n+1} = (2n+1-x)L_n - nL_{n-1}.
double laguerre_eval(int n, double x);

// All of L_0(x), ..., L_n(x).
std::vector<double> laguerre_all(int n, double x);

// zeta_n(y) = int_y^inf L_n(x) e^{-x} dx = e^{-y} (L_n(y) - L_{n-1}(y)).
double laguerre_tail(int n, double y);

// Antiderivative of L_n: int_0^y L_n(x) dx = L_n(y) - L_{n+1}(y).
double laguerre_integral(int n, double y);

// m-point Gauss-Laguerre rule, 1 <= m <= 64, Newton refinement to 1e-14.
QuadratureRule gauss_laguerre_rule(int m);

}  // namespace volterra::specfun
