#include <doctest.h>

#include <cmath>
#include <numbers>

#include "volterra/error.hpp"
#include "volterra/specfun.hpp"

using namespace volterra;
using namespace volterra::specfun;

namespace {

bool rel_close(double x, double ref, double tol) { return std::abs(x - ref) <= tol * std::abs(ref); }

}  // namespace

TEST_CASE("gamma function") {
  CHECK(rel_close(gamma_fn(0.1), 9.5135076986687312858, 1e-13));
  CHECK(rel_close(gamma_fn(0.5), std::sqrt(std::numbers::pi), 1e-14));
  CHECK(rel_close(gamma_fn(5.0), 24.0, 1e-14));
  CHECK(rel_close(gamma_fn(3.7), 4.1706517837966040301, 1e-13));
}

TEST_CASE("2F1 against mpmath values") {
  CHECK(rel_close(gauss_2f1(0.3, 0.7, 1.9, -3.5), 0.81012812582055022046, 1e-13));
  CHECK(rel_close(gauss_2f1(1.5, -0.5, 2.5, -49.0), 5.3545253712044996884, 1e-12));
  CHECK(rel_close(gauss_2f1(0.25, -0.25, 1.25, -1e6), 15.832113533064349825, 1e-12));
  CHECK(gauss_2f1(0.3, 0.7, 1.9, 0.0) == doctest::Approx(1.0));
}

TEST_CASE("2F1 on the fBm kernel triples across the inverse switch") {
  const double zs[] = {-19.9, -20.1, -1e3, -1e9};
  const double h25[] = {1.5010512046328398, 1.5036392386860564, 3.4577254006069225, 106.53421719510099};
  const double h75[] = {1.3532243440767637, 1.3551905669002391, 2.9275725611487189, 88.917656708017162};
  for (int k = 0; k < 4; ++k) {
    CHECK(rel_close(gauss_2f1(0.25, -0.25, 0.75, zs[k]), h25[k], 1e-12));
    CHECK(rel_close(gauss_2f1(-0.25, 0.25, 1.25, zs[k]), h75[k], 1e-12));
  }
}

TEST_CASE("2F1 Pfaff branches agree") {
  for (double z = -50.0; z <= 0.0; z += 0.5) {
    const double a = gauss_2f1(0.4, -0.3, 1.2, z);
    const double b = gauss_2f1_pfaff_b(0.4, -0.3, 1.2, z);
    CHECK(std::abs(a - b) <= 1e-12 * std::max(1.0, std::abs(a)));
  }
}

TEST_CASE("2F1 raw series and domain errors") {
  CHECK(rel_close(gauss_2f1_series(0.3, 0.7, 1.9, 0.5), 1.0699323854033741106, 1e-13));
  CHECK_THROWS_AS(gauss_2f1(0.3, 0.7, -2.0, -1.0), DomainError);
  CHECK_THROWS_AS(gauss_2f1(0.3, 0.7, 1.9, 0.5), DomainError);
}

TEST_CASE("Laguerre polynomials") {
  CHECK(rel_close(laguerre_eval(20, 10.0), -11.961333867812118632, 1e-12));
  CHECK(rel_close(laguerre_eval(15, 7.5), 0.6679573144805708676, 1e-12));
  CHECK(rel_close(laguerre_eval(20, 5.0), 2.0202257444769135763, 1e-12));
  CHECK(rel_close(laguerre_eval(7, 2.5), 0.10795665922619047619, 1e-12));
  CHECK(laguerre_eval(0, 3.0) == 1.0);
  CHECK(laguerre_eval(1, 3.0) == doctest::Approx(-2.0));
  const auto all = laguerre_all(20, 10.0);
  REQUIRE(all.size() == 21);
  CHECK(all[20] == laguerre_eval(20, 10.0));
}

TEST_CASE("Laguerre tails and antiderivatives") {
  CHECK(rel_close(laguerre_tail(3, 1.5), 0.041836905027830592925, 1e-12));
  CHECK(rel_close(laguerre_tail(10, 0.2), -0.051354895542215349897, 1e-12));
  CHECK(laguerre_tail(0, 0.0) == doctest::Approx(1.0));
  CHECK(laguerre_tail(4, 0.0) == doctest::Approx(0.0));
  CHECK(rel_close(laguerre_integral(4, 3.0), 0.525, 1e-12));
}

TEST_CASE("Gauss-Laguerre rule") {
  const auto rule = gauss_laguerre_rule(20);
  CHECK(rule.order() == 20);
  // int_0^inf x^k e^{-x} dx = k! exactly for k < 40.
  CHECK(rel_close(rule.integrate([](double x) { return std::pow(x, 10); }), 3628800.0, 1e-12));
  CHECK(rel_close(rule.integrate([](double) { return 1.0; }), 1.0, 1e-13));
  CHECK_THROWS(gauss_laguerre_rule(0));
  CHECK_THROWS(gauss_laguerre_rule(65));
}

TEST_CASE("specified examples") {
  CHECK(gamma_fn(1.0) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(gauss_2f1(0.25, -0.25, 1.25, 0.0) == 1.0);
  CHECK(gauss_2f1(0.0, 0.7, 1.9, -7.0) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(gauss_2f1(1.0, 1.0, 2.0, -1.0) == doctest::Approx(0.6931471805599453).epsilon(1e-14));
  CHECK(laguerre_eval(0, 3.7) == 1.0);
  CHECK(std::abs(laguerre_eval(1, 1.0)) < 1e-15);
  CHECK(laguerre_eval(2, 1.0) == doctest::Approx(-0.5).epsilon(1e-15));
  CHECK(laguerre_tail(0, 0.0) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(std::abs(laguerre_tail(1, 0.0)) < 1e-15);
  CHECK(laguerre_tail(1, 1.0) == doctest::Approx(-0.36787944117144233).epsilon(1e-14));
  const auto r1 = gauss_laguerre_rule(1);
  CHECK(r1.nodes[0] == doctest::Approx(1.0));
  CHECK(r1.weights[0] == doctest::Approx(1.0));
  CHECK(std::abs(gauss_laguerre_rule(2).integrate([](double x) { return x * x; }) - 2.0) < 1e-12);
  const double orth = gauss_laguerre_rule(8).integrate([](double x) { return laguerre_eval(3, x) * laguerre_eval(4, x); });
  CHECK(std::abs(orth) < 1e-12);
}
