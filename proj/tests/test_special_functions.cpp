#include <cmath>
#include <numbers>

#include <doctest.h>

#include "kansa/errors.hpp"
#include "kansa/special_functions.hpp"

using namespace kansa;

namespace {

struct OracleRow {
  double order, x, value;
};

const OracleRow kOracle[] = {
#include "oracles/bessel_k_table.inc"
};

double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }

}  // namespace

TEST_CASE("bessel_k matches closed forms and reference values") {
  CHECK(bessel_k(0.5, 1.0) == doctest::Approx(std::sqrt(std::numbers::pi / 2.0) * std::exp(-1.0)).epsilon(1e-14));
  CHECK(rel(bessel_k(0.0, 1.0), 0.42102443824070833) < 1e-13);
  CHECK(rel(bessel_k(1.0, 1.0), 0.60190723019723457) < 1e-13);
  const double k2 = bessel_k(2.0, 1.0);
  CHECK(rel(k2, bessel_k(0.0, 1.0) + 2.0 * bessel_k(1.0, 1.0)) < 1e-14);
}

TEST_CASE("bessel_k agrees with the arbitrary-precision table to 1e-12") {
  double worst = 0.0;
  for (const auto& row : kOracle) {
    const double err = rel(bessel_k(row.order, row.x), row.value);
    worst = std::max(worst, err);
    INFO("order=" << row.order << " x=" << row.x);
    CHECK(err <= 1e-12);
  }
  MESSAGE("worst relative error vs oracle: " << worst);
}

TEST_CASE("bessel_k recurrence holds on [0.01, 30]") {
  for (int nu = 1; nu < static_cast<int>(kMaxBesselOrder); ++nu) {
    for (double x = 0.01; x <= 30.0; x *= 1.37) {
      const double lhs = bessel_k(nu + 1, x);
      const double rhs = bessel_k(nu - 1, x) + (2.0 * nu / x) * bessel_k(nu, x);
      if (!std::isfinite(lhs)) continue;  // overflow of huge orders at tiny x
      INFO("nu=" << nu << " x=" << x);
      CHECK(rel(lhs, rhs) <= 1e-10);
    }
  }
}

TEST_CASE("bessel_k is positive and decreasing") {
  for (double nu : {0.0, 0.5, 1.0, 2.5, 3.0, 6.0}) {
    double prev = bessel_k(nu, 0.05);
    CHECK(prev > 0.0);
    for (double x = 0.1; x <= 60.0; x += 0.1) {
      const double v = bessel_k(nu, x);
      CHECK(v > 0.0);
      CHECK(v < prev);
      prev = v;
    }
  }
}

TEST_CASE("bessel_k reports method and underflow") {
  CHECK(bessel_k_evaluate(0.0, 1.0).method == BesselMethod::small_argument_series);
  CHECK(bessel_k_evaluate(3.0, 5.0).method == BesselMethod::continued_fraction);
  CHECK(bessel_k_evaluate(2.5, 5.0).method == BesselMethod::half_integer_closed_form);
  const auto far = bessel_k_evaluate(1.0, 800.0);
  CHECK(far.underflow);
  CHECK(far.value == 0.0);
  CHECK(far.method == BesselMethod::underflow);
}

TEST_CASE("bessel_k rejects bad input") {
  CHECK_THROWS_AS(bessel_k(1.0, 0.0), DomainError);
  CHECK_THROWS_AS(bessel_k(1.0, -2.0), DomainError);
  CHECK_THROWS_AS(bessel_k(0.3, 1.0), UnsupportedOrderError);
  CHECK_THROWS_AS(bessel_k(-1.0, 1.0), UnsupportedOrderError);
  CHECK_THROWS_AS(bessel_k(kMaxBesselOrder + 1.0, 1.0), UnsupportedOrderError);
}

TEST_CASE("matern_profile values and limits") {
  CHECK(matern_profile(1.0, 0.0) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(matern_profile(3.0, 0.0) == doctest::Approx(8.0).epsilon(1e-15));
  CHECK(matern_profile(0.5, 1.0) == doctest::Approx(0.4610685055).epsilon(1e-9));
  CHECK(matern_profile(2.5, 0.0) == doctest::Approx(std::pow(2.0, 1.5) * std::tgamma(2.5)).epsilon(1e-14));
  CHECK_THROWS_AS(matern_profile(0.0, 0.0), SingularProfileError);
  CHECK_THROWS_AS(matern_profile(1.0, -0.1), DomainError);
  // continuity at the origin
  CHECK(matern_profile(3.0, 1e-6) == doctest::Approx(8.0).epsilon(1e-9));
  for (double r : {0.3, 1.0, 4.0}) {
    CHECK(matern_profile(2.0, r) == doctest::Approx(r * r * bessel_k(2.0, r)).epsilon(1e-15));
  }
}

TEST_CASE("matern_profile derivative identity by finite differences") {
  const double step = 1e-6;
  for (int nu = 1; nu <= 5; ++nu) {
    for (double r = 0.1; r <= 10.0; r += 0.35) {
      const double fd = (matern_profile(nu, r + step) - matern_profile(nu, r - step)) / (2.0 * step);
      const double exact = -r * matern_profile(nu - 1, r);
      INFO("nu=" << nu << " r=" << r);
      CHECK(std::abs(fd - exact) <= 1e-5 * std::max(std::abs(exact), 1e-3));
    }
  }
}

TEST_CASE("matern_profile_triple") {
  const auto t = matern_profile_triple(3.0, 1.2);
  CHECK(t[0] == doctest::Approx(matern_profile(3.0, 1.2)).epsilon(1e-15));
  CHECK(t[1] == doctest::Approx(matern_profile(2.0, 1.2)).epsilon(1e-15));
  CHECK(t[2] == doctest::Approx(matern_profile(1.0, 1.2)).epsilon(1e-15));
  const auto z = matern_profile_triple(3.0, 0.0);
  CHECK(z[0] == doctest::Approx(8.0));
  CHECK(z[1] == doctest::Approx(2.0));
}
