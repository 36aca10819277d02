#pragma once

// Modified Bessel functions of the second kind K_nu for integer and
// half-integer orders, and the Matern profile phi_nu(r) = r^nu K_nu(r).

#include <array>

namespace kansa {

enum class BesselMethod {
  small_argument_series,     // power/log series for K_0, K_1 (x <= 2), then recurrence
  continued_fraction,        // Steed's CF2 for K_0, K_1 (x > 2), then recurrence
  half_integer_closed_form,  // sqrt(pi/2x) e^{-x} seed, then recurrence
  underflow,                 // x > kBesselUnderflowArgument, value reported as 0
};

const char* to_string(BesselMethod method);

/// Largest supported order. Orders must be non-negative multiples of 1/2.
inline constexpr double kMaxBesselOrder = 30.0;

/// Beyond this argument e^{-x} underflows; K_nu is reported as exactly 0.
inline constexpr double kBesselUnderflowArgument = 700.0;

struct BesselEvaluation {
  double order = 0.0;
  double argument = 0.0;
  double value = 0.0;
  BesselMethod method = BesselMethod::small_argument_series;
  bool underflow = false;
};

/// K_order(x) with the evaluation path that produced it.
/// Throws DomainError for x <= 0 (or NaN) and UnsupportedOrderError for orders
/// that are negative, not a multiple of 1/2, or above kMaxBesselOrder.
BesselEvaluation bessel_k_evaluate(double order, double x);

/// K_order(x); relative accuracy ~1e-14 on [1e-8, 50] for orders up to 6.
double bessel_k(double order, double x);

/// phi_nu(r) = r^nu K_nu(r), with phi_nu(0) = 2^{nu-1} Gamma(nu) for nu > 0.
/// Throws SingularProfileError for nu = 0, r = 0 and DomainError for r < 0.
double matern_profile(double nu, double r);

/// {phi_nu(r), phi_{nu-1}(r), phi_{nu-2}(r)} from a single Bessel ladder.
/// Requires nu >= 2. At r = 0 a zero-order entry is +infinity.
std::array<double, 3> matern_profile_triple(double nu, double r);

}  // namespace kansa
