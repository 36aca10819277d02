#include "kansa/special_functions.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "kansa/errors.hpp"

namespace kansa {
namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();
constexpr int kMaxIterations = 10000;

// Returns 2*order after validating it.
int checked_twice_order(double order) {
  const double twice = 2.0 * order;
  if (!(order >= 0.0) || order > kMaxBesselOrder || twice != std::floor(twice)) {
    throw UnsupportedOrderError("bessel_k: unsupported order " + std::to_string(order) +
                                " (need a multiple of 1/2 in [0, " +
                                std::to_string(kMaxBesselOrder) + "])");
  }
  return static_cast<int>(twice);
}

void check_argument(double x) {
  if (!(x > 0.0)) {
    throw DomainError("bessel_k: argument must be positive, got " + std::to_string(x));
  }
}

struct Pair {
  double k0;
  double k1;
};

// K_0, K_1 from the ascending series (A&S 9.6.13 and 9.6.11), x <= 2.
Pair k01_series(double x) {
  const double t = 0.25 * x * x;
  const double log_half_x = std::log(0.5 * x);
  const double gamma = std::numbers::egamma;

  double term0 = 1.0;       // t^k / (k!)^2
  double term1 = 1.0;       // t^k / (k! (k+1)!)
  double harmonic = 0.0;    // H_k
  double i0 = 1.0;
  double i1_sum = 1.0;
  double k0_sum = 0.0;
  double k1_sum = -2.0 * gamma + 1.0;  // psi(1) + psi(2) = -2 gamma + 1
  for (int k = 1; k < kMaxIterations; ++k) {
    term0 *= t / (static_cast<double>(k) * k);
    term1 *= t / (static_cast<double>(k) * (k + 1));
    harmonic += 1.0 / k;
    const double harmonic_next = harmonic + 1.0 / (k + 1);
    i0 += term0;
    i1_sum += term1;
    k0_sum += harmonic * term0;
    const double inc = (-2.0 * gamma + harmonic + harmonic_next) * term1;
    k1_sum += inc;
    if (term0 < kEps * i0 && std::abs(inc) < kEps * std::abs(k1_sum) &&
        harmonic * term0 < kEps * std::abs(k0_sum)) {
      break;
    }
  }
  const double i1 = 0.5 * x * i1_sum;
  const double k0 = -(log_half_x + gamma) * i0 + k0_sum;
  const double k1 = 1.0 / x + log_half_x * i1 - 0.25 * x * k1_sum;
  return {k0, k1};
}

// K_0, K_1 via Steed's algorithm for the continued fraction CF2 (Temme's
// normalization), x > 2. Returns values scaled by e^{x}.
Pair k01_continued_fraction_scaled(double x) {
  const double a1 = 0.25;  // 1/4 - mu^2 with mu = 0
  double b = 2.0 * (1.0 + x);
  double d = 1.0 / b;
  double h = d;
  double delh = d;
  double q1 = 0.0;
  double q2 = 1.0;
  double q = a1;
  double c = a1;
  double a = -a1;
  double s = 1.0 + q * delh;
  for (int i = 1; i < kMaxIterations; ++i) {
    a -= 2.0 * i;
    c = -a * c / (i + 1.0);
    const double qnew = (q1 - b * q2) / a;
    q1 = q2;
    q2 = qnew;
    q += c * qnew;
    b += 2.0;
    d = 1.0 / (b + a * d);
    delh = (b * d - 1.0) * delh;
    h += delh;
    const double dels = q * delh;
    s += dels;
    if (std::abs(dels / s) < kEps) break;
  }
  h *= a1;
  const double k0 = std::sqrt(std::numbers::pi / (2.0 * x)) / s;
  const double k1 = k0 * (x + 0.5 - h) / x;
  return {k0, k1};
}

// Fills ladder[j] = K_{base + j}(x) for j = 0..top_index, base = 0 or 1/2.
BesselMethod fill_ladder(int twice_order, double x, double* ladder, int top_index) {
  const bool half = (twice_order % 2) != 0;
  const double base = half ? 0.5 : 0.0;
  BesselMethod method;
  double first;
  double second;
  double scale = 1.0;
  if (half) {
    method = BesselMethod::half_integer_closed_form;
    first = std::sqrt(std::numbers::pi / (2.0 * x)) * std::exp(-x);
    second = first * (1.0 + 1.0 / x);
  } else if (x <= 2.0) {
    method = BesselMethod::small_argument_series;
    const Pair p = k01_series(x);
    first = p.k0;
    second = p.k1;
  } else {
    method = BesselMethod::continued_fraction;
    const Pair p = k01_continued_fraction_scaled(x);
    first = p.k0;
    second = p.k1;
    scale = std::exp(-x);
  }
  ladder[0] = first;
  if (top_index >= 1) ladder[1] = second;
  for (int j = 1; j < top_index; ++j) {
    const double mu = base + j;
    ladder[j + 1] = ladder[j - 1] + (2.0 * mu / x) * ladder[j];
  }
  if (scale != 1.0) {
    for (int j = 0; j <= top_index; ++j) ladder[j] *= scale;
  }
  return method;
}

constexpr int kLadderCapacity = static_cast<int>(kMaxBesselOrder) + 2;

}  // namespace

const char* to_string(BesselMethod method) {
  switch (method) {
    case BesselMethod::small_argument_series: return "small-argument series";
    case BesselMethod::continued_fraction: return "continued fraction";
    case BesselMethod::half_integer_closed_form: return "half-integer closed form";
    case BesselMethod::underflow: return "underflow";
  }
  return "unknown";
}

BesselEvaluation bessel_k_evaluate(double order, double x) {
  const int twice_order = checked_twice_order(order);
  check_argument(x);
  BesselEvaluation result;
  result.order = order;
  result.argument = x;
  if (x > kBesselUnderflowArgument) {
    result.value = 0.0;
    result.method = BesselMethod::underflow;
    result.underflow = true;
    return result;
  }
  double ladder[kLadderCapacity];
  const int top = twice_order / 2;
  result.method = fill_ladder(twice_order, x, ladder, top);
  result.value = ladder[top];
  return result;
}

double bessel_k(double order, double x) { return bessel_k_evaluate(order, x).value; }

namespace {

double profile_at_origin(double nu) {
  return std::exp2(nu - 1.0) * std::tgamma(nu);
}

}  // namespace

double matern_profile(double nu, double r) {
  checked_twice_order(nu);
  if (!(r >= 0.0)) {
    throw DomainError("matern_profile: radius must be non-negative, got " + std::to_string(r));
  }
  if (r == 0.0) {
    if (nu == 0.0) {
      throw SingularProfileError("matern_profile: phi_0(0) is infinite (K_0 has a log singularity)");
    }
    return profile_at_origin(nu);
  }
  const double value = std::pow(r, nu) * bessel_k(nu, r);
  if (!std::isfinite(value) && nu > 0.0) return profile_at_origin(nu);
  return value;
}

std::array<double, 3> matern_profile_triple(double nu, double r) {
  const int twice_order = checked_twice_order(nu);
  if (nu < 2.0) {
    throw UnsupportedOrderError("matern_profile_triple: need nu >= 2, got " + std::to_string(nu));
  }
  if (!(r >= 0.0)) {
    throw DomainError("matern_profile_triple: radius must be non-negative");
  }
  std::array<double, 3> out{};
  if (r == 0.0) {
    for (int k = 0; k < 3; ++k) {
      const double mu = nu - k;
      out[k] = mu > 0.0 ? profile_at_origin(mu) : std::numeric_limits<double>::infinity();
    }
    return out;
  }
  if (r > kBesselUnderflowArgument) return out;
  double ladder[kLadderCapacity];
  const int top = twice_order / 2;
  fill_ladder(twice_order, r, ladder, top);
  double power = std::pow(r, nu - 2.0);
  out[2] = power * ladder[top - 2];
  power *= r;
  out[1] = power * ladder[top - 1];
  power *= r;
  out[0] = power * ladder[top];
  for (int k = 0; k < 3; ++k) {
    const double mu = nu - k;
    if (!std::isfinite(out[k]) && mu > 0.0) out[k] = profile_at_origin(mu);
  }
  return out;
}

}  // namespace kansa
