#pragma once

// Second-order forward-mode automatic differentiation: each number carries
// its value, gradient and (symmetric) Hessian with respect to D seeds.

#include <array>
#include <cmath>

#include "kansa/jet.hpp"

namespace kansa {

template <int D>
class HyperDual {
 public:
  double v = 0.0;
  std::array<double, D> g{};
  std::array<double, D * D> h{};

  HyperDual() = default;
  HyperDual(double value) : v(value) {}  // NOLINT: constants promote implicitly

  /// Independent variable number `axis` with the given value.
  static HyperDual variable(double value, int axis) {
    HyperDual x(value);
    x.g[axis] = 1.0;
    return x;
  }

  double hess(int i, int j) const { return h[i * D + j]; }

  Jet2 to_jet() const {
    Jet2 jet{v, Eigen::VectorXd(D), Eigen::MatrixXd(D, D)};
    for (int i = 0; i < D; ++i) {
      jet.gradient[i] = g[i];
      for (int j = 0; j < D; ++j) jet.hessian(i, j) = h[i * D + j];
    }
    return jet;
  }

  /// f(this) given f, f', f'' at v.
  HyperDual chain(double f0, double f1, double f2) const {
    HyperDual r(f0);
    for (int i = 0; i < D; ++i) r.g[i] = f1 * g[i];
    for (int i = 0; i < D; ++i) {
      for (int j = 0; j < D; ++j) r.h[i * D + j] = f1 * h[i * D + j] + f2 * g[i] * g[j];
    }
    return r;
  }

  HyperDual operator-() const { return chain(-v, -1.0, 0.0); }

  HyperDual& operator+=(const HyperDual& o) {
    v += o.v;
    for (int i = 0; i < D; ++i) g[i] += o.g[i];
    for (int k = 0; k < D * D; ++k) h[k] += o.h[k];
    return *this;
  }
  HyperDual& operator-=(const HyperDual& o) {
    v -= o.v;
    for (int i = 0; i < D; ++i) g[i] -= o.g[i];
    for (int k = 0; k < D * D; ++k) h[k] -= o.h[k];
    return *this;
  }
  HyperDual& operator*=(const HyperDual& o) {
    HyperDual r(v * o.v);
    for (int i = 0; i < D; ++i) r.g[i] = g[i] * o.v + v * o.g[i];
    for (int i = 0; i < D; ++i) {
      for (int j = 0; j < D; ++j) {
        const int k = i * D + j;
        r.h[k] = h[k] * o.v + g[i] * o.g[j] + o.g[i] * g[j] + v * o.h[k];
      }
    }
    return *this = r;
  }
  HyperDual& operator/=(const HyperDual& o) {
    const double inv = 1.0 / o.v;
    return *this *= o.chain(inv, -inv * inv, 2.0 * inv * inv * inv);
  }

  friend HyperDual operator+(HyperDual a, const HyperDual& b) { return a += b; }
  friend HyperDual operator-(HyperDual a, const HyperDual& b) { return a -= b; }
  friend HyperDual operator*(HyperDual a, const HyperDual& b) { return a *= b; }
  friend HyperDual operator/(HyperDual a, const HyperDual& b) { return a /= b; }
};

template <int D>
HyperDual<D> exp(const HyperDual<D>& a) {
  const double e = std::exp(a.v);
  return a.chain(e, e, e);
}

template <int D>
HyperDual<D> sin(const HyperDual<D>& a) {
  const double s = std::sin(a.v);
  return a.chain(s, std::cos(a.v), -s);
}

template <int D>
HyperDual<D> cos(const HyperDual<D>& a) {
  const double c = std::cos(a.v);
  return a.chain(c, -std::sin(a.v), -c);
}

template <int D>
HyperDual<D> sqrt(const HyperDual<D>& a) {
  const double s = std::sqrt(a.v);
  return a.chain(s, 0.5 / s, -0.25 / (s * a.v));
}

/// a^p for a real exponent; integer exponents are exact at a <= 0.
template <int D>
HyperDual<D> pow(const HyperDual<D>& a, double p) {
  if (p == 0.0) return HyperDual<D>(1.0);
  const double f0 = std::pow(a.v, p);
  const double f1 = p * std::pow(a.v, p - 1.0);
  const double f2 = p == 1.0 ? 0.0 : p * (p - 1.0) * std::pow(a.v, p - 2.0);
  return a.chain(f0, f1, f2);
}

}  // namespace kansa
