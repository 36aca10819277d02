#pragma once

// Radial kernels Phi(x - z) with exact second-order derivative jets.

#include <string>

#include <Eigen/Dense>

#include "kansa/jet.hpp"

namespace kansa {

enum class KernelFamily { matern_sobolev, gaussian, multiquadric };

const char* to_string(KernelFamily family);
KernelFamily kernel_family_from_string(const std::string& name);

/// Kernel descriptor.
///
/// MaternSobolev: Phi(x) = |x|^nu K_nu(|x|) with nu = m - d/2 (unnormalized);
/// reproduces H^m(R^d). Second derivatives need nu >= 2.
/// Gaussian:      Phi(x) = exp(-eps^2 |x|^2).
/// Multiquadric:  Phi(x) = sqrt(1 + eps^2 |x|^2), no polynomial augmentation.
struct Kernel {
  KernelFamily family = KernelFamily::matern_sobolev;
  int m = 4;
  int d = 2;
  double epsilon = 1.0;

  static Kernel matern_sobolev(int m, int d);
  static Kernel gaussian(int d, double epsilon = 1.0);
  static Kernel multiquadric(int d, double epsilon = 1.0);

  /// Matern order m - d/2 (meaningless for other families).
  double nu() const { return m - 0.5 * d; }

  /// Throws ParameterError when the descriptor is unusable for jets.
  void validate() const;

  std::string describe() const;
};

/// Radial form of the 2-jet at offset delta = x - z, r = |delta|:
///   value    = Phi
///   gradient = slope * delta
///   hessian  = diag * I + outer * delta delta^T
struct RadialJet {
  double value = 0.0;
  double slope = 0.0;
  double diag = 0.0;
  double outer = 0.0;
};

/// Radial jet at distance r >= 0. Does not validate the kernel.
RadialJet radial_jet(const Kernel& kernel, double r);

using KernelJet = Jet2;

/// Value, gradient and Hessian of x -> Phi(x - z).
KernelJet kernel_jet(const Kernel& kernel, const Eigen::Ref<const Eigen::VectorXd>& x,
                     const Eigen::Ref<const Eigen::VectorXd>& z);

/// Phi(x - z) only.
double kernel_value(const Kernel& kernel, const Eigen::Ref<const Eigen::VectorXd>& x,
                    const Eigen::Ref<const Eigen::VectorXd>& z);

double trace_laplacian(const KernelJet& jet);

}  // namespace kansa
