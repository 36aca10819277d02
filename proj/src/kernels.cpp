#include "kansa/kernels.hpp"

#include <cmath>
#include <sstream>

#include "kansa/errors.hpp"
#include "kansa/special_functions.hpp"

namespace kansa {

const char* to_string(KernelFamily family) {
  switch (family) {
    case KernelFamily::matern_sobolev: return "matern";
    case KernelFamily::gaussian: return "gaussian";
    case KernelFamily::multiquadric: return "multiquadric";
  }
  return "unknown";
}

KernelFamily kernel_family_from_string(const std::string& name) {
  if (name == "matern" || name == "matern_sobolev") return KernelFamily::matern_sobolev;
  if (name == "gaussian" || name == "ga") return KernelFamily::gaussian;
  if (name == "multiquadric" || name == "mq") return KernelFamily::multiquadric;
  throw ParameterError("unknown kernel family '" + name + "'");
}

Kernel Kernel::matern_sobolev(int m, int d) {
  Kernel k{KernelFamily::matern_sobolev, m, d, 1.0};
  k.validate();
  return k;
}

Kernel Kernel::gaussian(int d, double epsilon) {
  Kernel k{KernelFamily::gaussian, 0, d, epsilon};
  k.validate();
  return k;
}

Kernel Kernel::multiquadric(int d, double epsilon) {
  Kernel k{KernelFamily::multiquadric, 0, d, epsilon};
  k.validate();
  return k;
}

void Kernel::validate() const {
  if (d < 1) throw ParameterError("kernel: dimension must be >= 1");
  if (family == KernelFamily::matern_sobolev) {
    if (nu() < 2.0) {
      std::ostringstream os;
      os << "kernel: Matern order nu = m - d/2 = " << nu()
         << " < 2; second derivatives are undefined (m=" << m << ", d=" << d << ")";
      throw ParameterError(os.str());
    }
    if (nu() > kMaxBesselOrder) throw ParameterError("kernel: Matern order too large");
  } else if (!(epsilon > 0.0) || !std::isfinite(epsilon)) {
    throw ParameterError("kernel: shape parameter must be positive");
  }
}

std::string Kernel::describe() const {
  std::ostringstream os;
  os << to_string(family);
  if (family == KernelFamily::matern_sobolev) {
    os << "(m=" << m << ",d=" << d << ")";
  } else {
    os << "(eps=" << epsilon << ",d=" << d << ")";
  }
  return os.str();
}

RadialJet radial_jet(const Kernel& kernel, double r) {
  RadialJet jet;
  switch (kernel.family) {
    case KernelFamily::matern_sobolev: {
      // d/dr phi_nu = -r phi_{nu-1}, so grad = -phi_{nu-1} delta and
      // hess = -phi_{nu-1} I + phi_{nu-2} delta delta^T.
      const auto phi = matern_profile_triple(kernel.nu(), r);
      jet.value = phi[0];
      jet.slope = -phi[1];
      jet.diag = -phi[1];
      // delta delta^T vanishes at the center while phi_0 diverges there.
      jet.outer = r == 0.0 ? 0.0 : phi[2];
      break;
    }
    case KernelFamily::gaussian: {
      const double e2 = kernel.epsilon * kernel.epsilon;
      const double g = std::exp(-e2 * r * r);
      jet.value = g;
      jet.slope = -2.0 * e2 * g;
      jet.diag = jet.slope;
      jet.outer = 4.0 * e2 * e2 * g;
      break;
    }
    case KernelFamily::multiquadric: {
      const double e2 = kernel.epsilon * kernel.epsilon;
      const double s = std::sqrt(1.0 + e2 * r * r);
      jet.value = s;
      jet.slope = e2 / s;
      jet.diag = jet.slope;
      jet.outer = -e2 * e2 / (s * s * s);
      break;
    }
  }
  return jet;
}

KernelJet kernel_jet(const Kernel& kernel, const Eigen::Ref<const Eigen::VectorXd>& x,
                     const Eigen::Ref<const Eigen::VectorXd>& z) {
  kernel.validate();
  if (x.size() != kernel.d || z.size() != kernel.d) {
    throw ParameterError("kernel_jet: point dimension does not match kernel dimension");
  }
  const Eigen::VectorXd delta = x - z;
  const RadialJet radial = radial_jet(kernel, delta.norm());
  KernelJet jet;
  jet.value = radial.value;
  jet.gradient = radial.slope * delta;
  jet.hessian = radial.outer * (delta * delta.transpose());
  jet.hessian.diagonal().array() += radial.diag;
  return jet;
}

double kernel_value(const Kernel& kernel, const Eigen::Ref<const Eigen::VectorXd>& x,
                    const Eigen::Ref<const Eigen::VectorXd>& z) {
  const double r = (x - z).norm();
  switch (kernel.family) {
    case KernelFamily::matern_sobolev: return matern_profile(kernel.nu(), r);
    case KernelFamily::gaussian: return std::exp(-kernel.epsilon * kernel.epsilon * r * r);
    case KernelFamily::multiquadric: return std::sqrt(1.0 + kernel.epsilon * kernel.epsilon * r * r);
  }
  return 0.0;
}

double trace_laplacian(const KernelJet& jet) { return jet.hessian.trace(); }

}  // namespace kansa
