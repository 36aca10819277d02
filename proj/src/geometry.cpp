#include "kansa/geometry.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <ostream>
#include <string>
#include <vector>

#include "kansa/errors.hpp"

namespace kansa {

Domain Domain::symmetric_box(int d) {
  return box(Eigen::VectorXd::Constant(d, -1.0), Eigen::VectorXd::Constant(d, 1.0));
}

Domain Domain::box(Eigen::VectorXd lower, Eigen::VectorXd upper) {
  Domain domain{std::move(lower), std::move(upper)};
  domain.validate();
  return domain;
}

void Domain::validate() const {
  if (lower.size() == 0 || lower.size() != upper.size()) {
    throw ParameterError("domain: lower/upper must be non-empty and of equal dimension");
  }
  for (Eigen::Index i = 0; i < lower.size(); ++i) {
    if (!(lower[i] < upper[i])) throw ParameterError("domain: need lower < upper on every axis");
  }
}

bool Domain::contains(const Eigen::Ref<const Eigen::VectorXd>& p, double tol) const {
  return ((p.array() >= lower.array() - tol) && (p.array() <= upper.array() + tol)).all();
}

double Domain::boundary_distance(const Eigen::Ref<const Eigen::VectorXd>& p) const {
  return std::min((p - lower).minCoeff(), (upper - p).minCoeff());
}

const char* to_string(Location location) {
  switch (location) {
    case Location::interior: return "interior";
    case Location::boundary: return "boundary";
    case Location::mixed: return "mixed";
  }
  return "unknown";
}

namespace {

// Visits every multi-index of an n^d tensor grid in lexicographic order
// (last axis fastest).
template <class Visit>
void for_each_grid_index(int n, int d, Visit&& visit) {
  std::vector<int> index(d, 0);
  while (true) {
    visit(index);
    int axis = d - 1;
    while (axis >= 0 && ++index[axis] == n) {
      index[axis] = 0;
      --axis;
    }
    if (axis < 0) return;
  }
}

double grid_coordinate(const Domain& domain, int axis, int i, int n) {
  const double frac = static_cast<double>(i) / static_cast<double>(n - 1);
  return domain.lower[axis] + (domain.upper[axis] - domain.lower[axis]) * frac;
}

bool on_face(const std::vector<int>& index, int n) {
  return std::any_of(index.begin(), index.end(), [n](int i) { return i == 0 || i == n - 1; });
}

PointSet make_set(std::vector<double>&& flat, int d, Location location, const Domain& domain) {
  PointSet set;
  set.location = location;
  set.domain = domain;
  const auto n = static_cast<Eigen::Index>(flat.size() / static_cast<std::size_t>(d));
  set.points = Eigen::Map<Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>(
      flat.data(), n, d);
  return set;
}

void check_grid(const Domain& domain, int n_per_side) {
  domain.validate();
  if (n_per_side < 2) {
    throw ParameterError("regular_grid: n_per_side must be >= 2, got " + std::to_string(n_per_side));
  }
}

}  // namespace

std::pair<PointSet, PointSet> regular_grid(const Domain& domain, int n_per_side) {
  check_grid(domain, n_per_side);
  const int d = domain.dimension();
  std::vector<double> interior;
  std::vector<double> boundary;
  for_each_grid_index(n_per_side, d, [&](const std::vector<int>& index) {
    auto& target = on_face(index, n_per_side) ? boundary : interior;
    for (int axis = 0; axis < d; ++axis) {
      target.push_back(grid_coordinate(domain, axis, index[axis], n_per_side));
    }
  });
  return {make_set(std::move(interior), d, Location::interior, domain),
          make_set(std::move(boundary), d, Location::boundary, domain)};
}

PointSet boundary_grid(const Domain& domain, int n_per_side) {
  return regular_grid(domain, n_per_side).second;
}

int refinement_from_delta(double delta, int allowed_max) {
  if (delta > 0.0) {
    const double inverse = 1.0 / delta;
    const long rounded = std::lround(inverse);
    if (rounded >= 1 && rounded <= allowed_max && std::abs(inverse - rounded) < 1e-9) {
      return static_cast<int>(rounded);
    }
  }
  throw ParameterError("refinement factor " + std::to_string(delta) + " is not 1/k for k <= " +
                       std::to_string(allowed_max));
}

std::pair<PointSet, PointSet> refined_collocation(const Domain& domain, int z_grid_n,
                                                  int interior_refinement,
                                                  int boundary_refinement) {
  if (interior_refinement < 1 || interior_refinement > 3) {
    throw ParameterError("refined_collocation: delta_i must be 1, 1/2 or 1/3");
  }
  if (boundary_refinement < 1 || boundary_refinement > 2) {
    throw ParameterError("refined_collocation: delta_b must be 1 or 1/2");
  }
  check_grid(domain, z_grid_n);
  PointSet x = regular_grid(domain, (z_grid_n - 1) * interior_refinement + 1).first;
  PointSet y = boundary_grid(domain, (z_grid_n - 1) * boundary_refinement + 1);
  return {std::move(x), std::move(y)};
}

double radical_inverse(std::uint64_t index, int base) {
  double result = 0.0;
  double scale = 1.0 / base;
  while (index > 0) {
    result += static_cast<double>(index % static_cast<std::uint64_t>(base)) * scale;
    index /= static_cast<std::uint64_t>(base);
    scale /= base;
  }
  return result;
}

PointSet halton_points(const Domain& domain, int n, int d) {
  static constexpr std::array<int, 6> kPrimes{2, 3, 5, 7, 11, 13};
  domain.validate();
  if (d < 1 || d > static_cast<int>(kPrimes.size())) {
    throw ParameterError("halton_points: dimension must be in [1, 6]");
  }
  if (d != domain.dimension()) throw ParameterError("halton_points: dimension mismatch with domain");
  if (n < 0) throw ParameterError("halton_points: n must be non-negative");
  PointSet set;
  set.location = Location::interior;
  set.domain = domain;
  set.points.resize(n, d);
  for (int i = 0; i < n; ++i) {
    for (int axis = 0; axis < d; ++axis) {
      const double lo = domain.lower[axis];
      const double width = domain.upper[axis] - lo;
      double c = lo + width * radical_inverse(static_cast<std::uint64_t>(i) + 1, kPrimes[axis]);
      if (c - lo < 1e-9) c = lo + 1e-6 * width;
      if (lo + width - c < 1e-9) c = lo + width - 1e-6 * width;
      set.points(i, axis) = c;
    }
  }
  return set;
}

DensityStats density_stats(const PointSet& set, int resolution) {
  const Eigen::Index n = set.size();
  if (n < 2) throw DegenerateSetError("density_stats: need at least 2 points");
  if (resolution < 2) throw ParameterError("density_stats: resolution must be >= 2");
  const Domain& domain = set.domain;
  const int d = set.dimension();
  if (domain.dimension() != d) throw ParameterError("density_stats: set/domain dimension mismatch");

  double min_sq = std::numeric_limits<double>::infinity();
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = i + 1; j < n; ++j) {
      min_sq = std::min(min_sq, (set.points.row(i) - set.points.row(j)).squaredNorm());
    }
  }

  const bool faces_only = set.location == Location::boundary;
  Eigen::RowVectorXd probe(d);
  double fill_sq = 0.0;
  for_each_grid_index(resolution, d, [&](const std::vector<int>& index) {
    if (faces_only && !on_face(index, resolution)) return;
    for (int axis = 0; axis < d; ++axis) probe[axis] = grid_coordinate(domain, axis, index[axis], resolution);
    const double nearest = (set.points.rowwise() - probe).rowwise().squaredNorm().minCoeff();
    fill_sq = std::max(fill_sq, nearest);
  });

  DensityStats stats;
  stats.q = 0.5 * std::sqrt(min_sq);
  stats.h = std::sqrt(fill_sq);
  stats.rho = stats.q > 0.0 ? stats.h / stats.q : std::numeric_limits<double>::infinity();
  return stats;
}

void write_points_csv(std::ostream& out, const PointSet& set) {
  const int d = set.dimension();
  for (int axis = 0; axis < d; ++axis) out << (axis ? "," : "") << 'x' << axis;
  out << '\n';
  const auto old_precision = out.precision(17);
  for (Eigen::Index i = 0; i < set.size(); ++i) {
    for (int axis = 0; axis < d; ++axis) out << (axis ? "," : "") << set.points(i, axis);
    out << '\n';
  }
  out.precision(old_precision);
}

}  // namespace kansa
