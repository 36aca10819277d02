#pragma once

// Point sets on axis-aligned boxes and their density statistics.

#include <cstdint>
#include <iosfwd>
#include <utility>

#include <Eigen/Dense>

namespace kansa {

/// Axis-aligned box [lower, upper].
struct Domain {
  Eigen::VectorXd lower;
  Eigen::VectorXd upper;

  /// [-1, 1]^d.
  static Domain symmetric_box(int d);
  static Domain box(Eigen::VectorXd lower, Eigen::VectorXd upper);

  int dimension() const { return static_cast<int>(lower.size()); }
  void validate() const;
  bool contains(const Eigen::Ref<const Eigen::VectorXd>& p, double tol = 0.0) const;
  /// Max-norm distance from p to the box boundary (p assumed inside).
  double boundary_distance(const Eigen::Ref<const Eigen::VectorXd>& p) const;
};

enum class Location { interior, boundary, mixed };

const char* to_string(Location location);

/// Points stored row-wise: points.row(i) is the i-th point.
struct PointSet {
  Eigen::MatrixXd points;
  Location location = Location::interior;
  Domain domain;

  Eigen::Index size() const { return points.rows(); }
  int dimension() const { return static_cast<int>(points.cols()); }
  Eigen::VectorXd point(Eigen::Index i) const { return points.row(i).transpose(); }
};

struct DensityStats {
  double h = 0.0;    // fill distance (probe-grid lower bound)
  double q = 0.0;    // separation distance, exact
  double rho = 0.0;  // mesh ratio h / q
};

/// Tensor grid with n_per_side nodes per axis, split into the strictly
/// interior nodes and the nodes on the box faces (corners included).
/// Node coordinates are lower + (upper - lower) * (i / (n - 1)), so grids
/// whose spacings divide each other share nodes bit for bit.
std::pair<PointSet, PointSet> regular_grid(const Domain& domain, int n_per_side);

/// Face nodes of the n_per_side tensor grid (4 (n - 1) points in 2D).
PointSet boundary_grid(const Domain& domain, int n_per_side);

/// Collocation sets refined from a z_grid_n trial grid: X is the interior of
/// the grid with spacing s_Z / interior_refinement, Y the boundary of the grid
/// with spacing s_Z / boundary_refinement. Refinements are the reciprocals
/// of delta_i in {1, 1/2, 1/3} and delta_b in {1, 1/2}.
std::pair<PointSet, PointSet> refined_collocation(const Domain& domain, int z_grid_n,
                                                  int interior_refinement,
                                                  int boundary_refinement);

/// Converts a refinement factor delta (1, 1/2 or 1/3) to its integer
/// reciprocal, throwing ParameterError for anything else in `allowed_max`.
int refinement_from_delta(double delta, int allowed_max);

/// Radical inverse of index in the given base (van der Corput).
double radical_inverse(std::uint64_t index, int base);

/// First n Halton points (indices 1..n, bases = first d primes) mapped into
/// the open box. Points within 1e-9 of a face are moved inward by
/// 1e-6 * (upper - lower).
PointSet halton_points(const Domain& domain, int n, int d);

/// q = half the minimum pairwise distance (exact); h = max over a probe grid
/// of `resolution` points per side of the distance to the nearest point.
/// Interior and mixed sets are probed over the whole box; boundary sets over
/// the box faces only. Throws DegenerateSetError for fewer than 2 points.
DensityStats density_stats(const PointSet& set, int resolution);

/// One point per row, coordinates comma-separated, with a header row
/// "x0,x1,...".
void write_points_csv(std::ostream& out, const PointSet& set);

}  // namespace kansa
