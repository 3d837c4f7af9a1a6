#pragma once

#include <functional>
#include <memory>
#include <string>

#include "corrdesign/interval.hpp"
#include "corrdesign/linalg.hpp"

namespace corrdesign {

struct DensityDesign;

// Discrete probability measure: strictly increasing support with
// nonnegative weights summing to one. Every atom owns a cell of the line
// (by default the Voronoi cell, with the two end cells mirrored); cells are
// used when a singular kernel has to be averaged near an atom.
class Design {
 public:
  // Sorts the support, merges coinciding points, normalizes the weights.
  Design(const Vector& support, const Vector& weights);
  // Explicit cells: n + 1 increasing edges with edge_i <= x_i <= edge_(i+1).
  Design(const Vector& support, const Vector& weights, const Vector& cell_edges);

  static Design point_mass(double x);
  static Design equal_weights(const Vector& points);

  const Vector& support() const { return support_; }
  const Vector& weights() const { return weights_; }
  Index size() const { return support_.size(); }
  double min_gap() const;
  const Vector& cell_edges() const { return edges_; }
  bool explicit_cells() const { return explicit_cells_; }
  double cell_width(Index i) const { return edges_(i + 1) - edges_(i); }
  // Atom whose cell contains x, or -1.
  Index cell_of(double x) const;
  // Index of the atom equal to x, or -1.
  Index atom_at(double x) const;

  // Drops atoms with weight below `floor` and renormalizes.
  Design pruned(double floor) const;
  // Same support and cells with new weights (normalized). The result no
  // longer discretizes a density.
  Design with_weights(const Vector& weights) const;

  // The density this design discretizes, with every cell holding exactly its
  // atom's mass. Set by the density discretizations; null otherwise.
  const DensityDesign* density() const { return density_.get(); }
  Design with_density(const DensityDesign& dd) const;

 private:
  void set_voronoi_edges();
  Vector support_;
  Vector weights_;
  Vector edges_;
  bool explicit_cells_ = false;
  std::shared_ptr<const DensityDesign> density_;
};

// (1 - alpha) a + alpha b
Design mixture(const Design& a, const Design& b, double alpha);

// Absolutely continuous design on an interval.
struct DensityDesign {
  std::string name;
  Interval interval;
  std::function<double(double)> density;
  std::function<double(double)> cdf;
  std::function<double(double)> quantile;
  // Density written through the distances to the two interval ends; accurate
  // for densities that are singular at the ends.
  std::function<double(double d_lo, double d_hi)> density_from_ends;
  double parameter = 0.0;
};

DensityDesign uniform_density(Interval interval = {});
// 1 / (pi sqrt(1 - x^2)) on [-1, 1]
DensityDesign arcsine_design();
// Normalized (1 - x^2)^((alpha - 1) / 2) on [-1, 1], alpha in (0, 1).
DensityDesign generalized_arcsine_design(double alpha);
// Normalizing constant of the generalized arcsine density.
double generalized_arcsine_constant(double alpha);

// Equal weights at a((i - 1)/(N - 1)), i = 1..N.
Design quantile_design(const DensityDesign& dd, int N);
// n-atom quadrature of the density. Uniform: Gauss-Legendre. Otherwise:
// n cells of equal mass with the atom at the mid-mass quantile, which is the
// Gauss-Chebyshev rule for the arcsine law. Cells are set so that each holds
// exactly its atom's weight.
Design quadrature_design(const DensityDesign& dd, int n);
// Atoms at the grid points weighted by the mass of their Voronoi cells.
Design cell_discretization(const DensityDesign& dd, const Vector& grid);

Design triangular_lattice_design(double lambda);
Design two_point_design();
Vector equispaced(int n, Interval interval = {});
Design uniform_grid_design(int n, Interval interval = {});

// sup_x |F_design(x) - F(x)|
double kolmogorov_distance(const Design& design, const DensityDesign& dd);
// max_i |F_design(edge_(i+1)) - F(edge_(i+1))| over the right cell edges:
// the distance of the design to the density as resolved by its grid.
double cell_edge_distance(const Design& design, const DensityDesign& dd);

}  // namespace corrdesign
