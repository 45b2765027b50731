#pragma once

#include "lpentropy/kernels.hpp"
#include "lpentropy/quadrature.hpp"

#include <cstddef>
#include <span>
#include <vector>

namespace lpe {

//! h_n = c (log n / n)^{1/5}
struct BandwidthRule
{
  double constant = 1.0;
};

double
bandwidth(std::size_t n, const BandwidthRule& rule = {});

//! Uniform grid lower = x_0 < ... < x_{points-1} = upper.
class Grid
{
public:
  Grid(double lower, double upper, std::size_t points);

  double lower() const { return lower_; }
  double upper() const { return upper_; }
  std::size_t points() const { return points_; }
  double spacing() const { return spacing_; }
  double node(std::size_t j) const
  {
    return j + 1 == points_ ? upper_ : lower_ + static_cast<double>(j) * spacing_;
  }

private:
  double lower_;
  double upper_;
  std::size_t points_;
  double spacing_;
};

//! Covers [min X - h r, max X + h r] with spacing <= h / points_per_bandwidth.
//! The estimator vanishes identically outside this interval.
Grid
default_grid(std::span<const double> sample,
             double h,
             const Kernel& kernel,
             std::size_t points_per_bandwidth = 8);

struct DensityEstimate
{
  Grid grid;
  std::vector<double> values;
  double bandwidth;
  std::size_t n;
  Kernel kernel;

  //! Trapezoid integral over the grid.
  double integral() const { return trapezoid(values, grid.spacing()); }
};

//! f_n(x_j) = (1 / n h) Σ_i K((x_j - X_i) / h). Samples are sorted once and
//! each node visits only the samples inside its kernel window.
DensityEstimate
kde_on_grid(std::span<const double> sample, const Kernel& kernel, double h, const Grid& grid);

//! Double loop over every (node, sample) pair; reference for kde_on_grid.
DensityEstimate
kde_on_grid_naive(std::span<const double> sample,
                  const Kernel& kernel,
                  double h,
                  const Grid& grid);

struct SupNormError
{
  double grid_max;  // max_j |f_n(x_j) - f(x_j)|
  double tail_sup;  // sup of f outside the grid, where f_n = 0
  double value;     // max of the two: sup over the real line
};

SupNormError
sup_error(const DensityEstimate& estimate, const ScalarFunction& true_density);

//! Largest value of `density` on (-inf, lower] ∪ [upper, inf), probed at
//! geometrically growing distances from both edges.
double
tail_supremum(const ScalarFunction& density, double lower, double upper, double step);

} // namespace lpe
