#pragma once

#include "lpentropy/innovations.hpp"
#include "lpentropy/kde.hpp"
#include "lpentropy/linear_process.hpp"
#include "lpentropy/quadrature.hpp"

#include <cmath>
#include <cstddef>
#include <memory>
#include <vector>

namespace lpe {

namespace detail {
struct TableSpline;
}

//! γ_n = c_γ h_n^κ with κ in (0, 1), so that γ_n -> 0 and γ_n / h_n -> ∞.
struct ThresholdRule
{
  double constant = 1.0;
  double exponent = 0.8;
  //! Admit κ = 0 (a constant threshold). Only for counterexample runs: the
  //! threshold then no longer vanishes.
  bool permit_nonvanishing = false;
};

void
validate_threshold_rule(const ThresholdRule& rule);

struct Threshold
{
  double gamma;
  double bandwidth;
  //! γ_n > h_n at this n; false means the constants make them cross
  bool above_bandwidth;
};

Threshold
threshold(std::size_t n, const ThresholdRule& rule, const BandwidthRule& bandwidth_rule = {});

struct LevelInterval
{
  std::size_t first_node;
  std::size_t last_node;
  double left;
  double right;
};

//! {x : f_n(x) >= γ} as maximal runs of grid nodes.
struct LevelSet
{
  std::vector<LevelInterval> intervals;
  double total_length = 0.0;
  double mass = 0.0; // trapezoid integral of f_n over the intervals

  bool empty() const { return intervals.empty(); }
  //! Every interval of this set lies inside some interval of `other`.
  bool contained_in(const LevelSet& other) const;
};

LevelSet
level_set(const DensityEstimate& estimate, double gamma);

struct EntropyEstimate
{
  double value = 0.0;
  std::size_t n = 0;
  double bandwidth = 0.0;
  double gamma = 0.0;
  LevelSet level_set;
  //! order of the quadrature lost at grid-aligned interval edges:
  //! 2 · intervals · spacing · γ |log γ|
  double edge_error_bound = 0.0;

  std::size_t interval_count() const { return level_set.intervals.size(); }
  double mass() const { return level_set.mass; }
};

//! -∫_{A_n} f_n log f_n by composite trapezoid on the nodes of each interval.
EntropyEstimate
integral_estimator(const DensityEstimate& estimate, double gamma);

//! -f log f with 0 log 0 = 0.
inline double
entropy_integrand(double f)
{
  return f > 0.0 ? -f * std::log(f) : 0.0;
}

//! ½ log(2πe σ²)
double
true_entropy_gaussian(double variance);

//! -∫ f log f over [lower, upper] by adaptive trapezoid refinement.
double
quadrature_entropy(const ScalarFunction& density,
                   double lower,
                   double upper,
                   double tolerance = 1e-10);

//! Density of a linear-process marginal tabulated on a uniform grid.
class DensityTable
{
public:
  DensityTable(Grid grid, std::vector<double> values);

  const Grid& grid() const { return grid_; }
  const std::vector<double>& values() const { return values_; }
  double mass() const { return trapezoid(values_, grid_.spacing()); }

  //! Cubic B-spline interpolation; zero outside the grid.
  double operator()(double x) const;

private:
  Grid grid_;
  std::vector<double> values_;
  std::shared_ptr<const detail::TableSpline> spline_;
};

//! Convolution of the scaled innovation densities f_ε(x / a_i) / |a_i| for
//! every non-zero coefficient. Throws if the grid loses more than
//! `max_mass_deficit` of the mass.
DensityTable
marginal_density_by_convolution(const InnovationModel& model,
                                const CoefficientSequence& coeffs,
                                const Grid& grid,
                                double max_mass_deficit = 1e-8);

//! ∫_{A_n} -f log f for the true density f over a level set.
double
truncated_true_term(const ScalarFunction& true_density,
                    const LevelSet& level_set,
                    double tolerance = 1e-11);

} // namespace lpe
