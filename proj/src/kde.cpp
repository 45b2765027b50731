#include "lpentropy/kde.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace lpe {

double
bandwidth(std::size_t n, const BandwidthRule& rule)
{
  if (n < 3)
    throw std::invalid_argument("bandwidth: n must be >= 3");
  if (!(rule.constant > 0.0))
    throw std::invalid_argument("bandwidth: constant must be positive");
  const auto nn = static_cast<double>(n);
  return rule.constant * std::pow(std::log(nn) / nn, 0.2);
}

Grid::Grid(double lower, double upper, std::size_t points)
  : lower_(lower)
  , upper_(upper)
  , points_(points)
  , spacing_(0.0)
{
  if (points < 2)
    throw std::invalid_argument("grid needs at least 2 points");
  if (!(lower < upper) || !std::isfinite(lower) || !std::isfinite(upper))
    throw std::invalid_argument("grid needs finite lower < upper");
  spacing_ = (upper - lower) / static_cast<double>(points - 1);
}

Grid
default_grid(std::span<const double> sample,
             double h,
             const Kernel& kernel,
             std::size_t points_per_bandwidth)
{
  if (sample.empty())
    throw std::invalid_argument("default_grid: empty series");
  if (points_per_bandwidth < 4)
    throw std::invalid_argument("default_grid: need >= 4 points per bandwidth");
  if (!(h > 0.0))
    throw std::invalid_argument("default_grid: bandwidth must be positive");

  const auto [lo, hi] = std::minmax_element(sample.begin(), sample.end());
  const double reach = h * kernel.support_radius();
  const double lower = *lo - reach;
  const double upper = *hi + reach;
  const double max_spacing = h / static_cast<double>(points_per_bandwidth);
  const auto intervals =
    static_cast<std::size_t>(std::ceil((upper - lower) / max_spacing));
  return Grid(lower, upper, intervals + 1);
}

DensityEstimate
kde_on_grid(std::span<const double> sample, const Kernel& kernel, double h, const Grid& grid)
{
  if (!(h > 0.0))
    throw std::invalid_argument("kde_on_grid: bandwidth must be positive");
  if (sample.empty())
    throw std::invalid_argument("kde_on_grid: empty sample");

  std::vector<double> sorted(sample.begin(), sample.end());
  std::sort(sorted.begin(), sorted.end());

  const double reach = h * kernel.support_radius();
  const double norm = 1.0 / (static_cast<double>(sorted.size()) * h);
  std::vector<double> values(grid.points(), 0.0);

  // nodes ascend, so the window [x - reach, x + reach] only moves right
  auto first = sorted.begin();
  for (std::size_t j = 0; j < grid.points(); ++j) {
    const double x = grid.node(j);
    while (first != sorted.end() && *first < x - reach)
      ++first;
    double sum = 0.0;
    for (auto it = first; it != sorted.end() && *it <= x + reach; ++it)
      sum += kernel((x - *it) / h);
    values[j] = sum * norm;
  }
  return { grid, std::move(values), h, sample.size(), kernel };
}

DensityEstimate
kde_on_grid_naive(std::span<const double> sample,
                  const Kernel& kernel,
                  double h,
                  const Grid& grid)
{
  if (!(h > 0.0))
    throw std::invalid_argument("kde_on_grid_naive: bandwidth must be positive");
  if (sample.empty())
    throw std::invalid_argument("kde_on_grid_naive: empty sample");

  const double norm = 1.0 / (static_cast<double>(sample.size()) * h);
  std::vector<double> values(grid.points(), 0.0);
  for (std::size_t j = 0; j < grid.points(); ++j) {
    double sum = 0.0;
    for (double xi : sample)
      sum += kernel((grid.node(j) - xi) / h);
    values[j] = sum * norm;
  }
  return { grid, std::move(values), h, sample.size(), kernel };
}

double
tail_supremum(const ScalarFunction& density, double lower, double upper, double step)
{
  double sup = std::max(density(lower), density(upper));
  double distance = step;
  for (int k = 0; k < 64; ++k) {
    sup = std::max({ sup, density(lower - distance), density(upper + distance) });
    distance *= 1.5;
  }
  return sup;
}

SupNormError
sup_error(const DensityEstimate& estimate, const ScalarFunction& true_density)
{
  SupNormError err{ 0.0, 0.0, 0.0 };
  for (std::size_t j = 0; j < estimate.grid.points(); ++j)
    err.grid_max = std::max(
      err.grid_max, std::abs(estimate.values[j] - true_density(estimate.grid.node(j))));
  // f_n = 0 off the grid, so the error there is f itself
  err.tail_sup = tail_supremum(true_density, estimate.grid.lower(),
                               estimate.grid.upper(), estimate.grid.spacing());
  err.value = std::max(err.grid_max, err.tail_sup);
  return err;
}

} // namespace lpe
