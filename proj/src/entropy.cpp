#include "lpentropy/entropy.hpp"

#include <boost/math/interpolators/cardinal_cubic_b_spline.hpp>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

namespace lpe {

namespace detail {
struct TableSpline
{
  boost::math::interpolators::cardinal_cubic_b_spline<double> spline;
};
} // namespace detail

void
validate_threshold_rule(const ThresholdRule& rule)
{
  if (!(rule.constant > 0.0) || !std::isfinite(rule.constant))
    throw std::invalid_argument("threshold constant c_gamma must be positive");
  const bool low_ok =
    rule.permit_nonvanishing ? rule.exponent >= 0.0 : rule.exponent > 0.0;
  const bool ok = low_ok && rule.exponent < 1.0;
  if (!ok) {
    std::ostringstream msg;
    msg << "threshold exponent kappa=" << rule.exponent
        << " must lie in (0, 1): kappa >= 1 breaks gamma_n >> h_n and "
           "kappa <= 0 stops gamma_n -> 0";
    throw std::invalid_argument(msg.str());
  }
}

Threshold
threshold(std::size_t n, const ThresholdRule& rule, const BandwidthRule& bandwidth_rule)
{
  validate_threshold_rule(rule);
  const double h = bandwidth(n, bandwidth_rule);
  const double gamma = rule.constant * std::pow(h, rule.exponent);
  return { gamma, h, gamma > h };
}

bool
LevelSet::contained_in(const LevelSet& other) const
{
  return std::all_of(intervals.begin(), intervals.end(), [&](const LevelInterval& a) {
    return std::any_of(other.intervals.begin(), other.intervals.end(),
                       [&](const LevelInterval& b) {
                         return b.first_node <= a.first_node &&
                                a.last_node <= b.last_node;
                       });
  });
}

namespace {

template<class F>
double
trapezoid_over(const DensityEstimate& est, const LevelInterval& iv, F transform)
{
  if (iv.last_node == iv.first_node)
    return 0.0;
  double sum = 0.5 * (transform(est.values[iv.first_node]) +
                      transform(est.values[iv.last_node]));
  for (std::size_t j = iv.first_node + 1; j < iv.last_node; ++j)
    sum += transform(est.values[j]);
  return sum * est.grid.spacing();
}

} // namespace

LevelSet
level_set(const DensityEstimate& estimate, double gamma)
{
  if (!(gamma > 0.0))
    throw std::invalid_argument("level_set: gamma must be positive");

  LevelSet set;
  const auto& v = estimate.values;
  std::size_t j = 0;
  while (j < v.size()) {
    if (!(v[j] >= gamma)) {
      ++j;
      continue;
    }
    const std::size_t first = j;
    while (j + 1 < v.size() && v[j + 1] >= gamma)
      ++j;
    set.intervals.push_back(
      { first, j, estimate.grid.node(first), estimate.grid.node(j) });
    ++j;
  }
  for (const auto& iv : set.intervals) {
    set.total_length += iv.right - iv.left;
    set.mass += trapezoid_over(estimate, iv, [](double f) { return f; });
  }
  return set;
}

EntropyEstimate
integral_estimator(const DensityEstimate& estimate, double gamma)
{
  EntropyEstimate out;
  out.n = estimate.n;
  out.bandwidth = estimate.bandwidth;
  out.gamma = gamma;
  out.level_set = level_set(estimate, gamma);
  for (const auto& iv : out.level_set.intervals)
    out.value += trapezoid_over(estimate, iv, entropy_integrand);
  out.edge_error_bound = 2.0 * static_cast<double>(out.interval_count()) *
                         estimate.grid.spacing() * gamma * std::abs(std::log(gamma));
  return out;
}

double
true_entropy_gaussian(double variance)
{
  if (!(variance > 0.0))
    throw std::invalid_argument("true_entropy_gaussian: variance must be positive");
  return 0.5 * std::log(2.0 * std::numbers::pi * std::numbers::e * variance);
}

double
quadrature_entropy(const ScalarFunction& density, double lower, double upper, double tolerance)
{
  return adaptive_trapezoid([&](double x) { return entropy_integrand(density(x)); },
                            lower, upper, tolerance)
    .value;
}

DensityTable::DensityTable(Grid grid, std::vector<double> values)
  : grid_(grid)
  , values_(std::move(values))
{
  if (values_.size() != grid_.points())
    throw std::invalid_argument("DensityTable: values do not match grid");
  spline_ = std::make_shared<const detail::TableSpline>(detail::TableSpline{
    { values_.begin(), values_.end(), grid_.lower(), grid_.spacing() } });
}

double
DensityTable::operator()(double x) const
{
  if (!(x >= grid_.lower() && x <= grid_.upper()))
    return 0.0;
  return std::max(0.0, spline_->spline(x));
}

namespace {

// g(x_j) <- Σ_k g(x_j - k dx) f_a(k dx) dx on the grid itself
std::vector<double>
convolve_on_grid(const std::vector<double>& g,
                 const InnovationModel& model,
                 double a,
                 double spacing)
{
  const double reach = 40.0 * model.scale() * std::abs(a);
  const auto max_offset = static_cast<std::ptrdiff_t>(
    std::min<double>(std::ceil(reach / spacing), static_cast<double>(g.size())));
  std::vector<double> weights(2 * max_offset + 1);
  for (std::ptrdiff_t k = -max_offset; k <= max_offset; ++k)
    weights[k + max_offset] =
      model.density(static_cast<double>(k) * spacing / a) / std::abs(a) * spacing;

  const auto size = static_cast<std::ptrdiff_t>(g.size());
  std::vector<double> out(g.size(), 0.0);
  for (std::ptrdiff_t j = 0; j < size; ++j) {
    const std::ptrdiff_t k_lo = std::max(-max_offset, j - (size - 1));
    const std::ptrdiff_t k_hi = std::min(max_offset, j);
    double sum = 0.0;
    for (std::ptrdiff_t k = k_lo; k <= k_hi; ++k)
      sum += g[j - k] * weights[k + max_offset];
    out[j] = sum;
  }
  return out;
}

// g(x_j) <- ∫ f_ε(u) g(x_j - a u) du with g interpolated off the grid; used
// when f_a is too narrow to be resolved by the grid
std::vector<double>
convolve_by_innovation_quadrature(const DensityTable& g,
                                  const InnovationModel& model,
                                  double a)
{
  const Grid& grid = g.grid();
  const double du = std::min(0.1 * model.scale(), grid.spacing() / std::abs(a));
  const auto half = static_cast<std::ptrdiff_t>(std::ceil(40.0 * model.scale() / du));
  std::vector<double> u_nodes;
  std::vector<double> u_weights;
  for (std::ptrdiff_t k = -half; k <= half; ++k) {
    const double u = static_cast<double>(k) * du;
    u_nodes.push_back(a * u);
    u_weights.push_back(model.density(u) * du);
  }
  std::vector<double> out(grid.points());
  for (std::size_t j = 0; j < grid.points(); ++j) {
    const double x = grid.node(j);
    double sum = 0.0;
    for (std::size_t k = 0; k < u_nodes.size(); ++k)
      sum += u_weights[k] * g(x - u_nodes[k]);
    out[j] = sum;
  }
  return out;
}

double
max_abs_second_difference(const std::vector<double>& g, double spacing)
{
  double worst = 0.0;
  for (std::size_t j = 1; j + 1 < g.size(); ++j)
    worst = std::max(worst, std::abs(g[j + 1] - 2.0 * g[j] + g[j - 1]));
  return worst / (spacing * spacing);
}

} // namespace

DensityTable
marginal_density_by_convolution(const InnovationModel& model,
                                const CoefficientSequence& coeffs,
                                const Grid& grid,
                                double max_mass_deficit)
{
  std::vector<double> nonzero;
  for (double a : coeffs.coefficients)
    if (a != 0.0)
      nonzero.push_back(a);
  if (nonzero.empty())
    throw std::invalid_argument("marginal density: all coefficients are zero");

  const double spacing = grid.spacing();
  std::vector<double> g(grid.points());
  const double a0 = nonzero.front();
  for (std::size_t j = 0; j < grid.points(); ++j)
    g[j] = model.density(grid.node(j) / a0) / std::abs(a0);

  for (std::size_t i = 1; i < nonzero.size(); ++i) {
    const double a = nonzero[i];
    if (std::abs(a) * model.scale() >= 10.0 * spacing) {
      g = convolve_on_grid(g, model, a, spacing);
      continue;
    }
    // E g(x - aε) = g + a²σ²g''/2 + O(a⁴); below round-off the term is a no-op
    const double peak = *std::max_element(g.begin(), g.end());
    if (0.5 * a * a * model.variance() * max_abs_second_difference(g, spacing) <
        1e-15 * peak)
      continue;
    g = convolve_by_innovation_quadrature(DensityTable(grid, g), model, a);
  }

  DensityTable table(grid, std::move(g));
  const double deficit = std::abs(1.0 - table.mass());
  if (deficit > max_mass_deficit) {
    std::ostringstream msg;
    msg << "marginal density: grid [" << grid.lower() << ", " << grid.upper()
        << "] too narrow, mass deficit " << deficit;
    throw std::invalid_argument(msg.str());
  }
  return table;
}

double
truncated_true_term(const ScalarFunction& true_density,
                    const LevelSet& level_set,
                    double tolerance)
{
  double total = 0.0;
  for (const auto& iv : level_set.intervals)
    total += quadrature_entropy(true_density, iv.left, iv.right, tolerance);
  return total;
}

} // namespace lpe
