#include "lpentropy/quadrature.hpp"

#include <cmath>
#include <numbers>

namespace lpe {

GaussLegendreRule
gauss_legendre(std::size_t points)
{
  if (points == 0)
    throw std::invalid_argument("gauss_legendre: need at least one point");

  GaussLegendreRule rule;
  rule.nodes.resize(points);
  rule.weights.resize(points);
  const auto n = static_cast<double>(points);

  for (std::size_t i = 0; i < (points + 1) / 2; ++i) {
    double x = std::cos(std::numbers::pi * (static_cast<double>(i) + 0.75) /
                        (n + 0.5));
    double derivative = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0;
      double p1 = x;
      for (std::size_t k = 2; k <= points; ++k) {
        const auto kk = static_cast<double>(k);
        const double p2 = ((2.0 * kk - 1.0) * x * p1 - (kk - 1.0) * p0) / kk;
        p0 = p1;
        p1 = p2;
      }
      derivative = n * (x * p1 - p0) / (x * x - 1.0);
      const double step = p1 / derivative;
      x -= step;
      if (std::abs(step) < 1e-16)
        break;
    }
    const double w = 2.0 / ((1.0 - x * x) * derivative * derivative);
    rule.nodes[i] = -x;
    rule.nodes[points - 1 - i] = x;
    rule.weights[i] = w;
    rule.weights[points - 1 - i] = w;
  }
  if (points % 2 == 1)
    rule.nodes[points / 2] = 0.0;
  return rule;
}

double
integrate_gauss_legendre(const ScalarFunction& f,
                         double lower,
                         double upper,
                         const GaussLegendreRule& rule)
{
  const double half = 0.5 * (upper - lower);
  const double mid = 0.5 * (upper + lower);
  double sum = 0.0;
  for (std::size_t i = 0; i < rule.nodes.size(); ++i)
    sum += rule.weights[i] * f(mid + half * rule.nodes[i]);
  return half * sum;
}

double
trapezoid(std::span<const double> samples, double spacing)
{
  if (samples.size() < 2)
    return 0.0;
  double sum = 0.5 * (samples.front() + samples.back());
  for (std::size_t i = 1; i + 1 < samples.size(); ++i)
    sum += samples[i];
  return sum * spacing;
}

AdaptiveResult
adaptive_trapezoid(const ScalarFunction& f,
                   double lower,
                   double upper,
                   double tolerance,
                   std::size_t min_levels,
                   std::size_t max_levels)
{
  if (!(upper > lower))
    return { 0.0, 0.0, 0 };

  const double width = upper - lower;
  std::vector<double> previous{ 0.5 * width * (f(lower) + f(upper)) };
  std::size_t evaluations = 2;
  std::size_t intervals = 1;

  for (std::size_t level = 1; level <= max_levels; ++level) {
    const double step = width / static_cast<double>(intervals);
    double midpoint_sum = 0.0;
    for (std::size_t i = 0; i < intervals; ++i)
      midpoint_sum += f(lower + (static_cast<double>(i) + 0.5) * step);
    evaluations += intervals;
    intervals *= 2;

    std::vector<double> row(level + 1);
    row[0] = 0.5 * previous[0] + 0.5 * step * midpoint_sum;
    double factor = 4.0;
    for (std::size_t k = 1; k <= level; ++k) {
      row[k] = row[k - 1] + (row[k - 1] - previous[k - 1]) / (factor - 1.0);
      factor *= 4.0;
    }
    const double change = std::abs(row[level] - previous[level - 1]);
    if (level >= min_levels && change < tolerance)
      return { row[level], change, evaluations };
    previous = std::move(row);
  }
  throw QuadratureError("adaptive_trapezoid: no convergence within " +
                        std::to_string(max_levels) + " refinements");
}

} // namespace lpe
