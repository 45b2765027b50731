#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <stdexcept>
#include <vector>

namespace lpe {

using ScalarFunction = std::function<double(double)>;

//! Raised when an adaptive rule hits its refinement cap.
class QuadratureError : public std::runtime_error
{
public:
  using std::runtime_error::runtime_error;
};

struct GaussLegendreRule
{
  std::vector<double> nodes;   // on [-1, 1]
  std::vector<double> weights;
};

//! Nodes and weights of the n-point Gauss-Legendre rule (Newton iteration on
//! P_n). Exact for polynomials of degree <= 2n - 1.
GaussLegendreRule
gauss_legendre(std::size_t points);

double
integrate_gauss_legendre(const ScalarFunction& f,
                         double lower,
                         double upper,
                         const GaussLegendreRule& rule);

//! Composite trapezoid rule over equally spaced samples.
double
trapezoid(std::span<const double> samples, double spacing);

struct AdaptiveResult
{
  double value;
  double last_change;
  std::size_t evaluations;
};

//! Trapezoid rule refined by repeated interval halving, with Richardson
//! (Romberg) extrapolation of successive levels. Stops once two successive
//! extrapolated estimates differ by less than `tolerance` (absolute), after
//! at least `min_levels` halvings. Throws QuadratureError past `max_levels`.
AdaptiveResult
adaptive_trapezoid(const ScalarFunction& f,
                   double lower,
                   double upper,
                   double tolerance,
                   std::size_t min_levels = 5,
                   std::size_t max_levels = 24);

} // namespace lpe
