#include "lpentropy/kernels.hpp"

#include "lpentropy/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

namespace lpe {

Kernel::Kernel(KernelFamily family)
  : family_(family)
{}

Kernel
Kernel::from_name(std::string_view name)
{
  if (name == "epanechnikov")
    return Kernel(KernelFamily::epanechnikov);
  if (name == "biweight" || name == "quartic")
    return Kernel(KernelFamily::biweight);
  if (name == "triweight")
    return Kernel(KernelFamily::triweight);
  if (name == "cosine")
    return Kernel(KernelFamily::cosine);
  if (name == "gaussian" || name == "normal")
    throw std::invalid_argument(
      "kernel 'gaussian' is not supported: it has unbounded support");
  throw std::invalid_argument(
    "unknown kernel '" + std::string(name) +
    "' (expected epanechnikov, biweight, triweight or cosine)");
}

const std::vector<Kernel>&
Kernel::builtins()
{
  static const std::vector<Kernel> all{ Kernel(KernelFamily::epanechnikov),
                                        Kernel(KernelFamily::biweight),
                                        Kernel(KernelFamily::triweight),
                                        Kernel(KernelFamily::cosine) };
  return all;
}

std::string_view
Kernel::name() const
{
  switch (family_) {
    case KernelFamily::epanechnikov:
      return "epanechnikov";
    case KernelFamily::biweight:
      return "biweight";
    case KernelFamily::triweight:
      return "triweight";
    case KernelFamily::cosine:
      return "cosine";
  }
  return "?";
}

double
Kernel::holder_constant() const
{
  switch (family_) {
    case KernelFamily::epanechnikov:
      return 1.5; // |K'| = 1.5|u|
    case KernelFamily::biweight:
      return 2.5 / std::sqrt(3.0); // at u = 1/sqrt(3)
    case KernelFamily::triweight:
      return 4.2 / std::sqrt(5.0); // at u = 1/sqrt(5)
    case KernelFamily::cosine:
      return std::numbers::pi * std::numbers::pi / 8.0;
  }
  return 0.0;
}

double
Kernel::second_moment() const
{
  switch (family_) {
    case KernelFamily::epanechnikov:
      return 0.2;
    case KernelFamily::biweight:
      return 1.0 / 7.0;
    case KernelFamily::triweight:
      return 1.0 / 9.0;
    case KernelFamily::cosine:
      return 1.0 - 8.0 / (std::numbers::pi * std::numbers::pi);
  }
  return 0.0;
}

double
Kernel::operator()(double u) const
{
  if (!(std::abs(u) <= 1.0))
    return 0.0;
  const double w = 1.0 - u * u;
  switch (family_) {
    case KernelFamily::epanechnikov:
      return 0.75 * w;
    case KernelFamily::biweight:
      return 0.9375 * w * w;
    case KernelFamily::triweight:
      return 1.09375 * w * w * w;
    case KernelFamily::cosine:
      return 0.25 * std::numbers::pi * std::cos(0.5 * std::numbers::pi * u);
  }
  return 0.0;
}

bool
KernelReport::all_passed() const
{
  return std::all_of(checks.begin(), checks.end(),
                     [](const ConditionCheck& c) { return c.passed; });
}

namespace {

double
holder_on_grid(const Kernel& kernel, std::size_t intervals)
{
  const double r = kernel.support_radius();
  // extend past the support so jumps at the edge would be caught
  const double lower = -1.25 * r;
  const double step = 2.5 * r / static_cast<double>(intervals);
  double worst = 0.0;
  double prev = kernel(lower);
  for (std::size_t j = 1; j <= intervals; ++j) {
    const double cur = kernel(lower + static_cast<double>(j) * step);
    worst = std::max(worst, std::abs(cur - prev) / std::pow(step, kernel.holder_order()));
    prev = cur;
  }
  return worst;
}

} // namespace

KernelReport
validate_kernel(const Kernel& kernel, std::size_t quadrature_points)
{
  if (quadrature_points < 64)
    throw std::invalid_argument("validate_kernel: quadrature_points must be >= 64");

  KernelReport report;
  report.kernel = std::string(kernel.name());
  const auto rule = gauss_legendre(quadrature_points);
  const double r = kernel.support_radius();
  report.integral = integrate_gauss_legendre(kernel, -r, r, rule);
  report.first_moment =
    integrate_gauss_legendre([&](double u) { return u * kernel(u); }, -r, r, rule);
  report.second_moment =
    integrate_gauss_legendre([&](double u) { return u * u * kernel(u); }, -r, r, rule);

  constexpr std::size_t fine = 20'000;
  for (std::size_t j = 0; j <= fine; ++j) {
    const double u = -r + 2.0 * r * static_cast<double>(j) / fine;
    report.sup = std::max(report.sup, std::abs(kernel(u)));
  }
  report.holder_estimate = holder_on_grid(kernel, fine);
  report.holder_estimate_refined = holder_on_grid(kernel, 4 * fine);

  // probes just past the edge and far away
  for (std::size_t j = 1; j <= 5'000; ++j) {
    const double offset = std::ldexp(static_cast<double>(j), -12) * r;
    const double far = r + static_cast<double>(j);
    for (double u : { r + offset, -r - offset, far, -far })
      report.outside_support_max = std::max(report.outside_support_max, std::abs(kernel(u)));
  }

  std::ostringstream moments;
  moments.precision(12);
  moments << "int K=" << report.integral << ", int uK=" << report.first_moment
          << ", int u^2K=" << report.second_moment;
  std::ostringstream holder;
  holder.precision(6);
  holder << "sup|K|=" << report.sup << ", Holder(" << kernel.holder_order()
         << ") estimate " << report.holder_estimate << " -> "
         << report.holder_estimate_refined;

  const bool bounded_holder =
    std::isfinite(report.sup) && std::isfinite(report.holder_estimate_refined) &&
    report.holder_estimate_refined <= kernel.holder_constant() * (1.0 + 1e-6) &&
    std::abs(report.holder_estimate_refined - report.holder_estimate) <=
      0.01 * report.holder_estimate;

  report.checks.push_back(
    { "normalized", std::abs(report.integral - 1.0) <= 1e-8, moments.str() });
  report.checks.push_back({ "bounded and Holder continuous", bounded_holder, holder.str() });
  report.checks.push_back({ "compact support", report.outside_support_max == 0.0,
                            "max |K| outside support = " +
                              std::to_string(report.outside_support_max) });
  report.checks.push_back(
    { "zero first moment", std::abs(report.first_moment) <= 1e-10, moments.str() });
  return report;
}

} // namespace lpe
