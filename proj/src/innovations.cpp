#include "lpentropy/innovations.hpp"

#include "lpentropy/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

namespace lpe {

namespace {

std::string
lowercase(std::string_view text)
{
  std::string out(text);
  std::transform(out.begin(), out.end(), out.begin(), [](unsigned char c) {
    return static_cast<char>(std::tolower(c));
  });
  return out;
}

} // namespace

InnovationModel::InnovationModel(InnovationFamily family, double scale)
  : family_(family)
  , scale_(scale)
{
  if (!(scale > 0.0) || !std::isfinite(scale))
    throw std::invalid_argument("innovation scale must be positive and finite");
}

InnovationModel
InnovationModel::from_name(std::string_view name, double scale)
{
  const std::string key = lowercase(name);
  if (key == "gaussian" || key == "normal")
    return { InnovationFamily::gaussian, scale };
  if (key == "logistic")
    return { InnovationFamily::logistic, scale };
  if (key == "laplace" || key == "uniform")
    throw std::invalid_argument(
      "innovation family '" + key +
      "' is not supported: its density is not twice differentiable, so "
      "f', f'' are not bounded and square integrable");
  throw std::invalid_argument("unknown innovation family '" + key +
                              "' (expected gaussian or logistic)");
}

double
InnovationModel::variance() const
{
  switch (family_) {
    case InnovationFamily::gaussian:
      return scale_ * scale_;
    case InnovationFamily::logistic:
      return scale_ * scale_ * std::numbers::pi * std::numbers::pi / 3.0;
  }
  return 0.0;
}

std::string_view
InnovationModel::name() const
{
  return family_ == InnovationFamily::gaussian ? "gaussian" : "logistic";
}

double
InnovationModel::density(double x, int derivative_order) const
{
  if (derivative_order < 0 || derivative_order > 2)
    throw std::invalid_argument("density: derivative order must be 0, 1 or 2");

  const double s = scale_;
  if (family_ == InnovationFamily::gaussian) {
    const double z = x / s;
    const double phi =
      std::exp(-0.5 * z * z) / (s * std::sqrt(2.0 * std::numbers::pi));
    switch (derivative_order) {
      case 0:
        return phi;
      case 1:
        return -z / s * phi;
      default:
        return (z * z - 1.0) / (s * s) * phi;
    }
  }

  // f = (1 - t^2) / (4s) with t = tanh(x / 2s)
  const double t = std::tanh(x / (2.0 * s));
  const double sech2 = 1.0 - t * t;
  switch (derivative_order) {
    case 0:
      return sech2 / (4.0 * s);
    case 1:
      return -t * sech2 / (4.0 * s * s);
    default:
      return -(1.0 - 3.0 * t * t) * sech2 / (8.0 * s * s * s);
  }
}

double
InnovationModel::entropy() const
{
  if (family_ == InnovationFamily::gaussian)
    return 0.5 * std::log(2.0 * std::numbers::pi * std::numbers::e * variance());
  return std::log(scale_) + 2.0;
}

double
InnovationModel::draw(RandomStream& rng) const
{
  const double u = rng.uniform_open();
  if (family_ == InnovationFamily::logistic)
    return scale_ * std::log(u / (1.0 - u));
  const double v = rng.uniform_open();
  return scale_ * std::sqrt(-2.0 * std::log(u)) *
         std::cos(2.0 * std::numbers::pi * v);
}

void
fill_innovations(const InnovationModel& model,
                 RandomStream& rng,
                 std::vector<double>& out)
{
  const std::size_t count = out.size();
  if (model.family() == InnovationFamily::logistic) {
    for (auto& v : out)
      v = model.draw(rng);
    return;
  }
  // Box-Muller pairs; a trailing odd draw equals the first member of the
  // next pair, so a longer request extends a shorter one bit for bit.
  const double s = model.scale();
  std::size_t i = 0;
  for (; i + 1 < count; i += 2) {
    const double r = std::sqrt(-2.0 * std::log(rng.uniform_open()));
    const double angle = 2.0 * std::numbers::pi * rng.uniform_open();
    out[i] = s * r * std::cos(angle);
    out[i + 1] = s * r * std::sin(angle);
  }
  if (i < count)
    out[i] = model.draw(rng);
}

std::vector<double>
sample_innovations(const InnovationModel& model,
                   std::size_t count,
                   std::uint64_t seed,
                   std::uint64_t stream)
{
  if (count == 0)
    throw std::invalid_argument("sample_innovations: count must be >= 1");
  RandomStream rng(seed, stream);
  std::vector<double> out(count);
  fill_innovations(model, rng, out);
  return out;
}

bool
DensityConditionReport::all_passed() const
{
  return std::all_of(checks.begin(), checks.end(),
                     [](const ConditionCheck& c) { return c.passed; });
}

DensityConditionReport
validate_density_conditions(const InnovationModel& model,
                            double grid_halfwidth,
                            std::size_t grid_points)
{
  if (!(grid_halfwidth > 0.0))
    throw std::invalid_argument("grid_halfwidth must be positive");
  if (grid_points < 100)
    throw std::invalid_argument("grid_points must be >= 100");

  DensityConditionReport report;
  const double spacing = 2.0 * grid_halfwidth / static_cast<double>(grid_points - 1);

  for (int order = 0; order <= 2; ++order) {
    std::vector<double> squares(grid_points);
    double sup = 0.0;
    for (std::size_t j = 0; j < grid_points; ++j) {
      const double x = -grid_halfwidth + static_cast<double>(j) * spacing;
      const double v = model.density(x, order);
      sup = std::max(sup, std::abs(v));
      squares[j] = v * v;
    }
    const double fine = trapezoid(squares, spacing);
    // every other node: same interval, doubled spacing
    std::vector<double> coarse_samples;
    for (std::size_t j = 0; j < grid_points; j += 2)
      coarse_samples.push_back(squares[j]);
    const double coarse = trapezoid(coarse_samples, 2.0 * spacing);

    report.sup_norm[order] = sup;
    report.tail_bound[order] =
      std::max(std::abs(model.density(-grid_halfwidth, order)),
               std::abs(model.density(grid_halfwidth, order)));
    report.l2_norm_sq[order] = fine;
    report.l2_refinement_change[order] =
      fine > 0.0 ? std::abs(fine - coarse) / fine : 0.0;
  }

  static constexpr const char* derivative_names[] = { "f", "f'", "f''" };
  bool bounded = true;
  bool integrable = true;
  std::ostringstream bounded_detail;
  std::ostringstream l2_detail;
  bounded_detail.precision(6);
  l2_detail.precision(6);
  for (int order = 0; order <= 2; ++order) {
    // the tail must not exceed the grid maximum, otherwise the sup lies outside
    bounded = bounded && std::isfinite(report.sup_norm[order]) &&
              report.tail_bound[order] <= report.sup_norm[order];
    integrable = integrable && std::isfinite(report.l2_norm_sq[order]) &&
                 report.l2_refinement_change[order] < 1e-6 &&
                 report.tail_bound[order] < 1e-6 * report.sup_norm[order];
    bounded_detail << (order ? ", " : "") << "sup|" << derivative_names[order]
                   << "|=" << report.sup_norm[order];
    l2_detail << (order ? ", " : "") << "int " << derivative_names[order]
              << "^2=" << report.l2_norm_sq[order];
  }
  report.checks.push_back({ "bounded f, f', f''", bounded, bounded_detail.str() });
  report.checks.push_back(
    { "square-integrable f, f', f''", integrable, l2_detail.str() });
  return report;
}

} // namespace lpe
