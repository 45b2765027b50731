#pragma once

#include "lpentropy/rng.hpp"

#include <array>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace lpe {

enum class InnovationFamily
{
  gaussian,
  logistic
};

//! Zero-mean, finite-variance innovation law with a smooth density.
//!
//! Only families whose density and first two derivatives are bounded and
//! square integrable are representable. Laplace and uniform laws are rejected
//! by name because their densities are not differentiable.
class InnovationModel
{
public:
  InnovationModel(InnovationFamily family, double scale);

  //! Accepts "gaussian" (alias "normal") and "logistic".
  static InnovationModel from_name(std::string_view name, double scale);

  InnovationFamily family() const { return family_; }
  double scale() const { return scale_; }
  double variance() const;
  std::string_view name() const;

  //! Analytic f, f' or f'' at x.
  double density(double x, int derivative_order = 0) const;

  //! Closed-form differential entropy of the innovation law.
  double entropy() const;

  double draw(RandomStream& rng) const;

private:
  InnovationFamily family_;
  double scale_;
};

//! `count` i.i.d. draws. Gaussian draws use the Box-Muller transform and
//! logistic draws the inverse CDF, both applied to RandomStream uniforms.
std::vector<double>
sample_innovations(const InnovationModel& model,
                   std::size_t count,
                   std::uint64_t seed,
                   std::uint64_t stream = 0);

void
fill_innovations(const InnovationModel& model,
                 RandomStream& rng,
                 std::vector<double>& out);

struct ConditionCheck
{
  std::string name;
  bool passed;
  std::string detail;
};

struct DensityConditionReport
{
  //! max |f^(k)| on the grid, k = 0, 1, 2
  std::array<double, 3> sup_norm{};
  //! |f^(k)| at the grid edge; all supported laws decay monotonically past it
  std::array<double, 3> tail_bound{};
  //! ∫ (f^(k))^2 over the grid, k = 0, 1, 2
  std::array<double, 3> l2_norm_sq{};
  //! relative change of the L2 quadrature when the grid is halved
  std::array<double, 3> l2_refinement_change{};
  std::vector<ConditionCheck> checks;

  bool all_passed() const;
};

//! Numerical check of boundedness and square integrability of f, f', f''.
DensityConditionReport
validate_density_conditions(const InnovationModel& model,
                            double grid_halfwidth,
                            std::size_t grid_points);

} // namespace lpe
