#pragma once

#include "lpentropy/innovations.hpp"

#include <string>
#include <string_view>
#include <vector>

namespace lpe {

enum class KernelFamily
{
  epanechnikov,
  biweight,
  triweight,
  cosine
};

//! Symmetric, compactly supported, Lipschitz probability kernel on [-1, 1].
class Kernel
{
public:
  explicit Kernel(KernelFamily family = KernelFamily::epanechnikov);

  //! Rejects unknown names; "gaussian" is refused because its support is
  //! unbounded.
  static Kernel from_name(std::string_view name);
  static const std::vector<Kernel>& builtins();

  KernelFamily family() const { return family_; }
  std::string_view name() const;
  double support_radius() const { return 1.0; }
  //! Hölder exponent; every built-in is Lipschitz.
  double holder_order() const { return 1.0; }
  //! Analytic Lipschitz constant max |K'|.
  double holder_constant() const;
  //! Analytic ∫ u^2 K(u) du.
  double second_moment() const;

  //! K(u); exactly zero for |u| > support_radius.
  double operator()(double u) const;

private:
  KernelFamily family_;
};

inline double
kernel_eval(const Kernel& kernel, double u)
{
  return kernel(u);
}

struct KernelReport
{
  std::string kernel;
  double integral = 0.0;
  double first_moment = 0.0;
  double second_moment = 0.0;
  double sup = 0.0;
  //! max |ΔK| / |Δu|^ι over adjacent nodes of a fine grid, and of a grid
  //! refined 4x; stability of the two shows the Hölder bound is finite
  double holder_estimate = 0.0;
  double holder_estimate_refined = 0.0;
  //! largest |K| seen at probes outside the support (must be exactly 0)
  double outside_support_max = 0.0;
  std::vector<ConditionCheck> checks;

  bool all_passed() const;
};

//! Moments by Gauss-Legendre quadrature on the support, plus grid checks of
//! boundedness, Hölder continuity and compact support.
KernelReport
validate_kernel(const Kernel& kernel, std::size_t quadrature_points = 64);

} // namespace lpe
