#include "lpentropy/entropy.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>

using namespace lpe;

namespace {

DensityEstimate
synthetic(const Grid& grid, const std::function<double(double)>& f)
{
  std::vector<double> values(grid.points());
  for (std::size_t j = 0; j < grid.points(); ++j)
    values[j] = f(grid.node(j));
  return { grid, std::move(values), 0.1, 100, Kernel() };
}

double
normal_pdf(double x, double variance)
{
  return std::exp(-0.5 * x * x / variance) / std::sqrt(2.0 * std::numbers::pi * variance);
}

} // namespace

TEST_CASE("threshold rule")
{
  const auto t = threshold(100, {}, {});
  // 0.540317628...^0.8, evaluated independently at high precision
  CHECK(t.gamma == doctest::Approx(0.61110988612115).epsilon(1e-13));
  CHECK(t.bandwidth == doctest::Approx(0.540317628167279).epsilon(1e-14));
  CHECK(t.above_bandwidth);

  const auto small = threshold(1000, {}, {});
  const auto big = threshold(1'000'000, {}, {});
  CHECK(big.gamma / big.bandwidth > small.gamma / small.bandwidth);
  CHECK(big.gamma < small.gamma);

  CHECK_THROWS_AS(threshold(100, { 1.0, 1.0 }, {}), std::invalid_argument);
  CHECK_THROWS_AS(threshold(100, { 1.0, 1.2 }, {}), std::invalid_argument);
  CHECK_THROWS_AS(threshold(100, { 1.0, 0.0 }, {}), std::invalid_argument);
  CHECK_THROWS_AS(threshold(100, { 0.0, 0.5 }, {}), std::invalid_argument);
  // a constant threshold only with the explicit counterexample switch
  CHECK(threshold(100, { 0.2, 0.0, true }, {}).gamma == 0.2);
}

TEST_CASE("small constants let gamma fall below h")
{
  const auto t = threshold(16000, { 0.01, 0.8 }, {});
  CHECK_FALSE(t.above_bandwidth);
}

TEST_CASE("level set cases")
{
  const Grid grid(0.0, 1.0, 11);
  const auto flat = synthetic(grid, [](double) { return 0.5; });
  const auto whole = level_set(flat, 0.4);
  REQUIRE(whole.intervals.size() == 1);
  CHECK(whole.intervals[0].left == 0.0);
  CHECK(whole.intervals[0].right == 1.0);
  CHECK(whole.total_length == doctest::Approx(1.0));
  CHECK(whole.mass == doctest::Approx(0.5));

  CHECK(level_set(flat, 0.6).empty());
  CHECK_THROWS_AS(level_set(flat, 0.0), std::invalid_argument);
}

TEST_CASE("two separated samples give two intervals")
{
  // n = 2, X = {-1, 1}, h = 0.5: f_n(x) = K(2(x + 1)) + K(2(x - 1)), peaks 0.75
  // at ±1 and zero at the origin
  const std::vector<double> x{ -1.0, 1.0 };
  const Kernel epa;
  const Grid grid = default_grid(x, 0.5, epa, 40);
  const auto est = kde_on_grid(x, epa, 0.5, grid);
  const auto set = level_set(est, 0.3);
  REQUIRE(set.intervals.size() == 2);
  // 0.75 (1 - 4 d^2) >= 0.3  <=>  |d| <= sqrt(0.15)
  const double half = std::sqrt(0.15);
  CHECK(set.intervals[0].left >= -1.0 - half);
  CHECK(set.intervals[0].left < -1.0 - half + grid.spacing());
  CHECK(set.intervals[1].right <= 1.0 + half);
  CHECK(set.intervals[1].right > 1.0 + half - grid.spacing());
  for (const auto& iv : set.intervals)
    for (std::size_t j = iv.first_node; j <= iv.last_node; ++j)
      CHECK(est.values[j] >= 0.3);
}

TEST_CASE("raising the threshold shrinks the level set")
{
  std::mt19937_64 rng(77);
  std::normal_distribution<double> normal;
  const Kernel epa;
  for (int trial = 0; trial < 30; ++trial) {
    std::vector<double> x(50 + 10 * trial);
    for (auto& v : x)
      v = normal(rng) + (trial % 2 ? 3.0 * (normal(rng) > 0) : 0.0);
    const double h = bandwidth(x.size()) * 0.4;
    const auto est = kde_on_grid(x, epa, h, default_grid(x, h, epa, 8));
    std::uniform_real_distribution<double> level(0.001, 0.4);
    double a = level(rng), b = level(rng);
    if (a > b)
      std::swap(a, b);
    CHECK(level_set(est, b).contained_in(level_set(est, a)));
    CHECK(integral_estimator(est, b).mass() <= integral_estimator(est, a).mass());
  }
}

TEST_CASE("integral estimator cases")
{
  const Grid grid(0.0, 1.0, 101);
  const auto flat = synthetic(grid, [](double) { return 1.0; });
  CHECK(integral_estimator(flat, 2.0).value == 0.0);
  CHECK(integral_estimator(flat, 2.0).interval_count() == 0);
  CHECK(integral_estimator(flat, 0.5).value == doctest::Approx(0.0));

  // triangular density on [-1, 1]; oracle 2 ∫_{0.1}^{1} -t log t dt from mpmath
  const Grid fine(-1.0, 1.0, 20001);
  const auto tri = synthetic(fine, [](double t) { return std::max(0.0, 1.0 - std::abs(t)); });
  const auto s = integral_estimator(tri, 0.1);
  CHECK(std::abs(s.value - 0.47197414907005954) < 1e-4);
  CHECK(s.interval_count() == 1);
  CHECK(s.edge_error_bound > 0.0);
}

TEST_CASE("gaussian entropy closed form")
{
  CHECK(true_entropy_gaussian(1.0) == doctest::Approx(1.4189385332046727).epsilon(1e-15));
  CHECK(true_entropy_gaussian(4.0 / 3.0) == doctest::Approx(1.5627795694305632).epsilon(1e-15));
  CHECK(std::abs(true_entropy_gaussian(1.0 / (2 * std::numbers::pi * std::numbers::e))) < 1e-15);
  CHECK_THROWS_AS(true_entropy_gaussian(0.0), std::invalid_argument);
}

TEST_CASE("quadrature entropy oracles")
{
  CHECK(std::abs(quadrature_entropy([](double) { return 1.0; }, 0.0, 1.0, 1e-8)) < 1e-6);
  CHECK(std::abs(quadrature_entropy([](double x) { return normal_pdf(x, 1.0); }, -12, 12, 1e-10) -
                 1.4189385332046727) < 1e-6);
  const InnovationModel logistic(InnovationFamily::logistic, 1.0);
  CHECK(std::abs(quadrature_entropy([&](double x) { return logistic.density(x); }, -60, 60,
                                    1e-10) -
                 2.0) < 1e-6);
  // 0 log 0 = 0
  CHECK(quadrature_entropy([](double) { return 0.0; }, 0.0, 1.0) == 0.0);
}

TEST_CASE("truncated true term")
{
  auto phi = [](double x) { return normal_pdf(x, 1.0); };
  LevelSet all;
  all.intervals.push_back({ 0, 1, -12.0, 12.0 });
  CHECK(std::abs(truncated_true_term(phi, all) - 1.4189385332046727) < 1e-6);
  CHECK(truncated_true_term(phi, LevelSet{}) == 0.0);

  LevelSet unit;
  unit.intervals.push_back({ 0, 1, -1.0, 1.0 });
  // -∫_{-1}^{1} φ log φ from mpmath
  CHECK(std::abs(truncated_true_term(phi, unit) - 0.72672370208809628) < 1e-9);
}

TEST_CASE("estimator on the true density converges to the entropy")
{
  const double variance = 4.0 / 3.0;
  const Grid grid(-12.0, 12.0, 24001);
  const auto truth = synthetic(grid, [&](double x) { return normal_pdf(x, variance); });
  const double exact = true_entropy_gaussian(variance);
  double previous = std::abs(integral_estimator(truth, 1e-2).value - exact);
  for (double gamma : { 1e-4, 1e-6, 1e-9, 1e-14 }) {
    const double err = std::abs(integral_estimator(truth, gamma).value - exact);
    CHECK(err < previous);
    previous = err;
  }
  CHECK(previous < 1e-8);
}

TEST_CASE("marginal density by convolution: gaussian closure")
{
  const InnovationModel gauss(InnovationFamily::gaussian, 1.0);
  const auto coeffs = materialize_coefficients(Geometric{ 0.5 }, 40);
  const Grid grid(-10.0, 10.0, 2001);
  const auto table = marginal_density_by_convolution(gauss, coeffs, grid);
  double worst = 0.0;
  for (std::size_t j = 0; j < grid.points(); ++j)
    worst = std::max(worst, std::abs(table.values()[j] - normal_pdf(grid.node(j), 4.0 / 3.0)));
  CHECK(worst < 1e-6);
  CHECK(table(20.0) == 0.0);
  CHECK(table(0.123) == doctest::Approx(normal_pdf(0.123, 4.0 / 3.0)).epsilon(1e-6));
}

TEST_CASE("marginal density by convolution: identity filter and logistic pair")
{
  const InnovationModel logistic(InnovationFamily::logistic, 1.0);
  const Grid grid(-50.0, 50.0, 4001);
  const auto identity =
    marginal_density_by_convolution(logistic, materialize_coefficients(FiniteCoefficients{ { 1.0 } }, 0), grid);
  for (std::size_t j = 0; j < grid.points(); j += 37)
    CHECK(identity.values()[j] == doctest::Approx(logistic.density(grid.node(j))).epsilon(1e-12));

  const auto pair = marginal_density_by_convolution(
    logistic, materialize_coefficients(FiniteCoefficients{ { 1.0, 0.5 } }, 1), grid);
  CHECK(std::abs(pair.mass() - 1.0) < 1e-6);
  std::vector<double> second(grid.points());
  for (std::size_t j = 0; j < grid.points(); ++j)
    second[j] = grid.node(j) * grid.node(j) * pair.values()[j];
  // variances add: (1 + 0.25) pi^2 / 3
  CHECK(std::abs(trapezoid(second, grid.spacing()) - 4.1123351671205661) < 1e-3);
}

TEST_CASE("marginal density reports a narrow grid")
{
  const InnovationModel gauss(InnovationFamily::gaussian, 1.0);
  const auto coeffs = materialize_coefficients(Geometric{ 0.5 }, 20);
  CHECK_THROWS_WITH_AS(marginal_density_by_convolution(gauss, coeffs, Grid(-2.0, 2.0, 401)),
                       doctest::Contains("mass deficit"), std::invalid_argument);
  CHECK_THROWS_AS(marginal_density_by_convolution(
                    gauss, materialize_coefficients(FiniteCoefficients{ { 0.0 } }, 0),
                    Grid(-2.0, 2.0, 401)),
                  std::invalid_argument);
}

TEST_CASE("convolution oracle handles sign changes and gaps in the coefficients")
{
  // X = ε_0 - 0.6 ε_1 + 0.3 ε_3 is normal with variance 1.45
  const InnovationModel gauss(InnovationFamily::gaussian, 1.0);
  const auto coeffs = materialize_coefficients(FiniteCoefficients{ { 1.0, -0.6, 0.0, 0.3 } }, 3);
  const Grid grid(-12.0, 12.0, 2401);
  const auto table = marginal_density_by_convolution(gauss, coeffs, grid);
  double worst = 0.0;
  for (std::size_t j = 0; j < grid.points(); ++j)
    worst = std::max(worst, std::abs(table.values()[j] - normal_pdf(grid.node(j), 1.45)));
  CHECK(worst < 1e-6);
}
