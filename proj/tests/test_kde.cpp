#include "lpentropy/config.hpp"
#include "lpentropy/experiments.hpp"
#include "lpentropy/kde.hpp"
#include "lpentropy/linear_process.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>

using namespace lpe;

TEST_CASE("bandwidth rule")
{
  // (ln 100 / 100)^{1/5}
  CHECK(bandwidth(100) == doctest::Approx(0.540317628167279).epsilon(1e-14));
  CHECK(bandwidth(100, { 2.0 }) == doctest::Approx(2.0 * bandwidth(100)).epsilon(1e-15));
  double previous = bandwidth(20);
  for (std::size_t n = 21; n < 2'000'000; n = n * 3 / 2)
  {
    const double h = bandwidth(n);
    CHECK(h < previous);
    // log n = o(n h): n h / log n grows
    CHECK(static_cast<double>(n) * h / std::log(static_cast<double>(n)) > 1.0);
    previous = h;
  }
  CHECK_THROWS_AS(bandwidth(2), std::invalid_argument);
  CHECK_THROWS_AS(bandwidth(100, { 0.0 }), std::invalid_argument);
}

TEST_CASE("default grid spans the widened data range")
{
  const Kernel epa;
  const std::vector<double> data{ 0.0, -2.0, 3.0, 1.0 };
  const Grid g = default_grid(data, 0.5, epa, 8);
  CHECK(g.lower() == -2.5);
  CHECK(g.upper() == 3.5);
  CHECK(g.spacing() <= 0.5 / 8);
  CHECK(g.node(g.points() - 1) == 3.5);

  const std::vector<double> single{ 0.0 };
  const Grid s = default_grid(single, 1.0, epa, 5);
  CHECK(s.lower() == -1.0);
  CHECK(s.upper() == 1.0);
  CHECK(s.spacing() <= 0.2);

  CHECK_THROWS_AS(default_grid(std::vector<double>{}, 1.0, epa, 8), std::invalid_argument);
  CHECK_THROWS_AS(default_grid(single, 1.0, epa, 3), std::invalid_argument);
  CHECK_THROWS_AS(Grid(1.0, 1.0, 5), std::invalid_argument);
  CHECK_THROWS_AS(Grid(0.0, 1.0, 1), std::invalid_argument);
}

TEST_CASE("kde hand cases")
{
  const Kernel epa;
  const Grid g(-1.0, 1.0, 3); // nodes -1, 0, 1
  const std::vector<double> one{ 0.0 };
  CHECK(kde_on_grid(one, epa, 1.0, g).values[1] == 0.75);

  const std::vector<double> two{ -1.0, 1.0 };
  const auto est = kde_on_grid(two, epa, 1.0, g);
  CHECK(est.values[1] == 0.0);
  CHECK(est.values[0] == doctest::Approx(0.375));
}

TEST_CASE("windowed evaluation equals the double loop")
{
  std::mt19937_64 rng(2024);
  for (int instance = 0; instance < 20; ++instance) {
    std::uniform_int_distribution<std::size_t> size(1, 2000);
    std::normal_distribution<double> normal(0.0, 1.0 + instance % 3);
    std::vector<double> x(size(rng));
    for (auto& v : x)
      v = normal(rng);
    const auto& k = Kernel::builtins()[instance % 4];
    const double h = bandwidth(std::max<std::size_t>(x.size(), 3)) * (0.5 + instance % 2);
    const Grid grid = default_grid(x, h, k, 4 + instance % 5);
    const auto fast = kde_on_grid(x, k, h, grid);
    const auto slow = kde_on_grid_naive(x, k, h, grid);
    double worst = 0.0;
    for (std::size_t j = 0; j < grid.points(); ++j)
      worst = std::max(worst, std::abs(fast.values[j] - slow.values[j]));
    CHECK(worst <= 1e-12);

    // estimate is a density on its default grid and never negative
    CHECK(std::abs(fast.integral() - 1.0) <= 1e-3);
    for (double v : fast.values)
      CHECK(v >= 0.0);
  }
}

TEST_CASE("estimate is exactly zero far from every sample")
{
  const Kernel epa;
  const std::vector<double> x{ -3.0, 3.0 };
  const Grid grid(-5.0, 5.0, 1001);
  const auto est = kde_on_grid(x, epa, 0.5, grid);
  for (std::size_t j = 0; j < grid.points(); ++j) {
    const double node = grid.node(j);
    if (std::abs(node + 3.0) > 0.5 && std::abs(node - 3.0) > 0.5)
      CHECK(est.values[j] == 0.0);
  }
}

TEST_CASE("sup_error")
{
  const Kernel epa;
  const std::vector<double> x{ -0.3, 0.1, 0.4 };
  const Grid grid = default_grid(x, 0.6, epa, 8);
  const auto est = kde_on_grid(x, epa, 0.6, grid);

  // the estimate's own piecewise-linear interpolant, zero off the grid
  auto interpolant = [&](double t) {
    if (t < grid.lower() || t > grid.upper())
      return 0.0;
    const double pos = (t - grid.lower()) / grid.spacing();
    const auto j = std::min<std::size_t>(static_cast<std::size_t>(pos), grid.points() - 2);
    const double w = pos - static_cast<double>(j);
    return (1 - w) * est.values[j] + w * est.values[j + 1];
  };
  const auto self = sup_error(est, interpolant);
  CHECK(self.value == doctest::Approx(0.0).epsilon(1e-15));

  // a wide normal keeps mass outside the grid; the tail term picks it up
  auto wide = [](double t) { return std::exp(-0.5 * t * t / 25.0) / std::sqrt(50 * std::numbers::pi); };
  const auto tail = sup_error(est, wide);
  CHECK(tail.tail_sup == doctest::Approx(std::max(wide(grid.lower()), wide(grid.upper()))));
  CHECK(tail.value >= tail.tail_sup);
  CHECK(tail.value == std::max(tail.grid_max, tail.tail_sup));
}

TEST_CASE("sup-norm error shrinks at the (log n / n)^{2/5} rate")
{
  ExperimentConfig cfg;
  cfg.sample_sizes = { 500, 8000 };
  cfg.replicates = 50;
  cfg.threads = 4;
  const auto coeffs = cfg.coefficient_sequence();
  const Oracle oracle = build_oracle(cfg);
  std::vector<double> small, large;
  for (std::size_t r = 0; r < cfg.replicates; ++r) {
    small.push_back(run_replicate(cfg, coeffs, oracle, 500, r).sup_kde_error);
    large.push_back(run_replicate(cfg, coeffs, oracle, 8000, r).sup_kde_error);
  }
  const double observed = median(small) / median(large);
  const double predicted =
    std::pow((std::log(500.0) / 500.0) / (std::log(8000.0) / 8000.0), 0.4);
  CHECK(observed >= predicted / 2.0);
  CHECK(observed <= predicted * 2.0);
}

TEST_CASE("mean estimate bias scales like h^2")
{
  ExperimentConfig cfg;
  cfg.sample_sizes = { 500 };
  cfg.threads = 4;
  const auto check = run_bias_check(cfg, 500, 16, 200);
  CAPTURE(check.small_bias);
  CAPTURE(check.large_bias);
  CAPTURE(check.relative_scaling);
  CHECK(check.passed);
  CHECK(check.large_bias < check.small_bias);

  // with c = 2 the bias dominates the Monte Carlo noise of the mean
  cfg.bandwidth.constant = 2.0;
  const auto wide = run_bias_check(cfg, 500, 16, 200);
  CAPTURE(wide.relative_scaling);
  CHECK(std::abs(wide.relative_scaling - 1.0) < 0.25);
}
