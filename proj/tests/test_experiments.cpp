#include "lpentropy/experiments.hpp"

#include <doctest.h>

#include <cmath>
#include <sstream>
#include <stdexcept>

using namespace lpe;

namespace {

ExperimentConfig
small_config(std::vector<std::size_t> sizes, std::size_t replicates)
{
  return resolve_config({ { "coefficients", "geometric:0.5" },
                          { "sample_sizes", [&] {
                              std::string s;
                              for (auto n : sizes)
                                s += (s.empty() ? "" : ",") + std::to_string(n);
                              return s;
                            }() },
                          { "replicates", std::to_string(replicates) } });
}

} // namespace

TEST_CASE("median and rms helpers")
{
  CHECK(median({ 3.0, 1.0, 2.0 }) == 2.0);
  CHECK(median({ 4.0, 1.0, 3.0, 2.0 }) == 2.5);
  CHECK(std::isnan(median({})));
  CHECK(root_mean_square({ 3.0, -4.0 }) == doctest::Approx(std::sqrt(12.5)));
}

TEST_CASE("single replicate smoke run")
{
  const auto cfg = small_config({ 1000 }, 1);
  const auto report = run_convergence(cfg);
  REQUIRE(report.rows.size() == 1);
  const auto& row = report.rows[0];
  CHECK(row.n == 1000);
  CHECK(std::isfinite(row.s_n));
  CHECK(row.s_true == doctest::Approx(1.5627795694305632));
  CHECK(row.sup_kde_error > 0.0);
  CHECK(row.sup_kde_error < 0.2);
  CHECK(row.abs_error == doctest::Approx(std::abs(row.s_n - row.s_true)));
  REQUIRE(report.summary.size() == 1);
  CHECK(report.summary[0].replicates == 1);
  CHECK(report.verdicts.empty());
}

TEST_CASE("reports are reproducible and independent of the thread count")
{
  auto cfg = small_config({ 500, 2000 }, 4);
  const auto first = report_to_csv(run_convergence(cfg));
  CHECK(report_to_csv(run_convergence(cfg)) == first);
  cfg.threads = 3;
  CHECK(report_to_csv(run_convergence(cfg)) == first);

  cfg.seed = 43;
  CHECK(report_to_csv(run_convergence(cfg)) != first);
}

TEST_CASE("more replicates extend, never reshuffle")
{
  const auto three = run_convergence(small_config({ 500, 2000 }, 3));
  const auto six = run_convergence(small_config({ 500, 2000 }, 6));
  for (std::size_t k = 0; k < 2; ++k)
    for (std::size_t r = 0; r < 3; ++r) {
      const auto& a = three.rows[k * 3 + r];
      const auto& b = six.rows[k * 6 + r];
      CHECK(a.n == b.n);
      CHECK(a.replicate == b.replicate);
      CHECK(a.s_n == b.s_n);
      CHECK(a.sup_kde_error == b.sup_kde_error);
    }
}

TEST_CASE("CSV round trip and recomputed summary")
{
  auto cfg = small_config({ 400, 1600 }, 5);
  const auto report = run_rate_check(cfg);
  const auto text = report_to_csv(report);
  std::istringstream in(text);
  const auto parsed = read_report_csv(in);
  CHECK(parsed.config == report.config);
  CHECK(parsed.rows.size() == 10);
  CHECK(parsed.verdicts.size() == report.verdicts.size());
  CHECK(report_to_csv(parsed) == text);

  // the summary is a pure function of the rows
  ConvergenceReport recomputed = parsed;
  recomputed.summary = summarize(parsed.rows);
  CHECK(report_to_csv(recomputed) == text);
}

TEST_CASE("rate check needs two well separated sizes")
{
  CHECK_THROWS_AS(run_rate_check(small_config({ 1000 }, 2)), std::invalid_argument);
  CHECK_THROWS_AS(run_rate_check(small_config({ 1000, 2000 }, 2)), std::invalid_argument);
  CHECK_THROWS_AS(rate_verdicts({}), std::invalid_argument);
}

TEST_CASE("verdicts compare without dividing by a zero baseline")
{
  SummaryRow small{ 1000, 10, 1.0, 1.0, 1.0, 1.0, 0.0, 0.0, 1.0, 0.5 };
  SummaryRow large{ 16000, 10, 0.5, 0.5, 0.5, 0.25, 0.3, 0.3, 1.5, 0.1 };
  const auto v = rate_verdicts({ small, large });
  REQUIRE(v.size() == 6);
  CHECK(v[0].name == "thm1_scaled_median");
  CHECK_FALSE(v[0].passed);
  CHECK(std::isinf(v[0].ratio));
  CHECK(v[2].passed); // 1.5 <= 2 * 1.0
  CHECK(v[3].passed);
  CHECK(v[4].passed);
  CHECK(v[5].passed);
  CHECK_FALSE(v[3].gating);
}

TEST_CASE("a constant threshold stalls the truncation gap")
{
  auto cfg = resolve_config({ { "coefficients", "geometric:0.5" },
                              { "sample_sizes", "1000,16000" },
                              { "replicates", "4" },
                              { "gamma_c", "0.2" },
                              { "gamma_kappa", "0" },
                              { "allow_nonvanishing_threshold", "true" },
                              { "threads", "4" } });
  const auto report = run_rate_check(cfg);
  const auto it = std::find_if(report.verdicts.begin(), report.verdicts.end(),
                               [](const Verdict& v) { return v.name == "truncation_gap_vanishing"; });
  REQUIRE(it != report.verdicts.end());
  CHECK_FALSE(it->passed);
  CHECK(report.summary.back().median_truncation_gap > 0.1);
}

TEST_CASE("convolution oracle matches the gaussian one")
{
  auto cfg = small_config({ 1000 }, 1);
  const auto gauss = build_oracle(cfg);
  cfg.oracle = OracleKind::convolution;
  const auto conv = build_oracle(cfg);
  CHECK(std::abs(gauss.entropy - conv.entropy) < 1e-7);
  for (double x : { -3.0, -0.7, 0.0, 0.2, 2.5 })
    CHECK(std::abs(gauss.density(x) - conv.density(x)) < 1e-7);
}

TEST_CASE("logistic innovations run through the convolution oracle")
{
  const auto cfg = resolve_config({ { "innovations", "logistic" },
                                    { "coefficients", "finite:1,0.5" },
                                    { "sample_sizes", "1000" },
                                    { "replicates", "2" },
                                    { "oracle", "convolution" } });
  const auto report = run_convergence(cfg);
  REQUIRE(report.rows.size() == 2);
  CHECK(std::isfinite(report.rows[0].s_true));
  // the marginal is more concentrated than a normal of the same variance
  CHECK(report.rows[0].s_true < true_entropy_gaussian(1.25 * 3.289868133696453));
}
