#pragma once

#include "lpentropy/config.hpp"
#include "lpentropy/entropy.hpp"

#include <iosfwd>
#include <string>
#include <vector>

namespace lpe {

//! True marginal law used to score estimates.
struct Oracle
{
  OracleKind kind;
  ScalarFunction density;
  double entropy;
  //! interval holding all but a negligible part of the mass
  double lower;
  double upper;
};

Oracle
build_oracle(const ExperimentConfig& config);

//! One (n, replicate) cell of an experiment.
struct ReplicateRow
{
  std::size_t n;
  std::size_t replicate;
  double s_n;
  double s_true;
  double abs_error;
  double truncated_term;
  double scaled_stat_thm1;   // (n γ⁵ / log n)^{2/5} |S_n - truncated_term|
  double sup_kde_error;
  double scaled_stat_lemma1; // (n / log n)^{2/5} sup |f_n - f|
};

struct SummaryRow
{
  std::size_t n;
  std::size_t replicates;
  double median_abs_error;
  double mean_abs_error;
  double rms_error; // sqrt(mse)
  double mse;       // mean (S_n - S_true)^2
  double median_scaled_thm1;
  double rms_scaled_thm1;
  double median_scaled_lemma1;
  double median_truncation_gap; // median |S_true - truncated_term|
};

struct Verdict
{
  std::string name;
  std::size_t small_n;
  std::size_t large_n;
  double small_value;
  double large_value;
  double ratio;
  double bound;
  bool passed;
  //! gating verdicts decide the exit status; the others are diagnostics
  bool gating;
};

struct ConvergenceReport
{
  std::vector<std::string> config;
  std::vector<ReplicateRow> rows;
  std::vector<SummaryRow> summary;
  std::vector<Verdict> verdicts;

  bool gating_verdicts_passed() const;
};

double
median(std::vector<double> values);

double
root_mean_square(const std::vector<double>& values);

//! Per-n statistics recomputed from the rows.
std::vector<SummaryRow>
summarize(const std::vector<ReplicateRow>& rows);

//! Computes one cell; the random stream is keyed by (seed, n, replicate).
ReplicateRow
run_replicate(const ExperimentConfig& config,
              const CoefficientSequence& coeffs,
              const Oracle& oracle,
              std::size_t n,
              std::size_t replicate);

//! Every (n, replicate) cell, evaluated on `config.threads` workers and
//! stored in (n, replicate) order.
ConvergenceReport
run_convergence(const ExperimentConfig& config);

//! Ratio verdicts between the largest and smallest sample size. Requires two
//! or more sizes whose extremes differ by a factor of at least 4.
std::vector<Verdict>
rate_verdicts(const std::vector<SummaryRow>& summary);

ConvergenceReport
run_rate_check(const ExperimentConfig& config);

void
write_report_csv(std::ostream& out, const ConvergenceReport& report);

std::string
report_to_csv(const ConvergenceReport& report);

//! Inverse of write_report_csv (config echo, rows, summary, verdicts).
ConvergenceReport
read_report_csv(std::istream& in);

//! sup_x |mean over replicates of f_n(x) - f(x)| at n and factor·n, compared
//! with the ratio of squared bandwidths.
struct BiasCheck
{
  std::size_t small_n;
  std::size_t large_n;
  double small_bandwidth;
  double large_bandwidth;
  double small_bias;
  double large_bias;
  //! (large_bias / small_bias) / (large_h / small_h)^2
  double relative_scaling;
  bool passed; // relative_scaling within [1/2, 2]
};

BiasCheck
run_bias_check(const ExperimentConfig& config,
               std::size_t n,
               std::size_t factor = 16,
               std::size_t replicates = 200);

} // namespace lpe
