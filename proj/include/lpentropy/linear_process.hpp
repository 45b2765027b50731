#pragma once

#include "lpentropy/innovations.hpp"

#include <cstdint>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace lpe {

//! a_i = rho^i, |rho| < 1
struct Geometric
{
  double rho;
};

//! a_0..a_{k-1} given explicitly, zero afterwards
struct FiniteCoefficients
{
  std::vector<double> values;
};

//! a_i = (i + 1)^(-beta), beta > 1/2
struct Hyperbolic
{
  double beta;
};

using CoefficientScheme = std::variant<Geometric, FiniteCoefficients, Hyperbolic>;

//! Throws std::invalid_argument when the scheme is outside its parameter range.
void
validate_scheme(const CoefficientScheme& scheme);

//! "geometric:0.5", "finite:1,0.5", "hyperbolic:0.8"
CoefficientScheme
parse_scheme(const std::string& text);

std::string
describe_scheme(const CoefficientScheme& scheme);

//! Coefficients a_0..a_m of a scheme with its analytic tail mass.
struct CoefficientSequence
{
  CoefficientScheme scheme;
  std::vector<double> coefficients;
  //! Σ_{i>m} a_i^2 (exact for geometric and finite, upper bound for hyperbolic)
  double tail_square_sum = 0.0;

  std::size_t truncation() const { return coefficients.size() - 1; }
};

CoefficientSequence
materialize_coefficients(const CoefficientScheme& scheme, std::size_t truncation);

//! Smallest truncation whose tail square sum is at most `tail_tolerance`.
//! Finite schemes return their own length; throws if more than `max_truncation`
//! terms would be needed.
std::size_t
truncation_for_tolerance(const CoefficientScheme& scheme,
                         double tail_tolerance,
                         std::size_t max_truncation = 10'000'000);

CoefficientSequence
materialize_with_tolerance(const CoefficientScheme& scheme, double tail_tolerance);

enum class Memory
{
  short_range,
  long_range
};

std::string_view
to_string(Memory memory);

//! Scheme-level facts behind the memory classification.
struct MemoryClass
{
  Memory memory;
  bool absolutely_summable;
  double absolute_sum; // +inf when not summable
  double sum;          // NaN when not absolutely summable
};

//! Short memory means Σ|a_i| < ∞ and Σ a_i != 0; everything else is long.
MemoryClass
classify_memory(const CoefficientSequence& coeffs);

//! Signals that a simulation was requested for long-memory coefficients.
class LongMemoryError : public std::domain_error
{
public:
  using std::domain_error::domain_error;
};

struct SampleSeries
{
  std::vector<double> values;
  //! ordered key/value provenance, written as `# key=value` CSV comments
  std::vector<std::pair<std::string, std::string>> provenance;

  std::size_t size() const { return values.size(); }
};

struct SimulationOptions
{
  bool allow_long_memory = false;
};

//! X_t = Σ_{i=0}^{m} a_i ε_{t-i}, t = 1..n, from n + m fresh innovations
//! (ε_{1-m}..ε_n), so every X_t has its full truncated filter.
SampleSeries
simulate(const InnovationModel& model,
         const CoefficientSequence& coeffs,
         std::size_t n,
         std::uint64_t seed,
         std::uint64_t stream = 0,
         SimulationOptions options = {});

//! σ_ε^2 (Σ_{i<=m} a_i^2 + tail)
double
stationary_variance(const CoefficientSequence& coeffs, const InnovationModel& model);

void
write_series_csv(std::ostream& out, const SampleSeries& series);

SampleSeries
read_series_csv(std::istream& in);

} // namespace lpe
