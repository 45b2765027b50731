#include "lpentropy/linear_process.hpp"

#include "lpentropy/format.hpp"

#include <cmath>
#include <istream>
#include <limits>
#include <numeric>
#include <ostream>
#include <sstream>

namespace lpe {

namespace {

template<class... Ts>
struct overloaded : Ts...
{
  using Ts::operator()...;
};
template<class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

double
hyperbolic_tail_bound(double beta, std::size_t truncation)
{
  // Σ_{k>=m+2} k^{-2β} <= ∫_{m+1}^∞ x^{-2β} dx
  const double start = static_cast<double>(truncation) + 1.0;
  return std::pow(start, 1.0 - 2.0 * beta) / (2.0 * beta - 1.0);
}

} // namespace

void
validate_scheme(const CoefficientScheme& scheme)
{
  std::visit(overloaded{
               [](const Geometric& g) {
                 if (!(std::abs(g.rho) < 1.0))
                   throw std::invalid_argument(
                     "geometric coefficients need |rho| < 1");
               },
               [](const FiniteCoefficients& f) {
                 if (f.values.empty())
                   throw std::invalid_argument(
                     "finite coefficient list must not be empty");
                 for (double v : f.values)
                   if (!std::isfinite(v))
                     throw std::invalid_argument(
                       "finite coefficients must be finite reals");
               },
               [](const Hyperbolic& h) {
                 if (!(h.beta > 0.5))
                   throw std::invalid_argument(
                     "hyperbolic coefficients need beta > 1/2 for "
                     "square summability");
               } },
             scheme);
}

CoefficientScheme
parse_scheme(const std::string& text)
{
  const auto colon = text.find(':');
  if (colon == std::string::npos)
    throw std::invalid_argument("coefficient scheme '" + text +
                                "' must look like kind:params");
  const std::string kind(trim(std::string_view(text).substr(0, colon)));
  const std::string params = text.substr(colon + 1);

  CoefficientScheme scheme;
  if (kind == "geometric") {
    scheme = Geometric{ parse_double(params) };
  } else if (kind == "hyperbolic") {
    scheme = Hyperbolic{ parse_double(params) };
  } else if (kind == "finite") {
    FiniteCoefficients finite;
    std::stringstream stream(params);
    std::string item;
    while (std::getline(stream, item, ','))
      finite.values.push_back(parse_double(item));
    scheme = std::move(finite);
  } else {
    throw std::invalid_argument("unknown coefficient scheme '" + kind +
                                "' (expected geometric, finite or hyperbolic)");
  }
  validate_scheme(scheme);
  return scheme;
}

std::string
describe_scheme(const CoefficientScheme& scheme)
{
  return std::visit(overloaded{
                      [](const Geometric& g) {
                        return "geometric:" + format_double(g.rho);
                      },
                      [](const FiniteCoefficients& f) {
                        std::string out = "finite:";
                        for (std::size_t i = 0; i < f.values.size(); ++i)
                          out += (i ? "," : "") + format_double(f.values[i]);
                        return out;
                      },
                      [](const Hyperbolic& h) {
                        return "hyperbolic:" + format_double(h.beta);
                      } },
                    scheme);
}

CoefficientSequence
materialize_coefficients(const CoefficientScheme& scheme, std::size_t truncation)
{
  validate_scheme(scheme);
  if (truncation < 1 && !std::holds_alternative<FiniteCoefficients>(scheme))
    throw std::invalid_argument("truncation length must be >= 1");

  CoefficientSequence seq{ scheme, {}, 0.0 };
  std::visit(overloaded{
               [&](const Geometric& g) {
                 seq.coefficients.resize(truncation + 1);
                 double a = 1.0;
                 for (auto& c : seq.coefficients) {
                   c = a;
                   a *= g.rho;
                 }
                 const double r2 = g.rho * g.rho;
                 seq.tail_square_sum =
                   std::pow(r2, static_cast<double>(truncation + 1)) / (1.0 - r2);
               },
               [&](const FiniteCoefficients& f) {
                 const std::size_t kept = std::min(truncation + 1, f.values.size());
                 seq.coefficients.assign(f.values.begin(), f.values.begin() + kept);
                 for (std::size_t i = kept; i < f.values.size(); ++i)
                   seq.tail_square_sum += f.values[i] * f.values[i];
               },
               [&](const Hyperbolic& h) {
                 seq.coefficients.resize(truncation + 1);
                 for (std::size_t i = 0; i <= truncation; ++i)
                   seq.coefficients[i] =
                     std::pow(static_cast<double>(i) + 1.0, -h.beta);
                 seq.tail_square_sum = hyperbolic_tail_bound(h.beta, truncation);
               } },
             scheme);
  return seq;
}

std::size_t
truncation_for_tolerance(const CoefficientScheme& scheme,
                         double tail_tolerance,
                         std::size_t max_truncation)
{
  validate_scheme(scheme);
  if (!(tail_tolerance > 0.0))
    throw std::invalid_argument("tail tolerance must be positive");

  return std::visit(
    overloaded{
      [&](const Geometric& g) -> std::size_t {
        const double r2 = g.rho * g.rho;
        if (r2 == 0.0)
          return 1;
        // r2^(m+1) / (1 - r2) <= tol
        const double needed =
          std::log(tail_tolerance * (1.0 - r2)) / std::log(r2) - 1.0;
        auto m = static_cast<std::size_t>(std::max(1.0, std::ceil(needed)));
        while (m > 1 && std::pow(r2, static_cast<double>(m)) / (1.0 - r2) <=
                          tail_tolerance)
          --m;
        while (std::pow(r2, static_cast<double>(m + 1)) / (1.0 - r2) > tail_tolerance)
          ++m;
        if (m > max_truncation)
          throw std::invalid_argument("geometric tail needs too many terms");
        return m;
      },
      [](const FiniteCoefficients& f) -> std::size_t {
        return f.values.size() - 1;
      },
      [&](const Hyperbolic& h) -> std::size_t {
        // (m+1)^{1-2β} / (2β-1) <= tol
        const double exponent = 1.0 / (1.0 - 2.0 * h.beta);
        const double start = std::pow(tail_tolerance * (2.0 * h.beta - 1.0), exponent);
        const double m = std::ceil(start - 1.0);
        if (!(m <= static_cast<double>(max_truncation)))
          throw std::invalid_argument(
            "hyperbolic tail tolerance needs more than " +
            std::to_string(max_truncation) + " terms; pass an explicit truncation");
        return std::max<std::size_t>(1, static_cast<std::size_t>(m));
      } },
    scheme);
}

CoefficientSequence
materialize_with_tolerance(const CoefficientScheme& scheme, double tail_tolerance)
{
  return materialize_coefficients(scheme,
                                  truncation_for_tolerance(scheme, tail_tolerance));
}

std::string_view
to_string(Memory memory)
{
  return memory == Memory::short_range ? "short" : "long";
}

MemoryClass
classify_memory(const CoefficientSequence& coeffs)
{
  constexpr double inf = std::numeric_limits<double>::infinity();
  constexpr double nan = std::numeric_limits<double>::quiet_NaN();

  MemoryClass result = std::visit(
    overloaded{
      [](const Geometric& g) {
        return MemoryClass{ Memory::short_range, true,
                            1.0 / (1.0 - std::abs(g.rho)), 1.0 / (1.0 - g.rho) };
      },
      [](const FiniteCoefficients& f) {
        double abs_sum = 0.0;
        double sum = 0.0;
        for (double v : f.values) {
          abs_sum += std::abs(v);
          sum += v;
        }
        return MemoryClass{ Memory::short_range, true, abs_sum, sum };
      },
      [&](const Hyperbolic& h) {
        if (h.beta <= 1.0)
          return MemoryClass{ Memory::long_range, false, inf, nan };
        const double zeta = std::riemann_zeta(h.beta);
        return MemoryClass{ Memory::short_range, true, zeta, zeta };
      } },
    coeffs.scheme);

  // a sum that cancels to rounding level counts as zero
  if (result.absolutely_summable &&
      std::abs(result.sum) <= 1e-12 * std::max(result.absolute_sum, 1e-300))
    result.memory = Memory::long_range;
  return result;
}

SampleSeries
simulate(const InnovationModel& model,
         const CoefficientSequence& coeffs,
         std::size_t n,
         std::uint64_t seed,
         std::uint64_t stream,
         SimulationOptions options)
{
  if (n == 0)
    throw std::invalid_argument("simulate: n must be >= 1");
  if (coeffs.coefficients.empty())
    throw std::invalid_argument("simulate: empty coefficient sequence");

  const MemoryClass memory = classify_memory(coeffs);
  if (memory.memory == Memory::long_range && !options.allow_long_memory) {
    std::ostringstream msg;
    msg << "coefficients " << describe_scheme(coeffs.scheme)
        << " define a long-memory process (sum=" << memory.sum
        << ", absolute sum=" << memory.absolute_sum
        << "); the entropy rate results assume short memory. "
           "Set allow_long_memory to simulate anyway";
    throw LongMemoryError(msg.str());
  }

  const std::size_t m = coeffs.truncation();
  RandomStream rng(seed, stream);
  std::vector<double> innovations(n + m);
  fill_innovations(model, rng, innovations);

  SampleSeries series;
  series.values.resize(n);
  const auto& a = coeffs.coefficients;
  for (std::size_t t = 0; t < n; ++t) {
    // draws run backwards in time: innovations[k] is ε_{n-k}, so series
    // built with different truncations share every innovation they both use
    const double* eps = innovations.data() + (n - 1 - t);
    double x = 0.0;
    for (std::size_t i = 0; i <= m; ++i)
      x += a[i] * eps[i];
    if (!std::isfinite(x))
      throw std::runtime_error("simulate: non-finite value produced");
    series.values[t] = x;
  }

  series.provenance = {
    { "model", std::string(model.name()) },
    { "scale", format_double(model.scale()) },
    { "coefficients", describe_scheme(coeffs.scheme) },
    { "truncation", std::to_string(m) },
    { "tail_square_sum", format_double(coeffs.tail_square_sum) },
    { "n", std::to_string(n) },
    { "seed", std::to_string(seed) },
    { "stream", std::to_string(stream) },
    { "long_memory_override",
      memory.memory == Memory::long_range ? "true" : "false" },
  };
  return series;
}

double
stationary_variance(const CoefficientSequence& coeffs, const InnovationModel& model)
{
  double sum_sq = 0.0;
  for (double a : coeffs.coefficients)
    sum_sq += a * a;
  return model.variance() * (sum_sq + coeffs.tail_square_sum);
}

void
write_series_csv(std::ostream& out, const SampleSeries& series)
{
  out << "# lpentropy series\n";
  for (const auto& [key, value] : series.provenance)
    out << "# " << key << '=' << value << '\n';
  for (double v : series.values)
    out << format_double(v) << '\n';
}

SampleSeries
read_series_csv(std::istream& in)
{
  SampleSeries series;
  std::string line;
  std::size_t line_number = 0;
  while (std::getline(in, line)) {
    ++line_number;
    const std::string_view text = trim(line);
    if (text.empty())
      continue;
    if (text.front() == '#') {
      const std::string_view body = trim(text.substr(1));
      const auto eq = body.find('=');
      if (eq != std::string_view::npos)
        series.provenance.emplace_back(std::string(trim(body.substr(0, eq))),
                                       std::string(trim(body.substr(eq + 1))));
      continue;
    }
    try {
      const double v = parse_double(text);
      if (!std::isfinite(v))
        throw std::invalid_argument("non-finite value");
      series.values.push_back(v);
    } catch (const std::invalid_argument& e) {
      throw std::invalid_argument("series CSV line " + std::to_string(line_number) +
                                  ": " + e.what());
    }
  }
  if (series.values.empty())
    throw std::invalid_argument("series CSV contains no values");
  return series;
}

} // namespace lpe
