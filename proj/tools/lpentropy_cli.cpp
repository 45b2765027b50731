// Command-line front end: simulate, kde, entropy, convergence, validate.

#include "lpentropy/config.hpp"
#include "lpentropy/entropy.hpp"
#include "lpentropy/experiments.hpp"
#include "lpentropy/format.hpp"
#include "lpentropy/kde.hpp"
#include "lpentropy/kernels.hpp"
#include "lpentropy/linear_process.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <map>
#include <optional>

namespace {

constexpr int exit_ok = 0;
constexpr int exit_error = 1;
constexpr int exit_rate_failure = 2;

struct ProcessFlags
{
  std::string innovations = "gaussian";
  double scale = 1.0;
  std::string coefficients = "geometric:0.5";
  std::optional<std::size_t> truncation;
  double tail_tolerance = 1e-12;
  std::size_t n = 1000;
  std::uint64_t seed = 42;
  std::uint64_t stream = 0;
  bool allow_long_memory = false;

  void attach(CLI::App* app)
  {
    app->add_option("--innovations", innovations, "gaussian or logistic");
    app->add_option("--innovation-scale", scale, "innovation scale parameter");
    app->add_option("--coefficients", coefficients,
                    "geometric:RHO | finite:A0,A1,... | hyperbolic:BETA");
    app->add_option("--truncation", truncation, "explicit truncation length m");
    app->add_option("--tail-tolerance", tail_tolerance, "max squared tail mass when m is derived");
    app->add_option("-n,--n", n, "series length");
    app->add_option("--seed", seed, "random seed");
    app->add_option("--stream", stream, "random stream index");
    app->add_flag("--allow-long-memory", allow_long_memory,
                  "simulate even when the coefficients have long memory");
  }

  lpe::InnovationModel model() const
  {
    return lpe::InnovationModel::from_name(innovations, scale);
  }

  lpe::CoefficientSequence sequence() const
  {
    const auto scheme = lpe::parse_scheme(coefficients);
    return truncation ? lpe::materialize_coefficients(scheme, *truncation)
                      : lpe::materialize_with_tolerance(scheme, tail_tolerance);
  }

  lpe::SampleSeries simulate() const
  {
    return lpe::simulate(model(), sequence(), n, seed, stream,
                         { .allow_long_memory = allow_long_memory });
  }
};

struct KdeFlags
{
  std::string kernel = "epanechnikov";
  double bandwidth_c = 1.0;
  std::size_t grid_points_per_h = 8;

  void attach(CLI::App* app)
  {
    app->add_option("--kernel", kernel, "epanechnikov, biweight, triweight or cosine");
    app->add_option("--bandwidth-c", bandwidth_c, "bandwidth constant c in c (log n / n)^(1/5)");
    app->add_option("--grid-points-per-h", grid_points_per_h, "grid nodes per bandwidth (>= 4)");
  }
};

class OutputSink
{
public:
  explicit OutputSink(const std::string& path)
  {
    if (!path.empty() && path != "-") {
      file_.open(path);
      if (!file_)
        throw std::runtime_error("cannot open output file '" + path + "'");
    }
  }
  std::ostream& stream() { return file_.is_open() ? file_ : std::cout; }

private:
  std::ofstream file_;
};

lpe::SampleSeries
load_series(const std::string& path)
{
  std::ifstream in(path);
  if (!in)
    throw std::runtime_error("cannot open series file '" + path + "'");
  return lpe::read_series_csv(in);
}

} // namespace

int
main(int argc, char** argv)
{
  CLI::App app{ "Shannon entropy estimation for short-memory linear processes" };
  app.require_subcommand(1);

  // simulate
  auto* simulate_cmd = app.add_subcommand("simulate", "emit a simulated series as CSV");
  ProcessFlags sim_process;
  std::string sim_output;
  sim_process.attach(simulate_cmd);
  simulate_cmd->add_option("-o,--output", sim_output, "output path (default stdout)");

  // kde
  auto* kde_cmd = app.add_subcommand("kde", "kernel density estimate of a series CSV");
  std::string kde_input;
  std::string kde_output;
  KdeFlags kde_flags;
  kde_cmd->add_option("-i,--input", kde_input, "series CSV")->required();
  kde_cmd->add_option("-o,--output", kde_output, "output path (default stdout)");
  kde_flags.attach(kde_cmd);

  // entropy
  auto* entropy_cmd = app.add_subcommand("entropy", "single integral entropy estimate");
  std::string entropy_input;
  ProcessFlags entropy_process;
  KdeFlags entropy_kde;
  double gamma_c = 1.0;
  double gamma_kappa = 0.8;
  std::string entropy_oracle;
  entropy_cmd->add_option("-i,--input", entropy_input,
                          "series CSV (otherwise the process flags are simulated)");
  entropy_process.attach(entropy_cmd);
  entropy_kde.attach(entropy_cmd);
  entropy_cmd->add_option("--gamma-c", gamma_c, "threshold constant c_gamma");
  entropy_cmd->add_option("--gamma-kappa", gamma_kappa, "threshold exponent kappa in (0,1)");
  entropy_cmd->add_option("--oracle", entropy_oracle, "gaussian or convolution")
    ->check(CLI::IsMember({ "gaussian", "convolution" }));

  // convergence
  auto* convergence_cmd =
    app.add_subcommand("convergence", "Monte Carlo convergence and rate experiment");
  std::optional<std::string> config_path;
  std::map<std::string, std::string> config_flags;
  convergence_cmd->add_option("--config", config_path, "key = value config file");
  for (const auto& key : lpe::config_keys()) {
    std::string flag = key;
    std::replace(flag.begin(), flag.end(), '_', '-');
    if (key == "output")
      flag = "-o,--output";
    else
      flag = "--" + flag;
    convergence_cmd->add_option_function<std::string>(
      flag, [&config_flags, key](const std::string& v) { config_flags[key] = v; },
      "overrides config key " + key);
  }

  // validate
  auto* validate_cmd = app.add_subcommand("validate", "kernel and innovation condition reports");
  std::vector<std::string> validate_kernels;
  std::string validate_innovations = "gaussian";
  double validate_scale = 1.0;
  std::size_t quadrature_points = 64;
  double grid_halfwidth = 40.0;
  std::size_t grid_points = 40001;
  validate_cmd->add_option("--kernel", validate_kernels, "kernels to check (default: all)");
  validate_cmd->add_option("--innovations", validate_innovations, "gaussian or logistic");
  validate_cmd->add_option("--innovation-scale", validate_scale, "innovation scale");
  validate_cmd->add_option("--quadrature-points", quadrature_points, "Gauss-Legendre points");
  validate_cmd->add_option("--grid-halfwidth", grid_halfwidth, "density check half width (in scale units)");
  validate_cmd->add_option("--grid-points", grid_points, "density check grid points");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    // help and version requests exit 0; every other parse failure is an error
    return app.exit(e) == 0 ? exit_ok : exit_error;
  }

  try {
    if (*simulate_cmd) {
      OutputSink sink(sim_output);
      lpe::write_series_csv(sink.stream(), sim_process.simulate());
      return exit_ok;
    }

    if (*kde_cmd) {
      const auto series = load_series(kde_input);
      if (series.size() < 3)
        throw std::invalid_argument("kde needs at least 3 values");
      const auto kernel = lpe::Kernel::from_name(kde_flags.kernel);
      const double h = lpe::bandwidth(series.size(), { kde_flags.bandwidth_c });
      const auto grid =
        lpe::default_grid(series.values, h, kernel, kde_flags.grid_points_per_h);
      const auto est = lpe::kde_on_grid(series.values, kernel, h, grid);
      OutputSink sink(kde_output);
      auto& out = sink.stream();
      out << "x,f_n\n";
      for (std::size_t j = 0; j < grid.points(); ++j)
        out << lpe::format_double(grid.node(j)) << ',' << lpe::format_double(est.values[j])
            << '\n';
      return exit_ok;
    }

    if (*entropy_cmd) {
      const auto series =
        entropy_input.empty() ? entropy_process.simulate() : load_series(entropy_input);
      const auto n = series.size();
      const auto kernel = lpe::Kernel::from_name(entropy_kde.kernel);
      const lpe::ThresholdRule rule{ gamma_c, gamma_kappa };
      const auto th = lpe::threshold(n, rule, { entropy_kde.bandwidth_c });
      const auto grid =
        lpe::default_grid(series.values, th.bandwidth, kernel, entropy_kde.grid_points_per_h);
      const auto est = lpe::kde_on_grid(series.values, kernel, th.bandwidth, grid);
      const auto s = lpe::integral_estimator(est, th.gamma);

      std::cout << "n=" << n << '\n'
                << "h_n=" << lpe::format_double(th.bandwidth) << '\n'
                << "gamma_n=" << lpe::format_double(th.gamma) << '\n'
                << "S_n=" << lpe::format_double(s.value) << '\n'
                << "level_set_intervals=" << s.interval_count() << '\n'
                << "level_set_mass=" << lpe::format_double(s.mass()) << '\n'
                << "level_set_length=" << lpe::format_double(s.level_set.total_length) << '\n';
      if (!th.above_bandwidth)
        std::cerr << "warning: gamma_n <= h_n at this n\n";
      if (s.level_set.empty())
        std::cerr << "warning: level set is empty (gamma_n exceeds max f_n)\n";

      if (!entropy_oracle.empty()) {
        lpe::ExperimentConfig cfg;
        cfg.innovations = entropy_process.model();
        cfg.coefficients = lpe::parse_scheme(entropy_process.coefficients);
        cfg.truncation = entropy_process.truncation;
        cfg.tail_tolerance = entropy_process.tail_tolerance;
        cfg.oracle = lpe::parse_oracle(entropy_oracle);
        const auto oracle = lpe::build_oracle(cfg);
        const double truncated = lpe::truncated_true_term(oracle.density, s.level_set);
        std::cout << "S_true=" << lpe::format_double(oracle.entropy) << '\n'
                  << "abs_error=" << lpe::format_double(std::abs(s.value - oracle.entropy))
                  << '\n'
                  << "truncated_term=" << lpe::format_double(truncated) << '\n';
      }
      return exit_ok;
    }

    if (*convergence_cmd) {
      lpe::Settings overrides(config_flags.begin(), config_flags.end());
      const auto cfg = lpe::parse_config(config_path, overrides);
      const bool rate_check =
        cfg.sample_sizes.size() >= 2 && cfg.sample_sizes.back() >= 4 * cfg.sample_sizes.front();
      const auto report = rate_check ? lpe::run_rate_check(cfg) : lpe::run_convergence(cfg);
      {
        OutputSink sink(cfg.output);
        lpe::write_report_csv(sink.stream(), report);
      }
      for (const auto& v : report.verdicts)
        std::cerr << (v.passed ? "PASS " : "FAIL ") << v.name << ": " << v.large_value
                  << " (n=" << v.large_n << ") vs " << v.small_value << " (n=" << v.small_n
                  << "), bound " << v.bound << (v.gating ? "" : " [diagnostic]") << '\n';
      return report.gating_verdicts_passed() ? exit_ok : exit_rate_failure;
    }

    if (*validate_cmd) {
      bool all = true;
      std::vector<lpe::Kernel> kernels;
      if (validate_kernels.empty())
        kernels = lpe::Kernel::builtins();
      for (const auto& name : validate_kernels)
        kernels.push_back(lpe::Kernel::from_name(name));
      for (const auto& k : kernels) {
        const auto report = lpe::validate_kernel(k, quadrature_points);
        std::cout << "kernel " << report.kernel << '\n';
        for (const auto& c : report.checks)
          std::cout << "  " << (c.passed ? "pass" : "FAIL") << "  " << c.name << ": "
                    << c.detail << '\n';
        all = all && report.all_passed();
      }
      const auto model = lpe::InnovationModel::from_name(validate_innovations, validate_scale);
      const auto density = lpe::validate_density_conditions(
        model, grid_halfwidth * validate_scale, grid_points);
      std::cout << "innovations " << model.name() << " scale=" << validate_scale << '\n';
      for (const auto& c : density.checks)
        std::cout << "  " << (c.passed ? "pass" : "FAIL") << "  " << c.name << ": " << c.detail
                  << '\n';
      all = all && density.all_passed();
      return all ? exit_ok : exit_error;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return exit_error;
  }
  return exit_ok;
}
