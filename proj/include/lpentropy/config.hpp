#pragma once

#include "lpentropy/entropy.hpp"
#include "lpentropy/innovations.hpp"
#include "lpentropy/kde.hpp"
#include "lpentropy/kernels.hpp"
#include "lpentropy/linear_process.hpp"

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace lpe {

enum class OracleKind
{
  gaussian,
  convolution
};

OracleKind
parse_oracle(const std::string& name);

std::string_view
to_string(OracleKind kind);

struct ExperimentConfig
{
  InnovationModel innovations{ InnovationFamily::gaussian, 1.0 };
  CoefficientScheme coefficients = Geometric{ 0.5 };
  std::optional<std::size_t> truncation;
  double tail_tolerance = 1e-12;
  std::vector<std::size_t> sample_sizes;
  std::size_t replicates = 50;
  std::uint64_t seed = 42;
  BandwidthRule bandwidth;
  ThresholdRule threshold;
  Kernel kernel;
  std::size_t grid_points_per_bandwidth = 8;
  OracleKind oracle = OracleKind::gaussian;
  bool allow_long_memory = false;
  std::string output;
  //! Execution only; never changes results.
  unsigned threads = 1;

  CoefficientSequence coefficient_sequence() const;
};

//! Ordered key/value pairs, as read from a file or collected from flags.
using Settings = std::vector<std::pair<std::string, std::string>>;

class ConfigError : public std::invalid_argument
{
public:
  using std::invalid_argument::invalid_argument;
};

//! Every recognised key, in canonical order. CLI flags are the same names
//! with '-' for '_'.
const std::vector<std::string>&
config_keys();

//! Flat `key = value` lines, `#` starts a comment. Unknown and duplicate keys
//! are errors naming the source and line.
Settings
parse_settings(const std::string& text, const std::string& source = "<config>");

Settings
read_settings_file(const std::string& path);

//! Fills defaults and checks invariants. `coefficients` and `sample_sizes`
//! are required.
ExperimentConfig
resolve_config(const Settings& settings);

//! File settings (if any) overridden key by key by `overrides`.
ExperimentConfig
parse_config(const std::optional<std::string>& path, const Settings& overrides = {});

//! Resolved configuration as `key=value` lines, excluding execution-only
//! keys (threads, output).
std::vector<std::string>
canonical_config(const ExperimentConfig& config);

} // namespace lpe
