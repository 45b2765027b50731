#include "lpentropy/config.hpp"

#include "lpentropy/format.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <map>
#include <sstream>

namespace lpe {

OracleKind
parse_oracle(const std::string& name)
{
  if (name == "gaussian")
    return OracleKind::gaussian;
  if (name == "convolution")
    return OracleKind::convolution;
  throw ConfigError("oracle must be 'gaussian' or 'convolution', got '" + name + "'");
}

std::string_view
to_string(OracleKind kind)
{
  return kind == OracleKind::gaussian ? "gaussian" : "convolution";
}

CoefficientSequence
ExperimentConfig::coefficient_sequence() const
{
  return truncation ? materialize_coefficients(coefficients, *truncation)
                    : materialize_with_tolerance(coefficients, tail_tolerance);
}

const std::vector<std::string>&
config_keys()
{
  static const std::vector<std::string> keys{
    "innovations",  "innovation_scale", "coefficients",      "truncation",
    "tail_tolerance", "sample_sizes",   "replicates",        "seed",
    "bandwidth_c",  "gamma_c",          "gamma_kappa",       "kernel",
    "grid_points_per_h", "oracle",      "allow_long_memory", "allow_nonvanishing_threshold",
    "output",       "threads",
  };
  return keys;
}

Settings
parse_settings(const std::string& text, const std::string& source)
{
  const auto& keys = config_keys();
  Settings settings;
  std::map<std::string, std::size_t> seen;
  std::istringstream in(text);
  std::string raw;
  std::size_t line_number = 0;
  while (std::getline(in, raw)) {
    ++line_number;
    const auto where = source + ":" + std::to_string(line_number);
    std::string_view line = raw;
    if (const auto hash = line.find('#'); hash != std::string_view::npos)
      line = line.substr(0, hash);
    line = trim(line);
    if (line.empty())
      continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos)
      throw ConfigError(where + ": expected key = value");
    const std::string key(trim(line.substr(0, eq)));
    const std::string value(trim(line.substr(eq + 1)));
    if (std::find(keys.begin(), keys.end(), key) == keys.end())
      throw ConfigError(where + ": unknown key '" + key + "'");
    if (auto [it, fresh] = seen.emplace(key, line_number); !fresh)
      throw ConfigError(where + ": duplicate key '" + key + "' (first set on line " +
                        std::to_string(it->second) + ")");
    settings.emplace_back(key, value);
  }
  return settings;
}

Settings
read_settings_file(const std::string& path)
{
  std::ifstream in(path);
  if (!in)
    throw ConfigError("cannot open config file '" + path + "'");
  std::ostringstream text;
  text << in.rdbuf();
  return parse_settings(text.str(), path);
}

namespace {

std::uint64_t
parse_unsigned(const std::string& key, const std::string& value)
{
  std::uint64_t out = 0;
  const auto* end = value.data() + value.size();
  const auto result = std::from_chars(value.data(), end, out);
  if (value.empty() || result.ec != std::errc() || result.ptr != end)
    throw ConfigError(key + ": expected a non-negative integer, got '" + value + "'");
  return out;
}

double
parse_real(const std::string& key, const std::string& value)
{
  try {
    return parse_double(value);
  } catch (const std::invalid_argument&) {
    throw ConfigError(key + ": expected a real number, got '" + value + "'");
  }
}

bool
parse_bool(const std::string& key, const std::string& value)
{
  if (value == "true" || value == "1" || value == "yes")
    return true;
  if (value == "false" || value == "0" || value == "no")
    return false;
  throw ConfigError(key + ": expected true or false, got '" + value + "'");
}

} // namespace

ExperimentConfig
resolve_config(const Settings& settings)
{
  std::map<std::string, std::string> values;
  for (const auto& [key, value] : settings) {
    if (std::find(config_keys().begin(), config_keys().end(), key) == config_keys().end())
      throw ConfigError("unknown key '" + key + "'");
    values[key] = value;
  }
  auto get = [&](const std::string& key) -> const std::string* {
    auto it = values.find(key);
    return it == values.end() ? nullptr : &it->second;
  };

  ExperimentConfig cfg;
  try {
    const std::string family = get("innovations") ? *get("innovations") : "gaussian";
    const double scale =
      get("innovation_scale") ? parse_real("innovation_scale", *get("innovation_scale")) : 1.0;
    cfg.innovations = InnovationModel::from_name(family, scale);

    if (!get("coefficients"))
      throw ConfigError("missing required key 'coefficients'");
    cfg.coefficients = parse_scheme(*get("coefficients"));
  } catch (const ConfigError&) {
    throw;
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }

  if (auto* v = get("truncation")) {
    cfg.truncation = parse_unsigned("truncation", *v);
    if (*cfg.truncation < 1)
      throw ConfigError("truncation: must be >= 1");
  }
  if (auto* v = get("tail_tolerance")) {
    cfg.tail_tolerance = parse_real("tail_tolerance", *v);
    if (!(cfg.tail_tolerance > 0.0))
      throw ConfigError("tail_tolerance: must be positive");
  }

  if (!get("sample_sizes"))
    throw ConfigError("missing required key 'sample_sizes'");
  {
    std::stringstream list(*get("sample_sizes"));
    std::string item;
    while (std::getline(list, item, ','))
      cfg.sample_sizes.push_back(parse_unsigned("sample_sizes", std::string(trim(item))));
    if (cfg.sample_sizes.empty())
      throw ConfigError("sample_sizes: at least one size is required");
    for (std::size_t i = 0; i < cfg.sample_sizes.size(); ++i) {
      if (cfg.sample_sizes[i] < 100)
        throw ConfigError("sample_sizes: every size must be >= 100");
      if (i > 0 && cfg.sample_sizes[i] <= cfg.sample_sizes[i - 1])
        throw ConfigError("sample_sizes: sizes must be strictly increasing");
    }
  }

  if (auto* v = get("replicates")) {
    cfg.replicates = parse_unsigned("replicates", *v);
    if (cfg.replicates < 1)
      throw ConfigError("replicates: must be >= 1");
  }
  if (auto* v = get("seed"))
    cfg.seed = parse_unsigned("seed", *v);
  if (auto* v = get("bandwidth_c")) {
    cfg.bandwidth.constant = parse_real("bandwidth_c", *v);
    if (!(cfg.bandwidth.constant > 0.0))
      throw ConfigError("bandwidth_c: must be positive");
  }
  if (auto* v = get("gamma_c"))
    cfg.threshold.constant = parse_real("gamma_c", *v);
  if (auto* v = get("gamma_kappa"))
    cfg.threshold.exponent = parse_real("gamma_kappa", *v);
  if (auto* v = get("allow_nonvanishing_threshold"))
    cfg.threshold.permit_nonvanishing = parse_bool("allow_nonvanishing_threshold", *v);
  try {
    validate_threshold_rule(cfg.threshold);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("gamma_kappa/gamma_c: ") + e.what());
  }

  if (auto* v = get("kernel")) {
    try {
      cfg.kernel = Kernel::from_name(*v);
    } catch (const std::invalid_argument& e) {
      throw ConfigError(std::string("kernel: ") + e.what());
    }
  }
  if (auto* v = get("grid_points_per_h")) {
    cfg.grid_points_per_bandwidth = parse_unsigned("grid_points_per_h", *v);
    if (cfg.grid_points_per_bandwidth < 4)
      throw ConfigError("grid_points_per_h: must be >= 4");
  }
  if (auto* v = get("oracle"))
    cfg.oracle = parse_oracle(*v);
  if (cfg.oracle == OracleKind::gaussian &&
      cfg.innovations.family() != InnovationFamily::gaussian)
    throw ConfigError("oracle: the gaussian oracle needs gaussian innovations; "
                      "use oracle = convolution");
  if (auto* v = get("allow_long_memory"))
    cfg.allow_long_memory = parse_bool("allow_long_memory", *v);
  if (auto* v = get("output"))
    cfg.output = *v;
  if (auto* v = get("threads")) {
    cfg.threads = static_cast<unsigned>(parse_unsigned("threads", *v));
    if (cfg.threads < 1)
      throw ConfigError("threads: must be >= 1");
  }

  try {
    const auto seq = cfg.coefficient_sequence();
    if (classify_memory(seq).memory == Memory::long_range && !cfg.allow_long_memory)
      throw ConfigError("coefficients: " + describe_scheme(cfg.coefficients) +
                        " define a long-memory process; set allow_long_memory = true "
                        "to run anyway");
  } catch (const ConfigError&) {
    throw;
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("coefficients: ") + e.what());
  }
  return cfg;
}

ExperimentConfig
parse_config(const std::optional<std::string>& path, const Settings& overrides)
{
  Settings merged = path ? read_settings_file(*path) : Settings{};
  for (const auto& [key, value] : overrides) {
    auto it = std::find_if(merged.begin(), merged.end(),
                           [&](const auto& kv) { return kv.first == key; });
    if (it != merged.end())
      it->second = value;
    else
      merged.emplace_back(key, value);
  }
  return resolve_config(merged);
}

std::vector<std::string>
canonical_config(const ExperimentConfig& c)
{
  std::string sizes;
  for (std::size_t i = 0; i < c.sample_sizes.size(); ++i)
    sizes += (i ? "," : "") + std::to_string(c.sample_sizes[i]);
  std::vector<std::string> lines{
    "innovations=" + std::string(c.innovations.name()),
    "innovation_scale=" + format_double(c.innovations.scale()),
    "coefficients=" + describe_scheme(c.coefficients),
    "truncation=" + std::to_string(c.coefficient_sequence().truncation()),
    "tail_tolerance=" + format_double(c.tail_tolerance),
    "sample_sizes=" + sizes,
    "replicates=" + std::to_string(c.replicates),
    "seed=" + std::to_string(c.seed),
    "bandwidth_c=" + format_double(c.bandwidth.constant),
    "gamma_c=" + format_double(c.threshold.constant),
    "gamma_kappa=" + format_double(c.threshold.exponent),
    "kernel=" + std::string(c.kernel.name()),
    "grid_points_per_h=" + std::to_string(c.grid_points_per_bandwidth),
    "oracle=" + std::string(to_string(c.oracle)),
    std::string("allow_long_memory=") + (c.allow_long_memory ? "true" : "false"),
    std::string("allow_nonvanishing_threshold=") +
      (c.threshold.permit_nonvanishing ? "true" : "false"),
  };
  return lines;
}

} // namespace lpe
