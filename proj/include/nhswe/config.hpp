/// @file config.hpp
/// @brief Flat key=value run configuration, scenario presets and resolution
/// into typed settings.
///
/// Every key has a default; a preset overrides some of them, then a config
/// file, then command-line overrides. Values "auto" are derived at
/// resolution (sponge strength, Hammack ramp width and alpha). The resolved
/// map contains concrete values only, so it can be fed back verbatim.

#ifndef NHSWE_CONFIG_HPP
#define NHSWE_CONFIG_HPP

#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "nhswe/bathymetry.hpp"
#include "nhswe/closure.hpp"
#include "nhswe/elliptic.hpp"
#include "nhswe/predictor.hpp"
#include "nhswe/stepper.hpp"

namespace nhswe {

using ConfigMap = std::map<std::string, std::string>;

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Parses "key = value" lines; '#' starts a comment, blank lines are skipped.
ConfigMap parse_config(std::string_view text);
ConfigMap read_config_file(const std::string& path);
std::string format_config(const ConfigMap& config);

/// All recognised keys with their defaults.
const ConfigMap& default_config();
std::vector<std::string> preset_names();

/// Defaults overlaid with the named preset. Throws ConfigError for an
/// unknown scenario.
ConfigMap preset(const std::string& scenario);

/// Applies overrides; an unknown key throws ConfigError listing valid keys.
void apply_overrides(ConfigMap& config, const ConfigMap& overrides);

/// Parses "key=value" into a single-entry map.
ConfigMap parse_assignment(std::string_view assignment);

enum class InitialCondition { Rest, StandingWave, Solitary };

struct RunConfig {
  std::string scenario;
  BedModel::Shape shape;
  double x_left = 0.0;
  double x_right = 1.0;
  std::optional<double> freeze_time;
  double dt = 0.0;
  double dx = 0.0;
  double t_end = 0.0;
  BoundarySpec boundary;
  PredictorSettings predictor;
  StepperSettings stepper;
  InitialCondition initial = InitialCondition::Rest;
  double wave_amplitude = 0.0;
  double wave_number = 0.0;
  double wave_position = 0.0;
  std::vector<double> gauges;
  std::vector<double> snapshots;
  std::size_t log_stride = 1;

  std::size_t elements() const;
  std::size_t steps() const;
};

/// Validated typed configuration. Resolves "auto" values in place.
RunConfig resolve(ConfigMap& config);

/// Formats a double with 17 significant digits.
std::string format_number(double v);
std::string format_list(const std::vector<double>& values);

}  // namespace nhswe

#endif  // NHSWE_CONFIG_HPP
