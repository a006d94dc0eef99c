#pragma once

// Scenario configuration: sectioned key=value text ([sim], [plant],
// [operator], [controller], [reference]) with strict key checking, plus
// the built-in presets.
//
// The file format covers scalar outputs (m = 1); the library itself is
// not restricted to that.

#include <filesystem>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "funnelsim/operators.hpp"
#include "funnelsim/simulate.hpp"

namespace funnelsim {

/// section -> key -> raw value (quotes removed)
using ConfigTable = std::map<std::string, std::map<std::string, std::string>>;

struct ConfigOverrides {
  std::optional<double> dt;
  std::optional<double> horizon;
  std::optional<Integrator> integrator;
  /// Swap a convolution operator for its transport realization or back.
  std::optional<std::string> realization;
  /// Quadrature panels per unit for convolution operators.
  std::optional<std::size_t> panels;
  /// Transport grid cells (0 ties the grid to dt).
  std::optional<std::size_t> cells;
};

struct LoadedScenario {
  std::string name;
  Scenario scenario;
  VerifyOptions caps;
  /// The operator alone, for probes.
  std::shared_ptr<const InternalOperator> op;
  /// Diagnostics worth logging (truncation tail mass, grid size).
  std::vector<std::string> notes;
};

/// Parses the text; throws ConfigError on bad syntax or unknown names.
ConfigTable parse_config(const std::string& text);

/// Builds a scenario. Relative paths inside the table resolve against `base_dir`.
LoadedScenario build_scenario(const ConfigTable& table, const ConfigOverrides& overrides = {},
                              const std::filesystem::path& base_dir = ".");

std::vector<std::string> preset_names();
/// Config text of a preset, or nullopt for an unknown name.
std::optional<std::string> preset_text(const std::string& name);

/// `source` is a preset name or a config file path.
LoadedScenario load_scenario(const std::string& source, const ConfigOverrides& overrides = {});

Integrator parse_integrator(const std::string& text);

}  // namespace funnelsim
