#pragma once

#include <functional>
#include <optional>
#include <string>

#include <json.hpp>

#include "defjump/dgla.hpp"
#include "defjump/oracle.hpp"

namespace defjump {

struct Config {
  double rank_tol = 1e-10;
  double hodge_tol = 1e-9;
  double obstruction_tol = 1e-8;
  int order = 6;
  ObConvention ob_convention = ObConvention::Half;
  SampleSpec oracle;

  /// Throws UsageError unless every tolerance lies in (0, 1) and order >= 1.
  void validate() const;
};

std::string_view to_string(ObConvention c);
ObConvention parse_ob_convention(std::string_view s);

nlohmann::json config_to_json(const Config& c);

/// Overlays the keys present in j. Throws ParseError on unknown keys or bad types.
void apply_json(Config& c, const nlohmann::json& j);

/// Reads a JSON config file and overlays it.
void apply_config_file(Config& c, const std::string& path);

using EnvLookup = std::function<std::optional<std::string>(const char*)>;

/// Overlays DEFJUMP_RANK_TOL, DEFJUMP_HODGE_TOL, DEFJUMP_OBSTRUCTION_TOL,
/// DEFJUMP_ORDER, DEFJUMP_OB_CONVENTION, DEFJUMP_ORACLE_SAMPLES,
/// DEFJUMP_ORACLE_MIN_MODULUS, DEFJUMP_ORACLE_MAX_MODULUS,
/// DEFJUMP_ORACLE_SEED and DEFJUMP_ORACLE_RANK_TOL.
void apply_environment(Config& c, const EnvLookup& lookup);

/// Process environment lookup.
EnvLookup process_environment();

}  // namespace defjump
