#include "defjump/config.hpp"

#include <cstdlib>
#include <fstream>

namespace defjump {
namespace {

void check_tol(const char* name, double v) {
  if (!(v > 0.0 && v < 1.0)) {
    throw Error(ErrorKind::UsageError, std::string(name) + " must lie in (0, 1), got " + std::to_string(v));
  }
}

double parse_double(const char* name, const std::string& s) {
  try {
    std::size_t pos = 0;
    const double v = std::stod(s, &pos);
    if (pos != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw Error(ErrorKind::UsageError, std::string(name) + ": expected a number, got '" + s + "'");
  }
}

long long parse_int(const char* name, const std::string& s) {
  try {
    std::size_t pos = 0;
    const long long v = std::stoll(s, &pos);
    if (pos != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw Error(ErrorKind::UsageError, std::string(name) + ": expected an integer, got '" + s + "'");
  }
}

}  // namespace

void Config::validate() const {
  check_tol("rank_tol", rank_tol);
  check_tol("hodge_tol", hodge_tol);
  check_tol("obstruction_tol", obstruction_tol);
  check_tol("oracle.rank_tol", oracle.rank_tol);
  if (order < 1) throw Error(ErrorKind::UsageError, "order must be at least 1");
  if (oracle.count < 1) throw Error(ErrorKind::UsageError, "oracle.count must be at least 1");
  if (!(oracle.min_modulus > 0.0) || oracle.max_modulus < oracle.min_modulus) {
    throw Error(ErrorKind::UsageError, "oracle moduli must satisfy 0 < min_modulus <= max_modulus");
  }
}

std::string_view to_string(ObConvention c) { return c == ObConvention::Half ? "half" : "full"; }

ObConvention parse_ob_convention(std::string_view s) {
  if (s == "half") return ObConvention::Half;
  if (s == "full") return ObConvention::Full;
  throw Error(ErrorKind::UsageError, "ob_convention must be 'half' or 'full'");
}

nlohmann::json config_to_json(const Config& c) {
  return {
      {"rank_tol", c.rank_tol},
      {"hodge_tol", c.hodge_tol},
      {"obstruction_tol", c.obstruction_tol},
      {"order", c.order},
      {"ob_convention", std::string(to_string(c.ob_convention))},
      {"oracle",
       {{"count", c.oracle.count},
        {"min_modulus", c.oracle.min_modulus},
        {"max_modulus", c.oracle.max_modulus},
        {"seed", c.oracle.seed},
        {"rank_tol", c.oracle.rank_tol}}},
  };
}

void apply_json(Config& c, const nlohmann::json& j) {
  if (!j.is_object()) throw Error(ErrorKind::ParseError, "config must be a JSON object");
  try {
    for (const auto& [key, value] : j.items()) {
      if (key == "rank_tol") {
        c.rank_tol = value.get<double>();
      } else if (key == "hodge_tol") {
        c.hodge_tol = value.get<double>();
      } else if (key == "obstruction_tol") {
        c.obstruction_tol = value.get<double>();
      } else if (key == "order") {
        c.order = value.get<int>();
      } else if (key == "ob_convention") {
        c.ob_convention = parse_ob_convention(value.get<std::string>());
      } else if (key == "oracle") {
        for (const auto& [k2, v2] : value.items()) {
          if (k2 == "count") {
            c.oracle.count = v2.get<int>();
          } else if (k2 == "min_modulus") {
            c.oracle.min_modulus = v2.get<double>();
          } else if (k2 == "max_modulus") {
            c.oracle.max_modulus = v2.get<double>();
          } else if (k2 == "seed") {
            c.oracle.seed = v2.get<std::uint64_t>();
          } else if (k2 == "rank_tol") {
            c.oracle.rank_tol = v2.get<double>();
          } else {
            throw Error(ErrorKind::ParseError, "unknown config key oracle." + k2);
          }
        }
      } else {
        throw Error(ErrorKind::ParseError, "unknown config key " + key);
      }
    }
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::ParseError, std::string("config: ") + e.what());
  }
}

void apply_config_file(Config& c, const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::UsageError, "cannot open config file " + path);
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::ParseError, path + ": " + e.what());
  }
  apply_json(c, j);
}

void apply_environment(Config& c, const EnvLookup& lookup) {
  if (auto v = lookup("DEFJUMP_RANK_TOL")) c.rank_tol = parse_double("DEFJUMP_RANK_TOL", *v);
  if (auto v = lookup("DEFJUMP_HODGE_TOL")) c.hodge_tol = parse_double("DEFJUMP_HODGE_TOL", *v);
  if (auto v = lookup("DEFJUMP_OBSTRUCTION_TOL")) c.obstruction_tol = parse_double("DEFJUMP_OBSTRUCTION_TOL", *v);
  if (auto v = lookup("DEFJUMP_ORDER")) c.order = static_cast<int>(parse_int("DEFJUMP_ORDER", *v));
  if (auto v = lookup("DEFJUMP_OB_CONVENTION")) c.ob_convention = parse_ob_convention(*v);
  if (auto v = lookup("DEFJUMP_ORACLE_SAMPLES")) c.oracle.count = static_cast<int>(parse_int("DEFJUMP_ORACLE_SAMPLES", *v));
  if (auto v = lookup("DEFJUMP_ORACLE_MIN_MODULUS")) c.oracle.min_modulus = parse_double("DEFJUMP_ORACLE_MIN_MODULUS", *v);
  if (auto v = lookup("DEFJUMP_ORACLE_MAX_MODULUS")) c.oracle.max_modulus = parse_double("DEFJUMP_ORACLE_MAX_MODULUS", *v);
  if (auto v = lookup("DEFJUMP_ORACLE_SEED")) {
    c.oracle.seed = static_cast<std::uint64_t>(parse_int("DEFJUMP_ORACLE_SEED", *v));
  }
  if (auto v = lookup("DEFJUMP_ORACLE_RANK_TOL")) c.oracle.rank_tol = parse_double("DEFJUMP_ORACLE_RANK_TOL", *v);
}

EnvLookup process_environment() {
  return [](const char* name) -> std::optional<std::string> {
    const char* v = std::getenv(name);
    if (!v) return std::nullopt;
    return std::string(v);
  };
}

}  // namespace defjump
