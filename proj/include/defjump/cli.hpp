#pragma once

#include <ostream>
#include <string>
#include <vector>

#include "defjump/config.hpp"

namespace defjump {

/// Exit codes: 0 success or no jump, 2 jump detected (jump-verdict), 1 error
/// or oracle disagreement.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err,
            const EnvLookup& env = process_environment());

/// Parses "--xi"/"--class" values: a bare integer selects a harmonic basis
/// vector; otherwise comma-separated coefficients, each "re" or "re:im".
struct VectorChoice {
  bool is_index = false;
  int index = 0;
  Vector coeffs;
};

VectorChoice parse_vector_choice(const std::string& text);

}  // namespace defjump
