#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "defjump/series.hpp"

namespace defjump {

struct SampleSpec {
  int count = 8;
  double min_modulus = 1e-3;
  double max_modulus = 1e-1;
  std::uint64_t seed = 20240607;
  /// Relative singular value threshold.
  double rank_tol = 1e-8;
};

/// Log-spaced moduli with pseudo-random phases drawn from the seed.
std::vector<Complex> sample_points(const SampleSpec& spec);

struct FiberDims {
  std::map<int, int> dims;
  std::vector<std::string> warnings;
};

/// dim ker D_t^q - rank D_t^{q-1} for every degree, with D_t = sum_k t^k P_k.
FiberDims dims_at(const OperatorSeries& p, Complex t, double rank_tol = 1e-8);

struct OracleSample {
  Complex t;
  int dim = 0;
};

struct OracleReport {
  int degree = 0;
  int dim_at_zero = 0;
  std::vector<OracleSample> samples;
  int generic_dim = 0;
  bool jumps = false;
  /// Indices of samples that disagree with the majority.
  std::vector<int> discordant;
  /// False when some sample exceeds the dimension at zero.
  bool semicontinuous = true;
  std::vector<std::string> warnings;
  SampleSpec spec;
};

/// Throws InconsistentSamples when no dimension holds a strict majority.
OracleReport jump_oracle(const OperatorSeries& p, int q, const SampleSpec& spec = {});

}  // namespace defjump
