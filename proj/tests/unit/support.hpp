#pragma once

#include <random>
#include <string>
#include <vector>

#include "defjump/hodge.hpp"
#include "defjump/model_file.hpp"
#include "defjump/series.hpp"

namespace testsupport {

using defjump::Complex;
using defjump::Matrix;
using defjump::Vector;

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}
  double uniform(double lo, double hi);
  int integer(int lo, int hi);  // inclusive
  Complex normal();
  std::mt19937_64& engine() { return gen_; }

 private:
  std::mt19937_64 gen_;
};

Matrix random_matrix(Rng& rng, int rows, int cols);
Vector random_vector(Rng& rng, int n);
Matrix random_unitary(Rng& rng, int n);
/// Q diag(lambda) Q^H with lambda uniform in [1, cond].
Matrix random_metric(Rng& rng, int n, double cond);
/// Q diag(s) R with s uniform in [1, cond], Q and R unitary.
Matrix random_invertible(Rng& rng, int n, double cond);

struct RandomComplex {
  defjump::ComplexSpec spec;
  /// Cohomology dimensions known from the construction.
  std::vector<int> betti;
};

/// Exact | coexact | harmonic block form conjugated by well-conditioned
/// changes of basis, with random metrics.
RandomComplex random_complex(Rng& rng, int max_degrees, int max_dim, double metric_cond, bool metrics = true);

std::string fixture_path(const std::string& name);

/// Fixture files with an operator series, by file name.
std::vector<std::string> series_fixture_names();

/// Fixture files with a DGLA section.
std::vector<std::string> dgla_fixture_names();

defjump::ResolvedModel load_fixture(const std::string& name);

/// Numerical rank with relative threshold, via SVD.
int rank_of(const Matrix& m, double rel_tol = 1e-9);

}  // namespace testsupport
