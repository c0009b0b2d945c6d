#include <doctest.h>

#include <cmath>
#include <numbers>

#include "defjump/jump.hpp"
#include "defjump/oracle.hpp"
#include "support.hpp"

using namespace defjump;

namespace {

GradedComplex line(Complex d0) {
  return validate_complex(ComplexSpec{0, {1, 1}, {Matrix::Constant(1, 1, d0)}, {}});
}

OperatorSeries shifted_line(Complex root) {
  return OperatorSeries(line(-root), {{Matrix::Constant(1, 1, 1.0)}});
}

}  // namespace

TEST_CASE("sample points are log-spaced and reproducible") {
  SampleSpec spec;
  const auto a = sample_points(spec);
  const auto b = sample_points(spec);
  REQUIRE(a.size() == 8);
  for (std::size_t i = 0; i < a.size(); ++i) CHECK(a[i] == b[i]);
  CHECK(std::abs(std::abs(a.front()) - 1e-3) < 1e-15);
  CHECK(std::abs(std::abs(a.back()) - 1e-1) < 1e-15);
  for (std::size_t i = 1; i < a.size(); ++i) {
    CHECK(std::abs(std::abs(a[i]) / std::abs(a[i - 1]) - std::pow(100.0, 1.0 / 7.0)) < 1e-12);
  }
  std::mt19937_64 rng(spec.seed);
  for (const Complex& t : a) {
    const double u = static_cast<double>(rng() >> 11) / 9007199254740992.0;
    double expected = 2.0 * std::numbers::pi * u;
    if (expected > std::numbers::pi) expected -= 2.0 * std::numbers::pi;
    CHECK(std::abs(std::arg(t) - expected) < 1e-12);
  }
  spec.seed = 7;
  CHECK(sample_points(spec)[0] != a[0]);
  spec.count = 0;
  CHECK_THROWS_AS(sample_points(spec), Error);
}

TEST_CASE("fiber dimensions at zero match the cohomology") {
  for (const auto& name : testsupport::series_fixture_names()) {
    const auto r = testsupport::load_fixture(name);
    const FiberDims f = dims_at(*r.series, Complex(0.0));
    for (int q = r.complex.min_degree(); q <= r.complex.max_degree(); ++q) {
      CAPTURE(name);
      CAPTURE(q);
      CHECK(f.dims.at(q) == r.hodge.harmonic_dim(q));
    }
  }
}

TEST_CASE("toy fiber dimensions") {
  const OperatorSeries toy(validate_complex(ComplexSpec{0, {1, 1}, {}, {}}), {{Matrix::Constant(1, 1, 1.0)}});
  const FiberDims at = dims_at(toy, Complex(0.1));
  CHECK(at.dims.at(0) == 0);
  CHECK(at.dims.at(1) == 0);
  const FiberDims zero = dims_at(toy, Complex(0.0));
  CHECK(zero.dims.at(0) == 1);
  CHECK(zero.dims.at(1) == 1);
  const OracleReport rep = jump_oracle(toy, 0);
  CHECK(rep.jumps);
  CHECK(rep.dim_at_zero == 1);
  CHECK(rep.generic_dim == 0);
  CHECK(rep.semicontinuous);
  CHECK(rep.discordant.empty());
}

TEST_CASE("a sample on the degeneracy locus is outvoted and flagged") {
  SampleSpec spec;
  spec.count = 3;
  const Complex root = sample_points(spec)[0];
  const OperatorSeries p = shifted_line(root);
  const OracleReport rep = jump_oracle(p, 0, spec);
  CHECK(rep.dim_at_zero == 0);
  CHECK(rep.generic_dim == 0);
  CHECK(!rep.jumps);
  REQUIRE(rep.discordant.size() == 1);
  CHECK(rep.discordant[0] == 0);
  CHECK(!rep.semicontinuous);
  CHECK(!rep.warnings.empty());
}

TEST_CASE("a split vote throws InconsistentSamples") {
  SampleSpec spec;
  spec.count = 2;
  const OperatorSeries p = shifted_line(sample_points(spec)[0]);
  try {
    (void)jump_oracle(p, 0, spec);
    FAIL("expected InconsistentSamples");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::InconsistentSamples);
  }
}

TEST_CASE("property: the oracle agrees with the verdict on every fixture") {
  for (const auto& name : testsupport::series_fixture_names()) {
    const auto r = testsupport::load_fixture(name);
    for (int q = r.complex.min_degree(); q <= r.complex.max_degree(); ++q) {
      const OracleReport o = jump_oracle(*r.series, q);
      const JumpVerdict v = jump_verdict(*r.series, r.hodge, q, r.series->order());
      CAPTURE(name);
      CAPTURE(q);
      CHECK(o.jumps == v.jumps());
      CHECK(o.semicontinuous);
      CHECK(o.generic_dim <= o.dim_at_zero);
    }
  }
}

TEST_CASE("property: oracle verdicts are stable across seeds and ranges") {
  testsupport::Rng rng(2);
  for (const char* name : {"toy.json", "order2.json", "trivial.json"}) {
    const auto r = testsupport::load_fixture(name);
    for (int q = r.complex.min_degree(); q <= r.complex.max_degree(); ++q) {
      const bool base = jump_oracle(*r.series, q).jumps;
      for (int trial = 0; trial < 5; ++trial) {
        SampleSpec spec;
        spec.seed = static_cast<std::uint64_t>(rng.integer(1, 1 << 30));
        spec.count = rng.integer(3, 12);
        spec.min_modulus = std::pow(10.0, rng.uniform(-3.0, -2.0));
        spec.max_modulus = std::pow(10.0, rng.uniform(-1.5, -0.5));
        CHECK(jump_oracle(*r.series, q, spec).jumps == base);
      }
    }
  }
}
