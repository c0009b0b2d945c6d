#include <doctest.h>

#include "defjump/jump.hpp"
#include "defjump/oracle.hpp"
#include "support.hpp"

using namespace defjump;
using testsupport::Rng;

namespace {

Matrix scalar(double v) { return Matrix::Constant(1, 1, v); }

GradedComplex plain(std::vector<int> dims, std::vector<Matrix> diffs = {}) {
  return validate_complex(ComplexSpec{0, std::move(dims), std::move(diffs), {}});
}

// C^0 = C^1 = K, P_0 = 0, P_1 = 1
OperatorSeries toy(int order = 6) {
  std::vector<std::vector<Matrix>> t(order);
  t[0] = {scalar(1.0)};
  return OperatorSeries(plain({1, 1}), t);
}

std::vector<std::vector<Matrix>> random_gauge(Rng& rng, const GradedComplex& cx, int order) {
  std::vector<std::vector<Matrix>> g(order);
  for (int k = 1; k <= order; ++k) {
    for (int q = cx.min_degree(); q <= cx.max_degree(); ++q) {
      g[k - 1].push_back(0.5 * testsupport::random_matrix(rng, cx.dim(q), cx.dim(q)));
    }
  }
  return g;
}

}  // namespace

TEST_CASE("integrability examples") {
  CHECK(check_integrability(OperatorSeries::constant(plain({2, 2, 1}, {Matrix::Identity(2, 2), Matrix::Zero(1, 2)}), 4))
            .passes());
  CHECK(check_integrability(toy()).passes());
  const OperatorSeries three(plain({1, 1, 1}), {{scalar(1.0), scalar(1.0)}, {}});
  const IntegrabilityReport r = check_integrability(three);
  REQUIRE(r.first_failure);
  CHECK(*r.first_failure == 2);
  CHECK(std::abs(r.residual[2] - 1.0) < 1e-15);
  CHECK_THROWS_AS(require_integrable(three, 2), Error);
}

TEST_CASE("truncated cohomology examples") {
  const auto r = testsupport::load_fixture("trivial.json");
  const OperatorSeries& p = *r.series;
  for (int q = 0; q <= 2; ++q) {
    CHECK(truncated_cohomology(p, q, 1).dimension == r.hodge.harmonic_dim(q));
    for (int n = 1; n <= 4; ++n) CHECK(truncated_cohomology(p, q, n).dimension == n * r.hodge.harmonic_dim(q));
  }
  const TruncatedCohomology t = truncated_cohomology(toy(), 0, 2);
  CHECK(t.kernel_dim == 1);
  CHECK(t.dimension == 1);
  CHECK(t.representatives.cols() == 1);
  CHECK_THROWS_AS(truncated_cohomology(toy(1), 0, 3), Error);
}

TEST_CASE("extend_class examples") {
  const auto triv = testsupport::load_fixture("trivial.json");
  const Vector a = triv.hodge.harmonic_basis(0).col(0);
  const Extension e = extend_class(*triv.series, triv.hodge, 0, a, 5);
  CHECK(!e.obstructed_at);
  for (int n = 1; n <= 5; ++n) CHECK(e.coeffs[n].norm() == 0.0);

  const OperatorSeries t = toy();
  const HodgeData hd = hodge_data(t.complex());
  const Extension te = extend_class(t, hd, 0, Vector::Ones(1), 3);
  REQUIRE(te.obstructed_at);
  CHECK(*te.obstructed_at == 1);
  CHECK(std::abs(te.harmonic_norms[0] - 1.0) < 1e-15);

  // order2 fixture: P_1 e2 = e1 is exact, so h_1 = 0 and alpha^1 = -d* G P_1 alpha
  const auto o2 = testsupport::load_fixture("order2.json");
  const Vector e2 = Vector::Unit(2, 1);
  const Extension x = extend_class(*o2.series, o2.hodge, 0, e2, 4);
  CHECK(x.harmonic_norms[0] < 1e-14);
  CHECK((x.coeffs[1] + o2.hodge.adjoint_green(1, o2.series->term(1, 0) * e2)).norm() < 1e-14);
  CHECK((x.coeffs[1] + Vector::Unit(2, 0)).norm() < 1e-14);
  // D_t alpha(t) = 0 mod t^2
  const Vector r1 = o2.series->term(0, 0) * x.coeffs[1] + o2.series->term(1, 0) * x.coeffs[0];
  CHECK(r1.norm() < 1e-14);
  REQUIRE(x.obstructed_at);
  CHECK(*x.obstructed_at == 2);

  CHECK_THROWS_AS(extend_class(*o2.series, o2.hodge, 0, Vector::Unit(2, 0), 2), Error);
}

TEST_CASE("obstruction_map_image examples") {
  const auto triv = testsupport::load_fixture("trivial.json");
  for (int q = 0; q <= 2; ++q) {
    for (int n = 1; n <= 3; ++n) CHECK(obstruction_map_image(*triv.series, triv.hodge, q, n).rank() == 0);
  }
  const OperatorSeries t = toy();
  const HodgeData hd = hodge_data(t.complex());
  const ObstructionImage img = obstruction_map_image(t, hd, 0, 1);
  CHECK(img.domain_dim == 1);
  CHECK(img.rank() == 1);

  // P_1 maps ker d into im d and P_2 = 0: image vanishes at n = 1, 2; the oracle sees no jump
  const auto o2 = testsupport::load_fixture("order2.json");
  std::vector<std::vector<Matrix>> terms = {{o2.series->term(1, 0)}};
  const OperatorSeries p(o2.complex, terms);
  const HodgeData phd = hodge_data(p.complex());
  CHECK(obstruction_map_image(p, phd, 0, 1).rank() == 0);
  CHECK(obstruction_map_image(p, phd, 0, 1).domain_dim == 1);
  const OperatorSeries p6(o2.complex, {terms[0], {}, {}, {}, {}, {}});
  for (int n = 1; n <= 6; ++n) CHECK(obstruction_map_image(p6, phd, 0, n).rank() == 0);
  CHECK(!jump_oracle(p6, 0).jumps);

  CHECK_THROWS_AS(obstruction_map_image(t, hd, 0, 7), Error);
}

TEST_CASE("jump_verdict examples") {
  const auto triv = testsupport::load_fixture("trivial.json");
  for (int q = 0; q <= 2; ++q) CHECK(!jump_verdict(*triv.series, triv.hodge, q, 6).jumps());

  const OperatorSeries t = toy();
  const HodgeData hd = hodge_data(t.complex());
  const JumpVerdict v0 = jump_verdict(t, hd, 0, 6);
  REQUIRE(v0.jump);
  CHECK(v0.jump->side == JumpSide::ExtensionObstruction);
  CHECK(v0.jump->source_degree == 0);
  CHECK(v0.jump->order == 1);
  const JumpVerdict v1 = jump_verdict(t, hd, 1, 6);
  REQUIRE(v1.jump);
  CHECK(v1.jump->side == JumpSide::ExactnessObstruction);
  CHECK(v1.jump->source_degree == 0);
  CHECK(v1.jump->order == 1);
  CHECK(std::abs(v1.jump->witness[0] - Complex(1.0)) < 1e-14);

  const auto o2 = testsupport::load_fixture("order2.json");
  const JumpVerdict w0 = jump_verdict(*o2.series, o2.hodge, 0, 6);
  REQUIRE(w0.jump);
  CHECK(w0.jump->side == JumpSide::ExtensionObstruction);
  CHECK(w0.jump->order == 2);
  const JumpVerdict w1 = jump_verdict(*o2.series, o2.hodge, 1, 6);
  REQUIRE(w1.jump);
  CHECK(w1.jump->side == JumpSide::ExactnessObstruction);
  CHECK(w1.jump->order == 2);
  CHECK(!jump_verdict(*o2.series, o2.hodge, 2, 6).jumps());
}

TEST_CASE("verdict witnesses are reproducible from the named obstruction") {
  for (const auto& name : testsupport::series_fixture_names()) {
    const auto r = testsupport::load_fixture(name);
    const OperatorSeries& p = *r.series;
    for (int q = r.complex.min_degree(); q <= r.complex.max_degree(); ++q) {
      const JumpVerdict v = jump_verdict(p, r.hodge, q, 6);
      if (!v.jump) continue;
      const JumpFinding& f = *v.jump;
      if (f.side == JumpSide::ExtensionObstruction) {
        const Extension e = extend_class(p, r.hodge, q, r.hodge.harmonic_basis(q).col(f.class_index), 6);
        REQUIRE(e.obstructed_at);
        CHECK(*e.obstructed_at == f.order);
        CHECK((normalize_witness(e.obstruction_witness) - f.witness).norm() < 1e-12);
      } else {
        const ObstructionImage img = obstruction_map_image(p, r.hodge, f.source_degree, f.order);
        REQUIRE(img.rank() > 0);
        // witness lies in the image span
        const Matrix& m = r.complex.metric(q);
        const Matrix proj = img.basis * (img.basis.adjoint() * m);
        CHECK((proj * f.witness - f.witness).norm() < 1e-10);
      }
    }
  }
}

TEST_CASE("property: canonical extensions satisfy the fixed point and closedness below the obstruction") {
  for (const auto& name : testsupport::series_fixture_names()) {
    const auto r = testsupport::load_fixture(name);
    for (int q = r.complex.min_degree(); q <= r.complex.max_degree(); ++q) {
      const Matrix& basis = r.hodge.harmonic_basis(q);
      for (Eigen::Index c = 0; c < basis.cols(); ++c) {
        const Extension e = extend_class(*r.series, r.hodge, q, basis.col(c), 6);
        CHECK(extension_fixed_point_residual(*r.series, r.hodge, e) <= 1e-9);
        const auto closed = extension_closedness(*r.series, e);
        const int stop = e.obstructed_at ? *e.obstructed_at : 7;
        for (int n = 0; n < stop; ++n) CHECK(closed[n] <= 1e-9);
      }
    }
  }
}

TEST_CASE("property: both obstruction paths give the same first order") {
  for (const auto& name : testsupport::series_fixture_names()) {
    const auto r = testsupport::load_fixture(name);
    for (int q = r.complex.min_degree(); q <= r.complex.max_degree(); ++q) {
      CAPTURE(name);
      CAPTURE(q);
      CHECK(first_extension_obstruction(*r.series, r.hodge, q, 6) == first_image_obstruction(*r.series, r.hodge, q, 6));
    }
  }
}

TEST_CASE("property: exact truncated cochains carry no obstruction") {
  Rng rng(31);
  for (const auto& name : testsupport::series_fixture_names()) {
    const auto r = testsupport::load_fixture(name);
    const OperatorSeries& p = *r.series;
    for (int q = r.complex.min_degree(); q <= r.complex.max_degree(); ++q) {
      for (int n = 1; n <= 4; ++n) {
        const Matrix b = truncated_differential(p, q - 1, n);
        if (b.cols() == 0) continue;
        const Vector stacked = b * testsupport::random_vector(rng, static_cast<int>(b.cols()));
        const auto coeffs = split_coefficients(stacked, r.complex.dim(q), n);
        const double scale = obstruction_scale(p, q, coeffs);
        const Vector h = obstruction_class(p, r.hodge, q, coeffs);
        CHECK(h.norm() <= 1e-8 * std::max(scale, 1e-300) + 1e-300);
      }
    }
  }
}

TEST_CASE("property: verdicts are gauge independent") {
  Rng rng(404);
  for (const auto& name : testsupport::series_fixture_names()) {
    const auto r = testsupport::load_fixture(name);
    const OperatorSeries g = gauge_transform(*r.series, random_gauge(rng, r.complex, r.series->order()));
    CHECK(check_integrability(g).passes());
    for (int q = r.complex.min_degree(); q <= r.complex.max_degree(); ++q) {
      const JumpVerdict a = jump_verdict(*r.series, r.hodge, q, 6);
      const JumpVerdict b = jump_verdict(g, r.hodge, q, 6);
      CAPTURE(name);
      CAPTURE(q);
      CHECK(a.jumps() == b.jumps());
      if (a.jump && b.jump) CHECK(a.jump->order == b.jump->order);
    }
  }
}

TEST_CASE("property: verdicts do not depend on the metric") {
  Rng rng(55);
  for (const char* name : {"toy.json", "order2.json", "trivial.json", "iwasawa-cotangent.json"}) {
    ModelFile m = load_model(testsupport::fixture_path(name));
    const auto base = resolve_model(m, Config{});
    m.complex.metrics.clear();
    for (int d : m.complex.dims) m.complex.metrics.push_back(testsupport::random_metric(rng, d, 1e3));
    const auto tilted = resolve_model(m, Config{});
    for (int q = base.complex.min_degree(); q <= base.complex.max_degree(); ++q) {
      const JumpVerdict a = jump_verdict(*base.series, base.hodge, q, 6);
      const JumpVerdict b = jump_verdict(*tilted.series, tilted.hodge, q, 6);
      CAPTURE(name);
      CAPTURE(q);
      CHECK(a.jumps() == b.jumps());
      if (a.jump && b.jump) CHECK(a.jump->order == b.jump->order);
    }
  }
}

TEST_CASE("truncated differential layout") {
  const auto o2 = testsupport::load_fixture("order2.json");
  const Matrix m = truncated_differential(*o2.series, 0, 3);
  CHECK(m.rows() == 6);
  CHECK(m.cols() == 6);
  CHECK((m.block(2, 0, 2, 2) - o2.series->term(1, 0)).norm() == 0.0);
  CHECK((m.block(4, 0, 2, 2) - o2.series->term(2, 0)).norm() == 0.0);
  CHECK(m.block(0, 2, 2, 2).norm() == 0.0);
}
