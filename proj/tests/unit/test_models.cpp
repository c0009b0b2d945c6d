#include <doctest.h>

#include <algorithm>

#include "defjump/dgla.hpp"
#include "defjump/jump.hpp"
#include "defjump/models.hpp"
#include "support.hpp"

using namespace defjump;

namespace {

NilmanifoldSpec iwasawa(Bundle b) {
  NilmanifoldSpec s;
  s.n = 3;
  s.holomorphic = {{2, 0, 1, Complex(-1.0)}};
  s.bundle = b;
  return s;
}

NilmanifoldSpec abelian(int n, Bundle b) {
  NilmanifoldSpec s;
  s.n = n;
  s.bundle = b;
  return s;
}

int binom(int n, int k) {
  int r = 1;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

int index_of(const std::vector<std::uint32_t>& basis, std::uint32_t mask) {
  const auto it = std::find(basis.begin(), basis.end(), mask);
  REQUIRE(it != basis.end());
  return static_cast<int>(it - basis.begin());
}

MaurerCartanSeries first_order(const Vector& x1) {
  MaurerCartanSeries x;
  x.order = 1;
  x.coeffs = {x1};
  return x;
}

}  // namespace

TEST_CASE("abelian tori have binomial cohomology") {
  for (int n = 1; n <= 3; ++n) {
    const InvariantModel m = build_invariant_model(abelian(n, {BundleKind::Trivial, 0}));
    const HodgeData hd = hodge_data(m.complex);
    for (int q = 0; q <= n; ++q) CHECK(hd.harmonic_dim(q) == binom(n, q));
    CHECK(m.d_full.norm() == 0.0);
  }
}

TEST_CASE("iwasawa structure equations") {
  const InvariantModel m = build_invariant_model(iwasawa({BundleKind::Trivial, 0}));
  const ExteriorAlgebra& alg = m.algebra;
  const int n = 3;
  const Vector wb3 = Vector::Unit(alg.size(), 1u << (n + 2));
  const Vector dbar = m.dbar_full * wb3;
  CHECK(std::abs(dbar[(1u << n) | (1u << (n + 1))] - Complex(-1.0)) < 1e-15);
  CHECK(std::abs(dbar.norm() - 1.0) < 1e-15);
  const Vector w3 = Vector::Unit(alg.size(), 1u << 2);
  const Vector del = m.del_full * w3;
  CHECK(std::abs(del[0b011] - Complex(-1.0)) < 1e-15);
  CHECK((m.dbar_full * w3).norm() == 0.0);
  CHECK((m.del_full * m.del_full).norm() < 1e-14);
  CHECK((m.dbar_full * m.dbar_full).norm() < 1e-14);
  CHECK((m.del_full * m.dbar_full + m.dbar_full * m.del_full).norm() < 1e-14);
}

TEST_CASE("bundle-valued complexes of the iwasawa manifold") {
  const std::vector<int> h0 = {1, 2, 2, 1};
  const InvariantModel triv = build_invariant_model(iwasawa({BundleKind::Trivial, 0}));
  const InvariantModel cot = build_invariant_model(iwasawa({BundleKind::WedgeCotangent, 1}));
  const InvariantModel tan = build_invariant_model(iwasawa({BundleKind::Tangent, 0}));
  const HodgeData ht = hodge_data(triv.complex);
  const HodgeData hc = hodge_data(cot.complex);
  const HodgeData hx = hodge_data(tan.complex);
  for (int q = 0; q <= 3; ++q) {
    CHECK(tan.complex.dim(q) == 3 * binom(3, q));
    CHECK(cot.complex.dim(q) == 3 * binom(3, q));
    CHECK(ht.harmonic_dim(q) == h0[q]);
    CHECK(hc.harmonic_dim(q) == 3 * h0[q]);
    CHECK(hx.harmonic_dim(q) == 3 * h0[q]);
  }
  CHECK(tan.ks_index(1, 2) == 2 * 3 + 1);
  CHECK(tan.ks_labels[1][tan.ks_index(0, 1)] == tan.algebra.label(1u << 3) + "*X2");
}

TEST_CASE("euler characteristics agree with the cochain dimensions") {
  for (const Bundle b : {Bundle{BundleKind::Trivial, 0}, Bundle{BundleKind::WedgeCotangent, 1},
                         Bundle{BundleKind::WedgeCotangent, 2}, Bundle{BundleKind::WedgeCotangent, 3},
                         Bundle{BundleKind::Tangent, 0}}) {
    const InvariantModel m = build_invariant_model(iwasawa(b));
    const HodgeData hd = hodge_data(m.complex);
    int chi_c = 0;
    int chi_h = 0;
    for (int q = 0; q <= 3; ++q) {
      const int s = q % 2 == 0 ? 1 : -1;
      chi_c += s * m.complex.dim(q);
      chi_h += s * hd.harmonic_dim(q);
    }
    CHECK(chi_c == chi_h);
    CHECK(chi_c == 0);
  }
}

TEST_CASE("top wedge power has a zero companion del") {
  const InvariantModel m = build_invariant_model(iwasawa({BundleKind::WedgeCotangent, 3}));
  for (int q = 0; q <= 3; ++q) {
    CHECK(m.complex.dim(q) == binom(3, q));
    CHECK(m.companion_del[q].rows() == 0);
  }
  CHECK_THROWS_AS(build_invariant_model(iwasawa({BundleKind::WedgeCotangent, 4})), Error);
}

TEST_CASE("hand-computed first-order cotangent action") {
  const InvariantModel m = build_invariant_model(iwasawa({BundleKind::WedgeCotangent, 1}));
  const OperatorSeries p = cotangent_action(m, first_order(ks_vector(m, {{0, 0, 1.0}})));
  const Matrix& p1 = p.term(1, 0);
  const auto src = m.algebra.basis(1, 0);
  const auto dst = m.algebra.basis(1, 1);
  const int w1 = index_of(src, 0b001);
  const int w2 = index_of(src, 0b010);
  const int w3 = index_of(src, 0b100);
  const int target = index_of(dst, (1u << 1) | (1u << 3));
  CHECK(p1.col(w1).norm() == 0.0);
  CHECK(p1.col(w2).norm() == 0.0);
  CHECK(std::abs(p1(target, w3) - Complex(1.0)) < 1e-15);
  CHECK(std::abs(p1.col(w3).norm() - 1.0) < 1e-15);
}

TEST_CASE("cotangent action agrees with the representation table") {
  for (const Bundle b : {Bundle{BundleKind::Trivial, 0}, Bundle{BundleKind::WedgeCotangent, 1},
                         Bundle{BundleKind::WedgeCotangent, 2}}) {
    const InvariantModel m = build_invariant_model(iwasawa(b));
    const KuranishiResult k = kuranishi_solve(m.ks, ks_vector(m, {{0, 0, 1.0}, {1, 2, 0.5}}), 4);
    const OperatorSeries a = cotangent_action(m, k.series);
    const OperatorSeries r = represent(m.action, k.series);
    for (int order = 0; order <= 4; ++order) {
      for (int q = 0; q <= 3; ++q) CHECK((a.term(order, q) - r.term(order, q)).norm() < 1e-12);
    }
  }
}

TEST_CASE("tangent action is the adjoint action") {
  const InvariantModel m = build_invariant_model(iwasawa({BundleKind::Tangent, 0}));
  const KuranishiResult k = kuranishi_solve(m.ks, ks_vector(m, {{0, 2, 1.0}}), 4);
  const OperatorSeries a = tangent_action(m, k.series);
  const OperatorSeries r = represent(adjoint_representation(m.ks), k.series);
  for (int order = 0; order <= 4; ++order) {
    for (int q = 0; q <= 3; ++q) CHECK((a.term(order, q) - r.term(order, q)).norm() < 1e-12);
  }
  CHECK_THROWS_AS(cotangent_action(m, k.series), Error);
  const InvariantModel c = build_invariant_model(iwasawa({BundleKind::Trivial, 0}));
  CHECK_THROWS_AS(tangent_action(c, k.series), Error);
}

TEST_CASE("abelian models have vanishing brackets and actions") {
  const InvariantModel m = build_invariant_model(abelian(2, {BundleKind::WedgeCotangent, 1}));
  for (const auto& [key, t] : m.ks.table()) CHECK(t.norm() == 0.0);
  const OperatorSeries p = cotangent_action(m, first_order(ks_vector(m, {{0, 1, 1.0}, {1, 0, Complex(0, 2)}})));
  for (int q = 0; q <= 2; ++q) CHECK(p.term(1, q).norm() == 0.0);

  const InvariantModel top = build_invariant_model(abelian(2, {BundleKind::WedgeCotangent, 2}));
  const OperatorSeries pt = cotangent_action(top, first_order(ks_vector(top, {{0, 0, 1.0}, {1, 1, -1.0}})));
  for (int q = 0; q <= 2; ++q) CHECK(pt.term(1, q).norm() == 0.0);

  const InvariantModel tan = build_invariant_model(abelian(2, {BundleKind::Tangent, 0}));
  const OperatorSeries px = tangent_action(tan, first_order(ks_vector(tan, {{0, 1, 1.0}, {1, 0, Complex(0, 2)}})));
  for (int q = 0; q <= 2; ++q) CHECK(px.term(1, q).norm() == 0.0);
}

TEST_CASE("a non-closed structure is rejected") {
  NilmanifoldSpec s;
  s.n = 2;
  s.mixed = {{0, 1, 1, Complex(1.0)}, {1, 0, 0, Complex(1.0)}};
  try {
    (void)build_invariant_model(s);
    FAIL("expected NotSquareZero");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::NotSquareZero);
  }
}

TEST_CASE("presets build and resolve") {
  for (const auto& name : preset_names()) {
    const auto r = preset(name);
    REQUIRE(r);
    const InvariantModel m = build_invariant_model(r->spec);
    const KuranishiResult k = kuranishi_solve(m.ks, ks_vector(m, r->xi), r->order);
    CHECK(kuranishi_fixed_point_residual(m.ks, k.series, ks_vector(m, r->xi)) <= 1e-9);
  }
  CHECK(!preset("nope"));
}
