#include "support.hpp"

#include <Eigen/QR>

namespace testsupport {

double Rng::uniform(double lo, double hi) {
  const double u = static_cast<double>(gen_() >> 11) * 0x1.0p-53;
  return lo + (hi - lo) * u;
}

int Rng::integer(int lo, int hi) {
  return lo + static_cast<int>(gen_() % static_cast<std::uint64_t>(hi - lo + 1));
}

Complex Rng::normal() {
  // Box-Muller on two uniforms
  const double u1 = uniform(1e-300, 1.0);
  const double u2 = uniform(0.0, 1.0);
  const double r = std::sqrt(-2.0 * std::log(u1));
  return {r * std::cos(6.283185307179586 * u2), r * std::sin(6.283185307179586 * u2)};
}

Matrix random_matrix(Rng& rng, int rows, int cols) {
  Matrix m(rows, cols);
  for (int c = 0; c < cols; ++c) {
    for (int r = 0; r < rows; ++r) m(r, c) = rng.normal();
  }
  return m;
}

Vector random_vector(Rng& rng, int n) {
  Vector v(n);
  for (int i = 0; i < n; ++i) v[i] = rng.normal();
  return v;
}

Matrix random_unitary(Rng& rng, int n) {
  if (n == 0) return Matrix(0, 0);
  Eigen::HouseholderQR<Matrix> qr(random_matrix(rng, n, n));
  return qr.householderQ() * Matrix::Identity(n, n);
}

Matrix random_metric(Rng& rng, int n, double cond) {
  const Matrix q = random_unitary(rng, n);
  Vector lambda(n);
  for (int i = 0; i < n; ++i) lambda[i] = rng.uniform(1.0, cond);
  Matrix m = q * lambda.asDiagonal() * q.adjoint();
  return 0.5 * (m + m.adjoint());
}

Matrix random_invertible(Rng& rng, int n, double cond) {
  const Matrix q = random_unitary(rng, n);
  const Matrix r = random_unitary(rng, n);
  Vector s(n);
  for (int i = 0; i < n; ++i) s[i] = rng.uniform(1.0, cond);
  return q * s.asDiagonal() * r;
}

RandomComplex random_complex(Rng& rng, int max_degrees, int max_dim, double metric_cond, bool metrics) {
  RandomComplex out;
  const int count = rng.integer(1, max_degrees);
  auto& s = out.spec;
  s.min_degree = rng.integer(-1, 1);
  for (int i = 0; i < count; ++i) s.dims.push_back(rng.integer(0, max_dim));
  std::vector<int> ranks(count, 0);
  for (int i = 0; i + 1 < count; ++i) {
    const int in = i > 0 ? ranks[i - 1] : 0;
    ranks[i] = rng.integer(0, std::min(s.dims[i] - in, s.dims[i + 1]));
  }
  std::vector<Matrix> change(count);
  for (int i = 0; i < count; ++i) change[i] = random_invertible(rng, s.dims[i], 10.0);
  for (int i = 0; i + 1 < count; ++i) {
    const int in = i > 0 ? ranks[i - 1] : 0;
    Matrix canon = Matrix::Zero(s.dims[i + 1], s.dims[i]);
    // coexact block of C^i onto the exact block of C^{i+1}
    for (int r = 0; r < ranks[i]; ++r) canon(r, in + r) = rng.uniform(0.5, 2.0);
    Matrix d = change[i + 1] * canon * change[i].inverse();
    s.differentials.push_back(d);
  }
  for (int i = 0; i < count; ++i) {
    const int in = i > 0 ? ranks[i - 1] : 0;
    out.betti.push_back(s.dims[i] - in - ranks[i]);
    s.metrics.push_back(metrics ? random_metric(rng, s.dims[i], metric_cond) : Matrix());
  }
  return out;
}

std::string fixture_path(const std::string& name) { return std::string(DEFJUMP_FIXTURES) + "/" + name; }

std::vector<std::string> series_fixture_names() {
  return {"trivial.json",          "toy.json",        "order2.json",        "torus.json",
          "iwasawa-trivial.json",  "iwasawa-cotangent.json", "iwasawa-tangent.json", "iwasawa-tangent-x3.json",
          "dgla_abelian.json"};
}

std::vector<std::string> dgla_fixture_names() {
  return {"dgla_abelian.json", "dgla_obstructed.json", "iwasawa-tangent.json", "iwasawa-cotangent.json"};
}

defjump::ResolvedModel load_fixture(const std::string& name) {
  return defjump::resolve_model(defjump::load_model(fixture_path(name)), defjump::Config{});
}

int rank_of(const Matrix& m, double rel_tol) {
  if (m.size() == 0) return 0;
  Eigen::JacobiSVD<Matrix> svd(m);
  const auto& s = svd.singularValues();
  if (s[0] == 0.0) return 0;
  int r = 0;
  for (Eigen::Index i = 0; i < s.size(); ++i) r += s[i] > rel_tol * s[0];
  return r;
}

}  // namespace testsupport
