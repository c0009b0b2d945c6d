#pragma once

#include <span>
#include <vector>

#include "defjump/hodge.hpp"

namespace defjump {

/// A perturbed differential P(t) = P_0 + t P_1 + ... + t^N P_N truncated at
/// order N, where P_0 is the differential of the underlying complex and every
/// P_k raises degree by one.
class OperatorSeries {
 public:
  OperatorSeries() = default;

  /// terms[k-1][q - min_degree] is P_k out of degree q, of shape
  /// dim(q+1) x dim(q). Empty matrices stand for zero maps.
  /// Throws ShapeMismatch.
  OperatorSeries(GradedComplex complex, const std::vector<std::vector<Matrix>>& terms);

  /// The constant series P(t) = P_0 at truncation order N.
  static OperatorSeries constant(GradedComplex complex, int order);

  const GradedComplex& complex() const { return complex_; }
  int order() const { return order_; }

  /// P_k out of degree q for 0 <= k <= order and q in [min_degree-1, max_degree].
  const Matrix& term(int k, int q) const;

  /// Largest Frobenius norm among P_1..P_N.
  double perturbation_scale() const;

 private:
  GradedComplex complex_;
  int order_ = 0;
  std::vector<std::vector<Matrix>> terms_;  // [k][q - min_degree + 1], k = 0..order
};

/// sum_j P_{n-j} coeffs[j] over j < coeffs.size() with k_min <= n-j <= order,
/// for cochains in degree q. This is the order-n coefficient of P(t) a(t)
/// when k_min = 0 and of (P(t) - P_0) a(t) when k_min = 1.
Vector cauchy_coefficient(const OperatorSeries& p, int q, int n, std::span<const Vector> coeffs, int k_min = 0);

/// Block lower-triangular band matrix of the differential of the complex
/// truncated mod t^n, out of degree q: blocks P_{r-s} at (r, s), 0 <= s <= r < n.
Matrix truncated_differential(const OperatorSeries& p, int q, int n);

/// Splits a stacked truncated cochain into its n coefficient vectors.
std::vector<Vector> split_coefficients(const Vector& stacked, int dim, int n);

}  // namespace defjump
