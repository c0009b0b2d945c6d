#pragma once

#include <string>
#include <vector>

#include "defjump/types.hpp"

namespace defjump {

/// Unvalidated description of a finite cochain complex.
struct ComplexSpec {
  int min_degree = 0;
  std::vector<int> dims;
  /// differentials[i] maps degree min_degree+i to min_degree+i+1; missing
  /// entries (or a shorter vector) mean zero maps.
  std::vector<Matrix> differentials;
  /// metrics[i] is the Gram matrix in degree min_degree+i; empty means identity.
  std::vector<Matrix> metrics;
};

/// A finite cochain complex with Hermitian inner products in each degree.
/// Immutable once validated; only validate_complex constructs it.
class GradedComplex {
 public:
  GradedComplex() = default;

  int min_degree() const { return min_degree_; }
  int max_degree() const { return min_degree_ + static_cast<int>(dims_.size()) - 1; }
  int degree_count() const { return static_cast<int>(dims_.size()); }
  bool in_range(int q) const { return q >= min_degree_ && q <= max_degree(); }

  /// Dimension in degree q; zero outside the range.
  int dim(int q) const { return in_range(q) ? dims_[q - min_degree_] : 0; }

  /// The map from degree q to q+1, of shape dim(q+1) x dim(q). Defined for
  /// q in [min_degree-1, max_degree]; boundary maps are zero-sized.
  const Matrix& differential(int q) const;

  /// Gram matrix of the inner product in degree q.
  const Matrix& metric(int q) const;

  int total_dim() const;

 private:
  friend GradedComplex validate_complex(const ComplexSpec& spec, double tolerance);

  int min_degree_ = 0;
  std::vector<int> dims_;
  std::vector<Matrix> differentials_;  // index q - min_degree + 1
  std::vector<Matrix> metrics_;
};

/// Checks shapes, the square-zero condition and the metrics.
/// Throws ShapeMismatch, SquareNonzero or NonHermitianMetric.
GradedComplex validate_complex(const ComplexSpec& spec, double tolerance = 1e-9);

/// Harmonic theory of a GradedComplex: adjoint differential, Laplacian,
/// harmonic projector and Green operator in every degree.
class HodgeData {
 public:
  HodgeData() = default;

  int min_degree() const { return min_degree_; }
  int max_degree() const { return min_degree_ + static_cast<int>(per_degree_.size()) - 1; }

  /// Adjoint of differential(q-1): shape dim(q-1) x dim(q).
  const Matrix& adjoint(int q) const { return at(q).adjoint; }
  const Matrix& laplacian(int q) const { return at(q).laplacian; }
  const Matrix& harmonic_projector(int q) const { return at(q).harmonic; }
  const Matrix& green(int q) const { return at(q).green; }
  /// Columns form a basis of ker laplacian(q), orthonormal for metric(q).
  const Matrix& harmonic_basis(int q) const { return at(q).basis; }
  int harmonic_dim(int q) const { return static_cast<int>(at(q).basis.cols()); }

  /// H v for v in degree q.
  Vector harmonic_part(int q, const Vector& v) const;
  /// adjoint(q) * green(q) * v, landing in degree q-1.
  Vector adjoint_green(int q, const Vector& v) const;
  /// Norm induced by metric(q).
  double norm(int q, const Vector& v) const;
  /// Maps degree-q vectors into coordinates where metric(q) is the identity.
  const Matrix& whitening(int q) const { return at(q).whiten; }

  double rank_tol() const { return rank_tol_; }
  /// Eigenvalues that landed within two decades of the kernel threshold.
  const std::vector<std::string>& warnings() const { return warnings_; }

 private:
  friend HodgeData hodge_data(const GradedComplex& cx, double rank_tol);

  struct Degree {
    Matrix adjoint, laplacian, harmonic, green, basis, whiten;
    Matrix metric;
  };
  const Degree& at(int q) const;

  int min_degree_ = 0;
  double rank_tol_ = 1e-10;
  std::vector<Degree> per_degree_;
  std::vector<std::string> warnings_;
};

HodgeData hodge_data(const GradedComplex& cx, double rank_tol = 1e-10);

/// Metric-orthonormal basis of harmonic representatives of H^q.
/// Throws DegreeOutOfRange.
Matrix cohomology_basis(const GradedComplex& cx, const HodgeData& hd, int q);

/// Residuals of the Hodge identities in one degree, as operator 2-norms.
struct HodgeResiduals {
  double decomposition = 0;   // max of |Id - H - Delta G| and |Id - H - G Delta|
  double orthogonality = 0;   // max of |HG|, |GH|
  double idempotence = 0;     // |H^2 - H|
  double self_adjoint = 0;    // |M H - H^* M|
  double commutes_d = 0;      // |d G - G d|
  double commutes_adjoint = 0;  // |d* G - G d*|
  double harmonic_closed = 0;   // max of |d H|, |H d|

  double max() const;
};

HodgeResiduals hodge_residuals(const GradedComplex& cx, const HodgeData& hd, int q);

/// Largest singular value.
double operator_norm(const Matrix& m);

}  // namespace defjump
