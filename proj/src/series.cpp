#include "defjump/series.hpp"

#include <algorithm>

#include "defjump/kernels.hpp"

namespace defjump {

OperatorSeries::OperatorSeries(GradedComplex complex, const std::vector<std::vector<Matrix>>& terms)
    : complex_(std::move(complex)), order_(static_cast<int>(terms.size())) {
  const int lo = complex_.min_degree();
  const int hi = complex_.max_degree();
  terms_.resize(order_ + 1);
  for (int k = 0; k <= order_; ++k) {
    auto& row = terms_[k];
    row.resize(hi - lo + 2);
    for (int q = lo - 1; q <= hi; ++q) {
      const int rows = complex_.dim(q + 1);
      const int cols = complex_.dim(q);
      Matrix m;
      if (k == 0) {
        m = complex_.differential(q);
      } else {
        const auto& given = terms[k - 1];
        const int idx = q - lo;
        if (idx >= 0 && idx < static_cast<int>(given.size()) && given[idx].size() > 0) {
          m = given[idx];
          if (m.rows() != rows || m.cols() != cols) {
            throw Error(ErrorKind::ShapeMismatch, "P_" + std::to_string(k) + " out of degree " + std::to_string(q) +
                                                      " has shape " + std::to_string(m.rows()) + "x" +
                                                      std::to_string(m.cols()));
          }
          if (!m.allFinite()) throw Error(ErrorKind::ShapeMismatch, "non-finite operator entry");
        } else {
          m = Matrix::Zero(rows, cols);
        }
      }
      row[q - lo + 1] = std::move(m);
    }
  }
}

OperatorSeries OperatorSeries::constant(GradedComplex complex, int order) {
  return OperatorSeries(std::move(complex), std::vector<std::vector<Matrix>>(order));
}

const Matrix& OperatorSeries::term(int k, int q) const {
  if (k < 0 || k > order_) {
    throw Error(ErrorKind::OrderExceedsTruncation,
                "term " + std::to_string(k) + " beyond truncation order " + std::to_string(order_));
  }
  if (q < complex_.min_degree() - 1 || q > complex_.max_degree()) {
    throw Error(ErrorKind::DegreeOutOfRange, "no operator out of degree " + std::to_string(q));
  }
  return terms_[k][q - complex_.min_degree() + 1];
}

double OperatorSeries::perturbation_scale() const {
  double s = 0.0;
  for (int k = 1; k <= order_; ++k) {
    for (const Matrix& m : terms_[k]) {
      if (m.size() > 0) s = std::max(s, m.norm());
    }
  }
  return s;
}

Vector cauchy_coefficient(const OperatorSeries& p, int q, int n, std::span<const Vector> coeffs, int k_min) {
  const int rows = p.complex().dim(q + 1);
  const int cols = p.complex().dim(q);
  Vector out = Vector::Zero(rows);
  if (rows == 0 || cols == 0) return out;
  const int count = static_cast<int>(coeffs.size());
  for (int j = 0; j < count && j <= n; ++j) {
    const int k = n - j;
    if (k < k_min || k > p.order()) continue;
    const Matrix& pk = p.term(k, q);
    const Vector& a = coeffs[j];
    if (a.size() != cols) throw Error(ErrorKind::ShapeMismatch, "coefficient has wrong dimension");
    kernels::cgemv_acc(rows, cols, pk.data(), static_cast<int>(pk.outerStride()), a.data(), out.data());
  }
  return out;
}

Matrix truncated_differential(const OperatorSeries& p, int q, int n) {
  const int rows = p.complex().dim(q + 1);
  const int cols = p.complex().dim(q);
  Matrix m = Matrix::Zero(static_cast<Eigen::Index>(n) * rows, static_cast<Eigen::Index>(n) * cols);
  if (rows == 0 || cols == 0) return m;
  for (int r = 0; r < n; ++r) {
    for (int s = 0; s <= r; ++s) {
      if (r - s > p.order()) continue;
      m.block(static_cast<Eigen::Index>(r) * rows, static_cast<Eigen::Index>(s) * cols, rows, cols) =
          p.term(r - s, q);
    }
  }
  return m;
}

std::vector<Vector> split_coefficients(const Vector& stacked, int dim, int n) {
  std::vector<Vector> out(n);
  for (int j = 0; j < n; ++j) out[j] = stacked.segment(static_cast<Eigen::Index>(j) * dim, dim);
  return out;
}

}  // namespace defjump
