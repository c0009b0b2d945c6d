#include "defjump/hodge.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace defjump {

namespace {

Matrix zeros(int rows, int cols) { return Matrix::Zero(rows, cols); }

std::string describe_shape(const Matrix& m) {
  std::ostringstream os;
  os << m.rows() << "x" << m.cols();
  return os.str();
}

}  // namespace

double operator_norm(const Matrix& m) {
  if (m.size() == 0) return 0.0;
  Eigen::JacobiSVD<Matrix> svd(m);
  return svd.singularValues()(0);
}

const Matrix& GradedComplex::differential(int q) const {
  if (q < min_degree_ - 1 || q > max_degree()) {
    throw Error(ErrorKind::DegreeOutOfRange, "no differential out of degree " + std::to_string(q));
  }
  return differentials_[q - min_degree_ + 1];
}

const Matrix& GradedComplex::metric(int q) const {
  if (!in_range(q)) throw Error(ErrorKind::DegreeOutOfRange, "degree " + std::to_string(q));
  return metrics_[q - min_degree_];
}

int GradedComplex::total_dim() const {
  int total = 0;
  for (int d : dims_) total += d;
  return total;
}

GradedComplex validate_complex(const ComplexSpec& spec, double tolerance) {
  if (spec.dims.empty()) throw Error(ErrorKind::ShapeMismatch, "complex has no degrees");
  for (int d : spec.dims) {
    if (d < 0) throw Error(ErrorKind::ShapeMismatch, "negative dimension");
  }
  const int count = static_cast<int>(spec.dims.size());
  if (static_cast<int>(spec.differentials.size()) > count) {
    throw Error(ErrorKind::ShapeMismatch, "more differentials than degrees");
  }
  if (!spec.metrics.empty() && static_cast<int>(spec.metrics.size()) != count) {
    throw Error(ErrorKind::ShapeMismatch, "metric list must cover every degree");
  }

  GradedComplex cx;
  cx.min_degree_ = spec.min_degree;
  cx.dims_ = spec.dims;
  auto dim_at = [&](int i) { return (i >= 0 && i < count) ? spec.dims[i] : 0; };

  cx.differentials_.resize(count + 1);
  cx.differentials_[0] = zeros(dim_at(0), 0);
  for (int i = 0; i < count; ++i) {
    const int rows = dim_at(i + 1);
    const int cols = dim_at(i);
    Matrix d;
    if (i < static_cast<int>(spec.differentials.size()) && spec.differentials[i].size() > 0) {
      d = spec.differentials[i];
    } else {
      d = zeros(rows, cols);
    }
    if (d.rows() != rows || d.cols() != cols) {
      // An empty placeholder of the wrong nominal shape is still a zero map.
      if (d.size() == 0) {
        d = zeros(rows, cols);
      } else {
        throw Error(ErrorKind::ShapeMismatch, "differential out of degree " + std::to_string(spec.min_degree + i) +
                                                  " has shape " + describe_shape(d) + ", expected " +
                                                  std::to_string(rows) + "x" + std::to_string(cols));
      }
    }
    if (!d.allFinite()) throw Error(ErrorKind::ShapeMismatch, "non-finite differential entry");
    cx.differentials_[i + 1] = std::move(d);
  }

  for (int i = 0; i + 1 < count; ++i) {
    const Matrix& a = cx.differentials_[i + 1];
    const Matrix& b = cx.differentials_[i + 2];
    if (a.size() == 0 || b.size() == 0) continue;
    const Matrix sq = b * a;
    const double residual = sq.size() == 0 ? 0.0 : sq.cwiseAbs().maxCoeff();
    const double scale = std::max(1.0, a.cwiseAbs().maxCoeff() * b.cwiseAbs().maxCoeff());
    if (residual > tolerance * scale) {
      std::ostringstream os;
      os << "d o d is nonzero out of degree " << spec.min_degree + i << " (max entry " << residual << ")";
      throw Error(ErrorKind::SquareNonzero, os.str());
    }
  }

  cx.metrics_.resize(count);
  for (int i = 0; i < count; ++i) {
    const int d = spec.dims[i];
    if (spec.metrics.empty() || spec.metrics[i].size() == 0) {
      cx.metrics_[i] = Matrix::Identity(d, d);
      continue;
    }
    const Matrix& m = spec.metrics[i];
    if (m.rows() != d || m.cols() != d) {
      throw Error(ErrorKind::ShapeMismatch, "metric in degree " + std::to_string(spec.min_degree + i) +
                                                " has shape " + describe_shape(m));
    }
    if (!m.allFinite()) throw Error(ErrorKind::NonHermitianMetric, "non-finite metric entry");
    const double scale = std::max(1.0, m.cwiseAbs().maxCoeff());
    if ((m - m.adjoint()).cwiseAbs().maxCoeff() > tolerance * scale) {
      throw Error(ErrorKind::NonHermitianMetric,
                  "metric in degree " + std::to_string(spec.min_degree + i) + " is not Hermitian");
    }
    const Matrix herm = 0.5 * (m + m.adjoint());
    Eigen::SelfAdjointEigenSolver<Matrix> eig(herm, Eigen::EigenvaluesOnly);
    if (eig.eigenvalues().minCoeff() <= 0.0) {
      throw Error(ErrorKind::NonHermitianMetric,
                  "metric in degree " + std::to_string(spec.min_degree + i) + " is not positive definite");
    }
    cx.metrics_[i] = herm;
  }
  return cx;
}

const HodgeData::Degree& HodgeData::at(int q) const {
  if (q < min_degree_ || q > max_degree()) {
    throw Error(ErrorKind::DegreeOutOfRange, "degree " + std::to_string(q));
  }
  return per_degree_[q - min_degree_];
}

Vector HodgeData::harmonic_part(int q, const Vector& v) const { return at(q).harmonic * v; }

Vector HodgeData::adjoint_green(int q, const Vector& v) const {
  const Degree& d = at(q);
  return d.adjoint * (d.green * v);
}

double HodgeData::norm(int q, const Vector& v) const {
  return std::sqrt(std::max(0.0, (v.adjoint() * at(q).metric * v)(0, 0).real()));
}

HodgeData hodge_data(const GradedComplex& cx, double rank_tol) {
  HodgeData hd;
  hd.min_degree_ = cx.min_degree();
  hd.rank_tol_ = rank_tol;
  hd.per_degree_.resize(cx.degree_count());

  // Whitening W with M = W^* W (W = L^*, M = L L^*).
  std::vector<Matrix> whiten(cx.degree_count()), unwhiten(cx.degree_count());
  for (int q = cx.min_degree(); q <= cx.max_degree(); ++q) {
    const int i = q - cx.min_degree();
    const int d = cx.dim(q);
    if (d == 0) {
      whiten[i] = unwhiten[i] = Matrix(0, 0);
      continue;
    }
    Eigen::LLT<Matrix> llt(cx.metric(q));
    Matrix w = llt.matrixU();
    whiten[i] = w;
    unwhiten[i] = w.triangularView<Eigen::Upper>().solve(Matrix::Identity(d, d));
  }
  auto metric_inverse = [&](int q) {
    const Matrix& u = unwhiten[q - cx.min_degree()];
    return Matrix(u * u.adjoint());
  };

  for (int q = cx.min_degree(); q <= cx.max_degree(); ++q) {
    HodgeData::Degree& out = hd.per_degree_[q - cx.min_degree()];
    const int d = cx.dim(q);
    out.metric = cx.metric(q);
    out.whiten = whiten[q - cx.min_degree()];
    const Matrix& d_in = cx.differential(q - 1);
    const Matrix& d_out = cx.differential(q);
    if (cx.in_range(q - 1) && cx.dim(q - 1) > 0 && d > 0) {
      out.adjoint = metric_inverse(q - 1) * d_in.adjoint() * cx.metric(q);
    } else {
      out.adjoint = Matrix::Zero(cx.dim(q - 1), d);
    }
    out.laplacian = Matrix::Zero(d, d);
    if (d == 0) {
      out.harmonic = out.green = Matrix(0, 0);
      out.basis = Matrix(0, 0);
      continue;
    }
    if (out.adjoint.size() > 0) out.laplacian += d_in * out.adjoint;
    if (cx.in_range(q + 1) && cx.dim(q + 1) > 0) {
      const Matrix adj_next = metric_inverse(q) * d_out.adjoint() * cx.metric(q + 1);
      out.laplacian += adj_next * d_out;
    }

    const Matrix& w = whiten[q - cx.min_degree()];
    const Matrix& winv = unwhiten[q - cx.min_degree()];
    Matrix sym = w * out.laplacian * winv;
    sym = 0.5 * (sym + sym.adjoint());
    Eigen::SelfAdjointEigenSolver<Matrix> eig(sym);
    const Eigen::VectorXd& lambda = eig.eigenvalues();
    const Matrix& u = eig.eigenvectors();
    const double top = std::max(0.0, lambda.maxCoeff());
    const double threshold = rank_tol * top;

    std::vector<int> kernel, positive;
    for (int k = 0; k < d; ++k) {
      const double l = lambda(k);
      if (top <= 0.0 || l <= threshold) {
        kernel.push_back(k);
      } else {
        positive.push_back(k);
      }
      if (top > 0.0 && l > threshold * 1e-2 && l < threshold * 1e2) {
        std::ostringstream os;
        os << "degree " << q << ": Laplacian eigenvalue " << l << " is near the kernel threshold " << threshold;
        hd.warnings_.push_back(os.str());
      }
    }
    Matrix u0(d, static_cast<int>(kernel.size()));
    for (std::size_t k = 0; k < kernel.size(); ++k) u0.col(k) = u.col(kernel[k]);
    Matrix green_w = Matrix::Zero(d, d);
    for (int k : positive) green_w += (1.0 / lambda(k)) * u.col(k) * u.col(k).adjoint();

    out.basis = winv * u0;
    out.harmonic = winv * (u0 * u0.adjoint()) * w;
    out.green = winv * green_w * w;
  }
  return hd;
}

Matrix cohomology_basis(const GradedComplex& cx, const HodgeData& hd, int q) {
  if (!cx.in_range(q)) throw Error(ErrorKind::DegreeOutOfRange, "degree " + std::to_string(q));
  return hd.harmonic_basis(q);
}

double HodgeResiduals::max() const {
  return std::max({decomposition, orthogonality, idempotence, self_adjoint, commutes_d, commutes_adjoint,
                   harmonic_closed});
}

HodgeResiduals hodge_residuals(const GradedComplex& cx, const HodgeData& hd, int q) {
  HodgeResiduals r;
  const int d = cx.dim(q);
  if (d == 0) return r;
  const Matrix id = Matrix::Identity(d, d);
  const Matrix& h = hd.harmonic_projector(q);
  const Matrix& g = hd.green(q);
  const Matrix& lap = hd.laplacian(q);
  r.decomposition = std::max(operator_norm(id - h - lap * g), operator_norm(id - h - g * lap));
  r.orthogonality = std::max(operator_norm(h * g), operator_norm(g * h));
  r.idempotence = operator_norm(h * h - h);
  r.self_adjoint = operator_norm(cx.metric(q) * h - h.adjoint() * cx.metric(q));
  const Matrix& dq = cx.differential(q);
  if (cx.in_range(q + 1) && cx.dim(q + 1) > 0) {
    r.commutes_d = operator_norm(dq * g - hd.green(q + 1) * dq);
    r.harmonic_closed = std::max(operator_norm(dq * h), operator_norm(hd.harmonic_projector(q + 1) * dq));
  }
  if (cx.in_range(q - 1) && cx.dim(q - 1) > 0) {
    const Matrix& adj = hd.adjoint(q);
    r.commutes_adjoint = operator_norm(adj * g - hd.green(q - 1) * adj);
  }
  return r;
}

}  // namespace defjump
