#include "defjump/jump.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace defjump {
namespace {

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(3);
  os << std::scientific << v;
  return os.str();
}

void require_degree(const GradedComplex& cx, int q) {
  if (!cx.in_range(q)) throw Error(ErrorKind::DegreeOutOfRange, "degree " + std::to_string(q) + " out of range");
}

struct SvdSplit {
  Matrix range;   // orthonormal basis of the column space
  Matrix kernel;  // orthonormal basis of the null space
  std::vector<double> singular_values;
};

SvdSplit svd_split(const Matrix& a, double rank_tol) {
  SvdSplit out;
  const Eigen::Index rows = a.rows();
  const Eigen::Index cols = a.cols();
  if (rows == 0 || cols == 0) {
    out.range = Matrix(rows, 0);
    out.kernel = Matrix::Identity(cols, cols);
    return out;
  }
  Eigen::JacobiSVD<Matrix> svd(a, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const auto& s = svd.singularValues();
  const double top = s.size() ? s[0] : 0.0;
  Eigen::Index r = 0;
  for (Eigen::Index i = 0; i < s.size(); ++i) {
    out.singular_values.push_back(s[i]);
    if (top > 0.0 && s[i] > rank_tol * top) ++r;
  }
  out.range = svd.matrixU().leftCols(r);
  out.kernel = svd.matrixV().rightCols(cols - r);
  return out;
}

std::vector<Vector> columns_as_coeffs(const Matrix& m, Eigen::Index c, int dim, int n) {
  return split_coefficients(m.col(c), dim, n);
}

}  // namespace

IntegrabilityReport check_integrability(const OperatorSeries& p, double tol) {
  const GradedComplex& cx = p.complex();
  double s = 0.0;
  for (int k = 0; k <= p.order(); ++k) {
    for (int q = cx.min_degree(); q <= cx.max_degree(); ++q) s = std::max(s, p.term(k, q).norm());
  }
  IntegrabilityReport rep;
  rep.tolerance = tol * std::max(1.0, s * s);
  for (int n = 0; n <= p.order(); ++n) {
    double worst = 0.0;
    int worst_q = cx.min_degree();
    for (int q = cx.min_degree(); q + 1 <= cx.max_degree(); ++q) {
      if (cx.dim(q) == 0 || cx.dim(q + 2) == 0) continue;
      Matrix acc = Matrix::Zero(cx.dim(q + 2), cx.dim(q));
      for (int i = 0; i <= n; ++i) acc += p.term(i, q + 1) * p.term(n - i, q);
      const double r = acc.norm();
      if (r > worst) {
        worst = r;
        worst_q = q;
      }
    }
    rep.residual.push_back(worst);
    rep.worst_degree.push_back(worst_q);
    if (!rep.first_failure && worst > rep.tolerance) rep.first_failure = n;
  }
  return rep;
}

void require_integrable(const OperatorSeries& p, int through_order, double tol) {
  const IntegrabilityReport rep = check_integrability(p, tol);
  if (rep.first_failure && *rep.first_failure <= through_order) {
    const int n = *rep.first_failure;
    throw Error(ErrorKind::IntegrabilityFailure, "order " + std::to_string(n) + ", degree " +
                                                     std::to_string(rep.worst_degree[n]) + ", residual " +
                                                     fmt(rep.residual[n]));
  }
}

TruncatedCohomology truncated_cohomology(const OperatorSeries& p, int q, int n, double rank_tol) {
  const GradedComplex& cx = p.complex();
  require_degree(cx, q);
  if (n < 1 || n > p.order() + 1) {
    throw Error(ErrorKind::OrderExceedsTruncation,
                "truncation mod t^" + std::to_string(n) + " needs order " + std::to_string(n - 1) +
                    " but the series has order " + std::to_string(p.order()));
  }
  const SvdSplit out = svd_split(truncated_differential(p, q, n), rank_tol);
  const SvdSplit in = svd_split(truncated_differential(p, q - 1, n), rank_tol);

  TruncatedCohomology tc;
  tc.degree = q;
  tc.order = n;
  tc.kernel_dim = static_cast<int>(out.kernel.cols());
  tc.incoming_rank = static_cast<int>(in.range.cols());
  tc.dimension = tc.kernel_dim - tc.incoming_rank;

  Matrix k = out.kernel;
  if (in.range.cols() > 0) k -= in.range * (in.range.adjoint() * k);
  const SvdSplit reps = svd_split(k, 1e-8);
  tc.representatives = reps.range.leftCols(std::min<Eigen::Index>(reps.range.cols(), std::max(tc.dimension, 0)));
  return tc;
}

Extension extend_class(const OperatorSeries& p, const HodgeData& hd, int q, const Vector& alpha, int order,
                       double obstruction_tol, double closed_tol) {
  const GradedComplex& cx = p.complex();
  require_degree(cx, q);
  if (order < 1 || order > p.order()) {
    throw Error(ErrorKind::OrderExceedsTruncation,
                "order " + std::to_string(order) + " exceeds series order " + std::to_string(p.order()));
  }
  if (alpha.size() != cx.dim(q)) throw Error(ErrorKind::ShapeMismatch, "class has wrong dimension");
  const Matrix& p0 = p.term(0, q);
  const double closed = (p0 * alpha).norm();
  if (closed > closed_tol * std::max(1.0, p0.norm() * alpha.norm())) {
    throw Error(ErrorKind::NotClosed, "differential of the class has norm " + fmt(closed));
  }
  require_integrable(p, order);

  const bool has_target = cx.in_range(q + 1);
  Extension e;
  e.degree = q;
  e.order = order;
  e.coeffs.push_back(alpha);
  for (int n = 1; n <= order; ++n) {
    const Vector r = cauchy_coefficient(p, q, n, e.coeffs, 1);
    Vector h = Vector::Zero(cx.dim(q + 1));
    Vector next = Vector::Zero(cx.dim(q));
    if (has_target) {
      h = hd.harmonic_part(q + 1, r);
      next = -hd.adjoint_green(q + 1, r);
    }
    const double hn = has_target ? hd.norm(q + 1, h) : 0.0;
    const double scale = obstruction_scale(p, q, e.coeffs);
    if (!e.obstructed_at && scale > 0.0 && hn > obstruction_tol * scale) {
      e.obstructed_at = n;
      e.obstruction_witness = h;
    }
    e.harmonic.push_back(std::move(h));
    e.harmonic_norms.push_back(hn);
    e.scales.push_back(scale);
    e.coeffs.push_back(std::move(next));
  }
  return e;
}

double extension_fixed_point_residual(const OperatorSeries& p, const HodgeData& hd, const Extension& e) {
  const GradedComplex& cx = p.complex();
  double worst = 0.0;
  for (int n = 1; n <= e.order; ++n) {
    Vector r = e.coeffs[n];
    if (cx.in_range(e.degree + 1)) {
      r += hd.adjoint_green(e.degree + 1,
                            cauchy_coefficient(p, e.degree, n, std::span<const Vector>(e.coeffs.data(), n), 1));
    }
    worst = std::max(worst, r.norm());
  }
  return worst;
}

std::vector<double> extension_closedness(const OperatorSeries& p, const Extension& e) {
  std::vector<double> out;
  for (int n = 0; n <= e.order; ++n) {
    out.push_back(cauchy_coefficient(p, e.degree, n, std::span<const Vector>(e.coeffs.data(), n + 1), 0).norm());
  }
  return out;
}

Vector obstruction_class(const OperatorSeries& p, const HodgeData& hd, int q, std::span<const Vector> coeffs) {
  const GradedComplex& cx = p.complex();
  const int n = static_cast<int>(coeffs.size());
  if (!cx.in_range(q + 1)) return Vector::Zero(cx.dim(q + 1));
  return hd.harmonic_part(q + 1, cauchy_coefficient(p, q, n, coeffs, 1));
}

double obstruction_scale(const OperatorSeries& p, int q, std::span<const Vector> coeffs) {
  const int n = static_cast<int>(coeffs.size());
  double s = 0.0;
  for (int j = 0; j < n; ++j) {
    if (n - j > p.order()) continue;
    s += p.term(n - j, q).norm() * coeffs[j].norm();
  }
  return s;
}

ObstructionImage obstruction_map_image(const OperatorSeries& p, const HodgeData& hd, int q, int n, double rank_tol,
                                       double obstruction_tol) {
  const GradedComplex& cx = p.complex();
  require_degree(cx, q);
  if (n < 1 || n > p.order()) {
    throw Error(ErrorKind::OrderExceedsTruncation,
                "obstruction order " + std::to_string(n) + " exceeds series order " + std::to_string(p.order()));
  }
  require_integrable(p, n);

  ObstructionImage img;
  img.degree = q;
  img.order = n;
  const int dq = cx.dim(q);
  const int dt = cx.dim(q + 1);
  const SvdSplit closed = svd_split(truncated_differential(p, q, n), rank_tol);
  img.domain_dim = static_cast<int>(closed.kernel.cols());
  img.basis = Matrix(dt, 0);
  if (dt == 0 || img.domain_dim == 0) return img;

  const Matrix& w = hd.whitening(q + 1);
  Matrix classes(dt, img.domain_dim);
  double scale = 0.0;
  for (Eigen::Index c = 0; c < closed.kernel.cols(); ++c) {
    const auto coeffs = columns_as_coeffs(closed.kernel, c, dq, n);
    classes.col(c) = w * obstruction_class(p, hd, q, coeffs);
    scale = std::max(scale, obstruction_scale(p, q, coeffs));
  }
  img.threshold = obstruction_tol * scale;

  Eigen::JacobiSVD<Matrix> svd(classes, Eigen::ComputeThinU);
  Eigen::Index r = 0;
  for (Eigen::Index i = 0; i < svd.singularValues().size(); ++i) {
    img.singular_values.push_back(svd.singularValues()[i]);
    if (scale > 0.0 && svd.singularValues()[i] > img.threshold) ++r;
  }
  img.basis = w.triangularView<Eigen::Upper>().solve(svd.matrixU().leftCols(r));

  const SvdSplit exact = svd_split(truncated_differential(p, q - 1, n), rank_tol);
  for (Eigen::Index c = 0; c < exact.range.cols(); ++c) {
    const auto coeffs = columns_as_coeffs(exact.range, c, dq, n);
    const double s = obstruction_scale(p, q, coeffs);
    if (s <= 0.0) continue;
    img.exact_leak = std::max(img.exact_leak, hd.norm(q + 1, obstruction_class(p, hd, q, coeffs)) / s);
  }
  if (img.exact_leak > obstruction_tol) {
    throw Error(ErrorKind::IntegrabilityFailure,
                "exact truncated cochains carry obstruction classes of relative size " + fmt(img.exact_leak));
  }
  return img;
}

std::string_view to_string(JumpSide side) {
  return side == JumpSide::ExtensionObstruction ? "ExtensionObstruction" : "ExactnessObstruction";
}

Vector normalize_witness(const Vector& v) {
  if (v.size() == 0) return v;
  Eigen::Index best = 0;
  for (Eigen::Index i = 1; i < v.size(); ++i) {
    if (std::abs(v[i]) > std::abs(v[best]) * (1.0 + 1e-9)) best = i;
  }
  const double mag = std::abs(v[best]);
  if (mag == 0.0) return v;
  Vector out = v * (std::conj(v[best]) / mag);
  out[best] = Complex(mag, 0.0);
  return out;
}

std::optional<int> first_extension_obstruction(const OperatorSeries& p, const HodgeData& hd, int q, int order,
                                               const JumpOptions& opt) {
  std::optional<int> first;
  const Matrix& basis = hd.harmonic_basis(q);
  for (Eigen::Index c = 0; c < basis.cols(); ++c) {
    const Extension e = extend_class(p, hd, q, basis.col(c), order, opt.obstruction_tol);
    if (e.obstructed_at && (!first || *e.obstructed_at < *first)) first = e.obstructed_at;
  }
  return first;
}

std::optional<int> first_image_obstruction(const OperatorSeries& p, const HodgeData& hd, int q, int order,
                                           const JumpOptions& opt) {
  for (int n = 1; n <= order; ++n) {
    if (obstruction_map_image(p, hd, q, n, opt.rank_tol, opt.obstruction_tol).rank() > 0) return n;
  }
  return std::nullopt;
}

JumpVerdict jump_verdict(const OperatorSeries& p, const HodgeData& hd, int q, int order, const JumpOptions& opt) {
  const GradedComplex& cx = p.complex();
  require_degree(cx, q);
  if (order < 1 || order > p.order()) {
    throw Error(ErrorKind::OrderExceedsTruncation,
                "order " + std::to_string(order) + " exceeds series order " + std::to_string(p.order()));
  }
  require_integrable(p, order, opt.integrability_tol);

  JumpVerdict v;
  v.degree = q;
  v.order_checked = order;

  const Matrix& basis = hd.harmonic_basis(q);
  for (Eigen::Index c = 0; c < basis.cols(); ++c) {
    const Extension e = extend_class(p, hd, q, basis.col(c), order, opt.obstruction_tol);
    if (!e.obstructed_at) continue;
    JumpFinding f;
    f.side = JumpSide::ExtensionObstruction;
    f.source_degree = q;
    f.order = *e.obstructed_at;
    f.witness = normalize_witness(e.obstruction_witness);
    f.class_index = static_cast<int>(c);
    v.extension_findings.push_back(std::move(f));
  }

  if (cx.in_range(q - 1)) {
    for (int n = 1; n <= order; ++n) {
      const ObstructionImage img = obstruction_map_image(p, hd, q - 1, n, opt.rank_tol, opt.obstruction_tol);
      v.exactness_ranks.push_back(img.rank());
      if (img.rank() == 0) continue;
      JumpFinding f;
      f.side = JumpSide::ExactnessObstruction;
      f.source_degree = q - 1;
      f.order = n;
      f.witness = normalize_witness(img.basis.col(0));
      v.exactness_findings.push_back(std::move(f));
    }
  }

  for (const auto* list : {&v.extension_findings, &v.exactness_findings}) {
    for (const JumpFinding& f : *list) {
      if (!v.jump || f.order < v.jump->order) v.jump = f;
    }
  }
  return v;
}

OperatorSeries gauge_transform(const OperatorSeries& p, const std::vector<std::vector<Matrix>>& gauge) {
  const GradedComplex& cx = p.complex();
  const int lo = cx.min_degree();
  const int n_max = p.order();

  // g[q][k] and its series inverse h[q][k], k = 0..order
  std::vector<std::vector<Matrix>> g(cx.degree_count()), h(cx.degree_count());
  for (int q = lo; q <= cx.max_degree(); ++q) {
    const int d = cx.dim(q);
    auto& gq = g[q - lo];
    gq.push_back(Matrix::Identity(d, d));
    for (int k = 1; k <= n_max; ++k) {
      Matrix m = Matrix::Zero(d, d);
      if (k - 1 < static_cast<int>(gauge.size()) && q - lo < static_cast<int>(gauge[k - 1].size()) &&
          gauge[k - 1][q - lo].size() > 0) {
        m = gauge[k - 1][q - lo];
        if (m.rows() != d || m.cols() != d) throw Error(ErrorKind::ShapeMismatch, "gauge block has wrong shape");
      }
      gq.push_back(std::move(m));
    }
    auto& hq = h[q - lo];
    hq.push_back(Matrix::Identity(d, d));
    for (int k = 1; k <= n_max; ++k) {
      Matrix m = Matrix::Zero(d, d);
      for (int a = 1; a <= k; ++a) m -= gq[a] * hq[k - a];
      hq.push_back(std::move(m));
    }
  }

  std::vector<std::vector<Matrix>> terms(n_max);
  for (int n = 1; n <= n_max; ++n) {
    for (int q = lo; q <= cx.max_degree(); ++q) {
      Matrix acc = Matrix::Zero(cx.dim(q + 1), cx.dim(q));
      if (cx.in_range(q + 1)) {
        for (int a = 0; a <= n; ++a) {
          for (int b = 0; a + b <= n; ++b) {
            acc += g[q + 1 - lo][a] * p.term(b, q) * h[q - lo][n - a - b];
          }
        }
      }
      terms[n - 1].push_back(std::move(acc));
    }
  }
  return OperatorSeries(cx, terms);
}

}  // namespace defjump
