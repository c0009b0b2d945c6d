#include "defjump/dgla.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "defjump/kernels.hpp"

namespace defjump {
namespace {

int sign(int exponent) { return (exponent % 2 == 0) ? 1 : -1; }

double max_abs(const Matrix& m) { return m.size() ? m.cwiseAbs().maxCoeff() : 0.0; }

// Differential out of degree p, zero when p is outside the defined range.
Matrix diff_or_zero(const GradedComplex& cx, int p) {
  if (p < cx.min_degree() - 1 || p > cx.max_degree()) return Matrix::Zero(cx.dim(p + 1), cx.dim(p));
  return cx.differential(p);
}

Vector apply_diff(const GradedComplex& cx, int p, const Vector& v) {
  if (!cx.in_range(p)) return Vector::Zero(cx.dim(p + 1));
  return cx.differential(p) * v;
}

// sum_i a_i * table.middleCols(i*d2, d2) * b
Vector contract(const Matrix& table, const Vector& a, const Vector& b) {
  const int rows = static_cast<int>(table.rows());
  const int d2 = static_cast<int>(b.size());
  Vector out = Vector::Zero(rows);
  if (rows == 0 || d2 == 0) return out;
  Vector scaled(d2);
  for (Eigen::Index i = 0; i < a.size(); ++i) {
    if (a[i] == Complex(0.0)) continue;
    scaled = a[i] * b;
    kernels::cgemv_acc(rows, d2, table.data() + i * d2 * table.outerStride(), static_cast<int>(table.outerStride()),
                       scaled.data(), out.data());
  }
  return out;
}

std::string basis_label(std::initializer_list<std::pair<int, int>> items) {
  std::ostringstream os;
  bool first = true;
  for (auto [p, i] : items) {
    if (!first) os << ", ";
    os << "(" << p << "," << i << ")";
    first = false;
  }
  return os.str();
}

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(3);
  os << std::scientific << v;
  return os.str();
}

}  // namespace

BracketTable bracket_table(const GradedComplex& cx, const std::vector<BracketEntry>& entries) {
  BracketTable table;
  for (int p1 = cx.min_degree(); p1 <= cx.max_degree(); ++p1) {
    for (int p2 = cx.min_degree(); p2 <= cx.max_degree(); ++p2) {
      if (!cx.in_range(p1 + p2)) continue;
      table[{p1, p2}] = Matrix::Zero(cx.dim(p1 + p2), static_cast<Eigen::Index>(cx.dim(p1)) * cx.dim(p2));
    }
  }
  for (const auto& e : entries) {
    if (!cx.in_range(e.p1) || !cx.in_range(e.p2) || e.i < 0 || e.i >= cx.dim(e.p1) || e.j < 0 ||
        e.j >= cx.dim(e.p2)) {
      throw Error(ErrorKind::ShapeMismatch, "bracket entry source " + basis_label({{e.p1, e.i}, {e.p2, e.j}}) +
                                                " out of range");
    }
    auto it = table.find({e.p1, e.p2});
    if (it == table.end()) {
      if (e.value == Complex(0.0)) continue;
      throw Error(ErrorKind::ShapeMismatch, "bracket entry lands in degree " + std::to_string(e.p1 + e.p2) +
                                                " outside the complex");
    }
    if (e.k < 0 || e.k >= it->second.rows()) {
      throw Error(ErrorKind::ShapeMismatch, "bracket entry target index " + std::to_string(e.k) + " out of range");
    }
    it->second(e.k, static_cast<Eigen::Index>(e.i) * cx.dim(e.p2) + e.j) += e.value;
  }
  return table;
}

Vector Dgla::bracket(int p1, const Vector& a, int p2, const Vector& b) const {
  const int target = p1 + p2;
  auto it = table_.find({p1, p2});
  if (it == table_.end()) return Vector::Zero(complex_.dim(target));
  if (a.size() != complex_.dim(p1) || b.size() != complex_.dim(p2)) {
    throw Error(ErrorKind::ShapeMismatch, "bracket argument has wrong dimension");
  }
  return contract(it->second, a, b);
}

std::vector<BracketEntry> Dgla::entries() const {
  std::vector<BracketEntry> out;
  for (const auto& [key, m] : table_) {
    const int d2 = complex_.dim(key.second);
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
      for (Eigen::Index k = 0; k < m.rows(); ++k) {
        if (m(k, c) == Complex(0.0)) continue;
        out.push_back({key.first, static_cast<int>(c / d2), key.second, static_cast<int>(c % d2),
                       static_cast<int>(k), m(k, c)});
      }
    }
  }
  return out;
}

Dgla validate_dgla(GradedComplex cx, BracketTable table, double rank_tol, double tol) {
  const int lo = cx.min_degree();
  const int hi = cx.max_degree();
  for (int p1 = lo; p1 <= hi; ++p1) {
    for (int p2 = lo; p2 <= hi; ++p2) {
      const std::pair<int, int> key{p1, p2};
      const Eigen::Index rows = cx.dim(p1 + p2);
      const Eigen::Index cols = static_cast<Eigen::Index>(cx.dim(p1)) * cx.dim(p2);
      auto it = table.find(key);
      if (!cx.in_range(p1 + p2)) {
        if (it != table.end() && max_abs(it->second) > 0.0) {
          throw Error(ErrorKind::ShapeMismatch, "bracket table (" + std::to_string(p1) + "," + std::to_string(p2) +
                                                    ") lands outside the complex");
        }
        if (it != table.end()) table.erase(it);
        continue;
      }
      if (it == table.end()) {
        table[key] = Matrix::Zero(rows, cols);
      } else if (it->second.rows() != rows || it->second.cols() != cols) {
        throw Error(ErrorKind::ShapeMismatch, "bracket table (" + std::to_string(p1) + "," + std::to_string(p2) +
                                                  ") has the wrong shape");
      }
    }
  }

  Dgla l;
  l.complex_ = std::move(cx);
  l.table_ = std::move(table);
  const GradedComplex& c = l.complex_;

  double cmax = 0.0;
  for (const auto& [key, m] : l.table_) cmax = std::max(cmax, max_abs(m));
  double dmax = 0.0;
  for (int p = lo; p <= hi; ++p) dmax = std::max(dmax, max_abs(diff_or_zero(c, p)));
  const double tol_anti = tol * std::max(1.0, cmax);
  const double tol_leib = tol * std::max(1.0, cmax * std::max(1.0, dmax));
  const double tol_jac = tol * std::max(1.0, cmax * cmax);

  auto basis = [&](int p, int i) {
    Vector v = Vector::Zero(c.dim(p));
    v[i] = 1.0;
    return v;
  };

  for (int p1 = lo; p1 <= hi; ++p1) {
    for (int p2 = lo; p2 <= hi; ++p2) {
      for (int i = 0; i < c.dim(p1); ++i) {
        const Vector a = basis(p1, i);
        for (int j = 0; j < c.dim(p2); ++j) {
          const Vector b = basis(p2, j);
          const Vector ab = l.bracket(p1, a, p2, b);
          const Vector ba = l.bracket(p2, b, p1, a);
          const double anti = (ab + static_cast<double>(sign(p1 * p2)) * ba).norm();
          if (anti > tol_anti) {
            throw Error(ErrorKind::AntisymmetryViolation,
                        "basis " + basis_label({{p1, i}, {p2, j}}) + ", residual " + fmt(anti));
          }
          const Vector lhs = apply_diff(c, p1 + p2, ab);
          const Vector rhs = l.bracket(p1 + 1, apply_diff(c, p1, a), p2, b) +
                             static_cast<double>(sign(p1)) * l.bracket(p1, a, p2 + 1, apply_diff(c, p2, b));
          const double leib = (lhs.size() == rhs.size()) ? (lhs - rhs).norm() : std::max(lhs.norm(), rhs.norm());
          if (leib > tol_leib) {
            throw Error(ErrorKind::LeibnizViolation,
                        "basis " + basis_label({{p1, i}, {p2, j}}) + ", residual " + fmt(leib));
          }
        }
      }
    }
  }

  for (int p1 = lo; p1 <= hi; ++p1) {
    for (int p2 = lo; p2 <= hi; ++p2) {
      for (int p3 = lo; p3 <= hi; ++p3) {
        if (!c.in_range(p1 + p2 + p3)) continue;
        for (int i = 0; i < c.dim(p1); ++i) {
          const Vector a = basis(p1, i);
          for (int j = 0; j < c.dim(p2); ++j) {
            const Vector b = basis(p2, j);
            const Vector ab = l.bracket(p1, a, p2, b);
            for (int k = 0; k < c.dim(p3); ++k) {
              const Vector e = basis(p3, k);
              const Vector lhs = l.bracket(p1, a, p2 + p3, l.bracket(p2, b, p3, e));
              const Vector rhs = l.bracket(p1 + p2, ab, p3, e) +
                                 static_cast<double>(sign(p1 * p2)) * l.bracket(p2, b, p1 + p3, l.bracket(p1, a, p3, e));
              const double jac = (lhs - rhs).norm();
              if (jac > tol_jac) {
                throw Error(ErrorKind::JacobiViolation,
                            "basis " + basis_label({{p1, i}, {p2, j}, {p3, k}}) + ", residual " + fmt(jac));
              }
            }
          }
        }
      }
    }
  }

  l.hodge_ = hodge_data(l.complex_, rank_tol);
  return l;
}

namespace {

// sum_{i+j=n, i,j>=1} [x_i, x_j]
Vector bracket_term(const Dgla& l, const std::vector<Vector>& x, int n) {
  Vector out = Vector::Zero(l.complex().dim(2));
  for (int i = 1; i < n; ++i) {
    const int j = n - i;
    if (i > static_cast<int>(x.size()) || j > static_cast<int>(x.size())) continue;
    out += l.bracket(1, x[i - 1], 1, x[j - 1]);
  }
  return out;
}

double bracket_scale(const Dgla& l, const std::vector<Vector>& x, int n) {
  auto it = l.table().find({1, 1});
  if (it == l.table().end()) return 0.0;
  const double c = it->second.norm();
  double s = 0.0;
  for (int i = 1; i < n; ++i) s += x[i - 1].norm() * x[n - i - 1].norm();
  return c * s;
}

void require_degree_one(const Dgla& l) {
  if (!l.complex().in_range(1)) throw Error(ErrorKind::DegreeOutOfRange, "DGLA has no degree 1");
}

}  // namespace

std::vector<Vector> mc_residual(const Dgla& l, const MaurerCartanSeries& x, int order) {
  require_degree_one(l);
  if (order > x.order) {
    throw Error(ErrorKind::OrderExceedsTruncation,
                "residual order " + std::to_string(order) + " exceeds series order " + std::to_string(x.order));
  }
  std::vector<Vector> out;
  for (int n = 1; n <= order; ++n) {
    Vector r = apply_diff(l.complex(), 1, x.at(n));
    r += 0.5 * bracket_term(l, x.coeffs, n);
    out.push_back(std::move(r));
  }
  return out;
}

void mark_integrability(const Dgla& l, MaurerCartanSeries& x, double tol) {
  double worst = 0.0;
  double scale = 1.0;
  for (const Vector& v : x.coeffs) scale = std::max(scale, v.squaredNorm());
  for (const Vector& r : mc_residual(l, x, x.order)) worst = std::max(worst, r.norm());
  x.integrable = worst <= tol * scale;
}

KuranishiResult kuranishi_solve(const Dgla& l, const Vector& xi, int order, double obstruction_tol,
                                ObConvention convention, double harmonic_tol) {
  require_degree_one(l);
  const GradedComplex& c = l.complex();
  const HodgeData& hd = l.hodge();
  if (order < 1) throw Error(ErrorKind::UsageError, "order must be at least 1");
  if (xi.size() != c.dim(1)) throw Error(ErrorKind::ShapeMismatch, "xi has wrong dimension");
  const double xi_norm = hd.norm(1, xi);
  const double off = hd.norm(1, hd.harmonic_part(1, xi) - xi);
  if (off > harmonic_tol * std::max(1.0, xi_norm)) {
    throw Error(ErrorKind::NotHarmonic, "xi has non-harmonic part of norm " + fmt(off));
  }

  const bool has_two = c.in_range(2);
  const double factor = convention == ObConvention::Half ? 0.5 : 1.0;
  KuranishiResult res;
  res.series.order = order;
  res.series.coeffs.push_back(xi);
  res.obstruction.push_back(Vector::Zero(c.dim(2)));
  res.obstruction_norms.push_back(0.0);
  for (int n = 2; n <= order; ++n) {
    const Vector b = bracket_term(l, res.series.coeffs, n);
    Vector xn = Vector::Zero(c.dim(1));
    Vector ob = Vector::Zero(c.dim(2));
    if (has_two) {
      xn = -0.5 * hd.adjoint_green(2, b);
      ob = factor * hd.harmonic_part(2, b);
    }
    const double ob_norm = has_two ? hd.norm(2, ob) : 0.0;
    const double scale = factor * bracket_scale(l, res.series.coeffs, n);
    if (!res.first_obstructed && ob_norm > obstruction_tol * scale && scale > 0.0) res.first_obstructed = n;
    res.series.coeffs.push_back(std::move(xn));
    res.obstruction.push_back(std::move(ob));
    res.obstruction_norms.push_back(ob_norm);
  }
  mark_integrability(l, res.series);
  return res;
}

double kuranishi_fixed_point_residual(const Dgla& l, const MaurerCartanSeries& x, const Vector& xi) {
  const GradedComplex& c = l.complex();
  double worst = 0.0;
  for (int n = 1; n <= x.order; ++n) {
    Vector r = x.at(n);
    if (n == 1) r -= xi;
    if (c.in_range(2)) r += 0.5 * l.hodge().adjoint_green(2, bracket_term(l, x.coeffs, n));
    worst = std::max(worst, r.norm());
  }
  return worst;
}

RepresentationTable representation_table(const Dgla& l, const GradedComplex& cx,
                                         const std::vector<RepresentationEntry>& entries) {
  const GradedComplex& lc = l.complex();
  RepresentationTable table;
  for (int p = lc.min_degree(); p <= lc.max_degree(); ++p) {
    for (int q = cx.min_degree(); q <= cx.max_degree(); ++q) {
      if (!cx.in_range(p + q)) continue;
      table[{p, q}] = Matrix::Zero(cx.dim(p + q), static_cast<Eigen::Index>(lc.dim(p)) * cx.dim(q));
    }
  }
  for (const auto& e : entries) {
    if (!lc.in_range(e.p) || !cx.in_range(e.q) || e.i < 0 || e.i >= lc.dim(e.p) || e.j < 0 || e.j >= cx.dim(e.q)) {
      throw Error(ErrorKind::DegreeMismatch, "representation entry source " + basis_label({{e.p, e.i}, {e.q, e.j}}) +
                                                 " out of range");
    }
    auto it = table.find({e.p, e.q});
    if (it == table.end()) {
      if (e.value == Complex(0.0)) continue;
      throw Error(ErrorKind::DegreeMismatch, "representation entry lands in degree " + std::to_string(e.p + e.q) +
                                                 " outside the module");
    }
    if (e.k < 0 || e.k >= it->second.rows()) {
      throw Error(ErrorKind::DegreeMismatch, "representation target index " + std::to_string(e.k) + " out of range");
    }
    it->second(e.k, static_cast<Eigen::Index>(e.i) * cx.dim(e.q) + e.j) += e.value;
  }
  return table;
}

Matrix Representation::action(int p, const Vector& v, int q) const {
  const int rows = module_.dim(p + q);
  const int cols = module_.dim(q);
  Matrix out = Matrix::Zero(rows, cols);
  auto it = table_.find({p, q});
  if (it == table_.end() || rows == 0 || cols == 0) return out;
  const int lp = (p >= l_min_ && p - l_min_ < static_cast<int>(l_dims_.size())) ? l_dims_[p - l_min_] : 0;
  if (v.size() != lp) throw Error(ErrorKind::DegreeMismatch, "representation argument has wrong dimension");
  for (int i = 0; i < lp; ++i) {
    if (v[i] == Complex(0.0)) continue;
    out += v[i] * it->second.middleCols(static_cast<Eigen::Index>(i) * cols, cols);
  }
  return out;
}

std::vector<RepresentationEntry> Representation::entries() const {
  std::vector<RepresentationEntry> out;
  for (const auto& [key, m] : table_) {
    const int dq = module_.dim(key.second);
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
      for (Eigen::Index k = 0; k < m.rows(); ++k) {
        if (m(k, c) == Complex(0.0)) continue;
        out.push_back({key.first, static_cast<int>(c / dq), key.second, static_cast<int>(c % dq), static_cast<int>(k),
                       m(k, c)});
      }
    }
  }
  return out;
}

Representation validate_representation(const Dgla& l, GradedComplex cx, RepresentationTable table, double tol) {
  const GradedComplex& lc = l.complex();
  for (int p = lc.min_degree(); p <= lc.max_degree(); ++p) {
    for (int q = cx.min_degree(); q <= cx.max_degree(); ++q) {
      const std::pair<int, int> key{p, q};
      auto it = table.find(key);
      if (!cx.in_range(p + q)) {
        if (it != table.end() && max_abs(it->second) > 0.0) {
          throw Error(ErrorKind::DegreeMismatch, "representation table (" + std::to_string(p) + "," +
                                                     std::to_string(q) + ") lands outside the module");
        }
        if (it != table.end()) table.erase(it);
        continue;
      }
      const Eigen::Index rows = cx.dim(p + q);
      const Eigen::Index cols = static_cast<Eigen::Index>(lc.dim(p)) * cx.dim(q);
      if (it == table.end()) {
        table[key] = Matrix::Zero(rows, cols);
      } else if (it->second.rows() != rows || it->second.cols() != cols) {
        throw Error(ErrorKind::DegreeMismatch, "representation table (" + std::to_string(p) + "," +
                                                   std::to_string(q) + ") has the wrong shape");
      }
    }
  }

  Representation rho;
  rho.module_ = std::move(cx);
  rho.table_ = std::move(table);
  rho.l_min_ = lc.min_degree();
  for (int p = lc.min_degree(); p <= lc.max_degree(); ++p) rho.l_dims_.push_back(lc.dim(p));
  const GradedComplex& m = rho.module_;

  double s = 0.0;
  for (const auto& [key, t] : rho.table_) s = std::max(s, max_abs(t));
  for (int q = m.min_degree(); q <= m.max_degree(); ++q) s = std::max(s, max_abs(diff_or_zero(m, q)));
  for (int p = lc.min_degree(); p <= lc.max_degree(); ++p) s = std::max(s, max_abs(diff_or_zero(lc, p)));
  for (const auto& [key, t] : l.table()) s = std::max(s, max_abs(t));
  const double bound = tol * std::max(1.0, s * s);

  auto basis = [&](int p, int i) {
    Vector v = Vector::Zero(lc.dim(p));
    v[i] = 1.0;
    return v;
  };
  auto lvec = [&](int p, const Vector& v) { return lc.in_range(p) ? v : Vector::Zero(0); };

  for (int p = lc.min_degree(); p <= lc.max_degree(); ++p) {
    for (int i = 0; i < lc.dim(p); ++i) {
      const Vector e = basis(p, i);
      const Vector de = apply_diff(lc, p, e);
      for (int q = m.min_degree(); q <= m.max_degree(); ++q) {
        const Matrix lhs = lc.in_range(p + 1) ? rho.action(p + 1, lvec(p + 1, de), q)
                                              : Matrix::Zero(m.dim(p + q + 1), m.dim(q));
        const Matrix rhs = diff_or_zero(m, p + q) * rho.action(p, e, q) -
                           static_cast<double>(sign(p)) * rho.action(p, e, q + 1) * diff_or_zero(m, q);
        const double r = lhs.size() ? (lhs - rhs).norm() : 0.0;
        if (r > bound) {
          throw Error(ErrorKind::CompatibilityViolation, "differential on basis " + basis_label({{p, i}}) +
                                                             " in module degree " + std::to_string(q) + ", residual " +
                                                             fmt(r));
        }
      }
    }
  }

  for (int p1 = lc.min_degree(); p1 <= lc.max_degree(); ++p1) {
    for (int p2 = lc.min_degree(); p2 <= lc.max_degree(); ++p2) {
      for (int i = 0; i < lc.dim(p1); ++i) {
        const Vector a = basis(p1, i);
        for (int j = 0; j < lc.dim(p2); ++j) {
          const Vector b = basis(p2, j);
          const Vector ab = l.bracket(p1, a, p2, b);
          for (int q = m.min_degree(); q <= m.max_degree(); ++q) {
            if (m.dim(p1 + p2 + q) == 0 || m.dim(q) == 0) continue;
            const Matrix lhs = lc.in_range(p1 + p2) ? rho.action(p1 + p2, ab, q)
                                                    : Matrix::Zero(m.dim(p1 + p2 + q), m.dim(q));
            const Matrix rhs = rho.action(p1, a, q + p2) * rho.action(p2, b, q) -
                               static_cast<double>(sign(p1 * p2)) * rho.action(p2, b, q + p1) * rho.action(p1, a, q);
            const double r = (lhs - rhs).norm();
            if (r > bound) {
              throw Error(ErrorKind::CompatibilityViolation, "bracket on basis " + basis_label({{p1, i}, {p2, j}}) +
                                                                 " in module degree " + std::to_string(q) +
                                                                 ", residual " + fmt(r));
            }
          }
        }
      }
    }
  }
  return rho;
}

Representation adjoint_representation(const Dgla& l, double tol) {
  return validate_representation(l, l.complex(), l.table(), tol);
}

OperatorSeries represent(const Representation& rho, const MaurerCartanSeries& x) {
  const GradedComplex& m = rho.module();
  std::vector<std::vector<Matrix>> terms(x.order);
  for (int k = 1; k <= x.order; ++k) {
    auto& row = terms[k - 1];
    for (int q = m.min_degree(); q <= m.max_degree(); ++q) row.push_back(rho.action(1, x.at(k), q));
  }
  return OperatorSeries(m, terms);
}

}  // namespace defjump
