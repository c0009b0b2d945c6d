#pragma once

#include <map>
#include <optional>
#include <utility>
#include <vector>

#include "defjump/hodge.hpp"
#include "defjump/series.hpp"

namespace defjump {

/// One structure constant: the coefficient of basis vector k of L^{p1+p2} in
/// [e_{p1,i}, e_{p2,j}].
struct BracketEntry {
  int p1 = 0, i = 0, p2 = 0, j = 0, k = 0;
  Complex value;
};

/// Dense bracket tables keyed by (p1, p2). The table for (p1, p2) has shape
/// dim(p1+p2) x (dim(p1) * dim(p2)); column i * dim(p2) + j is [e_i, e_j].
using BracketTable = std::map<std::pair<int, int>, Matrix>;

BracketTable bracket_table(const GradedComplex& cx, const std::vector<BracketEntry>& entries);

/// A differential graded Lie algebra on a validated complex.
class Dgla {
 public:
  Dgla() = default;

  const GradedComplex& complex() const { return complex_; }
  const HodgeData& hodge() const { return hodge_; }
  const BracketTable& table() const { return table_; }

  /// [a, b] for a in degree p1 and b in degree p2; zero-sized when p1+p2 is
  /// out of range.
  Vector bracket(int p1, const Vector& a, int p2, const Vector& b) const;

  /// Nonzero structure constants in table order.
  std::vector<BracketEntry> entries() const;

 private:
  friend Dgla validate_dgla(GradedComplex cx, BracketTable table, double rank_tol, double tol);

  GradedComplex complex_;
  HodgeData hodge_;
  BracketTable table_;
};

/// Checks antisymmetry, the Leibniz rule and the Jacobi identity on all basis
/// tuples. Throws ShapeMismatch, AntisymmetryViolation, LeibnizViolation or
/// JacobiViolation.
Dgla validate_dgla(GradedComplex cx, BracketTable table, double rank_tol = 1e-10, double tol = 1e-9);

/// x(t) = sum_{k=1..order} t^k x_k with every x_k in L^1.
struct MaurerCartanSeries {
  int order = 0;
  std::vector<Vector> coeffs;  // coeffs[k-1] = x_k
  /// Set by mark_integrability only.
  bool integrable = false;

  const Vector& at(int k) const { return coeffs.at(static_cast<std::size_t>(k - 1)); }
};

/// Order-n coefficients of dx + 1/2 [x, x] for n = 1..order, in L^2.
std::vector<Vector> mc_residual(const Dgla& l, const MaurerCartanSeries& x, int order);

/// Sets x.integrable from the residual through x.order.
void mark_integrability(const Dgla& l, MaurerCartanSeries& x, double tol = 1e-9);

/// Normalization of the obstruction coefficients.
enum class ObConvention {
  Half,  // ob_n = 1/2 H sum [x_i, x_j]; ob vanishes iff the MC equation holds
  Full,  // ob_n = H sum [x_i, x_j]
};

struct KuranishiResult {
  MaurerCartanSeries series;
  std::vector<Vector> obstruction;  // obstruction[n-1] = ob_n, n = 1..order
  std::vector<double> obstruction_norms;
  std::optional<int> first_obstructed;
};

/// Solves x = t xi - 1/2 d* G [x, x] mod t^{order+1}.
/// Throws NotHarmonic when xi is not harmonic.
KuranishiResult kuranishi_solve(const Dgla& l, const Vector& xi, int order, double obstruction_tol = 1e-8,
                                ObConvention convention = ObConvention::Half, double harmonic_tol = 1e-9);

/// max_n of |x_n - (t xi)_n + 1/2 d* G sum [x_i, x_j]|.
double kuranishi_fixed_point_residual(const Dgla& l, const MaurerCartanSeries& x, const Vector& xi);

/// Action of L on a graded module C: the table for (p, q) has shape
/// dimC(p+q) x (dimL(p) * dimC(q)); column i * dimC(q) + j is rho(e_i) e_j.
using RepresentationTable = std::map<std::pair<int, int>, Matrix>;

struct RepresentationEntry {
  int p = 0, i = 0, q = 0, j = 0, k = 0;
  Complex value;
};

RepresentationTable representation_table(const Dgla& l, const GradedComplex& cx,
                                         const std::vector<RepresentationEntry>& entries);

class Representation {
 public:
  Representation() = default;

  const GradedComplex& module() const { return module_; }
  const RepresentationTable& table() const { return table_; }

  /// rho(v) restricted to degree q, for v in L^p: shape dimC(p+q) x dimC(q).
  Matrix action(int p, const Vector& v, int q) const;

  std::vector<RepresentationEntry> entries() const;

 private:
  friend Representation validate_representation(const Dgla& l, GradedComplex cx, RepresentationTable table,
                                                double tol);

  GradedComplex module_;
  std::vector<int> l_dims_;
  int l_min_ = 0;
  RepresentationTable table_;
};

/// Checks rho(d l) = [d, rho(l)] and rho([a, b]) = [rho(a), rho(b)] on all
/// basis elements. Throws DegreeMismatch or CompatibilityViolation.
Representation validate_representation(const Dgla& l, GradedComplex cx, RepresentationTable table,
                                       double tol = 1e-9);

/// L acting on itself by the bracket.
Representation adjoint_representation(const Dgla& l, double tol = 1e-9);

/// P_0 = d_C and P_k = rho(x_k).
OperatorSeries represent(const Representation& rho, const MaurerCartanSeries& x);

}  // namespace defjump
