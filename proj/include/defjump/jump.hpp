#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "defjump/hodge.hpp"
#include "defjump/series.hpp"

namespace defjump {

struct IntegrabilityReport {
  /// residual[n] = max over degrees of |sum_{i+j=n} P_i P_j|_F, n = 0..order.
  std::vector<double> residual;
  std::vector<int> worst_degree;
  double tolerance = 0;
  std::optional<int> first_failure;

  bool passes() const { return !first_failure.has_value(); }
};

/// The tolerance is relative to max(1, largest |P_k|_F squared).
IntegrabilityReport check_integrability(const OperatorSeries& p, double tol = 1e-9);

/// Throws IntegrabilityFailure naming the first failing order and degree.
void require_integrable(const OperatorSeries& p, int through_order, double tol = 1e-9);

struct TruncatedCohomology {
  int degree = 0;
  int order = 0;
  int kernel_dim = 0;
  int incoming_rank = 0;
  int dimension = 0;
  /// Stacked coefficient vectors (a_0; ...; a_{n-1}) of closed cochains,
  /// orthogonal to the incoming image.
  Matrix representatives;
};

/// Cohomology of the complex tensored with K[t]/(t^n).
/// Throws OrderExceedsTruncation when n > order + 1.
TruncatedCohomology truncated_cohomology(const OperatorSeries& p, int q, int n, double rank_tol = 1e-10);

struct Extension {
  int degree = 0;
  int order = 0;
  /// coeffs[n] = alpha^n for n = 0..order.
  std::vector<Vector> coeffs;
  /// harmonic[n-1] = h_n in degree q+1, n = 1..order.
  std::vector<Vector> harmonic;
  std::vector<double> harmonic_norms;
  std::vector<double> scales;
  std::optional<int> obstructed_at;
  Vector obstruction_witness;
};

/// alpha^n = -d* G sum_{i<n} P_{n-i} alpha^i with harmonic parts h_n.
/// Throws NotClosed, IntegrabilityFailure.
Extension extend_class(const OperatorSeries& p, const HodgeData& hd, int q, const Vector& alpha, int order,
                       double obstruction_tol = 1e-8, double closed_tol = 1e-9);

/// max_n |alpha^n + d* G ((P - P_0) alpha)_n| for n = 1..order.
double extension_fixed_point_residual(const OperatorSeries& p, const HodgeData& hd, const Extension& e);

/// |sum_{i+j=n} P_i alpha^j| for n = 0..order.
std::vector<double> extension_closedness(const OperatorSeries& p, const Extension& e);

struct ObstructionImage {
  int degree = 0;
  int order = 0;
  int domain_dim = 0;
  /// Metric-orthonormal basis of the image in H^{q+1}.
  Matrix basis;
  std::vector<double> singular_values;
  double threshold = 0;
  /// Largest relative image norm over a basis of exact truncated cochains.
  double exact_leak = 0;

  int rank() const { return static_cast<int>(basis.cols()); }
};

/// Harmonic part of sum_{j<n} P_{n-j} a^j for a truncated cochain a in degree q.
Vector obstruction_class(const OperatorSeries& p, const HodgeData& hd, int q, std::span<const Vector> coeffs);

/// Input scale sum_j |P_{n-j}|_F |a^j| of the same coefficient.
double obstruction_scale(const OperatorSeries& p, int q, std::span<const Vector> coeffs);

/// Span of the order-n obstruction classes of all closed truncated cochains
/// mod t^n in degree q. Throws OrderExceedsTruncation, IntegrabilityFailure.
ObstructionImage obstruction_map_image(const OperatorSeries& p, const HodgeData& hd, int q, int n,
                                       double rank_tol = 1e-10, double obstruction_tol = 1e-8);

struct JumpOptions {
  double rank_tol = 1e-10;
  double obstruction_tol = 1e-8;
  double integrability_tol = 1e-9;
};

enum class JumpSide { ExtensionObstruction, ExactnessObstruction };

std::string_view to_string(JumpSide side);

struct JumpFinding {
  JumpSide side = JumpSide::ExtensionObstruction;
  /// q for extension findings, q-1 for exactness findings.
  int source_degree = 0;
  int order = 0;
  /// Harmonic class in degree source_degree + 1.
  Vector witness;
  /// Harmonic basis index of the obstructed class (extension side only).
  int class_index = -1;
};

struct JumpVerdict {
  int degree = 0;
  int order_checked = 0;
  std::optional<JumpFinding> jump;
  std::vector<JumpFinding> extension_findings;
  std::vector<JumpFinding> exactness_findings;
  /// exactness_ranks[n-1] = rank of the degree q-1 obstruction image at order n.
  std::vector<int> exactness_ranks;

  bool jumps() const { return jump.has_value(); }
};

/// Runs both obstruction families through the given order and reports the
/// lowest-order finding, preferring the extension side on ties.
JumpVerdict jump_verdict(const OperatorSeries& p, const HodgeData& hd, int q, int order,
                         const JumpOptions& opt = {});

/// First order with a nonzero obstruction along the canonical extensions of
/// the harmonic classes of H^q.
std::optional<int> first_extension_obstruction(const OperatorSeries& p, const HodgeData& hd, int q, int order,
                                               const JumpOptions& opt = {});

/// First order with a nonzero image of the truncated-complex obstruction map
/// out of degree q.
std::optional<int> first_image_obstruction(const OperatorSeries& p, const HodgeData& hd, int q, int order,
                                           const JumpOptions& opt = {});

/// P'(t) = g(t) P(t) g(t)^{-1} mod t^{order+1} for g(t) = Id + sum_k t^k g_k,
/// with gauge[k-1][q - min_degree] the degree-q block of g_k.
OperatorSeries gauge_transform(const OperatorSeries& p, const std::vector<std::vector<Matrix>>& gauge);

/// Scales a witness so its largest-magnitude entry is real and positive.
Vector normalize_witness(const Vector& v);

}  // namespace defjump
