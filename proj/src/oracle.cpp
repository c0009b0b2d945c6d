#include "defjump/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

namespace defjump {
namespace {

struct RankInfo {
  int rank = 0;
  bool near = false;
};

RankInfo numeric_rank(const Matrix& m, double tol) {
  RankInfo info;
  if (m.rows() == 0 || m.cols() == 0) return info;
  Eigen::JacobiSVD<Matrix> svd(m);
  const auto& s = svd.singularValues();
  const double top = s[0];
  if (top == 0.0) return info;
  for (Eigen::Index i = 0; i < s.size(); ++i) {
    const double rel = s[i] / top;
    if (rel > tol) ++info.rank;
    if (rel > tol * 1e-2 && rel < tol * 1e2) info.near = true;
  }
  return info;
}

Matrix assemble(const OperatorSeries& p, int q, Complex t) {
  const GradedComplex& cx = p.complex();
  Matrix d = Matrix::Zero(cx.dim(q + 1), cx.dim(q));
  if (d.size() == 0) return d;
  Complex power = 1.0;
  for (int k = 0; k <= p.order(); ++k) {
    d += power * p.term(k, q);
    power *= t;
  }
  return d;
}

}  // namespace

std::vector<Complex> sample_points(const SampleSpec& spec) {
  if (spec.count < 1) throw Error(ErrorKind::UsageError, "sample count must be positive");
  if (!(spec.min_modulus > 0.0) || spec.max_modulus < spec.min_modulus) {
    throw Error(ErrorKind::UsageError, "sample modulus range must satisfy 0 < min <= max");
  }
  std::mt19937_64 rng(spec.seed);
  std::vector<Complex> out;
  const double ratio = spec.max_modulus / spec.min_modulus;
  for (int i = 0; i < spec.count; ++i) {
    const double frac = spec.count == 1 ? 0.0 : static_cast<double>(i) / (spec.count - 1);
    const double r = spec.min_modulus * std::pow(ratio, frac);
    // 53 random bits mapped to [0, 1), independent of the standard library's distributions
    const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
    out.push_back(std::polar(r, 2.0 * std::numbers::pi * u));
  }
  return out;
}

FiberDims dims_at(const OperatorSeries& p, Complex t, double rank_tol) {
  const GradedComplex& cx = p.complex();
  FiberDims out;
  if (std::abs(t) > 1.0) out.warnings.push_back("|t| > 1: truncated series evaluated outside the unit disk");
  std::map<int, RankInfo> ranks;
  for (int q = cx.min_degree() - 1; q <= cx.max_degree(); ++q) {
    ranks[q] = numeric_rank(assemble(p, q, t), rank_tol);
    if (ranks[q].near) {
      std::ostringstream os;
      os << "singular value near the rank threshold in degree " << q << " at t = (" << t.real() << ", " << t.imag()
         << ")";
      out.warnings.push_back(os.str());
    }
  }
  for (int q = cx.min_degree(); q <= cx.max_degree(); ++q) {
    out.dims[q] = cx.dim(q) - ranks[q].rank - ranks[q - 1].rank;
  }
  return out;
}

OracleReport jump_oracle(const OperatorSeries& p, int q, const SampleSpec& spec) {
  if (!p.complex().in_range(q)) {
    throw Error(ErrorKind::DegreeOutOfRange, "degree " + std::to_string(q) + " out of range");
  }
  OracleReport rep;
  rep.degree = q;
  rep.spec = spec;
  FiberDims zero = dims_at(p, 0.0, spec.rank_tol);
  rep.dim_at_zero = zero.dims.at(q);
  rep.warnings = zero.warnings;

  std::map<int, int> votes;
  for (Complex t : sample_points(spec)) {
    FiberDims f = dims_at(p, t, spec.rank_tol);
    const int d = f.dims.at(q);
    rep.samples.push_back({t, d});
    ++votes[d];
    rep.warnings.insert(rep.warnings.end(), f.warnings.begin(), f.warnings.end());
    if (d > rep.dim_at_zero) rep.semicontinuous = false;
  }
  auto best = std::max_element(votes.begin(), votes.end(),
                               [](const auto& a, const auto& b) { return a.second < b.second; });
  if (2 * best->second <= spec.count) {
    std::ostringstream os;
    os << "no majority among " << spec.count << " samples in degree " << q << ":";
    for (auto [dim, n] : votes) os << " dim " << dim << " x" << n;
    throw Error(ErrorKind::InconsistentSamples, os.str());
  }
  rep.generic_dim = best->first;
  rep.jumps = rep.dim_at_zero > rep.generic_dim;
  for (std::size_t i = 0; i < rep.samples.size(); ++i) {
    if (rep.samples[i].dim != rep.generic_dim) rep.discordant.push_back(static_cast<int>(i));
  }
  if (!rep.semicontinuous) rep.warnings.push_back("semicontinuity violated: a sample exceeds the dimension at zero");
  return rep;
}

}  // namespace defjump
