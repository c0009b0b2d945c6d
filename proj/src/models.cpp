#include "defjump/models.hpp"

#include <algorithm>
#include <bit>

#include "defjump/jump.hpp"

namespace defjump {
namespace {

Matrix restrict_op(const Matrix& op, const std::vector<std::uint32_t>& rows, const std::vector<std::uint32_t>& cols) {
  Matrix m(rows.size(), cols.size());
  for (std::size_t c = 0; c < cols.size(); ++c) {
    for (std::size_t r = 0; r < rows.size(); ++r) m(r, c) = op(rows[r], cols[c]);
  }
  return m;
}

int index_of(const std::vector<std::uint32_t>& basis, std::uint32_t mask) {
  auto it = std::find(basis.begin(), basis.end(), mask);
  return it == basis.end() ? -1 : static_cast<int>(it - basis.begin());
}

void check_term(const StructureTerm& t, int n) {
  if (t.k < 0 || t.k >= n || t.i < 0 || t.i >= n || t.j < 0 || t.j >= n) {
    throw Error(ErrorKind::ShapeMismatch, "structure constant index out of range");
  }
}

// Coefficient of theta^a ^ theta^b (a != b) in a 2-form, as an alternating value.
Complex two_form_value(const Vector& beta, int a, int b) {
  if (a == b) return 0.0;
  const Complex v = beta[(1u << a) | (1u << b)];
  return a < b ? v : -v;
}

struct KsContext {
  const ExteriorAlgebra& alg;
  int n;
  std::vector<Vector> d_hol;  // d omega^c
  const Matrix& del_full;
  std::vector<Matrix> contraction;  // holomorphic frame vectors
};

std::vector<Vector> ks_components(const KsContext& ctx, int k, const Vector& coeffs) {
  const auto basis = ctx.alg.basis(0, k);
  std::vector<Vector> comps(ctx.n, Vector::Zero(ctx.alg.size()));
  for (int a = 0; a < ctx.n; ++a) {
    for (std::size_t j = 0; j < basis.size(); ++j) comps[a][basis[j]] = coeffs[a * basis.size() + j];
  }
  return comps;
}

Vector ks_coeffs(const KsContext& ctx, int k, const std::vector<Vector>& comps) {
  const auto basis = ctx.alg.basis(0, k);
  Vector out(ctx.n * basis.size());
  for (int a = 0; a < ctx.n; ++a) {
    for (std::size_t j = 0; j < basis.size(); ++j) out[a * basis.size() + j] = comps[a][basis[j]];
  }
  return out;
}

// Dolbeault differential on T^{1,0}-valued (0,k)-forms.
std::vector<Vector> ks_dbar(const KsContext& ctx, const Matrix& dbar_full, int k, const std::vector<Vector>& phi) {
  std::vector<Vector> out(ctx.n);
  const double s = (k % 2 == 0) ? -1.0 : 1.0;  // (-1)^{k-1}
  for (int b = 0; b < ctx.n; ++b) {
    const Vector mixed = dbar_full * Vector::Unit(ctx.alg.size(), 1u << b);
    Vector iota = Vector::Zero(ctx.alg.size());
    for (int a = 0; a < ctx.n; ++a) iota += ctx.alg.wedge(phi[a], ctx.contraction[a] * mixed);
    out[b] = dbar_full * phi[b] - s * iota;
  }
  return out;
}

std::vector<Vector> ks_bracket(const KsContext& ctx, int k, const std::vector<Vector>& phi, int l,
                               const std::vector<Vector>& psi) {
  const double s = ((k * l) % 2 == 0) ? 1.0 : -1.0;
  std::vector<Vector> out(ctx.n, Vector::Zero(ctx.alg.size()));
  for (int c = 0; c < ctx.n; ++c) {
    for (int a = 0; a < ctx.n; ++a) {
      for (int b = 0; b < ctx.n; ++b) {
        const Complex coef = -two_form_value(ctx.d_hol[c], a, b);
        if (coef != Complex(0.0)) out[c] += coef * ctx.alg.wedge(phi[a], psi[b]);
      }
    }
    const Vector del_psi = ctx.del_full * psi[c];
    const Vector del_phi = ctx.del_full * phi[c];
    for (int a = 0; a < ctx.n; ++a) {
      out[c] += ctx.alg.wedge(phi[a], ctx.contraction[a] * del_psi);
      out[c] -= s * ctx.alg.wedge(psi[a], ctx.contraction[a] * del_phi);
    }
  }
  return out;
}

}  // namespace

std::string bundle_name(const Bundle& b) {
  switch (b.kind) {
    case BundleKind::Trivial: return "trivial";
    case BundleKind::Tangent: return "tangent";
    case BundleKind::WedgeCotangent: return "wedge_cotangent(" + std::to_string(b.p) + ")";
  }
  return "unknown";
}

int InvariantModel::ks_index(int j, int a) const { return a * n + j; }

InvariantModel build_invariant_model(const NilmanifoldSpec& spec) {
  InvariantModel m;
  m.n = spec.n;
  m.bundle = spec.bundle;
  m.algebra = ExteriorAlgebra(spec.n);
  const ExteriorAlgebra& alg = m.algebra;
  const int n = spec.n;
  if (spec.bundle.kind == BundleKind::WedgeCotangent && (spec.bundle.p < 0 || spec.bundle.p > n)) {
    throw Error(ErrorKind::UsageError, "wedge power must lie in [0, n]");
  }

  std::vector<Vector> d_gen(2 * n, Vector::Zero(alg.size()));
  for (const auto& t : spec.holomorphic) {
    check_term(t, n);
    if (t.i == t.j) continue;
    const std::uint32_t mask = (1u << t.i) | (1u << t.j);
    const double s = t.i < t.j ? 1.0 : -1.0;
    d_gen[t.k][mask] += s * t.c;
    d_gen[n + t.k][mask << n] += s * std::conj(t.c);
  }
  for (const auto& t : spec.mixed) {
    check_term(t, n);
    d_gen[t.k][(1u << t.i) | (1u << (n + t.j))] += t.c;
    // conj(omega^i ^ conj omega^j) = conj(omega^i) ^ omega^j = -omega^j ^ conj(omega^i)
    d_gen[n + t.k][(1u << t.j) | (1u << (n + t.i))] -= std::conj(t.c);
  }
  m.d_full = alg.derivation(d_gen);
  const double dn = m.d_full.norm();
  const double sq = (m.d_full * m.d_full).norm();
  if (sq > 1e-9 * std::max(1.0, dn * dn)) {
    throw Error(ErrorKind::NotSquareZero, "d^2 has norm " + std::to_string(sq) + " on the invariant forms");
  }
  m.del_full = alg.bidegree_part(m.d_full, 1, 0);
  m.dbar_full = alg.bidegree_part(m.d_full, 0, 1);

  KsContext ctx{alg, n, {}, m.del_full, {}};
  for (int c = 0; c < n; ++c) ctx.d_hol.push_back(m.del_full * Vector::Unit(alg.size(), 1u << c));
  for (int a = 0; a < n; ++a) ctx.contraction.push_back(alg.contraction(a));

  // Kodaira-Spencer algebra
  ComplexSpec ks_spec;
  ks_spec.min_degree = 0;
  for (int k = 0; k <= n; ++k) {
    const auto basis = alg.basis(0, k);
    ks_spec.dims.push_back(n * static_cast<int>(basis.size()));
    std::vector<std::string> names;
    for (int a = 0; a < n; ++a) {
      for (auto mask : basis) names.push_back(alg.label(mask) + "*X" + std::to_string(a + 1));
    }
    m.ks_labels.push_back(std::move(names));
  }
  for (int k = 0; k < n; ++k) {
    Matrix dk(ks_spec.dims[k + 1], ks_spec.dims[k]);
    for (int c = 0; c < ks_spec.dims[k]; ++c) {
      const auto phi = ks_components(ctx, k, Vector::Unit(ks_spec.dims[k], c));
      dk.col(c) = ks_coeffs(ctx, k + 1, ks_dbar(ctx, m.dbar_full, k, phi));
    }
    ks_spec.differentials.push_back(std::move(dk));
  }
  GradedComplex ks_cx = validate_complex(ks_spec);
  BracketTable table;
  for (int k = 0; k <= n; ++k) {
    for (int l = 0; l <= n; ++l) {
      if (k + l > n) continue;
      const int dk = ks_spec.dims[k];
      const int dl = ks_spec.dims[l];
      Matrix t(ks_spec.dims[k + l], static_cast<Eigen::Index>(dk) * dl);
      for (int i = 0; i < dk; ++i) {
        const auto phi = ks_components(ctx, k, Vector::Unit(dk, i));
        for (int j = 0; j < dl; ++j) {
          const auto psi = ks_components(ctx, l, Vector::Unit(dl, j));
          t.col(static_cast<Eigen::Index>(i) * dl + j) = ks_coeffs(ctx, k + l, ks_bracket(ctx, k, phi, l, psi));
        }
      }
      table[{k, l}] = std::move(t);
    }
  }
  m.ks = validate_dgla(std::move(ks_cx), std::move(table));

  if (spec.bundle.kind == BundleKind::Tangent) {
    m.complex = m.ks.complex();
    m.labels = m.ks_labels;
    m.action = adjoint_representation(m.ks);
    return m;
  }

  const int p = spec.bundle.kind == BundleKind::Trivial ? 0 : spec.bundle.p;
  ComplexSpec cs;
  cs.min_degree = 0;
  for (int q = 0; q <= n; ++q) {
    const auto basis = alg.basis(p, q);
    cs.dims.push_back(static_cast<int>(basis.size()));
    std::vector<std::string> names;
    for (auto mask : basis) names.push_back(alg.label(mask));
    m.labels.push_back(std::move(names));
    if (q < n) cs.differentials.push_back(restrict_op(m.dbar_full, alg.basis(p, q + 1), basis));
    m.companion_del.push_back(p < n ? restrict_op(m.del_full, alg.basis(p + 1, q), basis)
                                    : Matrix(0, static_cast<Eigen::Index>(basis.size())));
  }
  m.complex = validate_complex(cs);

  RepresentationTable rep;
  for (int k = 0; k <= n; ++k) {
    const auto forms = alg.basis(0, k);
    for (int q = 0; q + k <= n; ++q) {
      const auto src = alg.basis(p, q);
      const auto dst = alg.basis(p, q + k);
      Matrix t(dst.size(), static_cast<Eigen::Index>(n * forms.size() * src.size()));
      const double sign = (k % 2 == 0) ? 1.0 : -1.0;
      for (int a = 0; a < n; ++a) {
        for (std::size_t f = 0; f < forms.size(); ++f) {
          const Matrix iota = alg.left_wedge(Vector::Unit(alg.size(), forms[f])) * ctx.contraction[a];
          const Matrix lie = iota * m.del_full + sign * m.del_full * iota;
          const Eigen::Index i = static_cast<Eigen::Index>(a * forms.size() + f);
          t.middleCols(i * src.size(), src.size()) = restrict_op(lie, dst, src);
        }
      }
      rep[{k, q}] = std::move(t);
    }
  }
  m.action = validate_representation(m.ks, m.complex, std::move(rep));
  return m;
}

GradedComplex build_invariant_complex(const NilmanifoldSpec& spec) { return build_invariant_model(spec).complex; }

OperatorSeries tangent_action(const InvariantModel& m, const MaurerCartanSeries& phi) {
  if (m.bundle.kind != BundleKind::Tangent) throw Error(ErrorKind::UsageError, "tangent_action needs a tangent model");
  const GradedComplex& cx = m.ks.complex();
  std::vector<std::vector<Matrix>> terms(phi.order);
  for (int k = 1; k <= phi.order; ++k) {
    for (int q = cx.min_degree(); q <= cx.max_degree(); ++q) {
      Matrix pk = Matrix::Zero(cx.dim(q + 1), cx.dim(q));
      for (int j = 0; j < cx.dim(q) && pk.rows() > 0; ++j) {
        pk.col(j) = m.ks.bracket(1, phi.at(k), q, Vector::Unit(cx.dim(q), j));
      }
      terms[k - 1].push_back(std::move(pk));
    }
  }
  OperatorSeries out(cx, terms);
  require_integrable(out, out.order());
  return out;
}

OperatorSeries cotangent_action(const InvariantModel& m, const MaurerCartanSeries& phi) {
  if (m.bundle.kind == BundleKind::Tangent) {
    throw Error(ErrorKind::UsageError, "cotangent_action needs a trivial or wedge-cotangent model");
  }
  const int n = m.n;
  const int p = m.bundle.kind == BundleKind::Trivial ? 0 : m.bundle.p;
  const ExteriorAlgebra& alg = m.algebra;

  // conj(omega^j) ^ iota_{X_a}: Lambda^{r,s} -> Lambda^{r-1,s+1}, built on basis masks
  auto contraction = [&](int a, int j, int r, int s) {
    const auto src = alg.basis(r, s);
    const auto dst = r >= 1 ? alg.basis(r - 1, s + 1) : std::vector<std::uint32_t>{};
    Matrix c = Matrix::Zero(static_cast<Eigen::Index>(dst.size()), static_cast<Eigen::Index>(src.size()));
    const std::uint32_t abit = 1u << a;
    const std::uint32_t jbit = 1u << (n + j);
    for (std::size_t col = 0; col < src.size(); ++col) {
      const std::uint32_t mask = src[col];
      if (!(mask & abit) || s + 1 > n) continue;
      const int s1 = (std::popcount(mask & (abit - 1)) % 2 == 0) ? 1 : -1;
      const std::uint32_t rest = mask & ~abit;
      const int s2 = ExteriorAlgebra::wedge_sign(jbit, rest);
      if (s2 == 0) continue;
      c(index_of(dst, rest | jbit), static_cast<Eigen::Index>(col)) = static_cast<double>(s1 * s2);
    }
    return c;
  };

  std::vector<std::vector<Matrix>> terms(phi.order);
  for (int k = 1; k <= phi.order; ++k) {
    const Vector& x = phi.at(k);
    for (int q = 0; q <= n; ++q) {
      Matrix pk = Matrix::Zero(m.complex.dim(q + 1), m.complex.dim(q));
      if (q < n) {
        for (int a = 0; a < n; ++a) {
          for (int j = 0; j < n; ++j) {
            const Complex c = x[m.ks_index(j, a)];
            if (c == Complex(0.0)) continue;
            if (p < n) pk += c * contraction(a, j, p + 1, q) * m.companion_del[q];
            if (p >= 1) {
              const Matrix del_in = restrict_op(m.del_full, alg.basis(p, q + 1), alg.basis(p - 1, q + 1));
              pk -= c * del_in * contraction(a, j, p, q);
            }
          }
        }
      }
      terms[k - 1].push_back(std::move(pk));
    }
  }
  OperatorSeries out(m.complex, terms);
  require_integrable(out, out.order());
  return out;
}

Vector ks_vector(const InvariantModel& m, const std::vector<XiTerm>& terms) {
  Vector v = Vector::Zero(m.ks.complex().dim(1));
  for (const auto& t : terms) {
    if (t.j < 0 || t.j >= m.n || t.a < 0 || t.a >= m.n) throw Error(ErrorKind::ShapeMismatch, "xi index out of range");
    v[m.ks_index(t.j, t.a)] += t.c;
  }
  return v;
}

std::vector<std::string> preset_names() {
  return {"torus", "iwasawa-trivial", "iwasawa-cotangent", "iwasawa-tangent", "iwasawa-tangent-x3"};
}

std::optional<ModelRecipe> preset(std::string_view name) {
  NilmanifoldSpec iwasawa;
  iwasawa.n = 3;
  iwasawa.holomorphic = {{2, 0, 1, Complex(-1.0)}};
  ModelRecipe r;
  r.name = std::string(name);
  if (name == "torus") {
    r.spec.n = 1;
    r.spec.bundle = {BundleKind::Trivial, 0};
    r.xi = {{0, 0, 1.0}};
  } else if (name == "iwasawa-trivial") {
    r.spec = iwasawa;
    r.spec.bundle = {BundleKind::Trivial, 0};
    r.xi = {{0, 0, 1.0}};
  } else if (name == "iwasawa-cotangent") {
    r.spec = iwasawa;
    r.spec.bundle = {BundleKind::WedgeCotangent, 1};
    r.xi = {{0, 0, 1.0}};
  } else if (name == "iwasawa-tangent") {
    r.spec = iwasawa;
    r.spec.bundle = {BundleKind::Tangent, 0};
    r.xi = {{0, 0, 1.0}, {1, 1, 1.0}};
  } else if (name == "iwasawa-tangent-x3") {
    r.spec = iwasawa;
    r.spec.bundle = {BundleKind::Tangent, 0};
    r.xi = {{0, 2, 1.0}};
  } else {
    return std::nullopt;
  }
  return r;
}

}  // namespace defjump
