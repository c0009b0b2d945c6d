#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "defjump/dgla.hpp"
#include "defjump/exterior.hpp"
#include "defjump/hodge.hpp"
#include "defjump/series.hpp"

namespace defjump {

/// Coefficient c of omega^i ^ omega^j (holomorphic) or omega^i ^ conj(omega^j)
/// (mixed) in d omega^k. Indices are 0-based: index i names omega^{i+1}.
struct StructureTerm {
  int k = 0, i = 0, j = 0;
  Complex c;
};

enum class BundleKind { Trivial, Tangent, WedgeCotangent };

struct Bundle {
  BundleKind kind = BundleKind::Trivial;
  int p = 0;  // wedge power, WedgeCotangent only
};

std::string bundle_name(const Bundle& b);

struct NilmanifoldSpec {
  int n = 1;
  std::vector<StructureTerm> holomorphic;
  std::vector<StructureTerm> mixed;
  Bundle bundle;
};

/// Left-invariant model: the bundle-valued (0, .) complex, the
/// Kodaira-Spencer algebra of (0, .)-forms with values in T^{1,0}, and its
/// action on the complex.
struct InvariantModel {
  int n = 1;
  Bundle bundle;
  ExteriorAlgebra algebra{1};
  /// d, del and dbar on the full exterior algebra.
  Matrix d_full, del_full, dbar_full;

  GradedComplex complex;
  /// Companion del out of each degree q: Lambda^{p,q} -> Lambda^{p+1,q}.
  /// Empty for the tangent bundle.
  std::vector<Matrix> companion_del;
  /// Basis labels per degree, starting at degree 0.
  std::vector<std::vector<std::string>> labels;

  Dgla ks;
  std::vector<std::vector<std::string>> ks_labels;
  Representation action;

  /// Masks of the (0, k)-forms in the order used by the KS basis.
  std::vector<std::uint32_t> antihol_basis(int k) const { return algebra.basis(0, k); }
  /// Index of conj(omega^j) tensor X_a in L^1.
  int ks_index(int j, int a) const;
};

/// Builds and validates the model. Throws NotSquareZero when d^2 != 0.
InvariantModel build_invariant_model(const NilmanifoldSpec& spec);

/// The bundle-valued complex of the model.
GradedComplex build_invariant_complex(const NilmanifoldSpec& spec);

/// P_k = [phi_k, -] on the Kodaira-Spencer complex. Requires a tangent model.
/// Throws IntegrabilityFailure when the result is not square-zero through
/// the series order.
OperatorSeries tangent_action(const InvariantModel& m, const MaurerCartanSeries& phi);

/// P_k = iota_{phi_k} del + (-1)^k del iota_{phi_k} on Lambda^{p, .}, assembled
/// from restricted contraction and del matrices. Requires a trivial or
/// wedge-cotangent model.
OperatorSeries cotangent_action(const InvariantModel& m, const MaurerCartanSeries& phi);

/// conj(omega^{j+1}) tensor X_{a+1} with coefficient c.
struct XiTerm {
  int j = 0, a = 0;
  Complex c;
};

Vector ks_vector(const InvariantModel& m, const std::vector<XiTerm>& terms);

/// A nilmanifold spec plus a first-order deformation direction.
struct ModelRecipe {
  std::string name;
  NilmanifoldSpec spec;
  std::vector<XiTerm> xi;
  int order = 6;
};

std::vector<std::string> preset_names();
std::optional<ModelRecipe> preset(std::string_view name);

}  // namespace defjump
