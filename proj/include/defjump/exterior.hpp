#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "defjump/types.hpp"

namespace defjump {

/// Dense exterior algebra on 2n generators: theta^0..theta^{n-1} are the
/// (1,0)-forms omega^1..omega^n and theta^n..theta^{2n-1} their conjugates.
/// Monomials are bitmasks; a form is a vector indexed by mask.
class ExteriorAlgebra {
 public:
  explicit ExteriorAlgebra(int n);

  int n() const { return n_; }
  int size() const { return 1 << (2 * n_); }

  /// theta^A ^ theta^B = sign * theta^{A|B}; zero when A and B overlap.
  static int wedge_sign(std::uint32_t a, std::uint32_t b);

  Vector wedge(const Vector& a, const Vector& b) const;

  /// Left multiplication by theta^g.
  Matrix left_wedge(int g) const;
  /// Left multiplication by an arbitrary form.
  Matrix left_wedge(const Vector& form) const;
  /// Contraction with the frame vector dual to theta^g.
  Matrix contraction(int g) const;

  /// Extends d from generators by the Leibniz rule; d_gen[g] is d theta^g.
  Matrix derivation(const std::vector<Vector>& d_gen) const;

  int hol_degree(std::uint32_t mask) const;
  int antihol_degree(std::uint32_t mask) const;

  /// Masks of bidegree (p, q), ordered by holomorphic part then antiholomorphic part.
  std::vector<std::uint32_t> basis(int p, int q) const;

  /// Keeps the entries of op mapping bidegree (p, q) to (p + dp, q + dq).
  Matrix bidegree_part(const Matrix& op, int dp, int dq) const;

  /// e.g. "w1^w3^wb2".
  std::string label(std::uint32_t mask) const;

 private:
  int n_;
};

}  // namespace defjump
