#include "defjump/exterior.hpp"

#include <algorithm>
#include <bit>

namespace defjump {

ExteriorAlgebra::ExteriorAlgebra(int n) : n_(n) {
  if (n < 1 || n > 4) throw Error(ErrorKind::UsageError, "complex dimension must be between 1 and 4");
}

int ExteriorAlgebra::wedge_sign(std::uint32_t a, std::uint32_t b) {
  if (a & b) return 0;
  int swaps = 0;
  for (std::uint32_t rest = b; rest; rest &= rest - 1) {
    const int g = std::countr_zero(rest);
    swaps += std::popcount(a >> (g + 1));
  }
  return (swaps % 2 == 0) ? 1 : -1;
}

Vector ExteriorAlgebra::wedge(const Vector& a, const Vector& b) const {
  Vector out = Vector::Zero(size());
  for (int i = 0; i < size(); ++i) {
    if (a[i] == Complex(0.0)) continue;
    for (int j = 0; j < size(); ++j) {
      if (b[j] == Complex(0.0)) continue;
      const int s = wedge_sign(i, j);
      if (s != 0) out[i | j] += static_cast<double>(s) * a[i] * b[j];
    }
  }
  return out;
}

Matrix ExteriorAlgebra::left_wedge(int g) const {
  Matrix m = Matrix::Zero(size(), size());
  const std::uint32_t bit = 1u << g;
  for (int i = 0; i < size(); ++i) {
    const int s = wedge_sign(bit, i);
    if (s != 0) m(i | bit, i) = s;
  }
  return m;
}

Matrix ExteriorAlgebra::left_wedge(const Vector& form) const {
  Matrix m = Matrix::Zero(size(), size());
  for (int a = 0; a < size(); ++a) {
    if (form[a] == Complex(0.0)) continue;
    for (int i = 0; i < size(); ++i) {
      const int s = wedge_sign(a, i);
      if (s != 0) m(a | i, i) += static_cast<double>(s) * form[a];
    }
  }
  return m;
}

Matrix ExteriorAlgebra::contraction(int g) const {
  Matrix m = Matrix::Zero(size(), size());
  const std::uint32_t bit = 1u << g;
  for (int i = 0; i < size(); ++i) {
    if (!(i & bit)) continue;
    // move theta^g to the front, then drop it
    const int s = (std::popcount(static_cast<std::uint32_t>(i) & (bit - 1)) % 2 == 0) ? 1 : -1;
    m(i & ~bit, i) = s;
  }
  return m;
}

Matrix ExteriorAlgebra::derivation(const std::vector<Vector>& d_gen) const {
  Matrix d = Matrix::Zero(size(), size());
  for (int i = 1; i < size(); ++i) {
    const int g = std::countr_zero(static_cast<std::uint32_t>(i));
    const std::uint32_t rest = static_cast<std::uint32_t>(i) & ~(1u << g);
    Vector mono_rest = Vector::Zero(size());
    mono_rest[rest] = 1.0;
    Vector col = wedge(d_gen[g], mono_rest);
    Vector gen = Vector::Zero(size());
    gen[1u << g] = 1.0;
    col -= wedge(gen, d.col(rest));
    d.col(i) = col;
  }
  return d;
}

int ExteriorAlgebra::hol_degree(std::uint32_t mask) const {
  return std::popcount(mask & ((1u << n_) - 1));
}

int ExteriorAlgebra::antihol_degree(std::uint32_t mask) const { return std::popcount(mask >> n_); }

std::vector<std::uint32_t> ExteriorAlgebra::basis(int p, int q) const {
  std::vector<std::uint32_t> hol, anti;
  for (std::uint32_t m = 0; m < (1u << n_); ++m) {
    if (std::popcount(m) == p) hol.push_back(m);
    if (std::popcount(m) == q) anti.push_back(m);
  }
  std::vector<std::uint32_t> out;
  for (auto h : hol) {
    for (auto a : anti) out.push_back(h | (a << n_));
  }
  return out;
}

Matrix ExteriorAlgebra::bidegree_part(const Matrix& op, int dp, int dq) const {
  Matrix out = Matrix::Zero(op.rows(), op.cols());
  for (int c = 0; c < size(); ++c) {
    for (int r = 0; r < size(); ++r) {
      if (op(r, c) == Complex(0.0)) continue;
      if (hol_degree(r) == hol_degree(c) + dp && antihol_degree(r) == antihol_degree(c) + dq) out(r, c) = op(r, c);
    }
  }
  return out;
}

std::string ExteriorAlgebra::label(std::uint32_t mask) const {
  if (mask == 0) return "1";
  std::string s;
  for (int g = 0; g < 2 * n_; ++g) {
    if (!(mask & (1u << g))) continue;
    if (!s.empty()) s += "^";
    s += g < n_ ? "w" + std::to_string(g + 1) : "wb" + std::to_string(g - n_ + 1);
  }
  return s;
}

}  // namespace defjump
