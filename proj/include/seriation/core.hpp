#pragma once

#include <Eigen/Dense>

#include <cstddef>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

namespace seriation {

template <typename Scalar>
using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
template <typename Scalar>
using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

/// Dense symmetric n x n matrix. Symmetry is a contract checked by
/// `check_symmetric`, not enforced by the type.
using SymMatrix = Matrix<double>;
using Vec = Vector<double>;
using Index = Eigen::Index;

class SeriationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class SizeMismatch : public SeriationError {
 public:
  using SeriationError::SeriationError;
};

template <typename Derived>
void check_square(const Eigen::MatrixBase<Derived>& m, const char* what) {
  if (m.rows() != m.cols())
    throw SizeMismatch(std::string(what) + ": matrix is not square");
}

template <typename Derived>
bool is_symmetric(const Eigen::MatrixBase<Derived>& m,
                  typename Derived::Scalar tol = 0) {
  if (m.rows() != m.cols()) return false;
  for (Index i = 0; i < m.rows(); ++i)
    for (Index j = i + 1; j < m.cols(); ++j)
      if (std::abs(m(i, j) - m(j, i)) > tol) return false;
  return true;
}

/// Bijection of {0, ..., n-1}. `map()[k]` is the image of k.
///
/// Acting on a matrix, P . M = P M P^T, so that (P . M)(P(a), P(b)) = M(a, b):
/// object a is moved to slot P(a).
class Permutation {
 public:
  Permutation() = default;
  explicit Permutation(std::vector<Index> map) : map_(std::move(map)) {
    std::vector<char> seen(map_.size(), 0);
    for (Index v : map_) {
      if (v < 0 || v >= static_cast<Index>(map_.size()) || seen[v])
        throw SeriationError("Permutation: map is not a bijection");
      seen[v] = 1;
    }
  }

  static Permutation identity(Index n) {
    std::vector<Index> m(n);
    std::iota(m.begin(), m.end(), Index{0});
    return Permutation(std::move(m), Unchecked{});
  }

  /// The reversal tau = (n, n-1, ..., 1).
  static Permutation reversal(Index n) {
    std::vector<Index> m(n);
    for (Index k = 0; k < n; ++k) m[k] = n - 1 - k;
    return Permutation(std::move(m), Unchecked{});
  }

  /// Permutation sending slot order[k] to k, i.e. the inverse of the
  /// sequence `order` read as a map from position to object.
  static Permutation from_order(const std::vector<Index>& order) {
    return Permutation(order).inverse();
  }

  Index size() const { return static_cast<Index>(map_.size()); }
  Index operator()(Index k) const { return map_[k]; }
  const std::vector<Index>& map() const { return map_; }

  Permutation inverse() const {
    std::vector<Index> inv(map_.size());
    for (std::size_t k = 0; k < map_.size(); ++k) inv[map_[k]] = static_cast<Index>(k);
    return Permutation(std::move(inv), Unchecked{});
  }

  /// (this o other)(k) = this(other(k)).
  Permutation compose(const Permutation& other) const {
    if (other.size() != size()) throw SizeMismatch("Permutation::compose: size mismatch");
    std::vector<Index> m(map_.size());
    for (std::size_t k = 0; k < map_.size(); ++k) m[k] = map_[other.map_[k]];
    return Permutation(std::move(m), Unchecked{});
  }

  /// tau o this: reverses the slot order produced by this permutation.
  Permutation reversed() const { return reversal(size()).compose(*this); }

  /// Objects listed by slot: order()[slot] = object placed there.
  std::vector<Index> order() const { return inverse().map_; }

  bool operator==(const Permutation& o) const { return map_ == o.map_; }

 private:
  struct Unchecked {};
  Permutation(std::vector<Index> map, Unchecked) : map_(std::move(map)) {}
  std::vector<Index> map_;
};

/// P . M = P M P^T.
template <typename Derived>
Matrix<typename Derived::Scalar> permute(const Eigen::MatrixBase<Derived>& m,
                                         const Permutation& p) {
  check_square(m, "permute");
  if (m.rows() != p.size()) throw SizeMismatch("permute: permutation size mismatch");
  const Index n = m.rows();
  const auto order = p.order();
  Matrix<typename Derived::Scalar> out(n, n);
  for (Index j = 0; j < n; ++j)
    for (Index i = 0; i < n; ++i) out(i, j) = m(order[i], order[j]);
  return out;
}

}  // namespace seriation
