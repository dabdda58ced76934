#pragma once

#include "seriation/core.hpp"

#include <algorithm>
#include <cmath>
#include <span>

namespace seriation {

/// Nonincreasing profile theta_0 >= ... >= theta_{n-1} with values in [0, A].
struct ToeplitzSpec {
  Vec theta;
  double A = 1.0;

  Index size() const { return theta.size(); }
  /// Throws SeriationError unless theta is nonincreasing and inside [0, A].
  void validate() const;
};

/// Full Robinson cone R_n (symmetric) or its row relaxation R'_n, where only
/// the rows have to be unimodal with their peak on the diagonal.
struct RobinsonFlags {
  bool symmetric_cone = true;
};

/// T(theta)(i, j) = theta(|i - j|).
template <typename Derived>
Matrix<typename Derived::Scalar> toeplitz(const Eigen::MatrixBase<Derived>& theta) {
  const Index n = theta.size();
  Matrix<typename Derived::Scalar> t(n, n);
  for (Index j = 0; j < n; ++j)
    for (Index i = 0; i < n; ++i) t(i, j) = theta(i > j ? i - j : j - i);
  return t;
}

inline SymMatrix toeplitz(const ToeplitzSpec& spec) {
  spec.validate();
  return toeplitz(spec.theta);
}

/// Rows increase up to the diagonal and decrease after it, up to `tol`.
template <typename Derived>
bool is_robinson(const Eigen::MatrixBase<Derived>& m, RobinsonFlags flags = {},
                 typename Derived::Scalar tol = 0) {
  if (m.rows() != m.cols()) return false;
  if (flags.symmetric_cone && !is_symmetric(m, tol)) return false;
  const Index n = m.rows();
  for (Index i = 0; i < n; ++i) {
    for (Index j = 0; j < i; ++j)
      if (m(i, j) > m(i, j + 1) + tol) return false;
    for (Index j = i; j + 1 < n; ++j)
      if (m(i, j) < m(i, j + 1) - tol) return false;
  }
  return true;
}

enum class Monotone { nonincreasing, nondecreasing };

/// A maximal run of pooled entries sharing one fitted value.
struct PavaBlock {
  Index begin;
  Index end;  // one past the last entry
  double weight;
  double value;
};

/// Weighted pool-adjacent-violators, returning the pooled blocks.
std::vector<PavaBlock> pava_blocks(std::span<const double> values,
                                   std::span<const double> weights, Monotone direction);

/// Weighted least-squares isotonic regression. Ties are pooled, which makes
/// the result unique.
Vec pava_isotonic(std::span<const double> values, std::span<const double> weights,
                  Monotone direction);
Vec pava_isotonic(const Vec& values, const Vec& weights, Monotone direction);

/// Least-squares fit that is nondecreasing up to `mode` and nonincreasing
/// after it.
Vec unimodal_fit(std::span<const double> values, std::span<const double> weights,
                 Index mode);

struct ProjectionResult {
  SymMatrix matrix;
  Index iterations = 0;
  double residual = 0;  // Frobenius norm of the last iterate change
};

class ConvergenceError : public SeriationError {
 public:
  ConvergenceError(const std::string& what, double residual)
      : SeriationError(what), residual_(residual) {}
  double residual() const { return residual_; }

 private:
  double residual_;
};

/// Frobenius projection onto R_n (Dykstra between the row-unimodal cone and
/// the symmetric subspace) or onto R'_n (row by row, exact).
/// `max_iter <= 0` selects 100 n^2.
ProjectionResult project_robinson(const SymMatrix& m, RobinsonFlags flags = {},
                                  double tol = 1e-8, Index max_iter = 0);

/// inf over R in the cone of || P . X - R ||_F.
double l2_loss(const Permutation& pi, const SymMatrix& x, RobinsonFlags flags = {},
               double tol = 1e-8, Index max_iter = 0);

/// || P . X - T(theta) ||_F, an upper bound on l2_loss for the Toeplitz model.
double oracle_loss_toeplitz(const Permutation& pi, const SymMatrix& x,
                            const ToeplitzSpec& spec);

/// X reordered by increasing latent position (ties by index).
SymMatrix latent_reference(const SymMatrix& x, const Vec& positions);

/// min over both orientations of || P . X - M ||_F, with M sorted by V.
double oracle_loss_latent(const Permutation& pi, const SymMatrix& x, const Vec& positions);

/// Entrywise sup-norm counterparts, used by sup-norm seriation.
double oracle_linf_toeplitz(const Permutation& pi, const SymMatrix& x,
                            const ToeplitzSpec& spec);

/// Stable argsort: permutation sending each index to its rank.
Permutation ranking(const Vec& keys);

}  // namespace seriation
